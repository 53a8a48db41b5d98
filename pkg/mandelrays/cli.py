import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple

import click
import yaml

from . import __version__
from .angle import Angle, format_binary, orbit_type, parse_angle
from .combinat import (
    count_parabolic,
    is_primitive,
    misiurewicz_class,
    orbit_sectors,
    pair_of,
    pair_table,
    portrait_cycle,
)
from .config import ConfigManager, GlobalConfig
from .errors import AngleParseError, MandelRaysError
from .kneading import angle_address, kneading, limit_kneadings
from .utils import format_complex, format_table, parse_complex

logger = logging.getLogger(__name__)


class AngleParamType(click.ParamType):
    name = "angle"

    def convert(self, value, param, ctx):
        if isinstance(value, Angle):
            return value
        try:
            return parse_angle(value)
        except AngleParseError as e:
            self.fail(str(e), param, ctx)


class ComplexParamType(click.ParamType):
    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            return parse_complex(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


class FractionParamType(click.ParamType):
    name = "number"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            self.fail(f"'{value}' is not a number or fraction", param, ctx)


class SizeParamType(click.ParamType):
    name = "WxH"

    def convert(self, value, param, ctx):
        if isinstance(value, tuple):
            return value
        width, sep, height = value.lower().partition("x")
        if not sep or not width.isdigit() or not height.isdigit() or int(width) < 1 or int(height) < 1:
            self.fail(f"'{value}' is not a size like 800x600", param, ctx)
        return int(width), int(height)


ANGLE = AngleParamType()
COMPLEX = ComplexParamType()
FRACTION = FractionParamType()
SIZE = SizeParamType()

machine_option = click.option(
    "--machine", is_flag=True, help="Stable whitespace-separated record output"
)


def _settings(ctx: click.Context) -> GlobalConfig:
    obj = ctx.find_root().obj
    if "settings" not in obj:
        obj["settings"] = obj["manager"].load()
    return obj["settings"]


def _check_numeric(theta: Angle, settings: GlobalConfig) -> None:
    l, n = orbit_type(theta)
    _check_numeric_orbit(l, n, settings, str(theta))


def _check_numeric_orbit(preperiod: int, period: int, settings: GlobalConfig, what: str) -> None:
    bound = settings.limits.max_numeric_period
    if preperiod > bound or period > bound:
        raise MandelRaysError(
            f"{what} has preperiod {preperiod} and period {period}; numerics are limited to {bound}"
        )


def _check_enumeration(period: int, settings: GlobalConfig) -> None:
    if period > settings.limits.max_enumeration:
        raise MandelRaysError(
            f"period {period} exceeds the enumeration limit {settings.limits.max_enumeration}"
        )


def _fail(e: Exception) -> None:
    if isinstance(e, ValueError):
        click.echo(f"Error: {e}", err=True)
    else:
        click.echo(f"Unexpected error: {e}", err=True)
    sys.exit(1)


@click.group()
@click.version_option(version=__version__, prog_name="mandelrays")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Use this config file instead of the user and project files",
)
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[Path], verbose: bool):
    """Mandelbrot set combinatorics and external rays.

    Exact commands work on rational angles given as p/q or 0.u:v:
    knead, address, pair, pairs, count, portrait, misiurewicz.
    Numerical commands trace rays and solve for parameters:
    trace, solve, verify, render.
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj["manager"] = ConfigManager(config_path)


@cli.command()
@click.argument("angle", type=ANGLE)
@click.option("--limits", is_flag=True, help="Also print the one-sided limits K- and K+")
@machine_option
def knead(angle: Angle, limits: bool, machine: bool):
    """Kneading sequence of an angle, printed as preperiod|period"""
    try:
        sequence = kneading(angle)
        # limits exist for periodic angles only; fail before printing anything
        bounds = limit_kneadings(angle) if limits else None
        if machine:
            line = f"{angle} {sequence}"
            if bounds:
                line += f" {bounds[0]} {bounds[1]}"
            click.echo(line)
            return
        click.echo(str(sequence))
        if bounds:
            click.echo(f"K-: {bounds[0]}")
            click.echo(f"K+: {bounds[1]}")
    except Exception as e:
        _fail(e)


@cli.command()
@click.argument("angle", type=ANGLE)
def address(angle: Angle):
    """Internal address of a periodic angle"""
    try:
        click.echo(str(angle_address(angle)))
    except Exception as e:
        _fail(e)


@cli.command()
@click.argument("angle", type=ANGLE)
@machine_option
@click.pass_context
def pair(ctx: click.Context, angle: Angle, machine: bool):
    """The ray pair containing a periodic angle"""
    try:
        _check_enumeration(orbit_type(angle).period, _settings(ctx))
        found = pair_of(angle)
        if machine:
            from .artifactio import format_pair_record

            row = next(r for r in pair_table(found.period, found.period) if r.low == found.low)
            click.echo(format_pair_record(row))
            return
        kind = "primitive" if is_primitive(found) else "satellite"
        click.echo(f"{found} period {found.period} {kind}")
    except Exception as e:
        _fail(e)


@cli.command()
@click.option("--period", type=click.IntRange(min=1), required=True, help="Ray period")
@click.option("--all-below", is_flag=True, help="Include all periods up to --period")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), help="Write the pair table to a file")
@machine_option
@click.pass_context
def pairs(ctx: click.Context, period: int, all_below: bool, output: Optional[Path], machine: bool):
    """Ray pairs of one period (Lavaurs pairing)"""
    from .artifactio import format_pair_record, write_pair_table

    try:
        settings = _settings(ctx)
        _check_enumeration(period, settings)
        rows = pair_table(period, None if all_below else period)
        if output:
            count = write_pair_table(rows, output)
            click.echo(f"Wrote {count} pair records to {output}")
            return
        if machine:
            for row in rows:
                click.echo(format_pair_record(row))
            return
        table = [
            [str(r.period), str(r.low), str(r.high), str(r.kneading), str(r.address), "yes" if r.primitive else "no"]
            for r in rows
        ]
        click.echo(format_table(["period", "low", "high", "kneading", "address", "primitive"], table))
    except Exception as e:
        _fail(e)


@cli.command()
@click.option("--max", "max_period", type=click.IntRange(min=1), required=True, help="Largest period")
def count(max_period: int):
    """Numbers s_1 ... s_n of parabolic parameters per ray period"""
    try:
        click.echo(" ".join(str(count_parabolic(n)) for n in range(1, max_period + 1)))
    except Exception as e:
        _fail(e)


@cli.command()
@click.argument("angle", type=ANGLE)
@machine_option
@click.pass_context
def portrait(ctx: click.Context, angle: Angle, machine: bool):
    """Orbit portrait of the parabolic orbit where a periodic ray lands"""
    try:
        _check_enumeration(orbit_type(angle).period, _settings(ctx))
        cycle = portrait_cycle(angle)
        if machine:
            click.echo(
                f"rotation {cycle.rotation.numerator}/{cycle.rotation.denominator} "
                f"orbit_period {cycle.orbit_period} rays {cycle.rays_per_point}"
            )
            for index, point in enumerate(cycle.point_angles):
                widths = (
                    ",".join(str(w) for _, _, w in orbit_sectors(point)) if len(point) > 1 else "-"
                )
                click.echo(f"point {index} {','.join(map(str, point))} {widths}")
            return
        click.echo(
            f"Orbit period {cycle.orbit_period}, ray period {cycle.ray_period}, "
            f"{cycle.rays_per_point} ray(s) per point, rotation {cycle.rotation}"
        )
        for index, point in enumerate(cycle.point_angles):
            line = f"  point {index}: {' '.join(map(str, point))}"
            if len(point) > 1:
                line += "  widths " + " ".join(str(w) for _, _, w in orbit_sectors(point))
            click.echo(line)
    except Exception as e:
        _fail(e)


@cli.command()
@click.argument("angle", type=ANGLE)
@machine_option
@click.pass_context
def misiurewicz(ctx: click.Context, angle: Angle, machine: bool):
    """All preperiodic angles whose parameter rays land with this one"""
    try:
        settings = _settings(ctx)
        found = misiurewicz_class(angle, settings.limits.max_enumeration)
        angles = " ".join(map(str, found.angles))
        if machine:
            click.echo(
                f"{found.preperiod} {found.ray_period} {found.kneading_period} "
                f"{','.join(map(str, found.angles))} {found.kneading}"
            )
            return
        click.echo(angles)
    except Exception as e:
        _fail(e)


@cli.command()
@click.option("--parameter", is_flag=True, help="Trace a parameter ray of the Mandelbrot set")
@click.option("--dynamic", "julia_c", type=COMPLEX, help="Trace a dynamic ray of z^2 + C")
@click.option("--angle", "theta", type=ANGLE, required=True, help="External angle")
@click.option("--points", is_flag=True, help="Print every traced point")
@machine_option
@click.pass_context
def trace(ctx: click.Context, parameter: bool, julia_c: Optional[complex], theta: Angle, points: bool, machine: bool):
    """Trace an external ray down to its landing point"""
    if parameter == (julia_c is not None):
        raise click.UsageError("give exactly one of --parameter or --dynamic C")
    from .numerics import trace_dynamic_ray, trace_parameter_ray

    try:
        settings = _settings(ctx)
        _check_numeric(theta, settings)
        if parameter:
            result = trace_parameter_ray(theta, settings.solver)
        else:
            result = trace_dynamic_ray(julia_c, theta, settings.solver)
        landing = "none" if result.landing is None else format_complex(result.landing)
        if machine:
            click.echo(
                f"{result.plane.value} {theta} {result.status.value} {landing} "
                f"{result.final_potential:.3g} {len(result.points)}"
            )
        else:
            click.echo(f"Ray {theta} ({format_binary(theta)}): {result.status.value}")
            click.echo(f"  landing: {landing}{' (refined)' if result.refined else ''}")
            click.echo(f"  last potential: {result.final_potential:.3g} after {len(result.points)} points")
            if result.lost_at is not None:
                click.echo(f"  Newton failed at level {result.lost_at}")
        if points:
            for t, z in result.points:
                click.echo(f"{t:.6g} {format_complex(z)}")
        if result.landing is None:
            sys.exit(1)
    except Exception as e:
        _fail(e)


@cli.group()
def solve():
    """Newton solvers for centers, boundary points and Misiurewicz parameters"""
    pass


@solve.command("center")
@click.option("--period", type=click.IntRange(min=1), required=True)
@machine_option
@click.pass_context
def solve_center(ctx: click.Context, period: int, machine: bool):
    """Centers of all hyperbolic components of one period"""
    from .numerics import find_centers

    try:
        settings = _settings(ctx)
        if period > settings.limits.max_center_period:
            raise MandelRaysError(
                f"period {period} exceeds the center limit {settings.limits.max_center_period}"
            )
        for result in find_centers(period, settings.solver):
            if machine:
                click.echo(f"{format_complex(result.parameter, 17)} {result.residual:.3g}")
            else:
                click.echo(format_complex(result.parameter))
    except Exception as e:
        _fail(e)


@solve.command("boundary")
@click.option("--center", type=COMPLEX, required=True, help="Center of the component")
@click.option("--period", type=click.IntRange(min=1), required=True)
@click.option("--angle", "internal", type=FRACTION, default=Fraction(0), help="Internal angle t (0 is the root)")
@click.pass_context
def solve_boundary(ctx: click.Context, center: complex, period: int, internal: Fraction):
    """Boundary point with multiplier e^(2 pi i t)"""
    from .numerics import component_boundary

    try:
        settings = _settings(ctx)
        _check_numeric_orbit(0, period, settings, f"period-{period} component")
        result = component_boundary(center, period, float(internal), settings.solver)
        click.echo(f"{format_complex(result.parameter)} multiplier {format_complex(result.multiplier, 6)}")
    except Exception as e:
        _fail(e)


@solve.command("misiurewicz")
@click.option("--preperiod", type=click.IntRange(min=1), required=True)
@click.option("--period", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=COMPLEX, required=True, help="Start value")
@click.option("--exact", is_flag=True, help="Reject solutions whose period is a proper divisor")
@click.pass_context
def solve_misiurewicz_command(ctx: click.Context, preperiod: int, period: int, seed: complex, exact: bool):
    """Parameter whose critical value has the given preperiod and period"""
    from .numerics import solve_misiurewicz

    try:
        settings = _settings(ctx)
        _check_numeric_orbit(preperiod, period, settings, "requested parameter")
        result = solve_misiurewicz(preperiod, period, seed, settings.solver, exact_period=exact)
        l, k = result.orbit_type
        click.echo(f"{format_complex(result.parameter)} preperiod {l} period {k} residual {result.residual:.3g}")
    except Exception as e:
        _fail(e)


@cli.command()
@click.option("--max-period", type=click.IntRange(min=1), required=True)
@click.option("--misiurewicz-bound", type=click.IntRange(min=2), default=8, show_default=True, help="Largest preperiod + period of checked classes")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Processes for ray tracing")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), help="Also write the report to a file")
@click.pass_context
def verify(ctx: click.Context, max_period: int, misiurewicz_bound: int, workers: Optional[int], output: Optional[Path]):
    """Check pairs, roots, counts and Misiurewicz classes numerically"""
    from .artifactio import format_check_record
    from .numerics import verify_structure
    from .utils import safe_file_operation

    try:
        settings = _settings(ctx)
        bound = settings.limits.max_numeric_period
        if max_period > bound or misiurewicz_bound > bound:
            raise MandelRaysError(f"numerics are limited to period {bound}")
        records = verify_structure(
            max_period,
            settings.solver,
            misiurewicz_bound=misiurewicz_bound,
            workers=workers or settings.limits.workers,
        )
        lines = [format_check_record(record) for record in records]
        failed = sum(not record.passed for record in records)
        lines.append(f"# {len(records)} checks, {failed} failed")
        for line in lines:
            click.echo(line)
        if output:
            safe_file_operation(output, output.write_text, "\n".join(lines) + "\n", encoding="utf-8")
        if failed:
            sys.exit(1)
    except Exception as e:
        _fail(e)


@cli.command()
@click.option("--plane", type=click.Choice(["mandelbrot", "julia"]), default="mandelbrot", show_default=True)
@click.option("--c", "julia_c", type=COMPLEX, help="Parameter of the Julia set")
@click.option("--center", type=COMPLEX, help="Center of the view")
@click.option("--width", "view_width", type=click.FloatRange(min=0, min_open=True), help="Width of the view")
@click.option("--size", type=SIZE, help="Pixels as WxH")
@click.option("--max-iterations", type=click.IntRange(min=1))
@click.option("--ray", "rays", type=ANGLE, multiple=True, help="Trace and draw this ray (repeatable)")
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.pass_context
def render(
    ctx: click.Context,
    plane: str,
    julia_c: Optional[complex],
    center: Optional[complex],
    view_width: Optional[float],
    size: Optional[Tuple[int, int]],
    max_iterations: Optional[int],
    rays: Tuple[Angle, ...],
    output: Path,
):
    """Escape-time picture as binary PPM, with traced rays drawn on top"""
    if plane == "julia" and julia_c is None:
        raise click.UsageError("--plane julia needs --c")
    from .artifactio import RenderSpec, overlay_trace, write_image
    from .artifactio import render as render_image
    from .numerics import trace_dynamic_ray, trace_parameter_ray

    try:
        settings = _settings(ctx)
        defaults = settings.render
        spec = RenderSpec(
            plane=plane,
            julia_c=julia_c,
            center=center if center is not None else (complex(-0.75, 0) if plane == "mandelbrot" else 0j),
            width=view_width or (3.0 if plane == "mandelbrot" else 3.2),
            pixels=size or (defaults.width, defaults.height),
            max_iterations=max_iterations or defaults.max_iterations,
            escape_radius=defaults.escape_radius,
            overlays=rays,
        )
        image = render_image(spec, settings.limits.max_pixels)
        for theta in spec.overlays:
            _check_numeric(theta, settings)
            if plane == "mandelbrot":
                ray = trace_parameter_ray(theta, settings.solver)
            else:
                ray = trace_dynamic_ray(julia_c, theta, settings.solver)
            image = overlay_trace(image, spec, ray)
        write_image(image, output)
        click.echo(f"Wrote {spec.pixels[0]}x{spec.pixels[1]} image to {output}")
    except Exception as e:
        _fail(e)


@cli.group()
def config():
    """Show or initialise the configuration"""
    pass


@config.command("show")
@click.pass_context
def config_show(ctx: click.Context):
    """Print the effective configuration and where it came from"""
    try:
        manager: ConfigManager = ctx.find_root().obj["manager"]
        sources = manager.sources()
        settings = _settings(ctx)
        click.echo(f"# sources: {', '.join(map(str, sources)) if sources else 'defaults'}")
        click.echo(yaml.dump(settings.model_dump(), default_flow_style=False).rstrip())
    except Exception as e:
        _fail(e)


@config.command("init")
@click.option("--force", is_flag=True, help="Overwrite an existing config file")
@click.pass_context
def config_init(ctx: click.Context, force: bool):
    """Write the default configuration to the user config directory"""
    try:
        manager: ConfigManager = ctx.find_root().obj["manager"]
        if manager.global_config_path.exists() and not force:
            raise MandelRaysError(
                f"{manager.global_config_path} already exists (use --force to overwrite)"
            )
        path = manager.save_global_config(GlobalConfig())
        click.echo(f"Wrote default configuration to {path}")
    except Exception as e:
        _fail(e)


def main():
    try:
        cli()
    except KeyboardInterrupt:
        click.echo("\nOperation cancelled by user", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
