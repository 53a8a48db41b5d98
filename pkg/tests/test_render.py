"""Tests for escape-time rendering, ray overlays and PPM output."""

import numpy as np
import pytest
from pydantic import ValidationError

from mandelrays.angle import Angle
from mandelrays.artifactio import Image, RenderSpec, encode_ppm, escape_counts, overlay_trace, render, write_image
from mandelrays.artifactio.render import RED, WHITE
from mandelrays.errors import ArtifactIOError, RenderError
from mandelrays.numerics import Plane, RayTrace, TraceStatus, trace_dynamic_ray


def small_spec(**overrides):
    values = dict(plane="mandelbrot", center=-0.75 + 0j, width=3.0, pixels=(24, 18), max_iterations=50)
    values.update(overrides)
    return RenderSpec(**values)


class TestRenderSpec:
    def test_julia_needs_parameter(self):
        with pytest.raises(ValidationError):
            RenderSpec(plane="julia")

    def test_rejects_bad_values(self):
        with pytest.raises(ValidationError):
            RenderSpec(width=0)
        with pytest.raises(ValidationError):
            RenderSpec(pixels=(0, 10))
        with pytest.raises(ValidationError):
            RenderSpec(escape_radius=1.0)

    def test_pixel_mapping(self):
        spec = RenderSpec(center=0j, width=4.0, pixels=(4, 2))
        assert spec.scale == 1.0
        assert spec.to_complex(0, 0) == -1.5 + 0.5j
        assert spec.to_pixel(-1.5 + 0.5j) == (0.0, 0.0)
        assert spec.ray_plane is Plane.PARAMETER
        assert RenderSpec(plane="julia", julia_c=0j).ray_plane is Plane.DYNAMIC


class TestEscapeCounts:
    def test_julia_center_is_bounded(self):
        spec = RenderSpec(plane="julia", julia_c=0j, center=0j, width=4.0, pixels=(5, 5), max_iterations=20)
        counts = escape_counts(spec)
        assert counts.shape == (5, 5)
        assert counts[2, 2] == 0
        assert counts[0, 0] > 0

    def test_mandelbrot_points(self):
        assert escape_counts(RenderSpec(center=1 + 0j, width=1e-6, pixels=(1, 1)))[0, 0] == 3
        assert escape_counts(RenderSpec(center=-1 + 0j, width=1e-6, pixels=(1, 1)))[0, 0] == 0


class TestRender:
    def test_shading(self):
        spec = small_spec()
        img = render(spec)
        counts = escape_counts(spec)
        assert img.pixels.shape == (18, 24, 3)
        assert img.pixels.dtype == np.uint8
        assert (img.pixels[counts == 0] == 0).all()
        assert (img.pixels[counts > 0] > 0).all()
        assert (img.pixels[..., 0] == img.pixels[..., 1]).all()

    def test_deterministic(self):
        spec = small_spec(plane="julia", julia_c=-1 + 0j, center=0j)
        assert encode_ppm(render(spec)) == encode_ppm(render(spec))

    def test_pixel_limit(self):
        with pytest.raises(RenderError):
            render(small_spec(), max_pixels=100)


class TestOverlay:
    def test_empty_trace_leaves_image(self):
        spec = small_spec()
        img = render(spec)
        out = overlay_trace(img, spec, RayTrace(angle=Angle(1, 3), plane=Plane.PARAMETER))
        assert np.array_equal(out.pixels, img.pixels)
        assert out is not img

    def test_draws_ray_and_landing(self):
        spec = RenderSpec(center=0j, width=2.0, pixels=(20, 20))
        trace = RayTrace(
            angle=Angle(1, 2),
            plane=Plane.PARAMETER,
            points=[(1.0, 0.9 + 0.1j), (0.5, 0.1 + 0.1j)],
            status=TraceStatus.LANDED,
            landing=-0.5 + 0j,
        )
        img = Image.blank(20, 20)
        out = overlay_trace(img, spec, trace)
        assert (out.pixels == WHITE).all(axis=2).any()
        assert (out.pixels == RED).all(axis=2).sum() == 9
        assert not img.pixels.any()

    def test_points_outside_the_view_are_clipped(self):
        spec = RenderSpec(center=0j, width=2.0, pixels=(10, 10))
        trace = RayTrace(angle=Angle(1, 3), plane=Plane.PARAMETER, points=[(2.0, -50 + 0j), (1.0, 50 + 0j)])
        out = overlay_trace(Image.blank(10, 10), spec, trace)
        assert (out.pixels == WHITE).all(axis=2).sum() >= 10

    def test_plane_mismatch(self):
        spec = small_spec()
        trace = RayTrace(angle=Angle(1, 3), plane=Plane.DYNAMIC, c=0j)
        with pytest.raises(RenderError):
            overlay_trace(render(spec), spec, trace)

    def test_radial_julia_ray(self, solver):
        spec = RenderSpec(plane="julia", julia_c=0j, center=0j, width=4.0, pixels=(40, 40), max_iterations=20)
        trace = trace_dynamic_ray(0j, Angle(1, 3), solver)
        background = render(spec)
        out = overlay_trace(background, spec, trace)
        rows, columns = np.nonzero((out.pixels != background.pixels).any(axis=2))
        # the ray enters the view from the upper left toward exp(2 pi i / 3)
        assert len(rows) > 0
        assert columns.max() < 20
        assert rows.max() < 20


class TestPpm:
    def test_one_white_pixel(self):
        img = Image(np.full((1, 1, 3), 255, dtype=np.uint8))
        assert encode_ppm(img) == b"P6\n1 1\n255\n\xff\xff\xff"

    def test_golden_strip(self):
        # pixels at c = -1, 0, 1, 2 escape after never, never, 3 and 2 steps
        spec = RenderSpec(center=0.5 + 0j, width=4.0, pixels=(4, 1), max_iterations=7)
        row = [0, 0, 170, 135]
        expected = b"P6\n4 1\n255\n" + bytes(value for value in row for _ in range(3))
        assert encode_ppm(render(spec)) == expected

    def test_payload_size(self):
        assert len(encode_ppm(Image.blank(2, 1))) == len(b"P6\n2 1\n255\n") + 6

    def test_write_image(self, tmp_path):
        path = write_image(Image.blank(3, 2), tmp_path / "out.ppm")
        assert path.read_bytes().startswith(b"P6\n3 2\n255\n")

    def test_unwritable_path(self, tmp_path):
        target = tmp_path / "missing" / "out.ppm"
        with pytest.raises(ArtifactIOError, match="missing"):
            write_image(Image.blank(1, 1), target)
