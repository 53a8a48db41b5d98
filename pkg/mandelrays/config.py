from pathlib import Path
from typing import Any, Dict, Optional
import os
import platform
import tempfile
import yaml
from pydantic import BaseModel, Field

from .errors import MandelRaysError
from .utils import ensure_directory_exists


class SolverConfig(BaseModel):
    """Numerical tunables for ray tracing and the Newton solvers."""

    start_potential: float = Field(default=8.0, gt=0)
    potential_halvings: int = Field(default=110, gt=0)
    sharpness: int = Field(default=4, gt=0)
    newton_steps_per_level: int = Field(default=10, gt=0)
    landing_tolerance: float = Field(default=1e-8, gt=0)
    min_potential: float = Field(default=1e-30, gt=0)
    max_iterations: int = Field(default=1000, gt=0)
    escape_radius: float = Field(default=2.0, ge=2)
    potential_bailout: float = Field(default=1e10, gt=2)
    solve_tolerance: float = Field(default=1e-10, gt=0)
    agreement_tolerance: float = Field(default=1e-4, gt=0)
    capture_radius: float = Field(default=0.05, gt=0)
    boundary_step: float = Field(default=1 / 64, gt=0, le=1)
    min_boundary_step: float = Field(default=2**-20, gt=0)
    max_newton_steps: int = Field(default=64, gt=0)
    refine_landing: bool = True


class LimitsConfig(BaseModel):
    max_enumeration: int = Field(default=24, gt=0)
    max_numeric_period: int = Field(default=16, gt=0)
    max_center_period: int = Field(default=12, gt=0)
    max_pixels: int = Field(default=16_000_000, gt=0)
    workers: int = Field(default=1, ge=1)


class RenderDefaults(BaseModel):
    width: int = Field(default=800, gt=0)
    height: int = Field(default=600, gt=0)
    max_iterations: int = Field(default=500, gt=0)
    escape_radius: float = Field(default=2.0, ge=2)


class GlobalConfig(BaseModel):
    version: str = "1.0.0"
    solver: SolverConfig = Field(default_factory=SolverConfig)
    limits: LimitsConfig = Field(default_factory=LimitsConfig)
    render: RenderDefaults = Field(default_factory=RenderDefaults)


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """Locates and reads the user and project configuration files.

    Effective config: defaults, then ``config.yaml`` in the user config
    directory, then ``.mandelrays.yaml`` in the project directory, each
    overriding key by key. An explicit path replaces both files.
    """

    def __init__(self, explicit_path: Optional[Path] = None):
        self.config_dir = self._get_config_dir()
        self.global_config_path = self.config_dir / "config.yaml"
        self.project_config_name = ".mandelrays.yaml"
        self.explicit_path = explicit_path

    def _get_config_dir(self) -> Path:
        """XDG config directory with fallbacks; nothing is created here."""
        if platform.system() == "Windows":
            return Path.home() / "AppData" / "Roaming" / "mandelrays"

        xdg_config = os.environ.get("XDG_CONFIG_HOME")
        if xdg_config:
            config_dir = Path(xdg_config) / "mandelrays"
            if self._usable(config_dir):
                return config_dir

        standard_config = Path.home() / ".config" / "mandelrays"
        if self._usable(standard_config):
            return standard_config

        user_config = Path.home() / ".mandelrays"
        if self._usable(user_config):
            return user_config

        return Path(tempfile.gettempdir()) / "mandelrays" / f"user-{os.getuid()}"

    def _usable(self, config_dir: Path) -> bool:
        # an existing directory must be writable; a missing one needs a writable ancestor
        candidate = config_dir
        while not candidate.exists():
            if candidate.parent == candidate:
                return False
            candidate = candidate.parent
        return candidate.is_dir() and os.access(candidate, os.W_OK)

    def _read_yaml(self, path: Path) -> Dict[str, Any]:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise MandelRaysError(f"Cannot parse config file {path}: {e}") from e
        except OSError as e:
            raise MandelRaysError(f"Cannot read config file {path}: {e}") from e
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise MandelRaysError(f"Config file {path} must contain a mapping")
        return data

    def sources(self, project_dir: Optional[Path] = None) -> list:
        """Config files that contribute to the effective config, in order."""
        if self.explicit_path is not None:
            if not self.explicit_path.exists():
                raise MandelRaysError(f"Config file not found: {self.explicit_path}")
            return [self.explicit_path]
        project_dir = project_dir or Path.cwd()
        candidates = [self.global_config_path, project_dir / self.project_config_name]
        return [path for path in candidates if path.exists()]

    def load(self, project_dir: Optional[Path] = None) -> GlobalConfig:
        data: Dict[str, Any] = {}
        for path in self.sources(project_dir):
            data = _merge(data, self._read_yaml(path))
        return GlobalConfig(**data)

    def save_global_config(self, config: GlobalConfig) -> Path:
        ensure_directory_exists(self.config_dir)
        with open(self.global_config_path, "w", encoding="utf-8") as f:
            yaml.dump(config.model_dump(), f, default_flow_style=False)
        return self.global_config_path
