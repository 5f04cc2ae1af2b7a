"""
Configuration module for the Fock-Sobolev laboratory.

Every tolerance, quadrature resolution, sweep grid and verdict threshold
lives in ``LabConfig``. Values come from keyword arguments or from an
optional JSON file; the environment is never consulted.
"""

import json
from pathlib import Path
from typing import Any, Optional, Tuple, Union

from pydantic import ConfigDict, Field, PrivateAttr
from pydantic import ValidationError as PydanticValidationError
from pydantic_settings import BaseSettings

from .utils import (
    get_logger, setup_logging, ConfigurationError, ValidationError,
    ResourceNotFoundError
)


class LabConfig(BaseSettings):
    """Main configuration class for the laboratory."""

    model_config = ConfigDict(
        case_sensitive=False,
        extra="forbid",
        frozen=True,
    )

    # Polynomial data
    degree_cap: int = Field(default=64, description="Largest admissible polynomial degree")

    # Quadrature
    radial_degree: int = Field(default=60, description="Gauss nodes in t = |z|^2 for plane rules")
    angular_count: int = Field(default=128, description="Uniform angular nodes for plane rules")
    panel_nodes: int = Field(default=8, description="Gauss nodes per cell side for panel rules")
    disk_node_budget: int = Field(default=4096, description="Total node count for disk rules")
    kernel_guard_terms: int = Field(default=4, description="Extra terms when truncating exponential kernels")
    projection_degree: int = Field(default=32, description="Output degree of discretized projections")
    sup_rays: int = Field(default=256, description="Angular rays searched for sup norms")
    sup_radial_points: int = Field(default=400, description="Radial samples per ray for sup norms")

    # Verification
    tolerance: float = Field(default=1e-8, description="Default relative tolerance for checks")
    seed: int = Field(default=20100917, description="Seed for random polynomial families")
    family_size: int = Field(default=200, description="Members of the random polynomial family")
    family_degree: int = Field(default=20, description="Degree of random family members")
    sigma: float = Field(default=0.5, description="Lower end of the x grid for the series bounds")
    x_max: float = Field(default=40.0, description="Upper end of the x grid for the series bounds")
    x_points: int = Field(default=80, description="Points in the x grid for the series bounds")
    s_values: Tuple[float, ...] = Field(
        default=(-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.5),
        description="Exponents swept by the series bounds"
    )

    # Carleson analysis
    carleson_radius: float = Field(default=1.0, description="Disk radius r of the geometric test")
    growth_factor: float = Field(default=1.05, description="Outer/inner shell ratio tolerated for 'carleson'")
    vanishing_fraction: float = Field(default=0.5, description="Last shell / peak ratio required for 'vanishing'")
    shell_count: int = Field(default=8, description="Number of radial shells in profiles")
    window: Optional[float] = Field(default=None, description="Lattice window; derived from the measure when unset")
    spacing: Optional[float] = Field(default=None, description="Lattice spacing; r/2 when unset")

    # Execution
    n_jobs: int = Field(default=1, description="Worker threads for grid fan-out")
    log_level: str = Field(default="WARNING", description="Logging level")
    log_format: str = Field(default="structured", description="Log format: structured or simple")

    _logger: Any = PrivateAttr(default=None)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls,
        init_settings,
        env_settings,
        dotenv_settings,
        file_secret_settings,
    ):
        return (init_settings,)

    def __init__(self, **kwargs):
        """Initialize configuration and validate value ranges."""
        try:
            super().__init__(**kwargs)
        except PydanticValidationError as e:
            raise ConfigurationError("Invalid configuration values", cause=e)

        self._logger = get_logger(self.__class__.__name__)

        try:
            setup_logging(level=self.log_level, format_type=self.log_format)
            self._validate_configuration()
        except (ConfigurationError, ValidationError):
            raise
        except Exception as e:
            raise ConfigurationError("Configuration initialization failed", cause=e)

        self._logger.debug(
            "Configuration initialized",
            radial_degree=self.radial_degree,
            angular_count=self.angular_count,
            seed=self.seed
        )

    @property
    def logger(self):
        """Get logger instance."""
        return self._logger

    def _validate_configuration(self) -> None:
        """Validate configuration values."""
        positive_ints = (
            "degree_cap", "radial_degree", "angular_count", "sup_rays",
            "sup_radial_points", "family_size", "x_points", "shell_count", "n_jobs",
        )
        try:
            for name in positive_ints:
                value = getattr(self, name)
                if value < 1:
                    raise ValidationError(
                        f"{name} must be positive",
                        field_name=name,
                        field_value=value,
                        validation_rule="value >= 1"
                    )

            if self.panel_nodes < 2:
                raise ValidationError(
                    "panel_nodes must be at least 2",
                    field_name="panel_nodes",
                    field_value=self.panel_nodes,
                    validation_rule="value >= 2"
                )

            if self.disk_node_budget < 16:
                raise ValidationError(
                    "disk_node_budget must be at least 16",
                    field_name="disk_node_budget",
                    field_value=self.disk_node_budget,
                    validation_rule="value >= 16"
                )

            if self.kernel_guard_terms < 0 or self.projection_degree < 0 or self.family_degree < 0:
                raise ValidationError(
                    "Degrees and guard terms must be non-negative",
                    field_name="kernel_guard_terms",
                    validation_rule="value >= 0"
                )

            if self.family_degree > self.degree_cap:
                raise ValidationError(
                    "family_degree exceeds degree_cap",
                    field_name="family_degree",
                    field_value=self.family_degree,
                    validation_rule=f"value <= {self.degree_cap}"
                )

            if not 0 < self.tolerance < 1:
                raise ValidationError(
                    "tolerance must lie in (0, 1)",
                    field_name="tolerance",
                    field_value=self.tolerance,
                    validation_rule="0 < value < 1"
                )

            if not 0 < self.sigma < self.x_max:
                raise ValidationError(
                    "sigma must be positive and below x_max",
                    field_name="sigma",
                    field_value=self.sigma,
                    validation_rule="0 < sigma < x_max"
                )

            if self.carleson_radius <= 0:
                raise ValidationError(
                    "carleson_radius must be positive",
                    field_name="carleson_radius",
                    field_value=self.carleson_radius,
                    validation_rule="value > 0"
                )

            if self.growth_factor < 1:
                raise ValidationError(
                    "growth_factor must be at least 1",
                    field_name="growth_factor",
                    field_value=self.growth_factor,
                    validation_rule="value >= 1"
                )

            if not 0 < self.vanishing_fraction < 1:
                raise ValidationError(
                    "vanishing_fraction must lie in (0, 1)",
                    field_name="vanishing_fraction",
                    field_value=self.vanishing_fraction,
                    validation_rule="0 < value < 1"
                )

            for name in ("window", "spacing"):
                value = getattr(self, name)
                if value is not None and value <= 0:
                    raise ValidationError(
                        f"{name} must be positive when set",
                        field_name=name,
                        field_value=value,
                        validation_rule="value > 0"
                    )

            if self.log_format not in ("structured", "simple"):
                raise ValidationError(
                    "log_format must be 'structured' or 'simple'",
                    field_name="log_format",
                    field_value=self.log_format,
                    validation_rule="one of structured, simple"
                )

        except ValidationError as e:
            self._logger.error("Configuration validation failed", error=e)
            raise ConfigurationError(
                "Configuration validation failed",
                config_key=e.context.get("field_name"),
                cause=e
            )

    def with_overrides(self, **overrides) -> "LabConfig":
        """Return a new configuration with non-None overrides applied."""
        values = self.model_dump()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return LabConfig(**values)

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides) -> "LabConfig":
        """
        Load configuration from a JSON document.

        Args:
            path: JSON file whose keys are configuration field names
            **overrides: Values taking precedence over the file

        Raises:
            ResourceNotFoundError: If the file does not exist
            ConfigurationError: If the file is not a JSON object or holds invalid values
        """
        config_path = Path(path)
        if not config_path.exists():
            raise ResourceNotFoundError(
                f"Configuration file not found: {config_path}",
                context={"path": str(config_path)}
            )

        try:
            data = json.loads(config_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise ConfigurationError(
                f"Configuration file is not valid JSON: {config_path}",
                cause=e
            )

        if not isinstance(data, dict):
            raise ConfigurationError(
                "Configuration file must hold a JSON object",
                context={"path": str(config_path)}
            )

        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


# Global configuration instance - lazy loaded
_config_instance: Optional[LabConfig] = None


def get_config() -> LabConfig:
    """Get the global configuration instance (lazy loaded)."""
    global _config_instance
    if _config_instance is None:
        _config_instance = LabConfig()
    return _config_instance


def reset_config() -> None:
    """Reset the global configuration instance (useful for testing)."""
    global _config_instance
    _config_instance = None
