from __future__ import annotations

from pydantic_settings import BaseSettings, SettingsConfigDict

from dsubh_bounds.config.paths import env_file_path

_UNSET = object()


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=str(env_file_path()),
        env_file_encoding="utf-8",
        extra="ignore",
    )

    app_env: str = "dev"
    log_level: str = "INFO"

    # hausdorff
    dyadic_resolution: int = 10
    greedy_resolution: int = 6
    cantor_level: int = 12

    # verification
    pass_tolerance: float = 1e-3
    abs_tolerance: float = 1e-9
    dini_grid_points: int = 24

    # gauges
    bisection_rtol: float = 1e-12
    bisection_max_iter: int = 200

    # quadrature
    exclusion_fraction: float = 1e-3
    sphere_rtol: float = 1e-6
    sphere_initial_nodes: int = 64
    sphere_max_nodes_2d: int = 2**20
    sphere_max_nodes_3d: int = 1024
    monte_carlo_samples: int = 10**6
    integral_rtol: float = 1e-8

    # modulus of continuity
    modulus_max_centers: int = 20000
    modulus_gap: float = 0.01

    # runs
    seed: int = 0
    jobs: int = 1
    output_dir: str = "reports"
    record_timing: bool = False


def require_positive(name: str, value: object = _UNSET) -> float:
    """
    If `value` is provided (even None), validate it. Otherwise fall back to the setting `name`.
    Keeps CLI overrides and environment values on one validation path.
    """
    raw = getattr(settings, name) if value is _UNSET else value

    if isinstance(raw, bool) or not isinstance(raw, int | float) or not raw > 0:
        raise RuntimeError(f"{name.upper()} must be a positive number, got {raw!r}.")

    return raw


settings = Settings()


def apply_overrides(values: dict[str, object]) -> None:
    """Set fields of the module-level settings in place (CLI flags, pool workers)."""
    for name, value in values.items():
        if name not in Settings.model_fields:
            raise RuntimeError(f"Unknown setting '{name}'.")
        setattr(settings, name, value)
