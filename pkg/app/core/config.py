from fractions import Fraction
from typing import Tuple

from pydantic import Field
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from app.core.grid import GridSpec, LiftGrid


class Settings(BaseSettings):
    """
    Tunables for the solvers, certificates and the CLI.

    Read from constructor overrides and an optional `.env` file; process
    environment variables are not consulted.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="PINCHUK_",
        case_sensitive=False,
        extra="ignore",
    )

    # ============================================
    # Application
    # ============================================
    app_name: str = Field(default="Pinchuk Certified Maps", description="Application name")
    app_version: str = Field(default="0.1.0", description="Application version")
    seed: int = Field(default=0, ge=0, description="Seed for every randomized choice")

    # ============================================
    # Logging
    # ============================================
    log_level: str = Field(default="WARNING", description="Logging level")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Logging format string",
    )

    # ============================================
    # Exact solving
    # ============================================
    shear_max_tries: int = Field(default=12, ge=1, description="Shear values tried before giving up")
    refine_max_depth: int = Field(default=128, ge=1, description="Box refinement limit before CertificationStalled")
    isolation_max_depth: int = Field(default=4096, ge=1, description="Bisection limit for root isolation")
    exact_degree_limit: int = Field(default=20, ge=1, description="Max component degree for exact fibers")
    rational_root_degree_limit: int = Field(
        default=24, ge=0, description="Eliminants up to this degree are factored so rational roots come out exact"
    )

    # ============================================
    # Sign certificates
    # ============================================
    curve_max_centers: int = Field(default=8, ge=1, description="Centers tried by the distance-critical method")

    # ============================================
    # Approximate fibers (damped Newton)
    # ============================================
    newton_grid_size: int = Field(default=41, ge=2, description="Start grid points per axis")
    newton_grid_radius: float = Field(default=10.0, gt=0, description="Start grid half-width")
    newton_max_iter: int = Field(default=100, ge=1, description="Newton iterations per start")
    newton_tol: float = Field(default=1e-10, gt=0, description="Scaled residual tolerance")
    dedupe_tol: float = Field(default=1e-8, gt=0, description="Distance below which solutions merge")
    singular_dedupe_tol: float = Field(default=1e-4, gt=0, description="Merge distance near singular roots")

    # ============================================
    # Claim suite
    # ============================================
    witness_grid: str = Field(default="-3,3,-3,3,1/2", description="Witness search grid x0,x1,y0,y1,step")
    surjectivity_grid: str = Field(default="-2,2,-2,2,1", description="Theorem 1 spot-check grid")
    lift_grid: str = Field(default="-1,0,1", description="Target values per axis for the lift spot check")
    lift_residual_tol: float = Field(default=1e-6, gt=0, description="Residual bound for the lift spot check")
    witness_refine_width: str = Field(default="1/100000000", description="Witness refinement width")

    # ============================================
    # Worker pool / output
    # ============================================
    worker_concurrency: int = Field(default=4, ge=1, description="Processes used by grid scans")
    csv_significant_digits: int = Field(default=12, ge=1, description="Digits in CSV decimal rendering")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return init_settings, dotenv_settings

    @property
    def witness_grid_spec(self) -> GridSpec:
        return GridSpec.parse(self.witness_grid)

    @property
    def surjectivity_grid_spec(self) -> GridSpec:
        return GridSpec.parse(self.surjectivity_grid)

    @property
    def lift_grid_spec(self) -> LiftGrid:
        return LiftGrid.parse(self.lift_grid)

    @property
    def witness_width(self) -> Fraction:
        return Fraction(self.witness_refine_width)


# Global settings instance
settings = Settings()
