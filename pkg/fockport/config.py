"""Configuration for the fockport toolkit."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    # Application
    app_name: str = "fockport"
    app_version: str = "1.0.0"
    description: str = "Linear-optical photon-number-state manipulation by teleportation"

    # Logging
    log_level: str = "INFO"

    # Numerics
    prune_threshold: float = 1e-15
    tolerance: float = 1e-12
    state_tolerance: float = 1e-10
    tail_epsilon: float = 1e-12
    k_limit_switch: float = 1e-9
    max_photons: int = 64

    # Detector design
    cross_talk_tolerance: float = 1e-8
    design_restarts: int = 8
    design_max_iterations: int = 400
    design_penalty_start: float = 10.0
    design_penalty_rounds: int = 6
    design_workers: int = 1

    # Randomized checks
    seed: int = 2003
    random_trials: int = 200

    model_config = SettingsConfigDict(
        env_prefix="FOCKPORT_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )


settings = Settings()
