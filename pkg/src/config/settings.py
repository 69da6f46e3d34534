from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Process-level settings, loaded from environment variables or a .env file.

    Experiment parameters live in the TOML experiment config; this class only
    holds what the process needs regardless of which experiment runs.
    """

    threads: int = Field(
        default=1,
        ge=1,
        description="Worker processes used when a run fans out (family x seed) cells.",
        alias="INFOCAP_THREADS",
    )
    log_level: str = Field(
        default="INFO",
        description="Minimum level for the console and general log sinks.",
        alias="INFOCAP_LOG_LEVEL",
    )
    log_dir: Path = Field(
        default=Path(".logs"),
        description="Directory receiving general.log and training_events.jsonl.",
        alias="INFOCAP_LOG_DIR",
    )
    output_dir: Path = Field(
        default=Path("runs"),
        description="Default output directory for records.csv, metrics.csv and summary.txt.",
        alias="INFOCAP_OUTPUT_DIR",
    )
    host_port: int = Field(
        default=8000,
        description="Host port for the run-control service.",
        alias="INFOCAP_HOST_PORT",
    )
    guest_port: int = Field(
        default=8000,
        description="Guest port for Docker container mapping.",
        alias="INFOCAP_GUEST_PORT",
    )

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Instantiate the settings object for use throughout the application
settings = Settings()  # type: ignore
