"""Pydantic models for the run-control API request and response structures."""

from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field


class RunRequest(BaseModel):
    """
    Defines the request body for starting an experiment run.

    Attributes:
        experiment: Which runner to start.
        config_path: TOML experiment document; `None` runs the defaults.
        output_dir: Where the CSV outputs go; `None` uses the document or settings.
        seed: Master seed override.
        threads: Worker processes for the run.
    """

    experiment: Literal["stairs", "cortical", "mind", "checks"] = Field(
        default="checks", description="Experiment to run."
    )
    config_path: Optional[Path] = Field(
        default=None, description="Path to a TOML experiment document."
    )
    output_dir: Optional[Path] = Field(
        default=None, description="Output directory for records, metrics and summary."
    )
    seed: Optional[int] = Field(default=None, ge=0, description="Master seed override.")
    threads: Optional[int] = Field(
        default=None, ge=1, description="Worker processes; falls back to INFOCAP_THREADS."
    )


class RunResponse(BaseModel):
    """
    Defines the JSON response for run-control endpoints.

    Attributes:
        message: A descriptive message about the result of the operation.
        process_id: The process ID of the background run, if applicable.
    """

    message: str = Field(
        ..., description="A descriptive message about the operation's result."
    )
    process_id: Optional[int] = Field(
        default=None,
        description="The process ID of the background run, if applicable.",
    )
