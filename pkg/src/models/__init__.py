"""Models package: errors, estimate schemas, records and API payloads."""

from .api import RunRequest, RunResponse
from .errors import (
    CheckSuiteError,
    ConfigurationError,
    DivergenceError,
    InfocapError,
    NumericError,
    SamplingError,
    StateError,
)
from .estimates import (
    CapacityEstimate,
    CheckReport,
    CheckResult,
    EntropyEstimate,
    GradientCheckReport,
    MiEstimate,
    ValueFunctionEval,
)
from .records import CorticalRecord, CorticalTracePoint, MetricRecord, MetricRow, MindRecord, TrainingEvent

__all__ = [
    "CapacityEstimate",
    "CheckReport",
    "CheckResult",
    "CheckSuiteError",
    "ConfigurationError",
    "CorticalRecord",
    "CorticalTracePoint",
    "DivergenceError",
    "EntropyEstimate",
    "GradientCheckReport",
    "InfocapError",
    "MetricRecord",
    "MetricRow",
    "MiEstimate",
    "MindRecord",
    "NumericError",
    "RunRequest",
    "RunResponse",
    "SamplingError",
    "StateError",
    "TrainingEvent",
]
