"""Pydantic models for value-function evaluations, estimates and check reports."""

import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.errors import NumericError

CPC_CEILING_RTOL = 1e-9


class ValueFunctionEval(BaseModel):
    """
    Monte Carlo value of a training objective.

    `total = joint_term - marginal_term + offset`. Gradients, when present, are
    derivatives of `total` w.r.t. each discriminator output (already divided
    by the batch size) and are excluded from serialisation.

    Attributes:
        family: Value-function family that produced the evaluation.
        joint_term: Expectation over paired samples.
        marginal_term: Expectation over product-of-marginals samples.
        offset: Constant added by the family's closed form (e.g. log 4 for gan).
        total: Value in nats.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    family: str = Field(..., description="Value-function family tag.")
    joint_term: float = Field(..., description="Expectation over joint samples.")
    marginal_term: float = Field(..., description="Expectation over marginal samples.")
    offset: float = Field(default=0.0, description="Family-specific constant offset.")
    total: float = Field(..., description="joint_term - marginal_term + offset (nats).")
    grad_joint: Optional[np.ndarray] = Field(default=None, exclude=True, repr=False)
    grad_marginal: Optional[np.ndarray] = Field(default=None, exclude=True, repr=False)


class MiEstimate(BaseModel):
    """
    A mutual-information readout.

    Attributes:
        value_nats: Estimated MI in nats.
        n_samples: Number of joint samples the readout averaged over.
        family: Estimator family tag.
    """

    value_nats: float = Field(..., description="Estimated mutual information (nats).")
    n_samples: int = Field(..., ge=1, description="Joint samples used by the readout.")
    family: str = Field(..., description="Estimator family tag.")

    @model_validator(mode="after")
    def check_bounds(self) -> "MiEstimate":
        if not math.isfinite(self.value_nats):
            raise NumericError(f"Non-finite {self.family} estimate.", family=self.family)
        if self.family == "cpc":
            ceiling = math.log(self.n_samples)
            if self.value_nats > ceiling + CPC_CEILING_RTOL * max(1.0, ceiling):
                raise NumericError(
                    f"CPC estimate {self.value_nats} exceeds log N = {ceiling}.", family=self.family
                )
            # rounding in the log-sum-exp can overshoot the ceiling by a few ulps
            self.value_nats = min(self.value_nats, ceiling)
        return self


class CapacityEstimate(BaseModel):
    """
    Capacity read from the cooperative value function.

    Attributes:
        nats: `value_function / alpha + 1 - ln(alpha)`.
        value_function: Monte Carlo value of the alpha-scaled objective.
        alpha: Positive scaling of the log term.
    """

    nats: float = Field(..., description="Capacity estimate (nats).")
    value_function: float = Field(..., description="Value of the cooperative objective.")
    alpha: float = Field(..., gt=0, description="Positive scaling constant.")

    @classmethod
    def from_value(cls, value_function: float, alpha: float) -> "CapacityEstimate":
        return cls(
            nats=value_function / alpha + 1.0 - math.log(alpha),
            value_function=value_function,
            alpha=alpha,
        )


class EntropyEstimate(BaseModel):
    """
    Information quantities read from a decoder's posteriors, in bits.

    Attributes:
        source_entropy_bits: H(X) from Monte Carlo averaged posteriors.
        conditional_entropy_bits: H(X|Y).
        mutual_information_bits: H(X) - H(X|Y).
        error_probability: 1 - mean of the maximum posterior.
        n_samples: Number of channel outputs averaged over.
    """

    source_entropy_bits: float = Field(..., ge=0)
    conditional_entropy_bits: float = Field(..., ge=0)
    mutual_information_bits: float
    error_probability: float = Field(..., ge=0, le=1)
    n_samples: int = Field(..., ge=1)
    unit: Literal["bits"] = "bits"


class GradientCheckReport(BaseModel):
    """Outcome of an analytic-vs-finite-difference gradient comparison."""

    max_relative_error: float = Field(..., ge=0)
    tol: float = Field(..., ge=0)
    passed: bool
    n_parameters: int = Field(..., ge=0)


class CheckResult(BaseModel):
    """
    One analytic check of the release gate.

    Attributes:
        name: Short identifier of the check.
        passed: Whether the check met its tolerance.
        observed: Measured quantity (error, spread or value).
        tolerance: Threshold the observation was compared against.
        detail: Human-readable context.
    """

    name: str
    passed: bool
    observed: float
    tolerance: float
    detail: str = ""


class CheckReport(BaseModel):
    """All check results plus the overall verdict."""

    results: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [result for result in self.results if not result.passed]
