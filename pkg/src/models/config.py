"""Experiment configuration: TOML sections validated into pydantic models."""

import tomllib
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from channels.gaussian import MAPPINGS
from channels.scenarios import CHANNELS, ChannelScenario, build_channel
from cortical.constraints import OUTPUT_MODES, ConstraintSpec
from estimators.families import Family
from mind.alphabet import ALPHABETS, Alphabet, build_alphabet, noise_std_from_ebn0
from models.errors import ConfigurationError
from nn.activations import Activation

Experiment = Literal["stairs", "cortical", "mind", "checks"]
EXPERIMENTS = ("stairs", "cortical", "mind", "checks")

CONSTRAINT_SWEEPS = ("peak_a", "avg_p")
MIND_CHANNELS = ("awgn", "sqrt", "middleton")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    hidden: List[int] = Field(default_factory=lambda: [256, 256])
    hidden_activation: str = "relu"
    lr: float = Field(default=5e-4, gt=0)

    @field_validator("seeds")
    @classmethod
    def seeds_non_negative(cls, value: List[int]) -> List[int]:
        if any(seed < 0 for seed in value):
            raise ValueError("Seeds must be non-negative.")
        return value

    @field_validator("hidden")
    @classmethod
    def widths_positive(cls, value: List[int]) -> List[int]:
        if any(width < 1 for width in value):
            raise ValueError("Hidden widths must be positive.")
        return value

    @field_validator("hidden_activation")
    @classmethod
    def activation_known(cls, value: str) -> str:
        Activation.parse(value)
        return value


class StairsConfig(_Section):
    """
    Staircase benchmark: the true MI steps up every `iters_per_step` iterations.

    Attributes:
        d: Dimension of x and y.
        n: Batch size.
        families: Estimator family tags.
        steps: Target MI of each step, in nats.
        mapping: Output warp of the Gaussian scenario.
        window: Trailing iterations per step used for metrics.
        derangement_mode: `shift` or `random`; `naive` trains on plain permutations.
    """

    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4], min_length=1)
    d: int = Field(default=5, ge=1)
    n: int = Field(default=64, ge=2)
    families: List[str] = Field(default_factory=lambda: ["kl_dime", "gan_dime", "hd_dime"], min_length=1)
    steps: List[float] = Field(default_factory=lambda: [2.0, 4.0, 6.0, 8.0, 10.0], min_length=1)
    iters_per_step: int = Field(default=4000, ge=1)
    mapping: str = "linear"
    window: int = Field(default=100, ge=1)
    derangement_mode: Literal["shift", "random", "naive"] = "shift"

    @field_validator("families")
    @classmethod
    def families_resolve(cls, value: List[str]) -> List[str]:
        return [Family.parse(tag).tag for tag in value]

    @field_validator("mapping")
    @classmethod
    def mapping_known(cls, value: str) -> str:
        if value not in MAPPINGS:
            raise ValueError(f"Unknown mapping {value!r}; expected one of {MAPPINGS}.")
        return value

    @field_validator("steps")
    @classmethod
    def steps_non_negative(cls, value: List[float]) -> List[float]:
        if any(step < 0 for step in value):
            raise ValueError("Staircase steps must be non-negative.")
        return value

    @model_validator(mode="after")
    def window_fits(self) -> "StairsConfig":
        if self.window > self.iters_per_step:
            raise ValueError(
                f"Metric window {self.window} exceeds {self.iters_per_step} iterations per step."
            )
        return self


class CorticalConfig(_Section):
    """
    Capacity sweep: one learner per (sweep value, seed).

    `sweep_param` names either a constraint field (`peak_a`, `avg_p`) or a
    parameter of the channel.
    """

    channel: str = "awgn"
    channel_params: Dict[str, int | float] = Field(default_factory=dict)
    sweep_param: str = "peak_a"
    sweep_values: List[float] = Field(default_factory=lambda: [1.5], min_length=1)
    peak_a: Optional[float] = Field(default=None, gt=0)
    avg_p: Optional[float] = Field(default=None, gt=0)
    lambda_a: float = Field(default=1.0, ge=0)
    lambda_p: float = Field(default=1.0, ge=0)
    cauchy_gamma: Optional[float] = Field(default=None, gt=0)
    lambda_log: float = Field(default=1.0, ge=0)
    output_mode: str = "tanh_peak"
    alpha: float = Field(default=1.0, gt=0)
    k_disc_steps: int = Field(default=10, ge=1)
    iters: int = Field(default=1000, ge=1)
    n: int = Field(default=256, ge=2)
    eval_n: int = Field(default=10000, ge=2)
    latent_dim: int = Field(default=30, ge=1)
    latent_mode: Literal["normal", "bernoulli"] = "normal"
    cluster_eps: Optional[float] = Field(default=None, gt=0)
    cluster_n: int = Field(default=2000, ge=1)
    hidden: List[int] = Field(default_factory=lambda: [100, 100])
    hidden_activation: str = "leaky_relu(0.2)"

    @field_validator("output_mode")
    @classmethod
    def output_mode_known(cls, value: str) -> str:
        if value not in OUTPUT_MODES:
            raise ValueError(f"Unknown output mode {value!r}; expected one of {OUTPUT_MODES}.")
        return value

    def channel_for(self, sweep_value: float) -> ChannelScenario:
        params = dict(self.channel_params)
        if self.sweep_param not in CONSTRAINT_SWEEPS:
            params[self.sweep_param] = sweep_value
        return build_channel(self.channel, **params)

    def constraint_for(self, sweep_value: float) -> ConstraintSpec:
        fields = {
            "peak_a": self.peak_a,
            "avg_p": self.avg_p,
            "lambda_a": self.lambda_a,
            "lambda_p": self.lambda_p,
            "cauchy_gamma": self.cauchy_gamma,
            "lambda_log": self.lambda_log,
            "output_mode": self.output_mode,
        }
        if self.sweep_param in CONSTRAINT_SWEEPS:
            fields[self.sweep_param] = sweep_value
        return ConstraintSpec(**fields)

    @model_validator(mode="after")
    def sweep_resolves(self) -> "CorticalConfig":
        if self.channel not in CHANNELS:
            raise ValueError(f"Unknown channel {self.channel!r}; expected one of {sorted(CHANNELS)}.")
        for value in self.sweep_values:
            self.channel_for(value)
            self.constraint_for(value)
        return self


class MindConfig(_Section):
    """
    SER and information readouts over an Eb/N0 sweep.

    Attributes:
        alphabet: `bpsk`, `pam4` or `pam4_nonuniform`.
        prior_p: Inner-symbol probability of `pam4_nonuniform`.
        channel: `awgn`, `sqrt` or `middleton`; the noise scale follows Eb/N0.
        snr_db: Eb/N0 points in dB.
        eval_n: Symbols simulated per SNR for SER and entropies.
        single_decoder: Train one decoder across all SNRs instead of one per SNR.
    """

    alphabet: str = "pam4_nonuniform"
    prior_p: float = Field(default=0.05, ge=0, le=1)
    channel: str = "awgn"
    channel_params: Dict[str, int | float] = Field(default_factory=dict)
    snr_db: List[float] = Field(default_factory=lambda: [7.0], min_length=1)
    iters: int = Field(default=3000, ge=1)
    n: int = Field(default=512, ge=1)
    eval_n: int = Field(default=100000, ge=1)
    single_decoder: bool = False
    hidden: List[int] = Field(default_factory=lambda: [100, 100])

    @field_validator("alphabet")
    @classmethod
    def alphabet_known(cls, value: str) -> str:
        if value not in ALPHABETS:
            raise ValueError(f"Unknown alphabet {value!r}; expected one of {list(ALPHABETS)}.")
        return value

    def build_alphabet(self) -> Alphabet:
        return build_alphabet(self.alphabet, self.prior_p)

    def channel_for(self, snr_db: float) -> ChannelScenario:
        """
        Channel at one Eb/N0 point. AWGN and the square-root channel take the
        noise std directly; Middleton takes its background variance from it.
        """
        sigma = noise_std_from_ebn0(snr_db, self.build_alphabet())
        params = dict(self.channel_params)
        if self.channel == "middleton":
            params["sigma_b2"] = sigma**2
        else:
            params["sigma"] = sigma
        return build_channel(self.channel, **params)

    @model_validator(mode="after")
    def channel_resolves(self) -> "MindConfig":
        if self.channel not in MIND_CHANNELS:
            raise ValueError(f"Unknown MIND channel {self.channel!r}; expected one of {MIND_CHANNELS}.")
        if {"sigma", "sigma_b2"} & set(self.channel_params):
            raise ValueError("The MIND noise scale follows snr_db; do not set it in channel_params.")
        for snr in self.snr_db:
            self.channel_for(snr)
        return self


class ChecksConfig(BaseModel):
    """Tolerances and sizes of the analytic check suite."""

    model_config = ConfigDict(extra="forbid")

    gradient_tol: float = Field(default=1e-5, gt=0)
    oracle_tol: float = Field(default=1e-12, gt=0)
    permuted_tol: float = Field(default=1e-9, gt=0)
    permuted_argmax_tol: float = Field(default=1e-6, gt=0)
    mse_tol: float = Field(default=1e-12, gt=0)
    variance_mi: float = Field(default=2.0, ge=0)
    variance_m: int = Field(default=64, ge=2)
    variance_reps: int = Field(default=1000, ge=2)
    variance_rel_tol: float = Field(default=0.1, gt=0)


class ExperimentConfig(BaseModel):
    """
    A whole experiment document.

    Attributes:
        experiment: Which runner the document is for.
        seed: Master seed; every cell derives its own stream from it.
        threads: Worker processes; falls back to `INFOCAP_THREADS`.
        output_dir: Directory for `records.csv`, `metrics.csv` and `summary.txt`.
    """

    model_config = ConfigDict(extra="forbid")

    experiment: Experiment = "checks"
    seed: int = Field(default=0, ge=0)
    threads: Optional[int] = Field(default=None, ge=1)
    output_dir: Optional[Path] = None
    stairs: StairsConfig = Field(default_factory=StairsConfig)
    cortical: CorticalConfig = Field(default_factory=CorticalConfig)
    mind: MindConfig = Field(default_factory=MindConfig)
    checks: ChecksConfig = Field(default_factory=ChecksConfig)


def parse_config(document: Dict[str, Any], **overrides: Any) -> ExperimentConfig:
    """
    Validate a parsed document, applying non-`None` overrides on top.

    Raises:
        ConfigurationError: If any field, tag or section is invalid.
    """
    merged = {**document, **{key: value for key, value in overrides.items() if value is not None}}
    try:
        return ExperimentConfig.model_validate(merged)
    except (ValidationError, ConfigurationError) as exc:
        raise ConfigurationError(f"Invalid experiment configuration: {exc}") from exc


def load_config(path: Optional[Path], **overrides: Any) -> ExperimentConfig:
    """
    Read a TOML experiment document. A missing path yields the defaults.

    Raises:
        ConfigurationError: If the file is missing, malformed or invalid.
    """
    document: Dict[str, Any] = {}
    if path is not None:
        try:
            with open(path, "rb") as handle:
                document = tomllib.load(handle)
        except FileNotFoundError as exc:
            raise ConfigurationError(f"Config file not found: {path}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"Malformed config file {path}: {exc}") from exc
    return parse_config(document, **overrides)
