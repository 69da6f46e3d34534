"""Estimator family tags such as `kl_dime`, `gamma_dime(2)` or `smile(5)`."""

import math
import re
from dataclasses import dataclass
from typing import Optional

from divergence.generators import FGenerator, get_generator
from models.errors import ConfigurationError

FAMILY_NAMES = ("kl_dime", "gan_dime", "hd_dime", "gamma_dime", "mine", "nwj", "smile", "cpc")
FDIME_FAMILIES = ("kl_dime", "gan_dime", "hd_dime")

DEFAULT_GAMMA = 1.0
DEFAULT_TAU = 1.0

_TAG_PATTERN = re.compile(r"^(?P<name>[a-z_]+)(\((?P<param>[-+0-9.eE]+|inf)\))?$")


@dataclass(frozen=True)
class Family:
    """
    A parsed family tag.

    Attributes:
        name: One of `FAMILY_NAMES`.
        param: γ for `gamma_dime`, τ for `smile`, otherwise `None`.
    """

    name: str
    param: Optional[float] = None

    @classmethod
    def parse(cls, tag: "str | Family") -> "Family":
        """
        Raises:
            ConfigurationError: On an unknown or malformed tag, or an invalid parameter.
        """
        if isinstance(tag, Family):
            return tag
        match = _TAG_PATTERN.match(tag.strip())
        if match is None or match.group("name") not in FAMILY_NAMES:
            raise ConfigurationError(
                f"Unknown estimator family {tag!r}; expected one of {FAMILY_NAMES}."
            )
        name, raw = match.group("name"), match.group("param")
        if name == "gamma_dime":
            param = float(raw) if raw else DEFAULT_GAMMA
        elif name == "smile":
            param = float(raw) if raw else DEFAULT_TAU
        elif raw is not None:
            raise ConfigurationError(f"Family {name!r} takes no parameter.")
        else:
            param = None
        if param is not None and not param > 0:
            raise ConfigurationError(f"Family {name!r} needs a positive parameter, got {param}.")
        return cls(name=name, param=param)

    @property
    def tag(self) -> str:
        if self.param is None:
            return self.name
        if math.isinf(self.param):
            return f"{self.name}(inf)"
        return f"{self.name}({self.param:g})"

    @property
    def is_fdime(self) -> bool:
        return self.name in FDIME_FAMILIES

    @property
    def generator(self) -> Optional[FGenerator]:
        if self.is_fdime:
            return get_generator(self.name.removesuffix("_dime"))
        return None

    @property
    def output_activation(self) -> str:
        if self.is_fdime:
            return self.generator.output_activation
        if self.name == "gamma_dime":
            return "softplus"
        return "identity"

    @property
    def joint_only_readout(self) -> bool:
        """Whether the readout averages over joint samples only."""
        return self.is_fdime or self.name == "gamma_dime"
