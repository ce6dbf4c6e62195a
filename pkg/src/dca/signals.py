"""Signal categories, weights and the signal-to-cytokine transform.

Input signals arrive pre-categorised as PAMP, danger, safe or
inflammatory concentrations.  Each dendritic cell turns them into three
output concentrations: costimulatory molecules (``csm``), semi-mature
cytokines (``semi``) and mature cytokines (``mat``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "ChannelWeights",
    "CytokineOutput",
    "DEFAULT_WEIGHTS",
    "NormalizationMode",
    "SignalVector",
    "WeightMatrix",
    "process_signals",
]


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class SignalVector:
    """Concentrations of the four input signal classes for one event."""

    pamp: float = 0.0
    danger: float = 0.0
    safe: float = 0.0
    inflammatory: float = 0.0

    def __post_init__(self) -> None:
        for name in ("pamp", "danger", "safe", "inflammatory"):
            value = _check_finite(name, getattr(self, name))
            if value < 0:
                raise ValueError(f"{name} concentration must be >= 0, got {value!r}")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class ChannelWeights:
    """Weights one output channel gives to the PAMP, danger and safe inputs."""

    pamp: float
    danger: float
    safe: float

    def __post_init__(self) -> None:
        for name in ("pamp", "danger", "safe"):
            object.__setattr__(self, name, _check_finite(name, getattr(self, name)))

    @property
    def total(self) -> float:
        return self.pamp + self.danger + self.safe


@dataclass(frozen=True)
class WeightMatrix:
    csm: ChannelWeights
    semi: ChannelWeights
    mat: ChannelWeights

    @classmethod
    def from_dict(cls, data: dict) -> WeightMatrix:
        """Build from ``{"csm": {"pamp": .., "danger": .., "safe": ..}, ...}``.

        Channels missing from ``data`` keep their default weights.
        """
        unknown = set(data) - {"csm", "semi", "mat"}
        if unknown:
            raise ValueError(f"unknown weight channels: {sorted(unknown)}")
        channels = {}
        for name in ("csm", "semi", "mat"):
            default = getattr(DEFAULT_WEIGHTS, name)
            given = dict(data.get(name, {}))
            bad = set(given) - {"pamp", "danger", "safe"}
            if bad:
                raise ValueError(f"unknown signals for channel {name}: {sorted(bad)}")
            channels[name] = ChannelWeights(
                pamp=given.get("pamp", default.pamp),
                danger=given.get("danger", default.danger),
                safe=given.get("safe", default.safe),
            )
        return cls(**channels)

    def to_dict(self) -> dict:
        return {
            name: {"pamp": w.pamp, "danger": w.danger, "safe": w.safe}
            for name, w in (("csm", self.csm), ("semi", self.semi), ("mat", self.mat))
        }


DEFAULT_WEIGHTS = WeightMatrix(
    csm=ChannelWeights(pamp=2.0, danger=1.0, safe=2.0),
    semi=ChannelWeights(pamp=0.0, danger=0.0, safe=3.0),
    mat=ChannelWeights(pamp=2.0, danger=1.0, safe=-3.0),
)


@dataclass(frozen=True)
class CytokineOutput:
    """Output concentrations; ``mat`` (and in principle any channel) may be negative."""

    csm: float = 0.0
    semi: float = 0.0
    mat: float = 0.0

    def __add__(self, other: CytokineOutput) -> CytokineOutput:
        if not isinstance(other, CytokineOutput):
            return NotImplemented
        return CytokineOutput(self.csm + other.csm, self.semi + other.semi, self.mat + other.mat)

    def scaled(self, factor: float) -> CytokineOutput:
        return CytokineOutput(self.csm * factor, self.semi * factor, self.mat * factor)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.csm, self.semi, self.mat)


class NormalizationMode(str, enum.Enum):
    """How the weighted sum of a channel is normalised.

    ``PER_OUTPUT_WEIGHT_SUM`` divides each channel by the sum of its own
    weights (1 when that sum is zero).  This reproduces the published
    worked example exactly and is the default.  ``EQ1_TIMES_TWO`` applies
    the same division and then doubles the result, as the closed-form
    equation is written.
    """

    PER_OUTPUT_WEIGHT_SUM = "per-output-weight-sum"
    EQ1_TIMES_TWO = "eq1-times-two"


def _channel(w: ChannelWeights, s: SignalVector, amplify: float, scale: float) -> float:
    total = w.total
    denominator = total if total != 0 else 1.0
    weighted = w.pamp * s.pamp + w.danger * s.danger + w.safe * s.safe
    return weighted * amplify / denominator * scale


def process_signals(
    s: SignalVector,
    w: WeightMatrix = DEFAULT_WEIGHTS,
    mode: NormalizationMode = NormalizationMode.PER_OUTPUT_WEIGHT_SUM,
) -> CytokineOutput:
    """Map input signal concentrations to output cytokine concentrations.

    The inflammatory term amplifies the whole weighted sum by
    ``1 + inflammatory``.

    Args:
        s: Input concentrations.
        w: Per-channel weights.
        mode: Normalisation rule, see :class:`NormalizationMode`.

    Returns:
        The ``(csm, semi, mat)`` concentrations.

    Raises:
        ValueError: If ``s`` is not a valid :class:`SignalVector` or the
            result is not finite.
    """
    if not isinstance(s, SignalVector):
        raise ValueError(f"expected a SignalVector, got {type(s).__name__}")
    mode = NormalizationMode(mode)
    scale = 2.0 if mode is NormalizationMode.EQ1_TIMES_TWO else 1.0
    amplify = 1.0 + s.inflammatory
    out = CytokineOutput(
        csm=_channel(w.csm, s, amplify, scale),
        semi=_channel(w.semi, s, amplify, scale),
        mat=_channel(w.mat, s, amplify, scale),
    )
    if not all(math.isfinite(v) for v in out.as_tuple()):
        raise ValueError(f"non-finite cytokine output {out} for input {s}")
    return out
