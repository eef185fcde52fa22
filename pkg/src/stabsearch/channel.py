"""Single-qubit Pauli channels parameterised by total error probability and bias."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy.optimize import brentq


class UnsatisfiableChannel(ValueError):
    """No physical channel of the requested family has these parameters."""


class Family(str, Enum):
    BIASED_XZ = "xz"
    TWIRLED_AD = "ad"
    DEPOLARIZING = "depol"


@dataclass(frozen=True)
class PauliChannel:
    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self) -> None:
        probs = (self.p_i, self.p_x, self.p_y, self.p_z)
        if any(not 0.0 <= q <= 1.0 for q in probs):
            raise ValueError(f"probabilities out of range: {probs}")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValueError(f"probabilities do not sum to one: {probs}")

    @property
    def p(self) -> float:
        return self.p_x + self.p_y + self.p_z

    @property
    def eta(self) -> float:
        return self.p_z / self.p_x if self.p_x > 0 else math.inf

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p_i, self.p_x, self.p_y, self.p_z)


@dataclass(frozen=True)
class ChannelSpec:
    family: Family
    p: float
    eta: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if self.family is not Family.DEPOLARIZING and not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")

    def __str__(self) -> str:
        if self.family is Family.DEPOLARIZING:
            return f"depol:p={self.p:g}"
        return f"{self.family.value}:p={self.p:g},eta={self.eta:g}"

    @classmethod
    def parse(cls, text: str) -> "ChannelSpec":
        """Parse ``xz:p=0.01,eta=10``, ``ad:p=0.001,eta=100`` or ``depol:p=0.1``."""
        try:
            fam, _, params = text.strip().partition(":")
            kv = dict(item.split("=", 1) for item in params.split(",") if item)
            family = Family(fam.lower())
            return cls(family, float(kv["p"]), float(kv.get("eta", 1.0)))
        except (KeyError, ValueError) as exc:
            raise ValueError(f"cannot parse channel {text!r}: {exc}") from exc


@dataclass(frozen=True)
class ADParameters:
    gamma: float
    lam: float


def biased_xz_rates(p: float, eta: float) -> tuple[float, float]:
    """Independent X and Z flip rates (q_X, q_Z) giving total p and bias eta."""

    def qz_of(qx: float) -> float:
        t = eta * qx / (1.0 - qx)
        return t / (1.0 + t)

    def total(qx: float) -> float:
        return 1.0 - (1.0 - qx) * (1.0 - qz_of(qx)) - p

    lo, hi = 0.0, p
    if not (total(lo) < 0.0 <= total(hi)):
        raise UnsatisfiableChannel(f"no biased XZ channel with p={p}, eta={eta}")
    if total(hi) == 0.0:
        qx = hi
    else:
        qx = brentq(total, lo, hi, xtol=1e-300, rtol=4 * 2.220446049250313e-16, maxiter=500)
    qz = qz_of(qx)
    if not (0.0 < qx < 1.0 and 0.0 < qz < 1.0):
        raise UnsatisfiableChannel(f"no biased XZ channel with p={p}, eta={eta}")
    return qx, qz


def twirled_ad_parameters(p: float, eta: float) -> ADParameters:
    """Damping and dephasing strengths of the twirled AD channel at (p, eta)."""
    p_z = eta * p / (2.0 + eta)
    gamma = 4.0 * p / (2.0 + eta)
    root = (2.0 - gamma - 4.0 * p_z) / 2.0
    lam = 1.0 - gamma - root * root
    if root < 0.0 or lam < 0.0 or 1.0 - lam - gamma < 0.0 or gamma > 1.0:
        raise UnsatisfiableChannel(f"twirled AD channel unphysical at p={p}, eta={eta} (gamma={gamma}, lambda={lam})")
    return ADParameters(gamma, lam)


def resolve(spec: ChannelSpec) -> PauliChannel:
    p, eta = spec.p, spec.eta
    if spec.family is Family.DEPOLARIZING:
        return PauliChannel(1.0 - p, p / 3.0, p / 3.0, p / 3.0)
    if spec.family is Family.TWIRLED_AD:
        twirled_ad_parameters(p, eta)
        p_x = p / (2.0 + eta)
        return PauliChannel(1.0 - p, p_x, p_x, eta * p / (2.0 + eta))
    qx, qz = biased_xz_rates(p, eta)
    return PauliChannel((1.0 - qx) * (1.0 - qz), qx * (1.0 - qz), qx * qz, qz * (1.0 - qx))


GRID_PS = (0.1, 0.01, 0.001, 0.0001)
GRID_ETAS = (1.0, 10.0, 100.0, 1000.0)


def grid(family: Family | str) -> list[ChannelSpec]:
    """The 16-point (p, eta) grid used for multi-channel objectives."""
    family = Family(family)
    return [ChannelSpec(family, p, eta) for p in GRID_PS for eta in GRID_ETAS]
