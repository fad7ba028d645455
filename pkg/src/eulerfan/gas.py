"""Ideal-gas closure: energy, entropy, temperature and characteristic speeds.

Everything is dimensionless. The single thermodynamic parameter is the
specific heat at constant volume ``c_v``; the adiabatic exponent is
``(c_v + 1) / c_v``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "DomainError",
    "GasModel",
    "PrimState",
    "internal_energy",
    "entropy",
    "eigenvalues",
    "sound_speed",
    "temperature",
]

# Strict positivity at machine scale.
POSITIVITY_FLOOR = 1e-300


class DomainError(ValueError):
    """Raised when an input lies outside the physical domain of an operation."""


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class GasModel:
    """Ideal gas with constant specific heat ``c_v`` (must exceed 1/2)."""

    c_v: float

    def __post_init__(self):
        c_v = _finite("c_v", self.c_v)
        if not c_v > 0.5:
            raise DomainError(f"c_v must be > 1/2, got {c_v!r}")
        object.__setattr__(self, "c_v", c_v)

    @property
    def gamma(self) -> float:
        return (self.c_v + 1.0) / self.c_v


@dataclass(frozen=True)
class PrimState:
    """Primitive state ``(rho, u, v, p)``; ``v`` is the velocity normal to the
    initial discontinuity, ``u`` the tangential one."""

    rho: float
    u: float
    v: float
    p: float

    def __post_init__(self):
        for name in ("rho", "u", "v", "p"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if not self.rho > POSITIVITY_FLOOR:
            raise DomainError(f"density must be positive, got {self.rho!r}")
        if not self.p > POSITIVITY_FLOOR:
            raise DomainError(f"pressure must be positive, got {self.p!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.rho, self.u, self.v, self.p)


def internal_energy(gas: GasModel, state: PrimState) -> float:
    return gas.c_v * state.p / state.rho


def entropy(gas: GasModel, state: PrimState) -> float:
    """Specific entropy ``log(p**c_v / rho**(c_v + 1))``.

    Evaluated in log form so that large exponents do not overflow.
    """
    return gas.c_v * math.log(state.p) - (gas.c_v + 1.0) * math.log(state.rho)


def sound_speed(gas: GasModel, state: PrimState) -> float:
    return math.sqrt(gas.gamma * state.p / state.rho)


def eigenvalues(gas: GasModel, state: PrimState) -> tuple[float, float, float]:
    """Characteristic speeds ``(v - c, v, v + c)`` of the 1D system in the
    normal direction."""
    c = sound_speed(gas, state)
    return (state.v - c, state.v, state.v + c)


def temperature(state: PrimState) -> float:
    return state.p / state.rho
