"""Wave curves, star-state solve and the 18-row pattern classification for the 1D
Riemann problem in the normal direction ``y``.

The tangential velocity ``u`` is a passive scalar: it can only jump across
the contact discontinuity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from scipy import optimize

from .gas import DomainError, GasModel, PrimState, sound_speed

__all__ = [
    "VacuumError",
    "WaveKind",
    "RiemannData",
    "MiddleStates",
    "WavePattern",
    "Wave",
    "PATTERNS",
    "pattern_row",
    "shock_branch",
    "rarefaction_branch",
    "hugoniot_density",
    "isentrope_density",
    "wave_curve",
    "solve_middle",
    "classify",
    "waves",
    "evaluate_selfsimilar",
    "DEFAULT_TOL_CLS",
]

DEFAULT_TOL_CLS = 1e-9


class VacuumError(DomainError):
    """The two rarefaction branches cannot meet at a positive pressure."""


class WaveKind(str, enum.Enum):
    NONE = "none"
    SHOCK = "shock"
    RAREFACTION = "rarefaction"


_KIND_INDEX = {WaveKind.NONE: 0, WaveKind.SHOCK: 1, WaveKind.RAREFACTION: 2}


def pattern_row(left_wave: WaveKind, contact: bool, right_wave: WaveKind) -> int:
    """Row number (1-18) of the structure ``(1-wave, 2-wave, 3-wave)``."""
    return 1 + 9 * bool(contact) + 3 * _KIND_INDEX[WaveKind(left_wave)] + _KIND_INDEX[WaveKind(right_wave)]


PATTERNS = {
    pattern_row(lw, c, rw): (lw, c, rw)
    for c in (False, True)
    for lw in WaveKind
    for rw in WaveKind
}


@dataclass(frozen=True)
class RiemannData:
    gas: GasModel
    left: PrimState
    right: PrimState


@dataclass(frozen=True)
class MiddleStates:
    p_M: float
    v_M: float
    rho_Mminus: float
    rho_Mplus: float
    u_Mminus: float
    u_Mplus: float
    residual: float = 0.0  # relative residual of the pressure equation

    @property
    def left_state(self) -> PrimState:
        return PrimState(self.rho_Mminus, self.u_Mminus, self.v_M, self.p_M)

    @property
    def right_state(self) -> PrimState:
        return PrimState(self.rho_Mplus, self.u_Mplus, self.v_M, self.p_M)


@dataclass(frozen=True)
class WavePattern:
    left_wave: WaveKind
    contact: bool
    right_wave: WaveKind
    middle: Optional[MiddleStates] = None

    @property
    def row(self) -> int:
        return pattern_row(self.left_wave, self.contact, self.right_wave)

    @property
    def n_shocks(self) -> int:
        return (self.left_wave is WaveKind.SHOCK) + (self.right_wave is WaveKind.SHOCK)

    @property
    def n_rarefactions(self) -> int:
        return (self.left_wave is WaveKind.RAREFACTION) + (self.right_wave is WaveKind.RAREFACTION)


# ---------------------------------------------------------------------------
# wave-curve branches


def shock_branch(gas: GasModel, rho_K: float, p_K: float, p: float) -> float:
    """Velocity drop across an admissible shock from ``(rho_K, p_K)`` to
    pressure ``p > p_K``."""
    if not p > p_K:
        raise DomainError(f"shock branch needs p > p_K, got p={p!r}, p_K={p_K!r}")
    c_v = gas.c_v
    return (p - p_K) * math.sqrt(2.0 * c_v / (rho_K * (p_K + (2.0 * c_v + 1.0) * p)))


def rarefaction_branch(gas: GasModel, rho_K: float, p_K: float, p: float) -> float:
    """Velocity gap across a rarefaction from ``p_K`` down to ``0 < p <= p_K``.

    Bounded above by ``2 c_v c_K`` (the vacuum limit ``p -> 0``).
    """
    if not 0.0 < p <= p_K:
        raise DomainError(f"rarefaction branch needs 0 < p <= p_K, got p={p!r}, p_K={p_K!r}")
    c_v = gas.c_v
    return (
        2.0
        * math.sqrt(c_v * (c_v + 1.0))
        * math.sqrt(p_K / rho_K)
        * (1.0 - (p / p_K) ** (1.0 / (2.0 * (c_v + 1.0))))
    )


def hugoniot_density(gas: GasModel, rho_K: float, p_K: float, p: float) -> float:
    """Density behind an admissible shock reaching pressure ``p > p_K``."""
    if not p > p_K:
        raise DomainError(f"Hugoniot density needs p > p_K, got p={p!r}, p_K={p_K!r}")
    k = 2.0 * gas.c_v + 1.0
    return rho_K * (k * p + p_K) / (k * p_K + p)


def isentrope_density(gas: GasModel, rho_K: float, p_K: float, p: float) -> float:
    if not p > 0.0:
        raise DomainError(f"isentrope density needs p > 0, got {p!r}")
    return rho_K * (p / p_K) ** (gas.c_v / (gas.c_v + 1.0))


def wave_curve(gas: GasModel, rho_K: float, p_K: float, p: float) -> float:
    """Signed velocity gap ``Phi(p)``: shock branch above ``p_K``, minus the
    rarefaction branch below. Strictly increasing in ``p``."""
    if p > p_K:
        return shock_branch(gas, rho_K, p_K, p)
    return -rarefaction_branch(gas, rho_K, p_K, p)


def _curve_density(gas: GasModel, rho_K: float, p_K: float, p: float) -> float:
    if p > p_K:
        return hugoniot_density(gas, rho_K, p_K, p)
    return isentrope_density(gas, rho_K, p_K, p)


# ---------------------------------------------------------------------------
# star state


def _pressure_function(data: RiemannData):
    gas, L, R = data.gas, data.left, data.right
    dv = L.v - R.v

    def fun(p):
        return wave_curve(gas, L.rho, L.p, p) + wave_curve(gas, R.rho, R.p, p) - dv

    return fun


def solve_middle(data: RiemannData) -> MiddleStates:
    """Pressure and velocity of the two middle states.

    Solves ``v_- - Phi(p; left) = v_+ + Phi(p; right)`` for ``p_M`` by Brent's
    method (bisection safeguarded secant/inverse quadratic steps) on a bracket
    that is widened geometrically until it straddles the root.

    Raises
    ------
    VacuumError
        If ``v_+ - v_- >= 2 c_v (c_- + c_+)``: no positive middle pressure.
    """
    gas, L, R = data.gas, data.left, data.right
    c_v = gas.c_v
    vacuum_gap = 2.0 * c_v * (sound_speed(gas, L) + sound_speed(gas, R))
    if R.v - L.v >= vacuum_gap:
        raise VacuumError(
            f"rarefactions open a vacuum: v_+ - v_- = {R.v - L.v!r} >= {vacuum_gap!r}"
        )

    fun = _pressure_function(data)
    p_lo, p_hi = min(L.p, R.p), max(L.p, R.p)
    f_lo, f_hi = fun(p_lo), fun(p_hi)

    if f_lo == 0.0:
        p_M = p_lo
    elif f_hi == 0.0:
        p_M = p_hi
    else:
        if f_lo > 0.0:
            a, b = p_lo * 1e-8, p_lo
            while fun(a) > 0.0:
                a *= 1e-8
                if a < 1e-300:
                    raise VacuumError("middle pressure underflows")
        elif f_hi < 0.0:
            a, b = p_hi, p_hi * 1e8
            while fun(b) < 0.0:
                b *= 1e8
        else:
            a, b = p_lo, p_hi
        p_M = optimize.brentq(fun, a, b, xtol=1e-300, rtol=4.0 * 2.220446049250313e-16, maxiter=500)

    phi_L = wave_curve(gas, L.rho, L.p, p_M)
    phi_R = wave_curve(gas, R.rho, R.p, p_M)
    scale = max(abs(phi_L), abs(phi_R), abs(L.v - R.v), sound_speed(gas, L), sound_speed(gas, R))
    residual = abs(phi_L + phi_R - (L.v - R.v)) / scale
    # average the two one-sided velocities; they agree to within the residual
    v_M = 0.5 * ((L.v - phi_L) + (R.v + phi_R))
    return MiddleStates(
        p_M=p_M,
        v_M=v_M,
        rho_Mminus=_curve_density(gas, L.rho, L.p, p_M),
        rho_Mplus=_curve_density(gas, R.rho, R.p, p_M),
        u_Mminus=L.u,
        u_Mplus=R.u,
        residual=residual,
    )


def _side_kind(p_M: float, p_K: float, tol: float) -> WaveKind:
    if abs(p_M - p_K) <= tol * p_K:
        return WaveKind.NONE
    return WaveKind.SHOCK if p_M > p_K else WaveKind.RAREFACTION


def classify(data: RiemannData, tol_cls: float = DEFAULT_TOL_CLS) -> WavePattern:
    """Row of the 18-pattern classification of the self-similar solution.

    A nonlinear wave is reported when the middle pressure differs from the
    adjacent outer pressure by more than ``tol_cls`` (relative); a contact when
    the middle densities differ by more than ``tol_cls`` (relative) or the
    tangential velocities by more than ``tol_cls`` (absolute).
    """
    middle = solve_middle(data)
    left_wave = _side_kind(middle.p_M, data.left.p, tol_cls)
    right_wave = _side_kind(middle.p_M, data.right.p, tol_cls)
    rho_a, rho_b = middle.rho_Mminus, middle.rho_Mplus
    contact = abs(rho_a - rho_b) > tol_cls * max(rho_a, rho_b) or abs(data.left.u - data.right.u) > tol_cls
    if left_wave is WaveKind.NONE and right_wave is WaveKind.NONE and not contact:
        return WavePattern(left_wave, contact, right_wave, None)
    return WavePattern(left_wave, contact, right_wave, middle)


# ---------------------------------------------------------------------------
# self-similar solution


@dataclass(frozen=True)
class Wave:
    """One wave of the fan. ``speed_lo == speed_hi`` for discontinuities."""

    family: int
    kind: WaveKind | str
    left: PrimState
    right: PrimState
    speed_lo: float
    speed_hi: float


def waves(data: RiemannData, pattern: WavePattern) -> list[Wave]:
    """Waves of the classified solution ordered by speed.

    The contact is always included when middle states exist (possibly with a
    zero jump) so that the constant pieces tile the whole ``xi`` line.
    """
    gas, L, R, m = data.gas, data.left, data.right, pattern.middle
    if m is None:
        return []
    ML, MR = m.left_state, m.right_state
    out = []
    if pattern.left_wave is WaveKind.SHOCK:
        sigma = (ML.rho * ML.v - L.rho * L.v) / (ML.rho - L.rho)
        out.append(Wave(1, WaveKind.SHOCK, L, ML, sigma, sigma))
    elif pattern.left_wave is WaveKind.RAREFACTION:
        out.append(Wave(1, WaveKind.RAREFACTION, L, ML, L.v - sound_speed(gas, L), ML.v - sound_speed(gas, ML)))
    # with no adjacent nonlinear wave the contact touches the outer state
    c_left = L if pattern.left_wave is WaveKind.NONE else ML
    c_right = R if pattern.right_wave is WaveKind.NONE else MR
    out.append(Wave(2, "contact", c_left, c_right, m.v_M, m.v_M))
    if pattern.right_wave is WaveKind.SHOCK:
        sigma = (R.rho * R.v - MR.rho * MR.v) / (R.rho - MR.rho)
        out.append(Wave(3, WaveKind.SHOCK, MR, R, sigma, sigma))
    elif pattern.right_wave is WaveKind.RAREFACTION:
        out.append(Wave(3, WaveKind.RAREFACTION, MR, R, MR.v + sound_speed(gas, MR), R.v + sound_speed(gas, R)))
    return out


def _fan_state(gas: GasModel, family: int, anchor: PrimState, xi: float) -> PrimState:
    # Riemann invariant v -/+ 2 c_v c is constant; lambda = v +/- c equals xi.
    c_v = gas.c_v
    c_K = sound_speed(gas, anchor)
    if family == 3:
        w = anchor.v - 2.0 * c_v * c_K
        c = (xi - w) / (1.0 + 2.0 * c_v)
        v = xi - c
    else:
        w = anchor.v + 2.0 * c_v * c_K
        c = (w - xi) / (1.0 + 2.0 * c_v)
        v = xi + c
    p = anchor.p * (c / c_K) ** (2.0 * (c_v + 1.0))
    rho = isentrope_density(gas, anchor.rho, anchor.p, p)
    return PrimState(rho, anchor.u, v, p)


def evaluate_selfsimilar(data: RiemannData, pattern: WavePattern, xi: float) -> PrimState:
    """State of the self-similar solution at ``xi = y / t``."""
    xi = float(xi)
    if math.isnan(xi):
        raise DomainError(f"xi must not be NaN, got {xi!r}")
    fan = waves(data, pattern)
    if not fan:
        return data.left if xi < data.left.v else data.right
    state = data.left
    for wave in fan:
        if xi < wave.speed_lo:
            return state
        if wave.kind is WaveKind.RAREFACTION and xi < wave.speed_hi:
            anchor = wave.right if wave.family == 3 else wave.left
            return _fan_state(data.gas, wave.family, anchor, xi)
        state = wave.right
    return state
