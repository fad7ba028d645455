"""Residual and margin engine for piecewise-constant fans.

Two modes share the same jump conditions:

* :func:`verify_subsolution` checks the algebraic characterisation of an
  admissible fan subsolution (three interfaces, two relaxed interior regions);
* :func:`verify_solution` checks genuine piecewise-constant solutions, where
  every region carries ``U = v (x) v - |v|^2/2 I`` and ``C = |v|^2``.

Equation residuals are divided by the largest absolute term of their equation.
Strict inequalities (speed order, subsolution conditions) need a positive
margin; the entropy inequalities are non-strict and are accepted down to
``-tol_eq`` times their term scale. Because entropy carries an arbitrary
additive constant, that scale uses the magnitude of the logarithms in ``s``
rather than ``|rho s|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .gas import DomainError, GasModel, PrimState, entropy, sound_speed

__all__ = [
    "Region",
    "FanQuintuple",
    "Condition",
    "ResidualReport",
    "DEFAULT_TOL_EQ",
    "verify_subsolution",
    "verify_solution",
    "verify_rarefaction",
    "lift",
]

DEFAULT_TOL_EQ = 1e-9

EQ, STRICT, WEAK = "eq", "strict", "weak"


@dataclass(frozen=True)
class Region:
    """Constant values of a subsolution on one wedge.

    ``gamma`` and ``delta`` are the entries of the traceless symmetric matrix
    ``U = [[gamma, delta], [delta, -gamma]]``; ``C`` bounds twice the kinetic
    energy density per unit mass.
    """

    rho: float
    alpha: float
    beta: float
    gamma: float
    delta: float
    C: float
    p: float

    @classmethod
    def from_state(cls, s: PrimState) -> "Region":
        return cls(s.rho, s.u, s.v, 0.5 * (s.u * s.u - s.v * s.v), s.u * s.v, s.u * s.u + s.v * s.v, s.p)

    @classmethod
    def from_slacks(cls, rho, alpha, beta, delta, eps, epst, p) -> "Region":
        C = alpha * alpha + beta * beta + eps + epst
        gamma = 0.5 * C - eps - beta * beta
        return cls(rho, alpha, beta, gamma, delta, C, p)

    @property
    def slacks(self) -> tuple[float, float]:
        eps = 0.5 * self.C - self.gamma - self.beta * self.beta
        epst = self.C - self.alpha * self.alpha - self.beta * self.beta - eps
        return eps, epst


@dataclass(frozen=True)
class FanQuintuple:
    mu0: float
    mu1: float
    mu2: float
    region1: Region
    region2: Region
    left: PrimState
    right: PrimState

    def replace(self, **changes) -> "FanQuintuple":
        return replace(self, **changes)


@dataclass(frozen=True)
class Condition:
    id: str
    kind: str
    value: float
    scale: float

    @property
    def relative(self) -> float:
        return self.value / self.scale if self.scale > 0.0 else self.value

    def ok(self, tol_eq: float) -> bool:
        if self.kind == EQ:
            return abs(self.relative) <= tol_eq
        if self.kind == STRICT:
            return self.value > 0.0
        return self.relative >= -tol_eq


@dataclass(frozen=True)
class ResidualReport:
    conditions: tuple[Condition, ...]
    tol_eq: float = DEFAULT_TOL_EQ
    mode: str = "subsolution"

    @property
    def eq_residuals(self) -> dict[str, float]:
        return {c.id: c.relative for c in self.conditions if c.kind == EQ}

    @property
    def ineq_margins(self) -> dict[str, float]:
        return {c.id: c.value for c in self.conditions if c.kind != EQ}

    @property
    def violations(self) -> list[str]:
        return [c.id for c in self.conditions if not c.ok(self.tol_eq)]

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def max_eq_residual(self) -> float:
        return max((abs(r) for r in self.eq_residuals.values()), default=0.0)

    @property
    def min_margin(self) -> float:
        """Smallest strict-inequality margin (``inf`` if there are none)."""
        return min((c.value for c in self.conditions if c.kind == STRICT), default=math.inf)

    def __getitem__(self, cid: str) -> Condition:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)


def _cond(cid, kind, lhs_terms: Iterable[float], rhs_terms: Iterable[float]) -> Condition:
    lhs, rhs = list(lhs_terms), list(rhs_terms)
    scale = max((abs(t) for t in lhs + rhs), default=0.0)
    return Condition(cid, kind, math.fsum(lhs) - math.fsum(rhs), scale)


def _interface(name: str, mu: float, A: Region, B: Region, c_v: float) -> list[Condition]:
    # mu (q_A - q_B) = F_A - F_B for each conserved quantity
    Ka, Kb = 0.5 * A.rho * A.C, 0.5 * B.rho * B.C
    return [
        _cond(f"rh.{name}.mass", EQ, [mu * A.rho, -mu * B.rho], [A.rho * A.beta, -B.rho * B.beta]),
        _cond(
            f"rh.{name}.mom_x",
            EQ,
            [mu * A.rho * A.alpha, -mu * B.rho * B.alpha],
            [A.rho * A.delta, -B.rho * B.delta],
        ),
        _cond(
            f"rh.{name}.mom_y",
            EQ,
            [mu * A.rho * A.beta, -mu * B.rho * B.beta],
            [Ka, -A.rho * A.gamma, -Kb, B.rho * B.gamma, A.p, -B.p],
        ),
        _cond(
            f"rh.{name}.energy",
            EQ,
            [mu * Ka, mu * c_v * A.p, -mu * Kb, -mu * c_v * B.p],
            [Ka * A.beta, (c_v + 1.0) * A.p * A.beta, -Kb * B.beta, -(c_v + 1.0) * B.p * B.beta],
        ),
    ]


def _entropy_magnitude(R: Region, c_v: float) -> float:
    # s is fixed only up to a constant, so |rho s| alone can be pure rounding
    # noise; this bounds the size of the logs that make up s instead
    return R.rho * (c_v * abs(math.log(R.p)) + (c_v + 1.0) * abs(math.log(R.rho)) + 1.0)


def _admissibility(name: str, mu: float, A: Region, B: Region, gas: GasModel) -> Condition:
    # mu (rho_B s_B - rho_A s_A) <= rho_B s_B beta_B - rho_A s_A beta_A
    eta_A = A.rho * entropy(gas, PrimState(A.rho, 0.0, 0.0, A.p))
    eta_B = B.rho * entropy(gas, PrimState(B.rho, 0.0, 0.0, B.p))
    value = math.fsum([eta_B * B.beta, -eta_A * A.beta, -mu * eta_B, mu * eta_A])
    mA, mB = _entropy_magnitude(A, gas.c_v), _entropy_magnitude(B, gas.c_v)
    scale = max(mA * abs(A.beta), mB * abs(B.beta), mA * abs(mu), mB * abs(mu))
    return Condition(f"adm.{name}", WEAK, value, scale)


def _subsolution_conditions(i: int, R: Region) -> list[Condition]:
    a2, b2 = R.alpha * R.alpha, R.beta * R.beta
    trace = Condition(f"sub.{i}.trace", STRICT, R.C - a2 - b2, max(R.C, a2, b2))
    d11 = 0.5 * R.C - a2 + R.gamma
    d22 = 0.5 * R.C - b2 - R.gamma
    off = R.delta - R.alpha * R.beta
    det = Condition(f"sub.{i}.det", STRICT, d11 * d22 - off * off, max(abs(d11 * d22), off * off))
    return [trace, det]


def _check_positive(q: FanQuintuple) -> None:
    for name, R in (("region1", q.region1), ("region2", q.region2)):
        vals = (R.rho, R.alpha, R.beta, R.gamma, R.delta, R.C, R.p)
        if not all(math.isfinite(x) for x in vals):
            raise DomainError(f"{name} has non-finite entries")
        if not (R.rho > 0.0 and R.p > 0.0 and R.C > 0.0):
            raise DomainError(f"{name} needs rho, p, C > 0")
    if not all(math.isfinite(x) for x in (q.mu0, q.mu1, q.mu2)):
        raise DomainError("interface speeds must be finite")


def verify_subsolution(q: FanQuintuple, gas: GasModel, tol_eq: float = DEFAULT_TOL_EQ) -> ResidualReport:
    """Evaluate every condition characterising an admissible fan subsolution.

    Returns 12 jump residuals (mass, both momenta, energy on each of the three
    interfaces), 2 order margins, 4 subsolution margins and 3 entropy margins.
    """
    _check_positive(q)
    c_v = gas.c_v
    L, R1, R2, R = Region.from_state(q.left), q.region1, q.region2, Region.from_state(q.right)
    conds = [
        Condition("order.mu0<mu1", STRICT, q.mu1 - q.mu0, max(abs(q.mu0), abs(q.mu1))),
        Condition("order.mu1<mu2", STRICT, q.mu2 - q.mu1, max(abs(q.mu1), abs(q.mu2))),
    ]
    conds += _interface("left", q.mu0, L, R1, c_v)
    conds += _interface("middle", q.mu1, R1, R2, c_v)
    conds += _interface("right", q.mu2, R2, R, c_v)
    conds += _subsolution_conditions(1, R1)
    conds += _subsolution_conditions(2, R2)
    conds += [
        _admissibility("left", q.mu0, L, R1, gas),
        _admissibility("middle", q.mu1, R1, R2, gas),
        _admissibility("right", q.mu2, R2, R, gas),
    ]
    return ResidualReport(tuple(conds), tol_eq, "subsolution")


def verify_solution(
    states: Sequence[PrimState],
    speeds: Sequence[float],
    gas: GasModel,
    tol_eq: float = DEFAULT_TOL_EQ,
) -> ResidualReport:
    """Check the jump conditions and entropy inequality of a piecewise-constant
    solution ``states[0] | speeds[0] | states[1] | ... | states[-1]``."""
    if len(states) != len(speeds) + 1:
        raise DomainError("need exactly one more state than interface speeds")
    c_v = gas.c_v
    regions = [Region.from_state(s) for s in states]
    conds = []
    for k, mu in enumerate(speeds):
        A, B = regions[k], regions[k + 1]
        conds += _interface(f"jump{k}", mu, A, B, c_v)
        conds.append(_admissibility(f"jump{k}", mu, A, B, gas))
    for k in range(len(speeds) - 1):
        a, b = speeds[k], speeds[k + 1]
        conds.append(Condition(f"order.jump{k}<=jump{k + 1}", WEAK, b - a, max(abs(a), abs(b))))
    return ResidualReport(tuple(conds), tol_eq, "solution")


def verify_rarefaction(
    left: PrimState,
    right: PrimState,
    family: int,
    gas: GasModel,
    tol_eq: float = DEFAULT_TOL_EQ,
) -> ResidualReport:
    """Check that ``left`` and ``right`` are joined by a centred ``family``
    rarefaction: equal entropy, equal Riemann invariant, continuous ``u`` and
    characteristic speeds that open up from left to right."""
    if family not in (1, 3):
        raise DomainError("rarefactions belong to family 1 or 3")
    cL, cR = sound_speed(gas, left), sound_speed(gas, right)
    sL, sR = entropy(gas, left), entropy(gas, right)
    sign = -1.0 if family == 3 else 1.0
    wL = left.v + sign * 2.0 * gas.c_v * cL
    wR = right.v + sign * 2.0 * gas.c_v * cR
    lamL = left.v - sign * cL
    lamR = right.v - sign * cR
    conds = [
        Condition("raref.entropy", EQ, sR - sL, max(abs(sL), abs(sR), 1.0)),
        Condition("raref.invariant", EQ, wR - wL, max(abs(left.v), abs(right.v), cL, cR)),
        Condition("raref.u", EQ, right.u - left.u, max(abs(left.u), abs(right.u), cL, cR)),
        Condition("raref.spreading", STRICT, lamR - lamL, max(abs(lamL), abs(lamR))),
    ]
    return ResidualReport(tuple(conds), tol_eq, "rarefaction")


def lift(sub) -> FanQuintuple:
    """Full quintuple of a subsolution given in the slack parameterisation.

    ``sub`` needs ``mu0, mu1, rho1, rho2, p1, p2, alpha, beta, eps1, eps2,
    epst1, epst2, left, right``. The ansatz fixes ``beta_2 = 0``,
    ``delta_1 = alpha beta_1``, ``delta_2 = 0`` and ``mu_2 = 0``.
    """
    r1 = Region.from_slacks(sub.rho1, sub.alpha, sub.beta, sub.alpha * sub.beta, sub.eps1, sub.epst1, sub.p1)
    r2 = Region.from_slacks(sub.rho2, sub.alpha, 0.0, 0.0, sub.eps2, sub.epst2, sub.p2)
    return FanQuintuple(sub.mu0, sub.mu1, 0.0, r1, r2, sub.left, sub.right)
