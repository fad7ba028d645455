"""The particular fan subsolution for normalised one-shock data.

Normalised data have ``p_- < p_+``, ``u_+ = v_+ = 0`` and ``v_- > 0``. The
construction puts the contact-like interface on the right (``mu_2 = 0``),
lets both interior regions carry the tangential velocity ``u_-`` and keeps
the interior states on the left isentrope, so that the entropy inequalities
hold with equality. Everything else follows in closed form from the two
interior densities ``rho_- < rho_1 < rho_K < rho_2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import mpmath

from .gas import DomainError, GasModel, PrimState
from .riemann1d import RiemannData
from .verifier import DEFAULT_TOL_EQ, Region, ResidualReport, lift, verify_subsolution

_DPS = 50

__all__ = [
    "NotFoundError",
    "SubsolutionParams",
    "FanSubsolution",
    "SearchConfig",
    "SmallnessWindow",
    "rho_K",
    "smallness_upper",
    "construct",
    "simplified_residuals",
    "find",
    "f_lemma",
    "e_tilde",
    "e_tilde_value",
    "e_tilde_unfactored",
    "e_tilde_pair",
    "estimate_threshold",
    "check_normalized",
    "search_succeeds",
]


class NotFoundError(RuntimeError):
    """The search ladder was exhausted without a verified subsolution.

    This says nothing about mathematical existence; ``best`` holds the
    diagnostics of the closest candidate.
    """

    def __init__(self, message: str, best: Optional[dict] = None):
        super().__init__(message)
        self.best = best or {}


@dataclass(frozen=True)
class SubsolutionParams:
    rho1: float
    rho2: float


@dataclass(frozen=True)
class FanSubsolution:
    gas: GasModel
    left: PrimState
    right: PrimState
    rho1: float
    rho2: float
    p1: float
    p2: float
    alpha: float
    beta: float
    mu0: float
    mu1: float
    eps1: float
    eps2: float
    epst1: float
    epst2: float
    mu2: float = 0.0
    h: Optional[float] = None
    report: Optional[ResidualReport] = field(default=None, compare=False)

    @property
    def params(self) -> SubsolutionParams:
        return SubsolutionParams(self.rho1, self.rho2)

    @property
    def regions(self) -> tuple[Region, Region]:
        q = lift(self)
        return q.region1, q.region2

    @property
    def slacks(self) -> dict[str, float]:
        return {"eps1": self.eps1, "eps2": self.eps2, "epst1": self.epst1, "epst2": self.epst2}

    @property
    def feasible(self) -> bool:
        """Closed-form feasibility: all four slacks positive and ``mu_1 < 0``."""
        return min(self.slacks.values()) > 0.0 and self.mu0 < self.mu1 < 0.0


@dataclass(frozen=True)
class SearchConfig:
    """Density ladder ``rho_1 = rho_K - h (rho_K - rho_-)``,
    ``rho_2 = rho_K (1 + h)`` for ``h = h0, h0/2, ...`` down to ``h_min``."""

    h0: float = 0.5
    h_min: float = 2.0**-40
    tol_eq: float = DEFAULT_TOL_EQ

    def __post_init__(self):
        if not 0.0 < self.h_min <= self.h0 < 1.0:
            raise DomainError("need 0 < h_min <= h0 < 1")
        if not self.tol_eq > 0.0:
            raise DomainError("tol_eq must be positive")


@dataclass(frozen=True)
class SmallnessWindow:
    """Window for ``rho_- v_-**2``. ``upper`` is exact; ``v_est`` is the lower
    edge found empirically by the implemented search, not a proven bound."""

    upper: float
    v_est: float
    rho_minus: float
    p_minus: float
    p_plus: float
    evaluations: int = 0
    empirical: bool = True

    def contains(self, rho_v2: float) -> bool:
        return self.v_est < rho_v2 < self.upper


Number = Union[float, int]


def _c_v(gas: Union[GasModel, Number]) -> float:
    # bare floats bypass the c_v > 1/2 check on purpose
    return gas.c_v if isinstance(gas, GasModel) else float(gas)


def check_normalized(data: RiemannData) -> None:
    L, R = data.left, data.right
    if not L.p < R.p:
        raise DomainError("normalised data need p_- < p_+")
    if R.u != 0.0 or R.v != 0.0:
        raise DomainError("normalised data need u_+ = v_+ = 0")


def rho_K(data: RiemannData) -> float:
    """Pivot density ``rho_- (p_+ - p_-) / (p_+ - p_- - rho_- v_-**2)``."""
    L, R = data.left, data.right
    dp = R.p - L.p
    if not dp > 0.0:
        raise DomainError("rho_K needs p_- < p_+")
    denom = dp - L.rho * L.v * L.v
    if not denom > 0.0:
        raise DomainError("rho_K needs rho_- v_-**2 < p_+ - p_-")
    return L.rho * dp / denom


def smallness_upper(gas: Union[GasModel, Number], p_minus: float, p_plus: float) -> float:
    """Upper edge ``(p_+ - p_-)**2 2 c_v / ((2 c_v + 1) p_+ + p_-)`` of the
    window for ``rho_- v_-**2``; it is the pure 1-shock curve."""
    if not 0.0 < p_minus < p_plus:
        raise DomainError("need 0 < p_- < p_+")
    c_v = _c_v(gas)
    return (p_plus - p_minus) ** 2 * 2.0 * c_v / ((2.0 * c_v + 1.0) * p_plus + p_minus)


def _beta(rm, vm, dp, r1, r2):
    rad = (r2 - r1) * (r1 - rm) * ((r2 - rm) * dp - rm * r2 * vm * vm)
    if rad < 0.0:
        raise DomainError(f"negative radicand {rad!r} in the beta root")
    d = r1 * (r2 - rm)
    return rm * (r2 - r1) / d * vm - math.sqrt(rad) / d


def construct(data: RiemannData, params: SubsolutionParams) -> FanSubsolution:
    """Closed-form fan subsolution for interior densities ``params``.

    The equations hold by construction; the strict inequalities are only
    reported (see :attr:`FanSubsolution.feasible` and the verifier).
    """
    check_normalized(data)
    gas, L, R = data.gas, data.left, data.right
    c_v = gas.c_v
    rm, vm, pm, pp = L.rho, L.v, L.p, R.p
    r1, r2 = float(params.rho1), float(params.rho2)
    rk = rho_K(data)
    if not rm < r1 < rk < r2:
        raise DomainError(f"need rho_- < rho_1 < rho_K < rho_2, got {rm!r}, {r1!r}, {rk!r}, {r2!r}")

    expo = (c_v + 1.0) / c_v
    p1 = pm * (r1 / rm) ** expo
    p2 = pm * (r2 / rm) ** expo
    dp = pp - pm
    b = _beta(rm, vm, dp, r1, r2)
    mu0 = (r1 * b - rm * vm) / (r1 - rm)
    mu1 = -r1 * b / (r2 - r1)
    w = vm - b
    eps1 = (pm - p1 + r1 * rm / (r1 - rm) * w * w) / r1
    eps2 = (pp - p2) / r2
    cross = 2.0 * (r1 - rm) * (p1 * b - pm * vm) / (rm * r1 * w)
    epst1 = (
        vm * vm
        - b * b
        - 2.0 * c_v * (p1 / r1 - pm / rm)
        - cross
        + (p1 - pm) / r1
        - rm * w * w / (r1 - rm)
    )
    epst2 = (
        vm * vm
        - 2.0 * c_v * (p2 / r2 - pm / rm)
        - cross
        + (p2 - pp) / r2
        + 2.0 * (r2 - r1) / (r1 * r2) * p1
    )
    return FanSubsolution(
        gas=gas,
        left=L,
        right=R,
        rho1=r1,
        rho2=r2,
        p1=p1,
        p2=p2,
        alpha=L.u,
        beta=b,
        mu0=mu0,
        mu1=mu1,
        eps1=eps1,
        eps2=eps2,
        epst1=epst1,
        epst2=epst2,
    )


def simplified_residuals(sub: FanSubsolution) -> dict[str, float]:
    """Relative residuals of the seven equations of the reduced system."""
    c_v = sub.gas.c_v
    rm, vm, pm, pp = sub.left.rho, sub.left.v, sub.left.p, sub.right.p
    r1, r2, p1, p2, b = sub.rho1, sub.rho2, sub.p1, sub.p2, sub.beta
    mu0, mu1 = sub.mu0, sub.mu1
    E1 = b * b + sub.eps1 + sub.epst1
    E2 = sub.eps2 + sub.epst2

    def rel(lhs, rhs):
        scale = max(abs(t) for t in lhs + rhs)
        return (math.fsum(lhs) - math.fsum(rhs)) / scale if scale else 0.0

    return {
        "left.mass": rel([mu0 * rm, -mu0 * r1], [rm * vm, -r1 * b]),
        "left.mom_y": rel([mu0 * rm * vm, -mu0 * r1 * b], [rm * vm * vm, -r1 * (b * b + sub.eps1), pm, -p1]),
        "left.energy": rel(
            [mu0 * 0.5 * rm * vm * vm, mu0 * c_v * pm, -mu0 * 0.5 * r1 * E1, -mu0 * c_v * p1],
            [
                0.5 * rm * vm**3,
                (c_v + 1.0) * pm * vm,
                -0.5 * r1 * E1 * b,
                -(c_v + 1.0) * p1 * b,
            ],
        ),
        "middle.mass": rel([mu1 * r1, -mu1 * r2], [r1 * b]),
        "middle.mom_y": rel([mu1 * r1 * b], [r1 * (b * b + sub.eps1), -r2 * sub.eps2, p1, -p2]),
        "middle.energy": rel(
            [mu1 * 0.5 * r1 * E1, mu1 * c_v * p1, -mu1 * 0.5 * r2 * E2, -mu1 * c_v * p2],
            [0.5 * r1 * E1 * b, (c_v + 1.0) * p1 * b],
        ),
        "right.mom_y": rel([r2 * sub.eps2, p2], [pp]),
    }


def _ladder(h0: float, h_min: float):
    h = h0
    while h >= h_min:
        yield h
        h *= 0.5


def find(data: RiemannData, config: SearchConfig = SearchConfig()) -> FanSubsolution:
    """Search the density ladder for a subsolution passing the full check.

    Returns the first candidate (largest ``h``) whose lifted quintuple passes
    :func:`~eulerfan.verifier.verify_subsolution`; the returned object carries
    ``h`` and the verification ``report``.

    Raises
    ------
    NotFoundError
        When the ladder is exhausted; ``err.best`` describes the candidate
        with the largest smallest slack.
    """
    check_normalized(data)
    L = data.left
    if not L.v > 0.0:
        raise NotFoundError("window is empty for v_- <= 0", {"reason": "v_- <= 0"})
    try:
        rk = rho_K(data)
    except DomainError as exc:
        raise NotFoundError(f"rho_K undefined: {exc}", {"reason": str(exc)}) from None

    best: dict = {}
    for h in _ladder(config.h0, config.h_min):
        r1 = rk - h * (rk - L.rho)
        r2 = rk * (1.0 + h)
        try:
            sub = construct(data, SubsolutionParams(r1, r2))
        except DomainError:
            continue
        worst = min(sub.slacks.values())
        if not best or worst > best["min_slack"]:
            best = {"h": h, "min_slack": worst, **sub.slacks, "mu0": sub.mu0, "mu1": sub.mu1}
        if not sub.feasible:
            continue
        report = verify_subsolution(lift(sub), data.gas, config.tol_eq)
        if report.passed:
            return replace(sub, h=h, report=report)
        best["violations"] = report.violations
    raise NotFoundError(f"no feasible subsolution for h in [{config.h_min!r}, {config.h0!r}]", best)


# ---------------------------------------------------------------------------
# positivity of the second slack near the window edge


def f_lemma(gas: Union[GasModel, Number], t: float) -> float:
    """``t - (((2c_v+1) t + 1) / ((2c_v+1) + t))**((c_v+1)/c_v)``; positive for
    ``t > 1`` with a triple zero at ``t = 1``."""
    if not t > 0.0:
        raise DomainError(f"f needs t > 0, got {t!r}")
    c_v = _c_v(gas)
    k = 2.0 * c_v + 1.0
    # written in s = t - 1 so the triple zero does not cancel away:
    # (k t + 1) / (k + t) = 1 + (k - 1) s / (k + t)
    s = t - 1.0
    u = (k - 1.0) * s / (k + t)
    return s - math.expm1((c_v + 1.0) / c_v * math.log1p(u))


def e_tilde_value(c_v: float, rho_minus: float, p_minus: float, p_plus: float) -> float:
    """Limit of both second slacks at ``rho_1 = rho_2 = rho_K`` and
    ``rho_- v_-**2 = upper``, in factored form.

    ``c_v`` is a bare float and is *not* validated, so the sign flip below
    ``c_v = 1/2`` can be observed.
    """
    if not 0.0 < p_minus < p_plus:
        raise DomainError("need 0 < p_- < p_+")
    k = 2.0 * c_v + 1.0
    pref = p_minus * (2.0 * c_v - 1.0) * (k * p_minus + p_plus) / (rho_minus * (k * p_plus + p_minus))
    return pref * f_lemma(c_v, p_plus / p_minus)


def e_tilde(data: RiemannData) -> float:
    return e_tilde_value(data.gas.c_v, data.left.rho, data.left.p, data.right.p)


def _upper_mp(c_v, p_minus, p_plus):
    return (p_plus - p_minus) ** 2 * 2 * c_v / ((2 * c_v + 1) * p_plus + p_minus)


def e_tilde_unfactored(
    c_v: float, rho_minus: float, p_minus: float, p_plus: float, rho_v2: Optional[float] = None
) -> float:
    """The same limit written as the bracket in ``rho_K`` before factoring.

    ``rho_v2`` defaults to the window's upper edge. The bracket loses most of
    its digits to cancellation near ``p_+ = p_-`` or ``c_v = 1/2``, so it is
    evaluated with 50 significant digits.
    """
    if not 0.0 < p_minus < p_plus:
        raise DomainError("need 0 < p_- < p_+")
    with mpmath.workdps(_DPS):
        c, rm, pm, pp = (mpmath.mpf(x) for x in (c_v, rho_minus, p_minus, p_plus))
        rv2 = _upper_mp(c, pm, pp) if rho_v2 is None else mpmath.mpf(rho_v2)
        dp = pp - pm
        val = (pm / rm) * (
            (1 - 2 * c) * (dp / (dp - rv2)) ** (1 / c) + 2 * c + (rv2 * (pm + 2 * pp) - pp * dp) / (pm * dp)
        )
        return float(val)


def e_tilde_pair(
    c_v: float, rho_minus: float, p_minus: float, p_plus: float, rho_v2: Optional[float] = None
) -> tuple[float, float]:
    """Both second slacks evaluated at ``rho_1 = rho_2 = rho_K``.

    They coincide identically; ``rho_v2`` defaults to the upper edge. Uses 50
    significant digits for the same reason as :func:`e_tilde_unfactored`.
    """
    if not 0.0 < p_minus < p_plus:
        raise DomainError("need 0 < p_- < p_+")
    with mpmath.workdps(_DPS):
        c, rm, pm, pp = (mpmath.mpf(x) for x in (c_v, rho_minus, p_minus, p_plus))
        rv2 = _upper_mp(c, pm, pp) if rho_v2 is None else mpmath.mpf(rho_v2)
        v2 = rv2 / rm
        rk = rm * (pp - pm) / (pp - pm - rv2)
        pk = pm * (rk / rm) ** ((c + 1) / c)
        common = v2 - 2 * c * (pk / rk - pm / rm) + 2 * (rk - rm) * pm / (rm * rk)
        e1 = common + (pk - pm) / rk - rm * v2 / (rk - rm)
        e2 = common + (pk - pp) / rk
        return float(e1), float(e2)


# ---------------------------------------------------------------------------
# empirical lower edge of the window


def _probe_data(gas: GasModel, rho_minus: float, p_minus: float, p_plus: float, rho_v2: float) -> RiemannData:
    return RiemannData(
        gas,
        PrimState(rho_minus, 0.0, math.sqrt(rho_v2 / rho_minus), p_minus),
        PrimState(rho_minus, 0.0, 0.0, p_plus),
    )


def search_succeeds(
    gas: GasModel, rho_minus: float, p_minus: float, p_plus: float, rho_v2: float, config: SearchConfig = SearchConfig()
) -> bool:
    if not rho_v2 > 0.0:
        return False
    try:
        find(_probe_data(gas, rho_minus, p_minus, p_plus, rho_v2), config)
    except NotFoundError:
        return False
    return True


def estimate_threshold(
    gas: GasModel,
    rho_minus: float,
    p_minus: float,
    p_plus: float,
    config: SearchConfig = SearchConfig(),
    rel_tol: float = 1e-6,
) -> SmallnessWindow:
    """Bisect ``rho_- v_-**2`` in ``(0, upper)`` for the smallest value at
    which :func:`find` succeeds.

    The result is a property of this search, not the optimal threshold: below
    ``v_est`` the ladder fails, which does not prove that no subsolution
    exists.
    """
    upper = smallness_upper(gas, p_minus, p_plus)
    if not rho_minus > 0.0:
        raise DomainError("rho_- must be positive")
    n = 0
    hi = None
    for k in range(1, 53):
        x = upper * (1.0 - 2.0**-k)
        n += 1
        if search_succeeds(gas, rho_minus, p_minus, p_plus, x, config):
            hi = x
            break
    if hi is None:
        raise NotFoundError("search fails everywhere below the upper edge", {"upper": upper})
    lo = 0.0
    while hi - lo > rel_tol * upper:
        mid = 0.5 * (lo + hi)
        n += 1
        if search_succeeds(gas, rho_minus, p_minus, p_plus, mid, config):
            hi = mid
        else:
            lo = mid
    return SmallnessWindow(upper, hi, rho_minus, p_minus, p_plus, n)
