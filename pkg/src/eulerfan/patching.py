"""Symmetry normalisation, proof-case dispatch and patched composites.

A composite consists of a fan subsolution left of ``xi = 0`` and, in the
patched cases, an exact 3-rarefaction or 3-shock to its right, connected
through an auxiliary state at rest. The fan is a certificate only in the
*working frame* where that auxiliary state is at rest: a Galilean shift maps
genuine solutions to genuine solutions, but not strict subsolutions (the
energy flux picks up ``(U + C/2 I - v (x) v) a``). Frame changes are
therefore applied to states, waves and interface positions, never to the
relaxed quintuple itself.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .gas import DomainError, PrimState, eigenvalues
from .riemann1d import (
    DEFAULT_TOL_CLS,
    RiemannData,
    WaveKind,
    WavePattern,
    classify,
    hugoniot_density,
    isentrope_density,
    rarefaction_branch,
    shock_branch,
    solve_middle,
)
from .subsolution import (
    FanSubsolution,
    NotFoundError,
    SearchConfig,
    SmallnessWindow,
    estimate_threshold,
    find,
    smallness_upper,
)
from .verifier import DEFAULT_TOL_EQ, ResidualReport, verify_rarefaction, verify_solution

__all__ = [
    "Case",
    "PiecewiseSolution",
    "TrailingWave",
    "Normalization",
    "Dispatch",
    "PatchConfig",
    "PatchedSolution",
    "galilean_shift",
    "reflect",
    "normalize",
    "case_dispatch",
    "delta_state_case3",
    "delta_state_case4",
    "assemble",
]


class Case(str, enum.Enum):
    CASE1_UNIQUE = "case1_unique"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"
    TWO_SHOCKS = "two_shocks"
    CONTACT_FAMILY_OPEN = "contact_family_open"


@dataclass(frozen=True)
class PiecewiseSolution:
    """Constant ``states`` separated by discontinuities moving at ``speeds``."""

    states: tuple[PrimState, ...]
    speeds: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "speeds", tuple(float(s) for s in self.speeds))
        if len(self.states) != len(self.speeds) + 1:
            raise DomainError("need one more state than speeds")


@dataclass(frozen=True)
class TrailingWave:
    """3-wave right of the fan. For a shock ``head == tail == sigma``."""

    kind: WaveKind
    left: PrimState
    right: PrimState
    tail: float
    head: float


Transformable = Union[PrimState, RiemannData, PiecewiseSolution, TrailingWave]


def _shift_state(s: PrimState, a) -> PrimState:
    return PrimState(s.rho, s.u + a[0], s.v + a[1], s.p)


def _flip_state(s: PrimState) -> PrimState:
    return PrimState(s.rho, -s.u, -s.v, s.p)


def galilean_shift(obj: Transformable, a: Sequence[float]) -> Transformable:
    """Add the constant velocity ``a = (a_u, a_v)``; interfaces move by ``a_v``."""
    a = (float(a[0]), float(a[1]))
    if isinstance(obj, PrimState):
        return _shift_state(obj, a)
    if isinstance(obj, RiemannData):
        return RiemannData(obj.gas, _shift_state(obj.left, a), _shift_state(obj.right, a))
    if isinstance(obj, PiecewiseSolution):
        return PiecewiseSolution(tuple(_shift_state(s, a) for s in obj.states), tuple(x + a[1] for x in obj.speeds))
    if isinstance(obj, TrailingWave):
        return TrailingWave(obj.kind, _shift_state(obj.left, a), _shift_state(obj.right, a), obj.tail + a[1], obj.head + a[1])
    raise TypeError(f"cannot shift {type(obj).__name__}")


def reflect(obj: Transformable) -> Transformable:
    """``(rho, v, p)(t, x) -> (rho, -v, p)(t, -x)``: sides swap, velocities and
    speeds change sign. A trailing 3-wave becomes a leading 1-wave."""
    if isinstance(obj, PrimState):
        return _flip_state(obj)
    if isinstance(obj, RiemannData):
        return RiemannData(obj.gas, _flip_state(obj.right), _flip_state(obj.left))
    if isinstance(obj, PiecewiseSolution):
        return PiecewiseSolution(
            tuple(_flip_state(s) for s in reversed(obj.states)), tuple(-x for x in reversed(obj.speeds))
        )
    if isinstance(obj, TrailingWave):
        return TrailingWave(obj.kind, _flip_state(obj.right), _flip_state(obj.left), -obj.head, -obj.tail)
    raise TypeError(f"cannot reflect {type(obj).__name__}")


@dataclass(frozen=True)
class Normalization:
    original: RiemannData
    normalized: RiemannData
    reflected: bool
    shift: tuple[float, float]  # applied after the optional reflection, as -shift

    @property
    def degenerate(self) -> bool:
        """``p_- == p_+``: fine for classification, not for the fan construction."""
        return self.normalized.left.p == self.normalized.right.p

    def denormalize(self, obj: Transformable) -> Transformable:
        out = galilean_shift(obj, self.shift)
        return reflect(out) if self.reflected else out

    def to_normalized(self, obj: Transformable) -> Transformable:
        out = reflect(obj) if self.reflected else obj
        return galilean_shift(out, (-self.shift[0], -self.shift[1]))


def normalize(data: RiemannData) -> Normalization:
    """Reflect if ``p_- > p_+`` and then shift so that the right state is at
    rest."""
    reflected = data.left.p > data.right.p
    work = reflect(data) if reflected else data
    shift = (work.right.u, work.right.v)
    norm = galilean_shift(work, (-shift[0], -shift[1]))
    # exact zeros; x - x is 0.0 already, this guards against -0.0
    norm = RiemannData(norm.gas, norm.left, PrimState(norm.right.rho, 0.0, 0.0, norm.right.p))
    return Normalization(data, norm, reflected, shift)


# ---------------------------------------------------------------------------
# dispatch


@dataclass(frozen=True)
class Dispatch:
    case: Case
    pattern: WavePattern
    window: Optional[SmallnessWindow] = None
    rho_v2: Optional[float] = None

    @property
    def needs_patching(self) -> bool:
        return self.case in (Case.CASE3, Case.CASE4)


@dataclass(frozen=True)
class PatchConfig:
    search: SearchConfig = SearchConfig()
    tol_cls: float = DEFAULT_TOL_CLS
    tol_eq: float = DEFAULT_TOL_EQ
    delta0: Optional[float] = None  # default 0.1 (p_+ - p_M) resp. 0.1 p_+
    max_halvings: int = 40


def case_dispatch(data: RiemannData, config: PatchConfig = PatchConfig()) -> Dispatch:
    """Map normalised data to the case of the non-uniqueness argument.

    The case-2/case-3 boundary uses the empirical window of
    :func:`~eulerfan.subsolution.estimate_threshold`.
    """
    pattern = classify(data, config.tol_cls)
    lw, rw = pattern.left_wave, pattern.right_wave
    if pattern.n_shocks == 0:
        if pattern.contact:
            return Dispatch(Case.CONTACT_FAMILY_OPEN, pattern)
        return Dispatch(Case.CASE1_UNIQUE, pattern)
    if pattern.n_shocks == 2:
        return Dispatch(Case.TWO_SHOCKS, pattern)
    if pattern.n_rarefactions == 0:
        return Dispatch(Case.CASE4, pattern)
    if not (lw is WaveKind.SHOCK and rw is WaveKind.RAREFACTION):
        raise DomainError("one-shock data must be normalised (1-shock, 3-rarefaction)")
    L, R = data.left, data.right
    window = estimate_threshold(data.gas, L.rho, L.p, R.p, config.search)
    dv = L.v - R.v
    rho_v2 = L.rho * dv * dv
    if dv > 0.0 and window.contains(rho_v2):
        return Dispatch(Case.CASE2, pattern, window, rho_v2)
    return Dispatch(Case.CASE3, pattern, window, rho_v2)


# ---------------------------------------------------------------------------
# auxiliary states


def delta_state_case3(data: RiemannData, delta: float, p_M: Optional[float] = None) -> PrimState:
    """State at pressure ``p_M + delta`` on the 3-rarefaction curve of the
    right state."""
    gas, R = data.gas, data.right
    if p_M is None:
        p_M = solve_middle(data).p_M
    p_d = p_M + delta
    if not (delta > 0.0 and p_d < R.p):
        raise DomainError(f"need 0 < delta < p_+ - p_M = {R.p - p_M!r}, got {delta!r}")
    v_d = R.v - rarefaction_branch(gas, R.rho, R.p, p_d)
    return PrimState(isentrope_density(gas, R.rho, R.p, p_d), R.u, v_d, p_d)


def delta_state_case4(data: RiemannData, delta: float) -> PrimState:
    """State at pressure ``p_+ + delta`` joined to the right state by an
    admissible 3-shock."""
    gas, R = data.gas, data.right
    if not (delta > 0.0 and math.isfinite(delta)):
        raise DomainError(f"need delta > 0, got {delta!r}")
    p_d = R.p + delta
    v_d = R.v + shock_branch(gas, R.rho, R.p, p_d)
    return PrimState(hugoniot_density(gas, R.rho, R.p, p_d), R.u, v_d, p_d)


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class PatchedSolution:
    """Fan subsolution plus optional trailing 3-wave.

    ``fan`` and ``trailing_wave`` live in the working frame, i.e. the
    normalised frame shifted by ``frame_shift`` so the auxiliary state is at
    rest (for case 2 the shift is zero). ``normalization`` maps the
    normalised frame back to the original data.
    """

    case_id: Case
    delta: float
    aux_state: Optional[PrimState]
    fan: FanSubsolution
    trailing_wave: Optional[TrailingWave]
    compatibility: Optional[float]
    normalization: Normalization
    frame_shift: tuple[float, float]
    fan_report: ResidualReport = field(compare=False)
    wave_report: Optional[ResidualReport] = field(default=None, compare=False)
    attempts: int = 1

    @property
    def working_data(self) -> RiemannData:
        return RiemannData(self.fan.gas, self.fan.left, self.right_state_working)

    @property
    def right_state_working(self) -> PrimState:
        return self.trailing_wave.right if self.trailing_wave is not None else self.fan.right

    @property
    def verified(self) -> bool:
        ok = self.fan_report.passed
        if self.trailing_wave is not None:
            ok = ok and self.wave_report is not None and self.wave_report.passed
            ok = ok and self.compatibility is not None and self.compatibility > 0.0
        return ok

    def _to_normalized(self, obj):
        return galilean_shift(obj, self.frame_shift)

    def interfaces(self, frame: str = "original") -> list[tuple[str, float]]:
        """Labelled interface speeds, sorted left to right, in ``"working"``,
        ``"normalized"`` or ``"original"`` frame."""
        items = [("fan.mu0", self.fan.mu0), ("fan.mu1", self.fan.mu1), ("fan.mu2", self.fan.mu2)]
        if self.trailing_wave is not None:
            w = self.trailing_wave
            items += [("wave.tail", w.tail), ("wave.head", w.head)]
        if frame == "working":
            return items
        items = [(k, x + self.frame_shift[1]) for k, x in items]
        if frame == "normalized":
            return items
        if frame != "original":
            raise ValueError(f"unknown frame {frame!r}")
        items = [(k, x + self.normalization.shift[1]) for k, x in items]
        if self.normalization.reflected:
            items = [(k, -x) for k, x in reversed(items)]
        return items

    def trailing_wave_in(self, frame: str = "original") -> Optional[TrailingWave]:
        if self.trailing_wave is None or frame == "working":
            return self.trailing_wave
        w = self._to_normalized(self.trailing_wave)
        return w if frame == "normalized" else self.normalization.denormalize(w)


def _working_data(norm: RiemannData, aux: PrimState) -> RiemannData:
    L = norm.left
    return RiemannData(norm.gas, PrimState(L.rho, L.u - aux.u, L.v - aux.v, L.p), PrimState(aux.rho, 0.0, 0.0, aux.p))


def _patch(norm: RiemannData, case: Case, config: PatchConfig):
    gas, R = norm.gas, norm.right
    if case is Case.CASE3:
        p_M = solve_middle(norm).p_M
        delta0 = config.delta0 if config.delta0 is not None else 0.1 * (R.p - p_M)
        aux_of = lambda d: delta_state_case3(norm, d, p_M)  # noqa: E731
    else:
        delta0 = config.delta0 if config.delta0 is not None else 0.1 * R.p
        aux_of = lambda d: delta_state_case4(norm, d)  # noqa: E731

    delta, best = delta0, {}
    for attempt in range(1, config.max_halvings + 2):
        try:
            aux = aux_of(delta)
        except DomainError:
            delta *= 0.5
            continue
        work = _working_data(norm, aux)
        L = work.left
        rho_v2 = L.rho * L.v * L.v
        if L.v > 0.0 and rho_v2 < smallness_upper(gas, L.p, aux.p):
            try:
                fan = find(work, config.search)
                return delta, aux, work, fan, attempt
            except NotFoundError as exc:
                best = {"delta": delta, **exc.best}
        delta *= 0.5
    raise NotFoundError(f"no feasible delta in the ladder from {delta0!r}", best)


def assemble(data: RiemannData, config: PatchConfig = PatchConfig()) -> PatchedSolution:
    """Build and verify the composite certificate for one-shock data.

    Raises
    ------
    DomainError
        If the data do not fall into cases 2-4.
    NotFoundError
        If no ladder step yields a verified fan.
    """
    nz = normalize(data)
    norm = nz.normalized
    if nz.degenerate:
        raise DomainError("p_- == p_+: no one-shock structure to patch")
    dispatch = case_dispatch(norm, config)
    case = dispatch.case
    gas = norm.gas

    if case is Case.CASE2:
        fan = find(norm, config.search)
        return PatchedSolution(
            case_id=case,
            delta=0.0,
            aux_state=None,
            fan=fan,
            trailing_wave=None,
            compatibility=None,
            normalization=nz,
            frame_shift=(0.0, 0.0),
            fan_report=fan.report,
        )
    if case not in (Case.CASE3, Case.CASE4):
        raise DomainError(f"data fall into {case.value}; nothing to assemble")

    delta, aux, work, fan, attempts = _patch(norm, case, config)
    aux_rest = work.right
    right_w = PrimState(norm.right.rho, norm.right.u - aux.u, norm.right.v - aux.v, norm.right.p)
    if case is Case.CASE3:
        tail = eigenvalues(gas, aux_rest)[2]
        head = eigenvalues(gas, right_w)[2]
        wave = TrailingWave(WaveKind.RAREFACTION, aux_rest, right_w, tail, head)
        wave_report = verify_rarefaction(aux_rest, right_w, 3, gas, config.tol_eq)
    else:
        sigma = -right_w.rho * (right_w.v - aux_rest.v) / (aux_rest.rho - right_w.rho)
        wave = TrailingWave(WaveKind.SHOCK, aux_rest, right_w, sigma, sigma)
        wave_report = verify_solution([aux_rest, right_w], [sigma], gas, config.tol_eq)
    return PatchedSolution(
        case_id=case,
        delta=delta,
        aux_state=aux,
        fan=fan,
        trailing_wave=wave,
        compatibility=wave.tail - fan.mu2,
        normalization=nz,
        frame_shift=(aux.u, aux.v),
        fan_report=fan.report,
        wave_report=wave_report,
        attempts=attempts,
    )
