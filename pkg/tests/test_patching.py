import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_data
from eulerfan.gas import DomainError, GasModel, PrimState, entropy, sound_speed
from eulerfan.riemann1d import RiemannData, VacuumError, WaveKind, classify, shock_branch, solve_middle
from eulerfan.patching import (
    Case,
    PatchConfig,
    PiecewiseSolution,
    TrailingWave,
    assemble,
    case_dispatch,
    delta_state_case3,
    delta_state_case4,
    galilean_shift,
    normalize,
    reflect,
)
from eulerfan.subsolution import smallness_upper
from eulerfan.verifier import lift, verify_solution, verify_subsolution

states = st.builds(
    PrimState,
    st.floats(1e-2, 1e2),
    st.floats(-3, 3),
    st.floats(-3, 3),
    st.floats(1e-2, 1e2),
)
datas = st.builds(RiemannData, st.builds(GasModel, st.floats(0.51, 5.0)), states, states)
shifts = st.tuples(st.floats(-3, 3), st.floats(-3, 3))


def _close(a: PrimState, b: PrimState, tol=1e-15):
    return all(abs(x - y) <= tol * max(1.0, abs(y)) for x, y in zip(a.as_tuple(), b.as_tuple()))


@given(datas)
def test_reflect_twice_is_identity(d):
    assert reflect(reflect(d)) == d


@given(datas, shifts)
def test_shift_round_trip(d, a):
    back = galilean_shift(galilean_shift(d, a), (-a[0], -a[1]))
    assert _close(back.left, d.left) and _close(back.right, d.right)
    assert galilean_shift(d, (0.0, 0.0)) == d


@given(datas)
def test_normalize_round_trip(d):
    nz = normalize(d)
    n = nz.normalized
    assert n.right.u == 0.0 and n.right.v == 0.0
    assert n.left.p <= n.right.p
    assert nz.reflected == (d.left.p > d.right.p)
    back = nz.denormalize(n)
    assert _close(back.left, d.left) and _close(back.right, d.right)


def test_normalize_identity_on_normalized(case15):
    nz = normalize(case15)
    assert not nz.reflected and nz.shift == (0.0, 0.0)
    assert nz.normalized == case15


def test_normalize_degenerate_flag():
    nz = normalize(make_data(1.5, (1.0, 0.0, 0.3, 1.0), (2.0, 0.1, 0.0, 1.0)))
    assert nz.degenerate


def test_piecewise_and_wave_transforms():
    s1, s2, s3 = PrimState(1, 0.1, 0.2, 1), PrimState(2, 0.3, -0.1, 3), PrimState(1.5, 0, 0.4, 2)
    pw = PiecewiseSolution((s1, s2, s3), (-0.5, 0.25))
    assert reflect(reflect(pw)) == pw
    r = reflect(pw)
    assert r.speeds == (-0.25, 0.5)
    assert r.states[0] == PrimState(1.5, 0, -0.4, 2)
    sh = galilean_shift(pw, (1.0, 2.0))
    assert sh.speeds == (1.5, 2.25)
    w = TrailingWave(WaveKind.RAREFACTION, s1, s3, 0.1, 0.7)
    assert reflect(reflect(w)) == w
    assert (reflect(w).tail, reflect(w).head) == (-0.7, -0.1)
    with pytest.raises(DomainError):
        PiecewiseSolution((s1, s2), (0.0, 1.0))
    with pytest.raises(TypeError):
        reflect(3.0)


def _row_swap(pat):
    from eulerfan.riemann1d import pattern_row

    return pattern_row(pat.right_wave, pat.contact, pat.left_wave)


def test_classification_equivariance():
    rng = np.random.default_rng(17)
    n = 0
    while n < 1000:
        c_v = float(rng.choice([0.51, 1.0, 1.5, 2.5, 5.0]))
        rho = 10 ** rng.uniform(-2, 2, size=2)
        p = 10 ** rng.uniform(-1.5, 1.5, size=2)
        v = rng.uniform(-3, 3, size=2)
        u = rng.uniform(-1, 1, size=2)
        d = make_data(c_v, (rho[0], u[0], v[0], p[0]), (rho[1], u[1], v[1], p[1]))
        try:
            pat = classify(d)
        except VacuumError:
            continue
        a = rng.uniform(-3, 3, size=2)
        assert classify(galilean_shift(d, a)).row == pat.row
        assert classify(reflect(d)).row == _row_swap(pat)
        n += 1


def test_reflection_maps_shock_rows(case13):
    g = GasModel(1.5)
    d = make_data(1.5, (1.0, 0.0, math.sqrt(1 / 3), 1.0), (1.5, 0.0, 0.0, 2.0))
    assert classify(d).row == 4
    r = reflect(d)
    assert classify(r).row == 2
    # the reflected data satisfy the 3-shock equality v_+ - v_- = -shock_branch(rho_+, p_+, p_-)
    assert r.right.v - r.left.v == pytest.approx(-shock_branch(g, r.right.rho, r.right.p, r.left.p), rel=1e-15)
    assert classify(reflect(case13)).row == 11


# --- dispatch -------------------------------------------------------------------


def test_dispatch(case13, case15):
    eq = make_data(1.5, (1.0, 0.0, 0.0, 1.0), (1.0, 0.0, 0.0, 1.0))
    assert case_dispatch(eq).case is Case.CASE1_UNIQUE
    assert case_dispatch(case13).case is Case.CASE4
    assert case_dispatch(case15).case is Case.CASE3
    edge = make_data(1.5, (1.0, 0.0, math.sqrt(0.99 / 3), 1.0), (1.0, 0.0, 0.0, 2.0))
    disp = case_dispatch(edge)
    assert disp.case is Case.CASE2 and not disp.needs_patching
    assert disp.window.v_est < disp.rho_v2 < disp.window.upper
    two = make_data(1.5, (1.0, 0.0, 2.0, 1.0), (1.0, 0.0, 0.0, 2.0))
    assert case_dispatch(two).case is Case.TWO_SHOCKS
    contact = make_data(1.5, (1.0, 0.0, 0.0, 1.0), (3.0, 0.0, 0.0, 1.0))
    assert case_dispatch(contact).case is Case.CONTACT_FAMILY_OPEN
    rar = make_data(1.5, (1.0, 0.0, -1.0, 1.0), (1.0, 0.0, 0.0, 2.0))
    assert classify(rar).n_shocks == 0
    assert case_dispatch(rar).case in (Case.CONTACT_FAMILY_OPEN, Case.CASE1_UNIQUE)
    pure_rar = make_data(1.5, (1.0, 0.0, -0.5, 1.0), (1.0, 0.0, 0.5, 1.0))
    assert case_dispatch(pure_rar).case is Case.CASE1_UNIQUE


# --- auxiliary states ----------------------------------------------------------------


def test_delta_state_case4_example():
    d = make_data(1.5, (1.0, 0.0, 0.7, 1.0), (1.0, 0.0, 0.0, 2.0))
    aux = delta_state_case4(d, 0.2)
    assert aux.rho == pytest.approx(1.058824, abs=1e-6)
    assert aux.v == pytest.approx(0.2 * math.sqrt(3 / (2 + 4 * 2.2)), rel=1e-14)
    assert aux.v == pytest.approx(0.105409, abs=1e-6)
    assert aux.p == pytest.approx(2.2)


@given(st.floats(1e-8, 50.0), st.floats(0.51, 5.0))
def test_delta_state_case4_shock(delta, c_v):
    d = make_data(c_v, (1.0, 0.0, 0.7, 1.0), (1.3, 0.0, 0.0, 2.0))
    aux = delta_state_case4(d, delta)
    R = d.right
    assert aux.v > R.v and aux.rho > R.rho
    # speed in the frame where the auxiliary state is at rest
    sigma = -R.rho * (R.v - aux.v) / (aux.rho - R.rho)
    assert sigma > 0
    rest = galilean_shift(aux, (0.0, -aux.v))
    rep = verify_solution([rest, galilean_shift(R, (0.0, -aux.v))], [sigma], d.gas, 1e-10)
    assert rep.passed
    assert rep["adm.jump0"].relative >= -1e-12


def test_delta_state_domain(case15):
    with pytest.raises(DomainError):
        delta_state_case4(case15, 0.0)
    p_M = solve_middle(case15).p_M
    with pytest.raises(DomainError):
        delta_state_case3(case15, 2.0 - p_M)
    with pytest.raises(DomainError):
        delta_state_case3(case15, -1e-3)


def test_delta_state_case3_continuity(case15):
    m = solve_middle(case15)
    target = (m.rho_Mplus, m.v_M, m.p_M)
    errs = []
    for delta in (1e-3, 1e-4, 1e-5):
        aux = delta_state_case3(case15, delta)
        assert entropy(case15.gas, aux) == pytest.approx(entropy(case15.gas, case15.right), abs=1e-12)
        errs.append([abs(a - b) for a, b in zip((aux.rho, aux.v, aux.p), target)])
    errs = np.array(errs)
    # linear in delta: every component shrinks tenfold per decade
    ratios = errs[:-1] / errs[1:]
    assert np.all((ratios > 9.0) & (ratios < 11.0))


def test_delta_state_case3_keeps_window(case15):
    g = case15.gas
    L = case15.left
    for delta in (1e-2, 1e-3, 1e-4):
        aux = delta_state_case3(case15, delta)
        # left state seen from the auxiliary state at rest stays below the shock-curve edge
        assert (L.v - aux.v) < shock_branch(g, L.rho, L.p, aux.p)
        assert L.rho * (L.v - aux.v) ** 2 < smallness_upper(g, L.p, aux.p)


# --- assembly --------------------------------------------------------------------------


def _check_composite(ps, data):
    assert ps.verified
    fan = ps.fan
    q = lift(fan)
    assert verify_subsolution(q, data.gas).passed
    ifs = [x for _, x in ps.interfaces("working")]
    assert all(a < b or (a == b) for a, b in zip(ifs, ifs[1:]))
    if ps.trailing_wave is not None:
        assert ps.wave_report.passed
        assert ps.compatibility > 0
        assert fan.mu2 < ps.trailing_wave.tail
        # the composite describes the ORIGINAL data
        w = ps.trailing_wave_in("original")
        outer = w.left if ps.normalization.reflected else w.right
        target = data.left if ps.normalization.reflected else data.right
        assert _close(outer, target, 1e-13)
    orig = [x for _, x in ps.interfaces("original")]
    assert orig == sorted(orig)


def test_assemble_case2():
    d = make_data(1.5, (1.0, 0.0, math.sqrt(0.99 / 3), 1.0), (1.0, 0.0, 0.0, 2.0))
    ps = assemble(d)
    assert ps.case_id is Case.CASE2 and ps.trailing_wave is None and ps.delta == 0.0
    _check_composite(ps, d)


def test_assemble_case3(case15):
    ps = assemble(case15)
    assert ps.case_id is Case.CASE3 and ps.trailing_wave.kind is WaveKind.RAREFACTION
    aux_rest = ps.trailing_wave.left
    assert aux_rest.v == 0.0 and aux_rest.u == 0.0
    assert ps.compatibility == pytest.approx(sound_speed(case15.gas, aux_rest), rel=1e-14)
    assert ps.delta > 0
    _check_composite(ps, case15)


def test_assemble_case4(case13):
    ps = assemble(case13)
    assert ps.case_id is Case.CASE4 and ps.trailing_wave.kind is WaveKind.SHOCK
    assert ps.trailing_wave.tail == ps.trailing_wave.head > 0
    _check_composite(ps, case13)


def test_assemble_reflected_and_shifted(case15, case13):
    for base in (case15, case13):
        d = galilean_shift(reflect(base), (0.4, -1.2))
        ps = assemble(d)
        assert ps.normalization.reflected
        _check_composite(ps, d)
        ref = assemble(base)
        assert ps.delta == pytest.approx(ref.delta, rel=1e-12)


def test_assemble_rejects_other_cases():
    with pytest.raises(DomainError):
        assemble(make_data(1.5, (1.0, 0.0, 2.0, 1.0), (1.0, 0.0, 0.0, 2.0)))
    with pytest.raises(DomainError):
        assemble(make_data(1.5, (1.0, 0.0, 0.0, 1.0), (1.0, 0.0, 0.0, 1.0)))


def test_explicit_delta0(case15):
    ps = assemble(case15, PatchConfig(delta0=1e-3))
    assert ps.delta <= 1e-3
    _check_composite(ps, case15)
