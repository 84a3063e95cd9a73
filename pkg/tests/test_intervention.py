import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from xpoint import (
    Constraints,
    LinearFit,
    apply_plan_entry,
    builtin_case,
    compare,
    decompose,
    plan_target,
    predicted_action,
    xpoint_affine,
)

from conftest import rel_close


@pytest.fixture
def power():
    return (builtin_case("power-before").decomposition(),
            builtin_case("power-after").decomposition())


@pytest.fixture
def co2():
    return (builtin_case("co2-high").decomposition(),
            builtin_case("co2-low").decomposition())


def test_compare_power(power):
    report = compare(*power, eps_ref=28.0)
    assert report.deltas["d_a_u"] == pytest.approx(5 / 12, rel=1e-12)
    assert report.before["a_n"] == pytest.approx(-2 / 3)
    assert report.after["a_n"] == pytest.approx(-1 / 4)
    assert report.flags["I"] == "consistent"
    assert report.flags["II"] == "opposite"
    assert report.flags["III"] == "unchanged"
    # eps_u0 fell from 27 to 22 even though a_u rose
    assert report.threshold_shifts["d_eps_u0"] == -5.0


def test_compare_co2(co2):
    report = compare(*co2, eps_ref=20000.0)
    assert report.deltas["d_a_u"] == 0.0
    assert report.deltas["d_a_n"] == 0.0
    assert report.deltas["d_b_n"] == pytest.approx(-9.2, rel=1e-9)
    assert report.flags == {"I": "unchanged", "II": "unchanged",
                            "III": "unchanged", "IV": "consistent"}
    assert "norm intercept fell" in report.narrative


def test_compare_with_itself(power):
    report = compare(power[0], power[0], eps_ref=28.0)
    assert set(report.flags.values()) == {"unchanged"}
    assert all(v == 0.0 for v in report.deltas.values())


def test_compare_rtol_decides_unchanged():
    a = decompose(LinearFit(1.0, 0.0), Constraints(0, 10))
    b = decompose(LinearFit(1.0 + 1e-12, 0.0), Constraints(0, 10))
    assert compare(a, b, 5.0).flags["IV"] == "unchanged"
    assert compare(a, b, 5.0, rtol=0.0).flags["IV"] == "opposite"


@settings(max_examples=200, deadline=None)
@given(
    p=st.tuples(st.floats(-10, 10), st.floats(-100, 100), st.floats(-50, 50), st.floats(-50, 50)),
    q=st.tuples(st.floats(-10, 10), st.floats(-100, 100), st.floats(-50, 50), st.floats(-50, 50)),
    eps=st.floats(-100, 100),
)
def test_compare_antisymmetric(p, q, eps):
    assume(abs(p[2] - p[3]) > 1e-2 and abs(q[2] - q[3]) > 1e-2)
    a = decompose(LinearFit(p[0], p[1]), Constraints(p[2], p[3]))
    b = decompose(LinearFit(q[0], q[1]), Constraints(q[2], q[3]))
    forward, backward = compare(a, b, eps), compare(b, a, eps)
    for key, value in forward.deltas.items():
        assert backward.deltas[key] == -value


def test_plan_norm_intercept_shift(power):
    before = power[0]
    plan = plan_target(before, 0.0, 4000.0, eps_ref=28.0)
    assert plan.current_action == pytest.approx(4668.4)
    assert plan.entries["IV"].value == pytest.approx(-668.4, rel=1e-9)
    assert plan.entries["III"].value == pytest.approx(668.4, rel=1e-9)
    for approach in ("III", "IV"):
        u, n = apply_plan_entry(before, plan.entries[approach], 28.0)
        assert rel_close(xpoint_affine(u, n), 4000.0)


def test_plan_noop(power):
    plan = plan_target(power[0], 183.2, -461.2, eps_ref=28.0)
    assert plan.entries["III"].value == 0.0
    assert plan.entries["IV"].value == 0.0


def test_plan_utility_threshold(power):
    plan = plan_target(power[0], 183.2, -461.2, eps_ref=28.0, target_u_slope=0.75)
    entry = plan.entries["I"]
    assert entry.feasible
    assert entry.value == pytest.approx(22.0, rel=1e-12)
    assert not entry.moves_xpoint
    u, n = apply_plan_entry(power[0], entry, 28.0)
    assert u.slope == pytest.approx(0.75)
    assert rel_close(xpoint_affine(u, n), 4668.4)


def test_plan_norm_threshold(power):
    plan = plan_target(power[0], 183.2, -461.2, eps_ref=28.0, target_n_slope=-0.25)
    entry = plan.entries["II"]
    assert entry.feasible
    u, n = apply_plan_entry(power[0], entry, 28.0)
    assert n.slope == pytest.approx(-0.25, rel=1e-12)


def test_plan_infeasible_slopes(power):
    plan = plan_target(power[0], 183.2, -461.2, 28.0, target_u_slope=1.0, target_n_slope=-1.0)
    assert not plan.entries["I"].feasible
    assert not plan.entries["II"].feasible
    with pytest.raises(ValueError):
        apply_plan_entry(power[0], plan.entries["I"], 28.0)
    # at eps_ref == eps_n0 the utility slope is lam whatever eps_u0 is
    plan = plan_target(power[0], 183.2, -461.2, 30.0, target_u_slope=0.5)
    assert not plan.entries["I"].feasible


def test_plan_without_slopes_reports_unplanned(power):
    plan = plan_target(power[0], 150.0, 0.0, 28.0)
    assert plan.entries["I"].value is None
    assert not plan.entries["I"].feasible


params = dict(
    alpha=st.floats(-50, 50), beta=st.floats(-1e3, 1e3),
    e_u=st.floats(-50, 50), e_n=st.floats(-50, 50), lam=st.floats(0.1, 10),
    eps=st.floats(-60, 60),
)


@settings(max_examples=200, deadline=None)
@given(**params, e_u2=st.floats(-50, 50), e_n2=st.floats(-50, 50))
def test_threshold_changes_leave_xpoint(alpha, beta, e_u, e_n, lam, eps, e_u2, e_n2):
    assume(abs(e_u - e_n) > 1e-2 and abs(e_u2 - e_n2) > 1e-2)
    dec = decompose(LinearFit(alpha, beta), Constraints(e_u, e_n, lam))
    moved = dec.with_constraints(eps_u0=e_u2, eps_n0=e_n2)
    x0, x1 = predicted_action(dec, eps), predicted_action(moved, eps)
    assert x1 == pytest.approx(x0, rel=1e-9, abs=max(1e-9 * (abs(alpha * eps) + abs(beta)), 1e-290))


@settings(max_examples=200, deadline=None)
@given(**params, a_t=st.floats(-50, 50), b_t=st.floats(-1e3, 1e3))
def test_intercept_plans_hit_target(alpha, beta, e_u, e_n, lam, eps, a_t, b_t):
    assume(abs(e_u - e_n) > 1e-2)
    dec = decompose(LinearFit(alpha, beta), Constraints(e_u, e_n, lam))
    plan = plan_target(dec, a_t, b_t, eps)
    target = a_t * eps + b_t
    scale = max(abs(target), abs(alpha * eps) + abs(beta), abs(a_t * eps) + abs(b_t))
    for approach in ("III", "IV"):
        u, n = apply_plan_entry(dec, plan.entries[approach], eps)
        assert abs(xpoint_affine(u, n) - target) <= 1e-9 * max(scale, 1e-290)
