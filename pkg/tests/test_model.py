import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xpoint import (
    AffineFunction,
    Lottery,
    NonlinearChoiceModel,
    argmax_value,
    bisect,
    eval_nonlinear,
    eval_value_sum,
    expected_utility,
    solve_argmax,
    xpoint_affine,
)
from xpoint.errors import (
    DomainError,
    InvalidLotteryError,
    InvalidModelError,
    NoInteriorMaximumError,
    ParallelLinesError,
)

from conftest import grid_argmax, random_bracketed_model

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


# expected utility

@pytest.mark.parametrize("outcomes, expected", [
    ([(1.0, 5)], 5.0),
    ([(0.5, 0), (0.5, 10)], 5.0),
    ([(0.2, 1), (0.3, 2), (0.5, 3)], 2.3),
])
def test_expected_utility_examples(outcomes, expected):
    assert expected_utility(Lottery(tuple(outcomes))) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("outcomes", [
    [(0.5, 1), (0.6, 2)],
    [(1.2, 1), (-0.2, 2)],
    [],
])
def test_invalid_lottery(outcomes):
    with pytest.raises(InvalidLotteryError):
        Lottery(tuple(outcomes))


@settings(max_examples=200, deadline=None)
@given(
    weights=st.lists(st.floats(0.01, 1.0), min_size=1, max_size=8),
    utilities=st.lists(finite, min_size=8, max_size=8),
    c=st.floats(-100, 100),
    d=st.floats(-100, 100),
)
def test_expected_utility_is_linear(weights, utilities, c, d):
    total = math.fsum(weights)
    probs = [w / total for w in weights]
    base = list(zip(probs, utilities))
    scaled = [(p, c * u + d) for p, u in base]
    lhs = expected_utility(scaled)
    rhs = c * expected_utility(base) + d
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-6)


# value sum

@pytest.mark.parametrize("u, n, x, expected", [
    ((1, 0), (-1, 0), 7, 0.0),
    ((1, 0), (-1, 2), 1, 2.0),
    ((0, 3), (0, 4), 12345.0, 7.0),
])
def test_eval_value_sum_examples(u, n, x, expected):
    assert eval_value_sum(AffineFunction(*u), AffineFunction(*n), x) == expected


@given(finite, finite, finite, finite, finite)
def test_eval_value_sum_pointwise(a_u, b_u, a_n, b_n, x):
    u, n = AffineFunction(a_u, b_u), AffineFunction(a_n, b_n)
    assert eval_value_sum(u, n, x) == u(x) + n(x)


def test_affine_rejects_non_finite():
    with pytest.raises(InvalidModelError):
        AffineFunction(math.inf, 0.0)


# X-point

def test_xpoint_symmetric_crossing():
    assert xpoint_affine(AffineFunction(1, 0), AffineFunction(-1, 2)) == 1.0


def test_xpoint_power_case_at_28():
    x = xpoint_affine(AffineFunction(1 / 3, 0), AffineFunction(-2 / 3, 4668.4))
    assert x == pytest.approx(4668.4, rel=1e-12)


def test_xpoint_parallel_lines():
    with pytest.raises(ParallelLinesError):
        xpoint_affine(AffineFunction(2, 0), AffineFunction(2, 1))


@given(finite, finite, finite, finite)
def test_xpoint_lines_meet_and_symmetric(a_u, b_u, a_n, b_n):
    if abs(a_u - a_n) < 1e-3:
        return
    u, n = AffineFunction(a_u, b_u), AffineFunction(a_n, b_n)
    x = xpoint_affine(u, n)
    assert x == xpoint_affine(n, u)
    scale = max(1.0, abs(u(x)), abs(b_u), abs(b_n), abs(a_u * x), abs(a_n * x))
    assert abs(u(x) - n(x)) <= 1e-9 * scale


# nonlinear model

def test_eval_nonlinear_examples():
    u, _, _ = eval_nonlinear(NonlinearChoiceModel(0.5, 2.0), 4.0)
    assert u == 2.0
    model = NonlinearChoiceModel(0.5, 2.0, norm_shift=1.0, norm_offset=0.0)
    _, n, v = eval_nonlinear(model, 3.0)
    assert n == -4.0
    assert v == pytest.approx(math.sqrt(3) - 4)
    model = NonlinearChoiceModel(0.3, 2.5, norm_shift=2.0, norm_offset=7.25)
    assert eval_nonlinear(model, 2.0)[1] == 7.25


def test_norm_peaks_at_shift():
    model = NonlinearChoiceModel(0.5, 2.7, norm_shift=3.0, norm_offset=1.0)
    xs = np.linspace(0, 8, 801)
    n = np.array([model.norm(x) for x in xs])
    assert xs[np.argmax(n)] == pytest.approx(3.0)
    # integer exponent 2 matches the plain quadratic on both sides
    quad = NonlinearChoiceModel(0.5, 2.0, norm_shift=3.0)
    for x in (0.5, 2.0, 4.0, 6.5):
        assert quad.norm(x) == -(x - 3.0) ** 2


def test_eval_nonlinear_domain():
    model = NonlinearChoiceModel(0.5, 2.0, lower=1.0, upper=2.0)
    with pytest.raises(DomainError):
        eval_nonlinear(model, 0.5)
    with pytest.raises(DomainError):
        eval_nonlinear(model, 2.5)


@pytest.mark.parametrize("kwargs", [
    dict(utility_exponent=1.0, norm_exponent=2.0),
    dict(utility_exponent=0.0, norm_exponent=2.0),
    dict(utility_exponent=0.5, norm_exponent=1.0),
    dict(utility_exponent=0.5, norm_exponent=2.0, lower=-1.0),
    dict(utility_exponent=0.5, norm_exponent=2.0, lower=3.0, upper=2.0),
])
def test_invalid_model(kwargs):
    with pytest.raises(InvalidModelError):
        NonlinearChoiceModel(**kwargs)


@settings(max_examples=100, deadline=None)
@given(
    alpha=st.floats(0.05, 0.95),
    beta=st.floats(1.05, 4.0),
    a=st.floats(0.0, 5.0),
    x=st.floats(0.01, 5.0),
    h=st.floats(0.01, 1.0),
)
def test_shape_right_of_peak(alpha, beta, a, x, h):
    model = NonlinearChoiceModel(alpha, beta, norm_shift=a, upper=a + 20)
    x0 = a + x
    assert model.norm(x0 + h) < model.norm(x0)
    assert model.utility(x0 + h) > model.utility(x0)
    second_diff = model.utility(x0 - min(h, x0) / 2) - 2 * model.utility(x0) \
        + model.utility(x0 + min(h, x0) / 2)
    assert second_diff < 0


# argmax

def test_argmax_closed_form():
    model = NonlinearChoiceModel(0.5, 2.0, 0.0, 0.0, 0.0, 2.0)
    x = argmax_value(model)
    assert x == pytest.approx(0.25 ** (2 / 3), rel=1e-10)
    assert abs(x - grid_argmax(model, 1e-6)) <= 1e-6


def test_argmax_shifted_norm_grid_oracle():
    model = NonlinearChoiceModel(0.5, 2.0, 1.0, 0.0, 0.0, 3.0)
    x = argmax_value(model)
    oracle = grid_argmax(NonlinearChoiceModel(0.5, 2.0, 1.0, 0.0, 1.0, 3.0), 1e-6)
    assert 1.22 <= x <= 1.23
    assert abs(x - oracle) <= 1e-6


def test_argmax_offset_invariance():
    base = NonlinearChoiceModel(0.5, 2.0, 1.0, 0.0, 0.0, 3.0)
    shifted = NonlinearChoiceModel(0.5, 2.0, 1.0, 100.0, 0.0, 3.0)
    assert argmax_value(base) == argmax_value(shifted)


def test_argmax_residual_is_small():
    res = solve_argmax(NonlinearChoiceModel(0.5, 2.0, 1.0, 0.0, 0.0, 3.0))
    assert res.relative_residual <= 1e-8
    assert res.bracket[0] == pytest.approx(1.0 + 1e-9)


def test_argmax_no_interior_maximum():
    # upper edge sits before the FOC turns negative
    model = NonlinearChoiceModel(0.5, 2.0, 0.0, 0.0, 0.0, 0.2)
    with pytest.raises(NoInteriorMaximumError):
        argmax_value(model)


def test_argmax_random_models_match_grid(rng):
    for _ in range(20):
        model = random_bracketed_model(rng)
        step = (model.upper - model.lower) * 1e-5
        res = solve_argmax(model)
        assert abs(res.x - grid_argmax(model, step)) <= step
        assert res.relative_residual <= 1e-8


def test_bisect_simple_root():
    root, _ = bisect(lambda x: x * x - 2.0, 0.0, 2.0)
    assert root == pytest.approx(math.sqrt(2), abs=1e-12)


def test_bisect_requires_sign_change():
    with pytest.raises(NoInteriorMaximumError):
        bisect(lambda x: x * x + 1.0, -1.0, 1.0)
