import numpy as np
import pytest

from xpoint import NonlinearChoiceModel
from xpoint.model import BRACKET_OFFSET


def grid_argmax(model, step):
    """Exhaustive search for the maximiser of u + n over the action domain."""
    xs = np.arange(model.lower, model.upper + step / 2, step)
    v = xs ** model.utility_exponent - np.abs(xs - model.norm_shift) ** model.norm_exponent
    return float(xs[np.argmax(v)])


def random_bracketed_model(rng):
    """Draw nonlinear models until one has an interior maximum."""
    while True:
        a = rng.uniform(0.0, 5.0)
        lower = rng.uniform(0.0, 1.0) if rng.random() < 0.3 else 0.0
        model = NonlinearChoiceModel(
            utility_exponent=rng.uniform(0.05, 0.95),
            norm_exponent=rng.uniform(1.1, 4.0),
            norm_shift=a,
            norm_offset=rng.uniform(-50, 50),
            lower=lower,
            upper=max(a, lower) + rng.uniform(0.5, 5.0),
        )
        left = max(model.norm_shift, model.lower) + BRACKET_OFFSET
        if model.foc(left) > 0 and model.foc(model.upper) < 0:
            return model


def rel_close(actual, expected, rtol=1e-9):
    return abs(actual - expected) <= rtol * max(1.0, abs(expected))


@pytest.fixture
def rng():
    return np.random.default_rng(20200611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in sorted(RESULTS.values()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({detail})")
