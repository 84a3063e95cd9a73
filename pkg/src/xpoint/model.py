"""Evaluation primitives for value, utility and norm functions.

Two choice rules live here. The linear rule picks the action where an affine
utility line crosses an affine norm line (the X-point). The nonlinear rule
picks the action maximising ``v(x) = x**alpha_m - |x - a|**beta_m + b`` by
bisection on its first-order condition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    DomainError,
    InvalidLotteryError,
    InvalidModelError,
    NoInteriorMaximumError,
    ParallelLinesError,
)

PROBABILITY_TOL = 1e-9
# Offset from a singular left edge (x = 0 or x = a) where the FOC blows up.
BRACKET_OFFSET = 1e-9


@dataclass(frozen=True)
class Lottery:
    """Outcomes of one action as ``(probability, utility)`` pairs."""

    outcomes: tuple[tuple[float, float], ...]

    def __post_init__(self):
        outcomes = tuple((float(p), float(u)) for p, u in self.outcomes)
        if not outcomes:
            raise InvalidLotteryError("lottery has no outcomes")
        for p, u in outcomes:
            if not (0.0 <= p <= 1.0):
                raise InvalidLotteryError(f"probability {p!r} outside [0, 1]")
            if not math.isfinite(u):
                raise InvalidLotteryError(f"utility {u!r} is not finite")
        total = math.fsum(p for p, _ in outcomes)
        if abs(total - 1.0) > PROBABILITY_TOL:
            raise InvalidLotteryError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "outcomes", outcomes)


def expected_utility(lottery: Lottery | Sequence[tuple[float, float]]) -> float:
    """Probability-weighted sum of outcome utilities."""
    if not isinstance(lottery, Lottery):
        lottery = Lottery(tuple(lottery))
    return math.fsum(p * u for p, u in lottery.outcomes)


@dataclass(frozen=True)
class AffineFunction:
    """``f(x) = slope * x + intercept``."""

    slope: float
    intercept: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "slope", float(self.slope))
        object.__setattr__(self, "intercept", float(self.intercept))
        if not (math.isfinite(self.slope) and math.isfinite(self.intercept)):
            raise InvalidModelError(
                f"affine coefficients must be finite: {self.slope!r}, {self.intercept!r}"
            )

    def __call__(self, x: float) -> float:
        return self.slope * x + self.intercept

    def shifted(self, delta: float) -> AffineFunction:
        """Same slope, intercept moved by ``delta``."""
        return AffineFunction(self.slope, self.intercept + delta)


def eval_value_sum(u: AffineFunction, n: AffineFunction, x: float) -> float:
    """Value of action ``x`` as utility plus norm."""
    return u(x) + n(x)


def xpoint_affine(u: AffineFunction, n: AffineFunction) -> float:
    """Action at which the utility and norm lines intersect.

    Raises :class:`ParallelLinesError` when the slopes are equal, since the
    lines then either never meet or coincide everywhere.
    """
    gap = u.slope - n.slope
    if gap == 0.0:
        raise ParallelLinesError(
            f"utility and norm slopes are both {u.slope!r}; no unique X-point"
        )
    return -(u.intercept - n.intercept) / gap


@dataclass(frozen=True)
class NonlinearChoiceModel:
    """Concave power utility plus a return-potential norm.

    ``u(x) = x**utility_exponent`` and
    ``n(x) = -|x - norm_shift|**norm_exponent + norm_offset``, so the norm
    peaks at ``x = norm_shift``.
    """

    utility_exponent: float
    norm_exponent: float
    norm_shift: float = 0.0
    norm_offset: float = 0.0
    lower: float = 0.0
    upper: float = 10.0

    def __post_init__(self):
        for name in ("utility_exponent", "norm_exponent", "norm_shift",
                     "norm_offset", "lower", "upper"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidModelError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if not 0.0 < self.utility_exponent < 1.0:
            raise InvalidModelError("utility_exponent must lie in (0, 1)")
        if not self.norm_exponent > 1.0:
            raise InvalidModelError("norm_exponent must exceed 1")
        if self.lower < 0.0:
            raise InvalidModelError("action domain must start at or above 0")
        if not self.lower < self.upper:
            raise InvalidModelError(
                f"empty action domain [{self.lower!r}, {self.upper!r}]"
            )

    def utility(self, x: float) -> float:
        return x ** self.utility_exponent

    def norm(self, x: float) -> float:
        return -abs(x - self.norm_shift) ** self.norm_exponent + self.norm_offset

    def foc(self, x: float) -> float:
        """dv/dx on the branch ``x > norm_shift``."""
        return (self.utility_exponent * x ** (self.utility_exponent - 1.0)
                - self.norm_exponent * (x - self.norm_shift) ** (self.norm_exponent - 1.0))


def eval_nonlinear(model: NonlinearChoiceModel, x: float) -> tuple[float, float, float]:
    """Return ``(u, n, v)`` at action ``x``."""
    x = float(x)
    if not (model.lower <= x <= model.upper):
        raise DomainError(
            f"action {x!r} outside domain [{model.lower!r}, {model.upper!r}]"
        )
    u = model.utility(x)
    n = model.norm(x)
    return u, n, u + n


def bisect(f: Callable[[float], float], lo: float, hi: float,
           xtol: float = 1e-12, max_iter: int = 200) -> tuple[float, int]:
    """Bisection for a root of ``f`` on ``[lo, hi]``.

    ``f(lo)`` and ``f(hi)`` must have opposite signs. Stops after
    ``max_iter`` halvings, once the bracket is narrower than ``xtol``, or when
    floating point can no longer split it. Returns ``(root, iterations)``.
    """
    f_lo = f(lo)
    if f_lo == 0.0:
        return lo, 0
    f_hi = f(hi)
    if f_hi == 0.0:
        return hi, 0
    if (f_lo > 0) == (f_hi > 0):
        raise NoInteriorMaximumError(
            f"no sign change on [{lo!r}, {hi!r}]: f = {f_lo!r}, {f_hi!r}"
        )
    positive_low = f_lo > 0
    iterations = 0
    while iterations < max_iter and hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        iterations += 1
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid, iterations
        if (f_mid > 0) == positive_low:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi), iterations


@dataclass(frozen=True)
class ArgmaxResult:
    x: float
    foc_residual: float
    relative_residual: float
    bracket: tuple[float, float]
    iterations: int


def solve_argmax(model: NonlinearChoiceModel, xtol: float = 1e-12,
                 max_iter: int = 200) -> ArgmaxResult:
    """Interior maximiser of the nonlinear value function, with diagnostics.

    Left of ``norm_shift`` the value function is strictly increasing, so the
    search runs on ``(max(norm_shift, lower), upper]``. The FOC must go from
    positive to negative on that bracket, otherwise
    :class:`NoInteriorMaximumError` is raised and the caller should compare
    endpoints instead. ``norm_offset`` never enters the FOC.
    """
    left = max(model.norm_shift, model.lower) + BRACKET_OFFSET
    right = model.upper
    if not left < right:
        raise NoInteriorMaximumError(
            f"bracket [{left!r}, {right!r}] is empty"
        )
    f_left, f_right = model.foc(left), model.foc(right)
    if not (f_left > 0.0 and f_right < 0.0):
        raise NoInteriorMaximumError(
            f"first-order condition does not fall through zero on "
            f"[{left!r}, {right!r}] (values {f_left!r}, {f_right!r})"
        )
    x, iterations = bisect(model.foc, left, right, xtol=xtol, max_iter=max_iter)
    residual = model.foc(x)
    scale = max(model.utility_exponent * x ** (model.utility_exponent - 1.0),
                model.norm_exponent * (x - model.norm_shift) ** (model.norm_exponent - 1.0))
    return ArgmaxResult(
        x=x,
        foc_residual=residual,
        relative_residual=abs(residual) / scale,
        bracket=(left, right),
        iterations=iterations,
    )


def argmax_value(model: NonlinearChoiceModel) -> float:
    """Action with the largest value ``u(x) + n(x)``."""
    return solve_argmax(model).x
