"""Split measured action-vs-environment lines into utility and norm lines.

The pipeline is: fit ``x = alpha * eps + beta`` by least squares, then choose
the two environments at which the utility slope and the norm slope vanish.
Those two constraints pin down how the slope gap ``lambda`` is shared, and
the fitted line fixes the norm intercept so the lines cross exactly on the
fitted action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegenerateDesignError,
    IndistinguishableConstraintsError,
    InsufficientDataError,
    UsageError,
)
from .model import AffineFunction, xpoint_affine


@dataclass(frozen=True)
class Dataset:
    """Paired ``(environment, action)`` samples with labels and units."""

    samples: tuple[tuple[float, float], ...]
    name: str = "dataset"
    env_label: str = "env"
    env_unit: str = ""
    action_label: str = "action"
    action_unit: str = ""

    def __post_init__(self):
        samples = tuple((float(e), float(x)) for e, x in self.samples)
        for i, (e, x) in enumerate(samples):
            if not (math.isfinite(e) and math.isfinite(x)):
                raise UsageError(f"sample {i} is not finite: ({e!r}, {x!r})")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_arrays(cls, env, action, **meta) -> Dataset:
        env = np.asarray(env, dtype=float).ravel()
        action = np.asarray(action, dtype=float).ravel()
        if env.shape != action.shape:
            raise UsageError("env and action must have the same length")
        return cls(tuple(zip(env.tolist(), action.tolist())), **meta)

    @property
    def env(self) -> np.ndarray:
        return np.array([e for e, _ in self.samples], dtype=float)

    @property
    def action(self) -> np.ndarray:
        return np.array([x for _, x in self.samples], dtype=float)

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class LinearFit:
    """Least-squares line ``action = alpha * env + beta``.

    Diagnostics are ``None`` when the line was supplied directly rather than
    fitted, as for the built-in case studies.
    """

    alpha: float
    beta: float
    r_squared: Optional[float] = None
    residual_sse: Optional[float] = None
    n_samples: int = 0

    def predict(self, eps):
        return self.alpha * np.asarray(eps, dtype=float) + self.beta


def fit_linear(dataset: Dataset | Sequence[tuple[float, float]]) -> LinearFit:
    """Ordinary least squares of action on environment."""
    if not isinstance(dataset, Dataset):
        dataset = Dataset(tuple(dataset))
    if len(dataset) < 2:
        raise InsufficientDataError(
            f"need at least 2 samples to fit a line, got {len(dataset)}"
        )
    eps, x = dataset.env, dataset.action
    if np.unique(eps).size < 2:
        raise DegenerateDesignError(
            "all environment values are identical; slope is not identifiable"
        )

    eps_mean = eps.mean()
    x_mean = x.mean()
    d_eps = eps - eps_mean
    d_x = x - x_mean
    alpha = float(np.dot(d_eps, d_x) / np.dot(d_eps, d_eps))
    beta = float(x_mean - alpha * eps_mean)

    residuals = x - (alpha * eps + beta)
    sse = float(np.dot(residuals, residuals))
    sst = float(np.dot(d_x, d_x))
    if sst == 0.0:
        r_squared = 1.0
    else:
        r_squared = min(1.0, max(0.0, 1.0 - sse / sst))
    return LinearFit(alpha, beta, r_squared, sse, len(dataset))


@dataclass(frozen=True)
class Constraints:
    """Environments where the utility slope (``eps_u0``) and norm slope
    (``eps_n0``) vanish, plus the free value scale ``lam``."""

    eps_u0: float
    eps_n0: float
    lam: float = 1.0

    def __post_init__(self):
        for name in ("eps_u0", "eps_n0", "lam"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise UsageError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.eps_u0 == self.eps_n0:
            raise IndistinguishableConstraintsError(
                f"eps_u0 and eps_n0 are both {self.eps_u0!r}"
            )
        if not self.lam > 0.0:
            raise UsageError(f"lam must be positive, got {self.lam!r}")


@dataclass(frozen=True)
class CoefficientSet:
    """Slopes as linear functions of the environment.

    ``a_u(eps) = kappa_u * eps + lambda_u`` and
    ``a_n(eps) = kappa_n * eps + lambda_n``. The individual intercept
    coefficients ``mu_*``/``nu_*`` are not identifiable from data and are
    left as ``None`` unless a caller sets them.
    """

    kappa_u: float
    lambda_u: float
    kappa_n: float
    lambda_n: float
    mu_u: Optional[float] = None
    nu_u: Optional[float] = None
    mu_n: Optional[float] = None
    nu_n: Optional[float] = None

    @property
    def kappa(self) -> float:
        return self.kappa_u - self.kappa_n

    @property
    def lam(self) -> float:
        return self.lambda_u - self.lambda_n

    def utility_slope(self, eps: float) -> float:
        return self.kappa_u * eps + self.lambda_u

    def norm_slope(self, eps: float) -> float:
        return self.kappa_n * eps + self.lambda_n


def solve_coefficients(kappa: float, lam: float, constraints: Constraints) -> CoefficientSet:
    """Share the slope-gap coefficients between utility and norm.

    Solves ``kappa_u - kappa_n = kappa``, ``lambda_u - lambda_n = lam`` with
    ``a_u(eps_u0) = 0`` and ``a_n(eps_n0) = 0``. ``constraints.lam`` is not
    used here; ``lam`` is passed explicitly so a general ``kappa`` can be
    exercised.
    """
    e_u, e_n = constraints.eps_u0, constraints.eps_n0
    span = e_n - e_u
    if span == 0.0:
        raise IndistinguishableConstraintsError("eps_u0 equals eps_n0")
    kappa_u = (kappa * e_n + lam) / span
    kappa_n = (kappa * e_u + lam) / span
    return CoefficientSet(
        kappa_u=kappa_u,
        lambda_u=-(e_u * kappa_u),
        kappa_n=kappa_n,
        lambda_n=-(e_n * kappa_n),
    )


@dataclass(frozen=True)
class Decomposition:
    """Utility and norm lines as functions of the environment.

    After moving the origin to the X-point, the utility line passes through
    zero and the norm intercept is ``lam * (alpha * eps + beta)``.
    """

    fit: LinearFit
    constraints: Constraints
    coefficients: CoefficientSet = field(repr=False)

    @property
    def alpha(self) -> float:
        return self.fit.alpha

    @property
    def beta(self) -> float:
        return self.fit.beta

    def utility_slope(self, eps: float) -> float:
        return self.coefficients.utility_slope(eps)

    def norm_slope(self, eps: float) -> float:
        return self.coefficients.norm_slope(eps)

    def norm_intercept(self, eps: float) -> float:
        return self.constraints.lam * (self.fit.alpha * eps + self.fit.beta)

    def affine_at(self, eps: float) -> tuple[AffineFunction, AffineFunction]:
        return affine_at(self, eps)

    def predicted_action(self, eps: float) -> float:
        return predicted_action(self, eps)

    def with_constraints(self, **changes) -> Decomposition:
        """Re-decompose the same line under modified constraints."""
        c = self.constraints
        params = {"eps_u0": c.eps_u0, "eps_n0": c.eps_n0, "lam": c.lam}
        params.update(changes)
        return decompose(self.fit, Constraints(**params))


def decompose(fit: LinearFit, constraints: Constraints) -> Decomposition:
    """Decompose a fitted action line under the given constraints.

    The fitted line has no environment term in its slope gap, so ``kappa`` is
    fixed at 0 and ``lambda`` is the constraint scale.
    """
    coefficients = solve_coefficients(0.0, constraints.lam, constraints)
    return Decomposition(fit=fit, constraints=constraints, coefficients=coefficients)


def affine_at(dec: Decomposition, eps: float) -> tuple[AffineFunction, AffineFunction]:
    """Utility and norm lines at environment ``eps``."""
    eps = float(eps)
    u = AffineFunction(dec.utility_slope(eps), 0.0)
    n = AffineFunction(dec.norm_slope(eps), dec.norm_intercept(eps))
    return u, n


def predicted_action(dec: Decomposition, eps: float) -> float:
    """Action at the X-point of the decomposed lines."""
    u, n = affine_at(dec, eps)
    return xpoint_affine(u, n)
