"""Classify before/after changes and plan moves toward a target action line.

Four levers move the X-point:

    I    raise the utility slope a_u
    II   push the norm slope a_n further negative
    III  raise the utility intercept b_u
    IV   lower the norm intercept b_n

Classification is made on the slope and intercept deltas themselves. The
implied shifts of ``eps_u0``/``eps_n0`` are reported but do not drive the
verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .decomposition import Decomposition, affine_at
from .model import AffineFunction, xpoint_affine

APPROACHES = ("I", "II", "III", "IV")
CONSISTENT = "consistent"
OPPOSITE = "opposite"
UNCHANGED = "unchanged"

_LEVERS = {
    "I": ("d_a_u", +1, "utility slope"),
    "II": ("d_a_n", -1, "norm slope"),
    "III": ("d_b_u", +1, "utility intercept"),
    "IV": ("d_b_n", -1, "norm intercept"),
}


@dataclass(frozen=True)
class InterventionReport:
    eps_ref: float
    deltas: dict
    flags: dict
    before: dict
    after: dict
    threshold_shifts: dict
    narrative: str

    def as_dict(self) -> dict:
        return {
            "eps_ref": self.eps_ref,
            "before": dict(self.before),
            "after": dict(self.after),
            "deltas": dict(self.deltas),
            "approaches": dict(self.flags),
            "threshold_shifts": dict(self.threshold_shifts),
            "narrative": self.narrative,
        }


def _is_unchanged(old: float, new: float, rtol: float) -> bool:
    return abs(new - old) <= rtol * max(abs(old), abs(new))


def _line_params(dec: Decomposition, eps: float) -> dict:
    u, n = affine_at(dec, eps)
    return {"a_u": u.slope, "b_u": u.intercept, "a_n": n.slope, "b_n": n.intercept,
            "xpoint": xpoint_affine(u, n)}


def compare(before: Decomposition, after: Decomposition, eps_ref: float,
            rtol: float = 1e-9) -> InterventionReport:
    """Compare two decompositions at ``eps_ref`` against the four approaches.

    A delta counts as unchanged when it is within ``rtol`` of the larger of
    the two values it was computed from.
    """
    eps_ref = float(eps_ref)
    if not math.isfinite(eps_ref):
        raise ValueError("eps_ref must be finite")
    old = _line_params(before, eps_ref)
    new = _line_params(after, eps_ref)
    deltas = {f"d_{k}": new[k] - old[k] for k in ("a_u", "a_n", "b_u", "b_n")}

    flags = {}
    sentences = []
    for approach in APPROACHES:
        key, direction, label = _LEVERS[approach]
        param = key[2:]
        if _is_unchanged(old[param], new[param], rtol):
            flags[approach] = UNCHANGED
            sentences.append(f"{approach}: {label} unchanged.")
            continue
        moved_up = deltas[key] > 0
        flags[approach] = CONSISTENT if moved_up == (direction > 0) else OPPOSITE
        verb = "rose" if moved_up else "fell"
        sentences.append(
            f"{approach}: {label} {verb} from {old[param]:.6g} to {new[param]:.6g} "
            f"({flags[approach]})."
        )

    shifts = {
        "d_eps_u0": after.constraints.eps_u0 - before.constraints.eps_u0,
        "d_eps_n0": after.constraints.eps_n0 - before.constraints.eps_n0,
    }
    return InterventionReport(
        eps_ref=eps_ref,
        deltas=deltas,
        flags=flags,
        before=old,
        after=new,
        threshold_shifts=shifts,
        narrative=" ".join(sentences),
    )


@dataclass(frozen=True)
class PlanEntry:
    approach: str
    parameter: str
    value: Optional[float]
    feasible: bool
    moves_xpoint: bool
    note: str = ""


@dataclass(frozen=True)
class TargetPlan:
    alpha_target: float
    beta_target: float
    eps_ref: float
    current_action: float
    target_action: float
    entries: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "target": {"alpha": self.alpha_target, "beta": self.beta_target},
            "eps_ref": self.eps_ref,
            "current_action": self.current_action,
            "target_action": self.target_action,
            "entries": {
                k: {"parameter": e.parameter, "value": e.value, "feasible": e.feasible,
                    "moves_xpoint": e.moves_xpoint, "note": e.note}
                for k, e in self.entries.items()
            },
        }


_SLOPE_ONLY_NOTE = ("slope change only: with intercepts fixed the X-point at "
                    "eps_ref does not move")


def _utility_threshold_for(dec: Decomposition, eps: float, slope: float) -> PlanEntry:
    # lam * (eps - e_u) / (e_n - e_u) = slope, solved for e_u
    lam, e_n = dec.constraints.lam, dec.constraints.eps_n0
    denom = slope - lam
    if denom == 0.0:
        return PlanEntry("I", "eps_u0", None, False, False,
                         "target slope equals lam; only reachable as eps_u0 -> infinity")
    e_u = (slope * e_n - lam * eps) / denom
    if not math.isfinite(e_u) or e_u == e_n:
        return PlanEntry("I", "eps_u0", None, False, False,
                         "target slope would require eps_u0 == eps_n0")
    return PlanEntry("I", "eps_u0", e_u, True, False, _SLOPE_ONLY_NOTE)


def _norm_threshold_for(dec: Decomposition, eps: float, slope: float) -> PlanEntry:
    # lam * (eps - e_n) / (e_n - e_u) = slope, solved for e_n
    lam, e_u = dec.constraints.lam, dec.constraints.eps_u0
    denom = slope + lam
    if denom == 0.0:
        return PlanEntry("II", "eps_n0", None, False, False,
                         "target slope equals -lam; only reachable as eps_n0 -> infinity")
    e_n = (lam * eps + slope * e_u) / denom
    if not math.isfinite(e_n) or e_n == e_u:
        return PlanEntry("II", "eps_n0", None, False, False,
                         "target slope would require eps_n0 == eps_u0")
    return PlanEntry("II", "eps_n0", e_n, True, False, _SLOPE_ONLY_NOTE)


def plan_target(current: Decomposition, alpha_target: float, beta_target: float,
                eps_ref: float, target_u_slope: Optional[float] = None,
                target_n_slope: Optional[float] = None) -> TargetPlan:
    """Single-lever changes that move the current state toward a target line.

    Approaches III and IV get the exact intercept shift that puts the X-point
    at ``alpha_target * eps_ref + beta_target``. Approaches I and II get the
    threshold value that produces the requested slope at ``eps_ref``; without
    a requested slope they are reported as not planned.
    """
    eps_ref = float(eps_ref)
    lam = current.constraints.lam
    x_now = current.alpha * eps_ref + current.beta
    x_target = alpha_target * eps_ref + beta_target
    shift = lam * (x_target - x_now)

    entries = {}
    if target_u_slope is None:
        entries["I"] = PlanEntry("I", "eps_u0", None, False, False, "no target utility slope given")
    else:
        entries["I"] = _utility_threshold_for(current, eps_ref, float(target_u_slope))
    if target_n_slope is None:
        entries["II"] = PlanEntry("II", "eps_n0", None, False, False, "no target norm slope given")
    else:
        entries["II"] = _norm_threshold_for(current, eps_ref, float(target_n_slope))
    # + 0.0 normalises -0.0 for the no-op plan
    entries["III"] = PlanEntry("III", "delta_b_u", -shift + 0.0, True, True,
                               "shift of b_u that puts the X-point on the target")
    entries["IV"] = PlanEntry("IV", "delta_b_n", shift + 0.0, True, True,
                              "shift of b_n that puts the X-point on the target")
    return TargetPlan(float(alpha_target), float(beta_target), eps_ref,
                      x_now, x_target, entries)


def apply_plan_entry(current: Decomposition, entry: PlanEntry,
                     eps_ref: float) -> tuple[AffineFunction, AffineFunction]:
    """Utility and norm lines at ``eps_ref`` after applying one plan entry."""
    if not entry.feasible:
        raise ValueError(f"plan entry {entry.approach} is not feasible")
    if entry.approach == "I":
        return affine_at(current.with_constraints(eps_u0=entry.value), eps_ref)
    if entry.approach == "II":
        return affine_at(current.with_constraints(eps_n0=entry.value), eps_ref)
    u, n = affine_at(current, eps_ref)
    if entry.approach == "III":
        return u.shifted(entry.value), n
    return u, n.shifted(entry.value)
