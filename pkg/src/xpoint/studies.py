"""Built-in case studies, delimited-text datasets and synthetic data."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .decomposition import Constraints, Dataset, Decomposition, LinearFit, decompose
from .errors import (
    DatasetParseError,
    EmptyDatasetError,
    SchemaError,
    UnknownCaseError,
    UsageError,
)


@dataclass(frozen=True)
class CaseStudyParams:
    id: str
    alpha: float
    beta: float
    eps_u0: float
    eps_n0: float
    env_unit: str
    action_unit: str
    eps_ref_default: float
    description: str = ""

    def decomposition(self, lam: float = 1.0) -> Decomposition:
        return decompose(LinearFit(self.alpha, self.beta),
                         Constraints(self.eps_u0, self.eps_n0, lam))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> CaseStudyParams:
        required = ("id", "alpha", "beta", "eps_u0", "eps_n0")
        missing = [k for k in required if k not in doc]
        if missing:
            raise SchemaError(f"case parameters missing keys: {', '.join(missing)}")
        return cls(
            id=str(doc["id"]),
            alpha=float(doc["alpha"]),
            beta=float(doc["beta"]),
            eps_u0=float(doc["eps_u0"]),
            eps_n0=float(doc["eps_n0"]),
            env_unit=str(doc.get("env_unit", "")),
            action_unit=str(doc.get("action_unit", "")),
            eps_ref_default=float(doc.get("eps_ref_default", math.nan)),
            description=str(doc.get("description", "")),
        )


_TEMP = "degC"
# Units of the power-usage series are not given numerically; treated as a label.
_POWER = "power usage"
_GDP = "current US$ per capita"
_CO2 = "t CO2 per capita"

# Temperature series were adjusted for the two preceding days before fitting.
# eps_n0 = 30 degC: norms stop binding above 30 degC for health reasons.
# eps_n0 = 0 $: norms are moot at zero GDP and zero emissions.
# eps_u0 = 30000 $: utility saturates around that GDP per capita.
BUILTIN_CASES = {
    "power-before": CaseStudyParams(
        "power-before", 183.2, -461.2, 27.0, 30.0, _TEMP, _POWER, 28.0,
        "Tokyo-area power usage vs temperature, August 2010"),
    "power-after": CaseStudyParams(
        "power-after", 138.9, 8.703, 22.0, 30.0, _TEMP, _POWER, 28.0,
        "Tokyo-area power usage vs temperature, August 2011"),
    "co2-low": CaseStudyParams(
        "co2-low", 0.00017, 0.0, 30000.0, 0.0, _GDP, _CO2, 20000.0,
        "CO2 per capita vs GDP per capita, 2013, lower-emission countries"),
    "co2-high": CaseStudyParams(
        "co2-high", 0.00063, 0.0, 30000.0, 0.0, _GDP, _CO2, 20000.0,
        "CO2 per capita vs GDP per capita, 2013, higher-emission countries"),
}


def builtin_case(case_id: str) -> CaseStudyParams:
    try:
        return BUILTIN_CASES[case_id]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_CASES))
        raise UnknownCaseError(f"unknown case {case_id!r}; known cases: {known}") from None


def save_case_params(params: CaseStudyParams, path) -> None:
    Path(path).write_text(json.dumps(params.to_dict(), indent=2) + "\n", encoding="utf-8")


def load_case_params(path) -> CaseStudyParams:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not a valid parameter document ({exc})") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: parameter document must be a mapping")
    return CaseStudyParams.from_dict(doc)


def smooth_environment(values: Sequence[float], weights: Sequence[float]) -> np.ndarray:
    """Weighted moving average over the current value and preceding ones.

    ``weights[0]`` applies to the current row, ``weights[1]`` to the row
    before, and so on. The first ``len(weights) - 1`` rows have no full
    history and are dropped, so the output is shorter than the input.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0 or not np.all(np.isfinite(w)) or w.sum() <= 0:
        raise UsageError("smoothing weights must be finite with a positive sum")
    v = np.asarray(values, dtype=float)
    k = w.size
    if v.size < k:
        return np.empty(0)
    out = np.zeros(v.size - k + 1)
    for lag, weight in enumerate(w):
        out += weight * v[k - 1 - lag: v.size - lag]
    return out / w.sum()


def load_dataset(path, env_col: str, action_col: str, delimiter: str = ",",
                 smoothing_weights: Optional[Sequence[float]] = None,
                 env_unit: str = "", action_unit: str = "") -> Dataset:
    """Read a delimited text file with a header row into a :class:`Dataset`.

    Every row whose environment or action cell does not parse as a finite
    decimal number is collected, and a single :class:`DatasetParseError`
    naming those rows (1-based file line numbers) is raised.
    """
    if len(delimiter) != 1:
        raise UsageError("delimiter must be a single character")
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyDatasetError(f"{path}: file is empty") from None
        for col in (env_col, action_col):
            if col not in header:
                raise SchemaError(f"{path}: no column {col!r} in header {header}")
        i_env, i_act = header.index(env_col), header.index(action_col)

        samples, bad = [], []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                e = float(row[i_env])
                x = float(row[i_act])
            except (ValueError, IndexError):
                bad.append(line_no)
                continue
            if not (math.isfinite(e) and math.isfinite(x)):
                bad.append(line_no)
                continue
            samples.append((e, x))

    if bad:
        rows = ", ".join(str(r) for r in bad)
        raise DatasetParseError(f"{path}: unparseable values on row(s) {rows}", rows=bad)
    if not samples:
        raise EmptyDatasetError(f"{path}: no data rows")

    if smoothing_weights is not None:
        env = smooth_environment([e for e, _ in samples], smoothing_weights)
        samples = list(zip(env.tolist(), [x for _, x in samples][len(samples) - env.size:]))
        if not samples:
            raise EmptyDatasetError(f"{path}: too few rows for the smoothing window")

    return Dataset(tuple(samples), name=path.stem, env_label=env_col, env_unit=env_unit,
                   action_label=action_col, action_unit=action_unit)


def format_dataset(dataset: Dataset, delimiter: str = ",") -> str:
    lines = [delimiter.join((dataset.env_label, dataset.action_label))]
    lines += [delimiter.join((repr(e), repr(x))) for e, x in dataset.samples]
    return "\n".join(lines) + "\n"


def write_dataset(dataset: Dataset, path, delimiter: str = ",") -> None:
    """Write ``dataset`` in the format :func:`load_dataset` reads.

    Values are written with ``repr`` so they read back bit-for-bit.
    """
    Path(path).write_text(format_dataset(dataset, delimiter), encoding="utf-8")


@dataclass(frozen=True)
class SyntheticSpec:
    alpha: float
    beta: float
    env_grid: tuple[float, ...]
    eps_u0: float = 0.0
    eps_n0: float = 1.0
    lam: float = 1.0
    noise_sd: float = 0.0
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(e) for e in self.env_grid)
        object.__setattr__(self, "env_grid", grid)
        if len(set(grid)) < 2:
            raise UsageError("env_grid needs at least 2 distinct values")
        if not (math.isfinite(self.noise_sd) and self.noise_sd >= 0):
            raise UsageError("noise_sd must be finite and non-negative")

    def constraints(self) -> Constraints:
        return Constraints(self.eps_u0, self.eps_n0, self.lam)


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """Sample actions from the line ``alpha * eps + beta`` plus Gaussian noise.

    The decomposition thresholds in ``spec`` do not affect the samples; the
    X-point at every environment lies on the line regardless of them.
    """
    eps = np.asarray(spec.env_grid, dtype=float)
    rng = np.random.default_rng(spec.seed)
    noise = rng.normal(0.0, spec.noise_sd, size=eps.size) if spec.noise_sd > 0 else 0.0
    x = spec.alpha * eps + spec.beta + noise
    return Dataset.from_arrays(eps, x, name=f"synthetic-{spec.seed}")
