"""Behavior vectors, parameter-grid sweeps and the PCA behavior space.

A behavior vector holds, for each of the 27 syllogisms with a quantified
valid conclusion, the probabilities of the 8 quantified responses (NVC is
left out), giving 216 numbers per reasoner.
"""
from __future__ import annotations

import csv
import itertools
import json
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import QUANTIFIED_CODES, RESPONSE_CODES
from .metrics import _pearson
from .mreasoner import DEFAULT_K, IndividualSets, ReasonerParams, simulate
from .oracle import Oracle, default_oracle
from .profiles import ReasonerProfile

log = logging.getLogger(__name__)

PARAM_NAMES = ("len", "broad", "systm2", "weaken")
DEFAULT_LEN = (2.0, 2.5, 3.0, 3.5, 4.0, 4.5)
DEFAULT_PROB = (0.0, 0.2, 0.4, 0.6, 0.8, 0.9)


class DegenerateDataError(ValueError):
    pass


@dataclass(frozen=True)
class ParameterGrid:
    length: tuple[float, ...] = DEFAULT_LEN
    broad: tuple[float, ...] = DEFAULT_PROB
    systm2: tuple[float, ...] = DEFAULT_PROB
    weaken: tuple[float, ...] = DEFAULT_PROB

    def __post_init__(self):
        for name in ("length", "broad", "systm2", "weaken"):
            values = tuple(float(v) for v in getattr(self, name))
            if not values:
                raise ValueError(f"grid axis {name} is empty")
            object.__setattr__(self, name, values)

    def points(self) -> list[ReasonerParams]:
        return [ReasonerParams(*p) for p in
                itertools.product(self.length, self.broad, self.systm2, self.weaken)]

    def __len__(self) -> int:
        return len(self.length) * len(self.broad) * len(self.systm2) * len(self.weaken)

    @classmethod
    def single(cls, p: ReasonerParams) -> "ParameterGrid":
        return cls((p.length,), (p.broad,), (p.systm2,), (p.weaken,))

    @classmethod
    def from_dict(cls, data: dict) -> "ParameterGrid":
        return cls(**{("length" if k == "len" else k): tuple(v) for k, v in data.items()})

    def to_dict(self) -> dict:
        return {"len": list(self.length), "broad": list(self.broad),
                "systm2": list(self.systm2), "weaken": list(self.weaken)}


def vector_columns(oracle: Oracle | None = None) -> list[str]:
    oracle = oracle or default_oracle()
    return [f"{sid}:{code}" for sid in oracle.valid_ids for code in QUANTIFIED_CODES]


@dataclass
class BehaviorVector:
    values: np.ndarray
    label: str = ""
    params: ReasonerParams | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or self.values.size % 8:
            raise ValueError(f"behavior vector must be a flat multiple of 8, got {self.values.shape}")

    @property
    def blocks(self) -> np.ndarray:
        return self.values.reshape(-1, 8)

    @classmethod
    def from_profile(cls, profile: ReasonerProfile, oracle: Oracle | None = None) -> "BehaviorVector":
        oracle = oracle or default_oracle()
        missing = [sid for sid in oracle.valid_ids if sid not in profile]
        if missing:
            raise ValueError(f"profile {profile.label!r} lacks syllogisms {missing}")
        values = np.concatenate([profile[sid].probs[:8] for sid in oracle.valid_ids])
        return cls(values, profile.label)


def _valid_mask(oracle: Oracle) -> np.ndarray:
    return np.array([[code in oracle.valid(sid) for code in QUANTIFIED_CODES]
                     for sid in oracle.valid_ids])


def vector_accuracy(v: BehaviorVector, oracle: Oracle | None = None) -> float:
    """Mean probability placed on valid conclusions across the blocks."""
    oracle = oracle or default_oracle()
    return float((v.blocks * _valid_mask(oracle)).sum(axis=1).mean())


def zero_correct_control(v: BehaviorVector, oracle: Oracle | None = None) -> BehaviorVector:
    """Remove the mass on valid conclusions and rescale what is left of each
    block back to the block's original total; blocks with nothing left stay
    all zero."""
    oracle = oracle or default_oracle()
    blocks = v.blocks.copy()
    mass = blocks.sum(axis=1)
    blocks[_valid_mask(oracle)] = 0.0
    rest = blocks.sum(axis=1)
    scale = np.divide(mass, rest, out=np.zeros_like(mass), where=rest > 0)
    blocks *= scale[:, None]
    return BehaviorVector(blocks.ravel(), v.label, v.params)


# sweep


@dataclass
class SweepResult:
    vectors: list[BehaviorVector]
    dropped: list[tuple[ReasonerParams, int]] = field(default_factory=list)
    work: dict[tuple[float, ...], int] = field(default_factory=dict)

    def params_matrix(self) -> np.ndarray:
        return np.array([v.params.as_tuple() for v in self.vectors])

    def matrix(self) -> np.ndarray:
        return np.stack([v.values for v in self.vectors])

    def dropped_histograms(self) -> dict[str, dict[str, int]]:
        """Counts of dropped points per value of each parameter."""
        out = {}
        for i, name in enumerate(PARAM_NAMES):
            counts = Counter(p.as_tuple()[i] for p, _ in self.dropped)
            out[name] = {repr(k): c for k, c in sorted(counts.items())}
        return out


def _simulate_point(args):
    gi, p, ids, n_runs, seed, work_cap, k, sets, kernel = args
    values = np.zeros((len(ids), 8))
    work = 0
    for si, sid in enumerate(ids):
        codes, w = simulate(sid, p, n_runs, np.random.default_rng([seed, gi, si]), k, sets, kernel)
        work += w
        if work_cap is not None and work > work_cap:
            return gi, None, work
        counts = np.bincount(codes, minlength=len(RESPONSE_CODES))
        values[si] = counts[:8] / n_runs
    return gi, values.ravel(), work


def sweep(grid: ParameterGrid, n_runs: int = 100, seed: int = 0, work_cap: int | None = None,
          k: int = DEFAULT_K, sets: IndividualSets | None = None, oracle: Oracle | None = None,
          jobs: int = 1, kernel: str | None = None) -> SweepResult:
    """Simulate every grid point on the valid syllogisms.

    Each (point, syllogism) pair draws from its own generator seeded with
    ``[seed, point index, syllogism index]``, so results do not depend on
    ``jobs``.  A point whose accumulated work (entities built plus mutation
    attempts) exceeds ``work_cap`` is dropped and logged.
    """
    oracle = oracle or default_oracle()
    ids = oracle.valid_ids
    points = grid.points()
    tasks = [(gi, p, ids, n_runs, seed, work_cap, k, sets, kernel) for gi, p in enumerate(points)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_simulate_point, tasks, chunksize=8))
    else:
        results = [_simulate_point(t) for t in tasks]
    result = SweepResult([])
    for gi, values, work in sorted(results, key=lambda r: r[0]):
        p = points[gi]
        result.work[p.as_tuple()] = work
        if values is None:
            log.info("dropped grid point %s: work %d exceeds cap %s", p.as_tuple(), work, work_cap)
            result.dropped.append((p, work))
            continue
        result.vectors.append(BehaviorVector(values, f"grid{gi}", p))
    if result.dropped:
        log.warning("dropped %d of %d grid points over the work cap", len(result.dropped), len(points))
    return result


def write_sweep_csv(result: SweepResult | Sequence[BehaviorVector], path: str | Path,
                    oracle: Oracle | None = None) -> None:
    vectors = result.vectors if isinstance(result, SweepResult) else list(result)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(PARAM_NAMES) + vector_columns(oracle))
        for v in vectors:
            writer.writerow([repr(x) for x in v.params.as_tuple()] + [repr(float(x)) for x in v.values])


def read_sweep_csv(path: str | Path) -> list[BehaviorVector]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header[:4]) != PARAM_NAMES:
            raise ValueError(f"{path}: sweep CSV must start with columns {PARAM_NAMES}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            p = ReasonerParams(*(float(x) for x in row[:4]))
            out.append(BehaviorVector(np.array(row[4:], dtype=float), f"grid{lineno - 2}", p))
    return out


# PCA


@dataclass
class PCASpace:
    mean: np.ndarray
    components: np.ndarray          # (k, d), orthonormal rows
    explained_variance: np.ndarray  # eigenvalues of the covariance
    explained_variance_ratio: np.ndarray
    correlations: dict[str, list[float]] = field(default_factory=dict)
    n_samples: int = 0

    @property
    def k(self) -> int:
        return self.components.shape[0]

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.atleast_2d(x) - self.mean) @ self.components.T

    def reconstruct(self, coords: np.ndarray) -> np.ndarray:
        return self.mean + np.asarray(coords) @ self.components

    def to_dict(self) -> dict:
        def clean(vals):
            return [None if not math.isfinite(v) else float(v) for v in vals]
        return {
            "n_samples": self.n_samples,
            "k": self.k,
            "mean": [float(x) for x in self.mean],
            "components": [[float(x) for x in row] for row in self.components],
            "explained_variance": [float(x) for x in self.explained_variance],
            "explained_variance_ratio": [float(x) for x in self.explained_variance_ratio],
            "correlations": {name: clean(v) for name, v in self.correlations.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PCASpace":
        return cls(
            np.array(data["mean"]), np.array(data["components"]),
            np.array(data["explained_variance"]), np.array(data["explained_variance_ratio"]),
            {k: [math.nan if x is None else x for x in v] for k, v in data["correlations"].items()},
            data.get("n_samples", 0),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "PCASpace":
        return cls.from_dict(json.loads(Path(path).read_text()))


def fit_pca(vectors: Sequence[BehaviorVector] | np.ndarray, k: int = 4,
            covariates: dict[str, Iterable[float]] | None = None) -> PCASpace:
    """Exact PCA by eigendecomposition of the sample covariance.

    ``covariates`` (e.g. the four parameters and accuracy, one value per
    vector) are correlated with each component's scores.  Each component's
    sign is chosen so that its strongest correlation among the parameter
    covariates is positive; without parameters the largest loading is made
    positive.
    """
    x = np.stack([v.values for v in vectors]) if not isinstance(vectors, np.ndarray) else vectors
    n, d = x.shape
    if n < k + 1:
        raise ValueError(f"need at least {k + 1} vectors for {k} components, got {n}")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (n - 1)
    total = float(np.trace(cov))
    if total <= 1e-15:
        raise DegenerateDataError("behavior vectors have zero variance")
    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1][:k]
    evals = np.clip(evals[order], 0.0, None)
    comps = evecs[:, order].T.copy()

    scores = centered @ comps.T
    covariates = {name: np.asarray(list(vals), dtype=float) for name, vals in (covariates or {}).items()}
    for name, vals in covariates.items():
        if vals.shape != (n,):
            raise ValueError(f"covariate {name!r} needs {n} values")
    param_names = [p for p in PARAM_NAMES if p in covariates]
    for j in range(k):
        if param_names:
            corrs = [_pearson(scores[:, j], covariates[p]) for p in param_names]
            finite = [abs(c) if math.isfinite(c) else -1.0 for c in corrs]
            sign = 1.0 if corrs[int(np.argmax(finite))] >= 0 or max(finite) < 0 else -1.0
        else:
            sign = 1.0 if comps[j, np.argmax(np.abs(comps[j]))] >= 0 else -1.0
        comps[j] *= sign
        scores[:, j] *= sign
    correlations = {name: [_pearson(scores[:, j], vals) for j in range(k)]
                    for name, vals in covariates.items()}
    return PCASpace(mean, comps, evals, evals / total, correlations, n)


def fit_sweep_pca(vectors: Sequence[BehaviorVector], k: int = 4, oracle: Oracle | None = None,
                  accuracy: Iterable[float] | None = None) -> PCASpace:
    """PCA of sweep vectors with correlations against the four parameters
    and accuracy (computed from the vectors unless given)."""
    oracle = oracle or default_oracle()
    covariates = {name: [v.params.as_tuple()[i] for v in vectors] for i, name in enumerate(PARAM_NAMES)}
    covariates["accuracy"] = list(accuracy) if accuracy is not None else \
        [vector_accuracy(v, oracle) for v in vectors]
    return fit_pca(vectors, k, covariates)


def project(space: PCASpace, v: BehaviorVector | np.ndarray) -> list[float]:
    values = v.values if isinstance(v, BehaviorVector) else np.asarray(v, dtype=float)
    return [float(c) for c in space.transform(values)[0]]


def in_hull_box(space: PCASpace, coords: Sequence[float], reference: np.ndarray) -> bool:
    """Whether ``coords`` fall inside the per-component range of the
    reference scores; a coarse extrapolation flag."""
    lo, hi = reference.min(axis=0), reference.max(axis=0)
    c = np.asarray(coords)
    return bool(np.all(c >= lo) and np.all(c <= hi))
