"""Comparative statistics over reasoner profiles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .core import RESPONSE_CODES, RESPONSE_INDEX, SYLLOGISM_IDS, Syllogism
from .oracle import Oracle, default_oracle
from .profiles import ReasonerProfile, ResponseDistribution

SCOPES = ("valid27", "nvc37", "all64")
NVC_INDEX = RESPONSE_INDEX["NVC"]
AC_INDICES = [i for i, c in enumerate(RESPONSE_CODES) if c.endswith("ac")]
CA_INDICES = [i for i, c in enumerate(RESPONSE_CODES) if c.endswith("ca")]


def scope_ids(scope: str, oracle: Oracle | None = None) -> list[str]:
    oracle = oracle or default_oracle()
    if scope == "valid27":
        return list(oracle.valid_ids)
    if scope == "nvc37":
        return list(oracle.nvc_ids)
    if scope == "all64":
        return list(SYLLOGISM_IDS)
    raise ValueError(f"unknown scope {scope!r}; expected one of {SCOPES}")


def _correct_mask(sid: str, oracle: Oracle) -> np.ndarray:
    mask = np.zeros(len(RESPONSE_CODES), dtype=bool)
    for code in oracle.valid(sid):
        mask[RESPONSE_INDEX[code]] = True
    return mask


@dataclass
class ScopedValues:
    per_syllogism: dict[str, float]
    missing: list[str] = field(default_factory=list)

    @property
    def mean(self) -> float:
        if not self.per_syllogism:
            return math.nan
        return float(np.mean(list(self.per_syllogism.values())))


def accuracy(profile: ReasonerProfile, oracle: Oracle | None = None, scope: str = "valid27") -> ScopedValues:
    """Probability mass on correct responses per syllogism.  NVC is the
    correct response exactly for the syllogisms without a valid conclusion."""
    oracle = oracle or default_oracle()
    out, missing = {}, []
    for sid in scope_ids(scope, oracle):
        if sid not in profile:
            missing.append(sid)
            continue
        out[sid] = float(profile[sid].probs[_correct_mask(sid, oracle)].sum())
    return ScopedValues(out, missing)


def random_baseline(oracle: Oracle | None = None, scope: str = "all64") -> dict[str, float]:
    oracle = oracle or default_oracle()
    return {sid: len(oracle.valid(sid)) / len(RESPONSE_CODES) for sid in scope_ids(scope, oracle)}


def oracle_uniform_profile(oracle: Oracle | None = None, label: str = "oracle") -> ReasonerProfile:
    """A reasoner spreading its mass evenly over the valid responses."""
    oracle = oracle or default_oracle()
    dists = []
    for sid in SYLLOGISM_IDS:
        mask = _correct_mask(sid, oracle).astype(float)
        dists.append(ResponseDistribution(sid, mask / mask.sum(), 1.0))
    return ReasonerProfile.from_distributions(label, dists)


def nvc_rate(profile: ReasonerProfile, oracle: Oracle | None = None) -> tuple[float, float]:
    """Mean NVC probability on the NVC-only syllogisms and on the valid ones."""
    oracle = oracle or default_oracle()
    rates = []
    for scope in ("nvc37", "valid27"):
        vals = [profile[sid].probs[NVC_INDEX] for sid in scope_ids(scope, oracle) if sid in profile]
        rates.append(float(np.mean(vals)) if vals else math.nan)
    return rates[0], rates[1]


def entropy(dist: ResponseDistribution | np.ndarray) -> float:
    """Shannon entropy in nats, with 0 log 0 = 0."""
    p = dist.probs if isinstance(dist, ResponseDistribution) else np.asarray(dist, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


# correlation


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    # rounding noise on a constant input is not variance
    if np.ptp(x) <= 1e-12 or np.ptp(y) <= 1e-12:
        return math.nan
    x = x - x.mean()
    y = y - y.mean()
    denom = math.sqrt(float(x @ x) * float(y @ y))
    return float(x @ y) / denom if denom > 0 else math.nan


def _corr(x: np.ndarray, y: np.ndarray, method: str) -> float:
    if method == "spearman":
        x, y = rankdata(x), rankdata(y)
    elif method != "pearson":
        raise ValueError(f"unknown correlation method {method!r}")
    return _pearson(np.asarray(x, float), np.asarray(y, float))


@dataclass
class Correlation:
    r: float
    n_syllogisms: int
    per_syllogism: dict[str, float]
    zero_variance: bool = False

    @property
    def undefined(self) -> list[str]:
        """Syllogisms whose block correlation is undefined (a constant side)."""
        return [sid for sid, r in self.per_syllogism.items() if math.isnan(r)]


def correlate(a: ReasonerProfile, b: ReasonerProfile, scope: str = "all64",
              oracle: Oracle | None = None, method: str = "pearson") -> Correlation:
    """Correlation over the concatenated 9-way probabilities of the shared
    syllogisms, plus a per-syllogism breakdown over each 9-entry block.
    Undefined correlations (a constant side) are NaN and flagged."""
    ids = [sid for sid in scope_ids(scope, oracle) if sid in a and sid in b]
    if len(ids) < 2:
        raise ValueError(f"need at least 2 shared syllogisms, got {len(ids)}")
    x = a.matrix(ids).ravel()
    y = b.matrix(ids).ravel()
    r = _corr(x, y, method)
    per = {sid: _corr(a[sid].probs, b[sid].probs, method) for sid in ids}
    return Correlation(r, len(ids), per, zero_variance=math.isnan(r))


# ordering


@dataclass
class OrderingEffect:
    p_ac: float
    p_ca: float

    @property
    def magnitude(self) -> float:
        return abs(self.p_ac - self.p_ca)


def _weights(d: ResponseDistribution) -> np.ndarray:
    return d.counts if d.n > 0 else d.probs


def ordering_effect(profile: ReasonerProfile, figures=(1, 2)) -> dict[int, OrderingEffect]:
    """Direction preference per figure.  Counts are pooled over the
    figure's syllogisms, then the ac/ca split is taken among the
    quantified responses (NVC ignored)."""
    out = {}
    for fig in figures:
        total = np.zeros(len(RESPONSE_CODES))
        for sid, d in profile.distributions.items():
            if Syllogism.parse(sid).figure == fig:
                total += _weights(d)
        ac, ca = total[AC_INDICES].sum(), total[CA_INDICES].sum()
        q = ac + ca
        out[fig] = OrderingEffect(ac / q, ca / q) if q > 0 else OrderingEffect(math.nan, math.nan)
    return out


# fallacies


@dataclass
class FallacyFit:
    rows: list[tuple[str, float, float, float]]  # (syllogism, accuracy, entropy, residual)
    slope: float
    intercept: float
    degenerate: bool = False

    @property
    def residuals(self) -> dict[str, float]:
        return {sid: res for sid, _, _, res in self.rows}

    def ranked(self) -> list[tuple[str, float]]:
        """Syllogisms from most negative residual up."""
        return sorted(self.residuals.items(), key=lambda kv: (kv[1], SYLLOGISM_IDS.index(kv[0])))


def ols(x, y) -> tuple[float, float, np.ndarray, bool]:
    """Least-squares line ``y = intercept + slope * x``; returns
    (slope, intercept, residuals, degenerate).  A constant ``x`` gives a
    flat fit at the mean of ``y`` and is flagged degenerate."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if x.size < 3:
        raise ValueError("need at least 3 points for a fit")
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx <= 1e-15:
        return 0.0, float(y.mean()), y - y.mean(), True
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    return slope, intercept, y - (intercept + slope * x), False


def fallacy_residuals(profile: ReasonerProfile, oracle: Oracle | None = None) -> FallacyFit:
    """Regress accuracy on entropy over the valid syllogisms.  Strongly
    negative residuals mark confident but wrong answers."""
    oracle = oracle or default_oracle()
    acc = accuracy(profile, oracle, "valid27").per_syllogism
    ids = list(acc)
    ent = [entropy(profile[sid]) for sid in ids]
    slope, intercept, res, degenerate = ols(ent, [acc[sid] for sid in ids])
    rows = [(sid, acc[sid], e, float(r)) for sid, e, r in zip(ids, ent, res)]
    return FallacyFit(rows, slope, intercept, degenerate)


def residual_correlation(a: FallacyFit, b: FallacyFit, method: str = "pearson") -> float:
    ra, rb = a.residuals, b.residuals
    ids = [sid for sid in ra if sid in rb]
    if len(ids) < 2:
        raise ValueError("need at least 2 shared syllogisms")
    return _corr(np.array([ra[s] for s in ids]), np.array([rb[s] for s in ids]), method)
