"""Run the standard metric battery over a set of reasoner profiles."""
from __future__ import annotations

import itertools
from typing import Mapping

from . import metrics
from .dataio import Analysis
from .oracle import Oracle, default_oracle
from .profiles import ReasonerProfile

ORACLE_LABEL = "oracle"


def analyze_profiles(profiles: Mapping[str, ReasonerProfile], oracle: Oracle | None = None,
                     include_oracle: bool = True, method: str = "pearson") -> list[Analysis]:
    """Accuracy, NVC rates, ordering effects, entropy fits and pairwise
    correlations.  The oracle-uniform reasoner joins the correlations unless
    ``include_oracle`` is false."""
    oracle = oracle or default_oracle()
    labels = list(profiles)
    acc = Analysis("accuracy")
    nvc = Analysis("nvc")
    order = Analysis("ordering")
    fall = Analysis("fallacies")
    for label in labels:
        p = profiles[label]
        means = {}
        for scope in metrics.SCOPES:
            res = metrics.accuracy(p, oracle, scope)
            means[scope] = res.mean
            if scope == "all64":
                acc.rows.extend((sid, "accuracy", v, label) for sid, v in res.per_syllogism.items())
                means["missing"] = res.missing
        acc.summary[label] = means

        on_nvc, on_valid = metrics.nvc_rate(p, oracle)
        nvc.summary[label] = {"nvc37": on_nvc, "valid27": on_valid}
        nvc.rows.extend((sid, "p_nvc", p[sid]["NVC"], label) for sid in p.ids())

        eff = metrics.ordering_effect(p, figures=(1, 2, 3, 4))
        order.summary[label] = {f"figure{f}": {"p_ac": e.p_ac, "p_ca": e.p_ca, "magnitude": e.magnitude}
                                for f, e in eff.items()}
        for f, e in eff.items():
            order.rows.extend([(f"figure{f}", "p_ac", e.p_ac, label), (f"figure{f}", "p_ca", e.p_ca, label),
                               (f"figure{f}", "magnitude", e.magnitude, label)])

        if len([sid for sid in oracle.valid_ids if sid in p]) >= 3:
            fit = metrics.fallacy_residuals(p, oracle)
            fall.summary[label] = {"slope": fit.slope, "intercept": fit.intercept, "degenerate": fit.degenerate,
                                   "most_negative": [sid for sid, _ in fit.ranked()[:3]]}
            for sid, a, e, r in fit.rows:
                fall.rows.extend([(sid, "entropy", e, label), (sid, "residual", r, label)])

    acc.summary["random_baseline"] = {
        scope: sum(metrics.random_baseline(oracle, scope).values()) / len(metrics.scope_ids(scope, oracle))
        for scope in metrics.SCOPES}
    for sid, v in metrics.random_baseline(oracle).items():
        acc.rows.append((sid, "random_baseline", v, "random"))

    corr = Analysis("correlation")
    pool = dict(profiles)
    if include_oracle and ORACLE_LABEL not in pool:
        pool[ORACLE_LABEL] = metrics.oracle_uniform_profile(oracle, ORACLE_LABEL)
    for a, b in itertools.combinations(pool, 2):
        try:
            res = metrics.correlate(pool[a], pool[b], "all64", oracle, method)
        except ValueError:
            continue
        key = f"{a}~{b}"
        corr.summary[key] = {"r": res.r, "n_syllogisms": res.n_syllogisms, "zero_variance": res.zero_variance}
        corr.rows.extend((sid, "r", r, key) for sid, r in res.per_syllogism.items())

    resid = Analysis("residual_correlation")
    fits = {label: metrics.fallacy_residuals(profiles[label], oracle) for label in labels
            if label in fall.summary}
    for a, b in itertools.combinations(fits, 2):
        resid.summary[f"{a}~{b}"] = metrics.residual_correlation(fits[a], fits[b], method)
    return [acc, nvc, order, fall, corr, resid]
