"""Generative, multiple-choice and binary elicitation."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import softmax

from ..core import QUANTIFIED_CODES, RESPONSE_CODES, RESPONSE_INDEX, ContentTriple, as_codes, parse_response, \
    render_response
from ..dataio import LMResponseRecord
from ..profiles import ResponseDistribution
from .clients import CompletionClient, HarnessError, SamplingConfig
from .prompts import BINARY_LABELS, PromptSpec, build_binary_prompt, build_mc_prompt, build_prompt, item_seed

METHODS = ("generative", "multiple_choice", "binary")


@dataclass
class ItemResult:
    syllogism_id: str
    triple_index: int
    distribution: ResponseDistribution | None
    answer: str | None
    records: list[LMResponseRecord] = field(default_factory=list)
    scores: dict[str, float] = field(default_factory=dict)

    @property
    def missing(self) -> bool:
        return self.distribution is None


def _argmax_code(weights: np.ndarray) -> str:
    # np.argmax returns the first maximum, so ties go to the earlier code
    return RESPONSE_CODES[int(np.argmax(weights))]


def run_generative(spec: PromptSpec, config: SamplingConfig, client: CompletionClient,
                   run_id: str = "run", triple_index: int = 0) -> ItemResult:
    """Sample completions, keep those naming at least one conclusion and
    spread each kept sample evenly over the conclusions it names."""
    prompt = build_prompt(spec)
    texts = client.sample(prompt, config)
    if len(texts) != config.n_samples:
        raise HarnessError(f"client returned {len(texts)} samples, expected {config.n_samples}")
    records = []
    weights = np.zeros(len(RESPONSE_CODES))
    for i, text in enumerate(texts):
        parsed = as_codes(parse_response(text, spec.triple))
        records.append(LMResponseRecord(run_id, spec.syllogism.id, triple_index, i, text, parsed, bool(parsed)))
        for code in parsed:
            weights[RESPONSE_INDEX[code]] += 1.0 / len(parsed)
    if weights.sum() == 0:
        return ItemResult(spec.syllogism.id, triple_index, None, None, records)
    dist = ResponseDistribution.from_counts(spec.syllogism.id, weights)
    return ItemResult(spec.syllogism.id, triple_index, dist, _argmax_code(weights), records)


def _check_scores(values: np.ndarray, what: str) -> None:
    if np.any(np.isnan(values)) or np.any(values == math.inf) or np.all(values == -math.inf):
        raise HarnessError(f"non-finite {what} scores: {values.tolist()}")


def mutual_information(client: CompletionClient, prompt: str, continuation: str) -> float:
    """``log P(c | prompt) - log P(c | "")``."""
    return client.score(prompt, continuation) - client.score("", continuation)


def run_multiple_choice(spec: PromptSpec, client: CompletionClient, triple_index: int = 0) -> ItemResult:
    """Score all nine conclusions after the multiple-choice cue and take the
    softmax of their mutual-information scores."""
    prompt = build_mc_prompt(spec)
    mi = np.array([mutual_information(client, prompt, render_response(c, spec.triple)) for c in RESPONSE_CODES])
    _check_scores(mi, "mutual-information")
    probs = softmax(mi)
    dist = ResponseDistribution(spec.syllogism.id, probs / probs.sum(), 1.0)
    return ItemResult(spec.syllogism.id, triple_index, dist, _argmax_code(probs),
                      scores=dict(zip(RESPONSE_CODES, mi.tolist())))


def p_valid(client: CompletionClient, prompt: str) -> float:
    """Two-way softmax of the mutual-information scores of the labels."""
    mi = np.array([mutual_information(client, prompt, label) for label in BINARY_LABELS])
    _check_scores(mi, "label")
    return float(softmax(mi)[0])


def binary_decision(pv: dict[str, float], threshold: float = 0.5) -> tuple[np.ndarray, str]:
    """Normalize per-conclusion P(valid) into a distribution over the eight
    quantified responses; the answer is NVC unless some P(valid) exceeds
    ``threshold``."""
    probs = np.zeros(len(RESPONSE_CODES))
    for code, p in pv.items():
        probs[RESPONSE_INDEX[code]] = p
    total = probs.sum()
    if total <= 0:
        probs[RESPONSE_INDEX["NVC"]] = 1.0
    else:
        probs /= total
    best = max(pv.values())
    answer = "NVC" if best <= threshold else _argmax_code(probs)
    return probs, answer


def run_binary(spec: PromptSpec, client: CompletionClient, threshold: float = 0.5,
               triple_index: int = 0) -> ItemResult:
    pv = {code: p_valid(client, build_binary_prompt(spec, code)) for code in QUANTIFIED_CODES}
    probs, answer = binary_decision(pv, threshold)
    dist = ResponseDistribution(spec.syllogism.id, probs, 1.0)
    return ItemResult(spec.syllogism.id, triple_index, dist, answer, scores=pv)


def run_items(method: str, syllogisms: Sequence[str], triples: Sequence[ContentTriple],
              client: CompletionClient, variant: str = "stepxstep", config: SamplingConfig | None = None,
              seed: int = 0, run_id: str = "run", threshold: float = 0.5, jobs: int = 1) -> list[ItemResult]:
    """Run ``method`` on every (syllogism, triple) pair.  Each item's
    conclusion order is seeded from ``seed`` and the item; results come
    back in input order whatever ``jobs`` is."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    config = config or SamplingConfig()
    items = [(sid, ti) for sid in syllogisms for ti in range(len(triples))]

    def one(item):
        sid, ti = item
        spec = PromptSpec(sid, triples[ti], variant, item_seed(seed, sid, ti))
        if method == "generative":
            return run_generative(spec, config, client, run_id, ti)
        if method == "multiple_choice":
            res = run_multiple_choice(spec, client, ti)
        else:
            res = run_binary(spec, client, threshold, ti)
        text = render_response(res.answer, spec.triple)
        res.records = [LMResponseRecord(run_id, sid, ti, 0, text, [res.answer], True)]
        return res

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            return list(pool.map(one, items))
    return [one(item) for item in items]
