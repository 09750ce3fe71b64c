"""Stochastic mental-model reasoner.

A reasoner builds a small model of the premises, reads off the strongest
conclusion that holds in it, and with probability ``systm2`` searches for a
counterexample by mutating the model (ADD, MOVE, BREAK).  A falsified
conclusion is either weakened (probability ``weaken``) or abandoned for
"nothing follows".
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..core import RESPONSE_CODES, Response, Syllogism, as_syllogism
from ..profiles import ResponseDistribution
from . import _pure
from .backend import get_kernel
from .individuals import IndividualSets, default_sets, pattern_consistent

DEFAULT_K = 8
OPERATIONS = ("ADD", "MOVE", "BREAK")
TERMS = "ABC"


@dataclass(frozen=True)
class ReasonerParams:
    length: float = 3.0
    broad: float = 0.0
    systm2: float = 0.0
    weaken: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length >= 1.0):
            raise ValueError(f"length must be >= 1, got {self.length}")
        for name in ("broad", "systm2", "weaken"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return self.length, self.broad, self.systm2, self.weaken


Entity = tuple[int, int, int]


def format_entity(e: Entity) -> str:
    parts = []
    for name, v in zip(TERMS, e):
        if v == 1:
            parts.append(name)
        elif v == -1:
            parts.append("-" + name)
    return "[" + " ".join(parts) + "]"


def parse_entity(text: str) -> Entity:
    values = [0, 0, 0]
    for token in text.strip("[] ").split():
        neg = token.startswith("-")
        values[TERMS.index(token.lstrip("-"))] = -1 if neg else 1
    if values == [0, 0, 0]:
        raise ValueError(f"entity {text!r} specifies nothing")
    return tuple(values)


@dataclass(frozen=True)
class MentalModel:
    entities: tuple[Entity, ...]
    provenance: tuple[int, ...] = field(default=())

    def __post_init__(self):
        ents = tuple(tuple(int(v) for v in e) for e in self.entities)
        if not ents:
            raise ValueError("a mental model needs at least one entity")
        if any(e == (0, 0, 0) for e in ents):
            raise ValueError("entities must specify at least one property")
        prov = tuple(self.provenance) or (2,) * len(ents)
        if len(prov) != len(ents):
            raise ValueError("provenance must label every entity")
        object.__setattr__(self, "entities", ents)
        object.__setattr__(self, "provenance", prov)

    @classmethod
    def parse(cls, *entities: str) -> "MentalModel":
        return cls(tuple(parse_entity(e) for e in entities))

    def __len__(self) -> int:
        return len(self.entities)

    def __str__(self) -> str:
        return " ".join(format_entity(e) for e in self.entities)

    def as_lists(self) -> list[list[int]]:
        return [list(e) for e in self.entities]


@dataclass(frozen=True)
class _Setup:
    prem: tuple[tuple[int, int, int], tuple[int, int, int]]
    figure: int
    add_pats: tuple[Entity, ...]


_MOOD_INDEX = {"A": 0, "E": 1, "I": 2, "O": 3}


@lru_cache(maxsize=None)
def _setup(code: str) -> _Setup:
    s = Syllogism.parse(code)
    prem = tuple((_MOOD_INDEX[m.value], sj, ob) for m, sj, ob in s.premises)
    add = []
    for e in itertools.product((1, -1), repeat=3):
        if all(pattern_consistent(m.value, (e[sj], e[ob])) for m, sj, ob in s.premises):
            add.append(e)
    return _Setup(prem, s.figure, tuple(add))


@lru_cache(maxsize=256)
def size_cdf(length: float) -> tuple[float, ...]:
    """CDF of a Poisson(length) size conditioned on 2 <= n <= MAX_BUILD,
    indexed from n = 2."""
    ks = range(2, _pure.MAX_BUILD + 1)
    logp = [k * math.log(length) - length - math.lgamma(k + 1) for k in ks]
    top = max(logp)
    w = [math.exp(v - top) for v in logp]
    total = sum(w)
    cdf = list(itertools.accumulate(x / total for x in w))
    cdf[-1] = 1.0
    return tuple(cdf)


def _tables(sets: IndividualSets | None):
    return (sets or default_sets()).tables()


def _code_to_response(code: int) -> Response:
    return Response.parse(RESPONSE_CODES[code])


def _response_code(r: Response | str) -> int:
    r = Response.parse(r) if isinstance(r, str) else r
    return RESPONSE_CODES.index(r.code)


def build_model(s: Syllogism | str, p: ReasonerParams, rng: np.random.Generator,
                sets: IndividualSets | None = None) -> MentalModel:
    st = _setup(as_syllogism(s).id)
    canon, n_canon, broad, n_broad = (t.tolist() for t in _tables(sets))
    u = rng.random(_pure.BUILD_DRAWS).tolist()
    ents, prov = _pure.build(st.prem, p.broad, size_cdf(p.length), canon, n_canon, broad, n_broad, u)
    return MentalModel(tuple(tuple(e) for e in ents), tuple(prov))


def holds_in(m: MentalModel, r: Response | str) -> bool:
    """Whether a quantified conclusion is true in ``m`` read as a closed world."""
    return _pure.conclusion_holds(m.as_lists(), _response_code(r))


def premises_hold_in(m: MentalModel, s: Syllogism | str) -> bool:
    return _pure.premises_hold(m.as_lists(), _setup(as_syllogism(s).id).prem)


def scan_conclusion(m: MentalModel, s: Syllogism | str, tie: float | None = None,
                    rng: np.random.Generator | None = None) -> Response:
    """Strongest conclusion permitted by the premise moods that holds in
    ``m``.  ``tie`` (a uniform draw) settles the direction for figures 3
    and 4 when both directions hold; drawn from ``rng`` when omitted."""
    st = _setup(as_syllogism(s).id)
    if tie is None:
        tie = rng.random() if rng is not None else 0.0
    return _code_to_response(_pure.scan(m.as_lists(), st.prem, st.figure, tie))


def mutate(m: MentalModel, s: Syllogism | str, op: str, draws) -> MentalModel | None:
    """Apply one mutation (``ADD``/``MOVE``/``BREAK``) steered by three
    uniform draws; None when the operation does not apply."""
    st = _setup(as_syllogism(s).id)
    new = _pure.mutate(m.as_lists(), OPERATIONS.index(op), *draws, [list(e) for e in st.add_pats])
    if new is None:
        return None
    return MentalModel(tuple(tuple(e) for e in new))


def search_counterexample(m: MentalModel, s: Syllogism | str, candidate: Response | str,
                          rng: np.random.Generator, k: int = DEFAULT_K) -> MentalModel | None:
    cand = _response_code(candidate)
    if cand == 8:
        raise ValueError("cannot search for a counterexample to NVC")
    st = _setup(as_syllogism(s).id)
    u = rng.random(_pure.search_draws(k)).tolist()
    cx, _ = _pure.search(m.as_lists(), st.prem, cand, k, [list(e) for e in st.add_pats], u)
    if cx is None:
        return None
    return MentalModel(tuple(tuple(e) for e in cx))


def respond(s: Syllogism | str, p: ReasonerParams, rng: np.random.Generator,
            k: int = DEFAULT_K, sets: IndividualSets | None = None,
            trace: list | None = None) -> Response:
    """One simulated answer.  Counterexample models found along the way are
    appended to ``trace`` when given."""
    st = _setup(as_syllogism(s).id)
    canon, n_canon, broad, n_broad = (t.tolist() for t in _tables(sets))
    ub = rng.random(_pure.BUILD_DRAWS).tolist()
    us = rng.random(_pure.search_draws(k)).tolist()
    raw: list = []
    code, _ = _pure.respond_one(st.prem, st.figure, p.broad, p.systm2, p.weaken, k,
                                size_cdf(p.length), canon, n_canon, broad, n_broad,
                                [list(e) for e in st.add_pats], ub, us, raw)
    if trace is not None:
        trace.extend(MentalModel(tuple(tuple(e) for e in cx)) for cx in raw)
    return _code_to_response(code)


def simulate(s: Syllogism | str, p: ReasonerParams, n_runs: int, rng: np.random.Generator,
             k: int = DEFAULT_K, sets: IndividualSets | None = None,
             kernel: str | None = None) -> tuple[np.ndarray, int]:
    """Response codes (indices into ``RESPONSE_CODES``) of ``n_runs``
    independent runs, and the work spent (entities built + mutation attempts).

    All build draws are taken from ``rng`` before any search draws.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    if k < 0:
        raise ValueError("k must be >= 0")
    st = _setup(as_syllogism(s).id)
    canon, n_canon, broad, n_broad = _tables(sets)
    build_u = rng.random((n_runs, _pure.BUILD_DRAWS))
    search_u = rng.random((n_runs, _pure.search_draws(k)))
    fn = get_kernel(kernel)
    codes, work = fn(np.array(st.prem, dtype=np.int32), st.figure, p.broad, p.systm2, p.weaken, k,
                     np.array(size_cdf(p.length)), canon, n_canon, broad, n_broad,
                     np.array(st.add_pats, dtype=np.int32), build_u, search_u)
    return codes, work


def response_distribution(s: Syllogism | str, p: ReasonerParams, n_runs: int, seed,
                          k: int = DEFAULT_K, sets: IndividualSets | None = None,
                          kernel: str | None = None) -> ResponseDistribution:
    s = as_syllogism(s)
    codes, _ = simulate(s, p, n_runs, np.random.default_rng(seed), k, sets, kernel)
    counts = np.bincount(codes, minlength=len(RESPONSE_CODES))
    return ResponseDistribution.from_counts(s.id, counts)
