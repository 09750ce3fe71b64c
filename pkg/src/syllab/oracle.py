"""Ground-truth validity by exhaustive enumeration of Venn-region worlds.

Monadic premises over three predicates only see which of the eight regions
of the A/B/C Venn diagram are inhabited, so the 256 inhabitation patterns
cover every model up to equivalence.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .core import (
    MOODS,
    NVC,
    RESPONSE_INDEX,
    RESPONSES,
    Mood,
    Response,
    Syllogism,
    as_syllogism,
    enumerate_syllogisms,
)

N_REGIONS = 8
N_WORLDS = 1 << N_REGIONS


@dataclass(frozen=True)
class ValiditySemantics:
    """With existential import, universal statements need a nonempty
    subject and validity ranges only over worlds in which all three terms
    are inhabited, the traditional reading under which E and I statements
    convert.  Without it every world counts and universals may be vacuous."""

    existential_import: bool = True


DEFAULT_SEMANTICS = ValiditySemantics()


@dataclass(frozen=True)
class World:
    """Bit ``r`` of ``mask`` is set when region ``r`` is inhabited.

    Region ``r`` has predicate ``k`` (0=A, 1=B, 2=C) iff bit ``k`` of ``r`` is set.
    """

    mask: int

    def __post_init__(self):
        if not 0 <= self.mask < N_WORLDS:
            raise ValueError(f"world mask out of range: {self.mask}")

    def regions(self) -> list[int]:
        return [r for r in range(N_REGIONS) if self.mask >> r & 1]

    @classmethod
    def from_regions(cls, regions) -> "World":
        mask = 0
        for r in regions:
            mask |= 1 << r
        return cls(mask)


def region(a: bool, b: bool, c: bool) -> int:
    return int(a) | int(b) << 1 | int(c) << 2


def all_worlds() -> list[World]:
    return [World(m) for m in range(N_WORLDS)]


def terms_inhabited(w: World) -> bool:
    regions = w.regions()
    return all(any(r >> k & 1 for r in regions) for k in range(3))


def candidate_worlds(sem: ValiditySemantics = DEFAULT_SEMANTICS) -> list[World]:
    """The worlds validity quantifies over under ``sem``."""
    worlds = all_worlds()
    return [w for w in worlds if terms_inhabited(w)] if sem.existential_import else worlds


def premise_holds(mood: Mood | str, subj: int, obj: int, w: World,
                  sem: ValiditySemantics = DEFAULT_SEMANTICS) -> bool:
    if subj == obj:
        raise ValueError("subject and object must differ")
    mood = Mood(mood)
    subj_regions = [r for r in w.regions() if r >> subj & 1]
    both = [r for r in subj_regions if r >> obj & 1]
    if mood is Mood.A:
        ok = len(both) == len(subj_regions)
        return ok and (bool(subj_regions) or not sem.existential_import)
    if mood is Mood.E:
        return not both and (bool(subj_regions) or not sem.existential_import)
    if mood is Mood.I:
        return bool(both)
    return len(both) < len(subj_regions)


def conclusion_holds(r: Response, w: World, sem: ValiditySemantics = DEFAULT_SEMANTICS) -> bool:
    subj, obj = (0, 2) if r.direction == "ac" else (2, 0)
    return premise_holds(r.mood, subj, obj, w, sem)


def premises_hold(s: Syllogism, w: World, sem: ValiditySemantics = DEFAULT_SEMANTICS) -> bool:
    return all(premise_holds(m, sj, ob, w, sem) for m, sj, ob in s.premises)


@lru_cache(maxsize=None)
def _valid_codes(code: str, existential_import: bool) -> frozenset[str]:
    sem = ValiditySemantics(existential_import)
    s = Syllogism.parse(code)
    models = [w for w in candidate_worlds(sem) if premises_hold(s, w, sem)]
    valid = frozenset(
        r.code for r in RESPONSES
        if not r.is_nvc and all(conclusion_holds(r, w, sem) for w in models)
    )
    return valid or frozenset({NVC.code})


def valid_conclusions(s: Syllogism | str, sem: ValiditySemantics = DEFAULT_SEMANTICS) -> set[Response]:
    s = as_syllogism(s)
    return {Response.parse(c) for c in _valid_codes(s.id, sem.existential_import)}


def partition_counts(sem: ValiditySemantics = DEFAULT_SEMANTICS) -> tuple[int, int]:
    n_nvc = sum(1 for s in enumerate_syllogisms() if valid_conclusions(s, sem) == {NVC})
    return 64 - n_nvc, n_nvc


class Oracle:
    """Table of valid conclusions for all 64 syllogisms."""

    def __init__(self, sem: ValiditySemantics = DEFAULT_SEMANTICS):
        self.semantics = sem
        self.table: dict[str, frozenset[str]] = {
            s.id: _valid_codes(s.id, sem.existential_import) for s in enumerate_syllogisms()
        }

    def valid(self, syllogism_id: str) -> frozenset[str]:
        return self.table[syllogism_id]

    def is_nvc(self, syllogism_id: str) -> bool:
        return self.table[syllogism_id] == {"NVC"}

    @property
    def valid_ids(self) -> list[str]:
        """The syllogisms with a quantified valid conclusion, in enumeration order."""
        return [sid for sid, v in self.table.items() if v != {"NVC"}]

    @property
    def nvc_ids(self) -> list[str]:
        return [sid for sid, v in self.table.items() if v == {"NVC"}]

    def partition(self) -> tuple[int, int]:
        return len(self.valid_ids), len(self.nvc_ids)

    def rows(self) -> list[tuple[str, str]]:
        return [
            (sid, code)
            for sid, codes in self.table.items()
            for code in sorted(codes, key=RESPONSE_INDEX.__getitem__)
        ]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["syllogism_id", "response_code"])
            writer.writerows(self.rows())


@lru_cache(maxsize=2)
def default_oracle(existential_import: bool = True) -> Oracle:
    return Oracle(ValiditySemantics(existential_import))


__all__ = [
    "MOODS", "World", "ValiditySemantics", "Oracle", "premise_holds", "valid_conclusions",
    "partition_counts", "default_oracle", "all_worlds", "candidate_worlds", "terms_inhabited", "region",
]
