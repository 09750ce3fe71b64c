"""Canonical and broad individual sets per premise mood.

The data file maps each mood to two lists of entity patterns over the
premise's subject ``S`` and object ``O``.  A pattern is a space separated
list of tokens: ``S``/``O`` mark a present property, ``-S``/``-O`` an
absent one, and a term that is not mentioned is left unspecified::

    {"A": {"canonical": ["S O"], "broad": ["S O", "-S O", "-S -O"]}, ...}

Every canonical pattern must also appear in the broad list.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from ..core import MOODS

PRESENT, UNSPECIFIED, ABSENT = 1, 0, -1

# Pattern table width; moods never need more patterns than this.
MAX_PATTERNS = 8


def parse_pattern(text: str) -> tuple[int, int]:
    values = {"S": UNSPECIFIED, "O": UNSPECIFIED}
    for token in text.split():
        neg = token.startswith("-")
        name = token[1:] if neg else token
        if name not in values:
            raise ValueError(f"unknown token {token!r} in pattern {text!r}")
        values[name] = ABSENT if neg else PRESENT
    if values["S"] == values["O"] == UNSPECIFIED:
        raise ValueError(f"pattern {text!r} specifies nothing")
    return values["S"], values["O"]


def pattern_consistent(mood: str, pat: tuple[int, int]) -> bool:
    """Whether a single individual can belong to a model of the premise
    (unspecified read as absent)."""
    s, o = pat[0] == PRESENT, pat[1] == PRESENT
    if mood == "A":
        return not s or o
    if mood == "E":
        return not (s and o)
    return True


def witnesses(mood: str, pat: tuple[int, int]) -> bool:
    """Whether a model holding just this individual satisfies the premise."""
    s, o = pat[0] == PRESENT, pat[1] == PRESENT
    if mood in ("A", "I"):
        return s and o
    return s and not o


@dataclass(frozen=True)
class IndividualSets:
    canonical: dict[str, tuple[tuple[int, int], ...]]
    broad: dict[str, tuple[tuple[int, int], ...]]

    def __post_init__(self):
        for mood in MOODS:
            canon, broad = self.canonical.get(mood), self.broad.get(mood)
            if not canon or not broad:
                raise ValueError(f"mood {mood} needs nonempty canonical and broad sets")
            if not set(canon) <= set(broad):
                raise ValueError(f"mood {mood}: canonical set must be a subset of the broad set")
            if len(broad) > MAX_PATTERNS:
                raise ValueError(f"mood {mood}: at most {MAX_PATTERNS} patterns allowed")
            bad = [p for p in broad if not pattern_consistent(mood, p)]
            if bad:
                raise ValueError(f"mood {mood}: patterns inconsistent with the premise: {bad}")
            # the first canonical pattern is inserted as a witness when a
            # premise fails, so on its own it has to make the premise true
            if not witnesses(mood, canon[0]):
                raise ValueError(f"mood {mood}: first canonical pattern {canon[0]} does not witness the premise")

    @classmethod
    def from_dict(cls, data: dict) -> "IndividualSets":
        canonical, broad = {}, {}
        for mood in MOODS:
            entry = data[mood]
            canonical[mood] = tuple(parse_pattern(p) for p in entry["canonical"])
            broad[mood] = tuple(parse_pattern(p) for p in entry["broad"])
        return cls(canonical, broad)

    @classmethod
    def load(cls, path: str | Path | None = None) -> "IndividualSets":
        if path is None:
            text = resources.files("syllab.data").joinpath("individual_sets.json").read_text()
        else:
            text = Path(path).read_text()
        return cls.from_dict(json.loads(text))

    def tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Dense ``(4, MAX_PATTERNS, 2)`` pattern tables and per-mood counts,
        canonical first, as consumed by the simulation kernels."""
        canon = np.zeros((4, MAX_PATTERNS, 2), dtype=np.int32)
        broad = np.zeros((4, MAX_PATTERNS, 2), dtype=np.int32)
        n_canon = np.zeros(4, dtype=np.int32)
        n_broad = np.zeros(4, dtype=np.int32)
        for k, mood in enumerate(MOODS):
            for i, p in enumerate(self.canonical[mood]):
                canon[k, i] = p
            for i, p in enumerate(self.broad[mood]):
                broad[k, i] = p
            n_canon[k] = len(self.canonical[mood])
            n_broad[k] = len(self.broad[mood])
        return canon, n_canon, broad, n_broad


_default: IndividualSets | None = None


def default_sets() -> IndividualSets:
    global _default
    if _default is None:
        _default = IndividualSets.load()
    return _default
