"""Response distributions and reasoner profiles."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .core import RESPONSE_CODES, RESPONSE_INDEX, SYLLOGISM_IDS

N_RESPONSES = len(RESPONSE_CODES)


@dataclass(frozen=True)
class ResponseDistribution:
    """Probabilities over the nine responses in ``RESPONSE_CODES`` order."""

    syllogism_id: str
    probs: np.ndarray
    n: float = 0.0

    def __post_init__(self):
        if self.syllogism_id not in SYLLOGISM_IDS:
            raise ValueError(f"unknown syllogism id {self.syllogism_id!r}")
        probs = np.array(self.probs, dtype=float)
        if probs.shape != (N_RESPONSES,):
            raise ValueError(f"expected {N_RESPONSES} probabilities, got shape {probs.shape}")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"not a probability vector: {probs}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_counts(cls, syllogism_id: str, counts) -> "ResponseDistribution":
        counts = np.asarray(counts, dtype=float)
        total = counts.sum()
        if total <= 0:
            raise ValueError(f"{syllogism_id}: no responses to normalize")
        return cls(syllogism_id, counts / total, float(total))

    @classmethod
    def point_mass(cls, syllogism_id: str, code: str, n: float = 1.0) -> "ResponseDistribution":
        probs = np.zeros(N_RESPONSES)
        probs[RESPONSE_INDEX[code]] = 1.0
        return cls(syllogism_id, probs, n)

    def __getitem__(self, code: str) -> float:
        return float(self.probs[RESPONSE_INDEX[code]])

    @property
    def counts(self) -> np.ndarray:
        return self.probs * self.n

    @property
    def mode(self) -> str:
        """Most probable response; ties go to the earliest code."""
        return RESPONSE_CODES[int(np.argmax(self.probs))]

    def as_dict(self) -> dict[str, float]:
        return {c: float(p) for c, p in zip(RESPONSE_CODES, self.probs)}


@dataclass
class ReasonerProfile:
    label: str
    distributions: dict[str, ResponseDistribution] = field(default_factory=dict)
    missing: list[str] = field(default_factory=list)

    def __post_init__(self):
        for sid, dist in self.distributions.items():
            if sid != dist.syllogism_id:
                raise ValueError(f"profile key {sid} holds distribution for {dist.syllogism_id}")

    @classmethod
    def from_distributions(cls, label: str, dists: Iterable[ResponseDistribution]) -> "ReasonerProfile":
        out: dict[str, ResponseDistribution] = {}
        for d in dists:
            if d.syllogism_id in out:
                raise ValueError(f"duplicate distribution for {d.syllogism_id}")
            out[d.syllogism_id] = d
        return cls(label, dict(sorted(out.items(), key=lambda kv: SYLLOGISM_IDS.index(kv[0]))))

    @classmethod
    def from_probs(cls, label: str, probs: Mapping[str, Iterable[float]], n: float = 1.0) -> "ReasonerProfile":
        return cls.from_distributions(label, (ResponseDistribution(sid, np.asarray(p, float), n)
                                              for sid, p in probs.items()))

    def __contains__(self, sid: str) -> bool:
        return sid in self.distributions

    def __getitem__(self, sid: str) -> ResponseDistribution:
        return self.distributions[sid]

    def __len__(self) -> int:
        return len(self.distributions)

    def ids(self) -> list[str]:
        return list(self.distributions)

    def matrix(self, ids: Iterable[str]) -> np.ndarray:
        return np.stack([self.distributions[sid].probs for sid in ids])
