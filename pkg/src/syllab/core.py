"""Syllogisms, responses, rendering and response parsing.

A syllogism is identified by a three character code: the moods of the two
premises followed by the figure digit, e.g. ``"EA1"``.  Responses use the
codes ``"Aac"``, ``"Oca"``, ... plus ``"NVC"`` (nothing follows).
"""
from __future__ import annotations

import csv
import enum
import io
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

MOODS = ("A", "E", "I", "O")
FIGURES = (1, 2, 3, 4)
DIRECTIONS = ("ac", "ca")

NOTHING_FOLLOWS = "nothing follows"


class Mood(str, enum.Enum):
    A = "A"
    E = "E"
    I = "I"  # noqa: E741
    O = "O"  # noqa: E741

    @property
    def template(self) -> str:
        return _TEMPLATES[self.value]

    @property
    def universal(self) -> bool:
        return self.value in ("A", "E")

    @property
    def negative(self) -> bool:
        return self.value in ("E", "O")


_TEMPLATES = {
    "A": "All {x} are {y}",
    "E": "No {x} are {y}",
    "I": "Some {x} are {y}",
    "O": "Some {x} are not {y}",
}

# Term indices: 0 = A, 1 = B (middle), 2 = C.
# Each figure fixes the (subject, object) order of both premises.
FIGURE_TERMS: dict[int, tuple[tuple[int, int], tuple[int, int]]] = {
    1: ((0, 1), (1, 2)),
    2: ((1, 0), (2, 1)),
    3: ((0, 1), (2, 1)),
    4: ((1, 0), (1, 2)),
}


@dataclass(frozen=True, order=True)
class Syllogism:
    mood1: Mood
    mood2: Mood
    figure: int

    def __post_init__(self):
        object.__setattr__(self, "mood1", Mood(self.mood1))
        object.__setattr__(self, "mood2", Mood(self.mood2))
        if self.figure not in FIGURES:
            raise ValueError(f"figure must be one of 1..4, got {self.figure!r}")

    @property
    def id(self) -> str:
        return f"{self.mood1.value}{self.mood2.value}{self.figure}"

    @classmethod
    def parse(cls, code: str) -> "Syllogism":
        code = code.strip()
        if len(code) != 3 or code[0] not in MOODS or code[1] not in MOODS or code[2] not in "1234":
            raise ValueError(f"invalid syllogism id {code!r}")
        return cls(Mood(code[0]), Mood(code[1]), int(code[2]))

    @property
    def premises(self) -> tuple[tuple[Mood, int, int], tuple[Mood, int, int]]:
        """``((mood, subject_term, object_term), ...)`` for both premises."""
        (s1, o1), (s2, o2) = FIGURE_TERMS[self.figure]
        return (self.mood1, s1, o1), (self.mood2, s2, o2)

    def __str__(self) -> str:
        return self.id


@dataclass(frozen=True)
class Response:
    """A conclusion: ``mood`` + ``direction``, or NVC when ``mood`` is None."""

    mood: Mood | None = None
    direction: str | None = None

    def __post_init__(self):
        if self.mood is None:
            if self.direction is not None:
                raise ValueError("NVC has no direction")
            return
        object.__setattr__(self, "mood", Mood(self.mood))
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be 'ac' or 'ca', got {self.direction!r}")

    @property
    def is_nvc(self) -> bool:
        return self.mood is None

    @property
    def code(self) -> str:
        if self.mood is None:
            return "NVC"
        return f"{self.mood.value}{self.direction}"

    @classmethod
    def parse(cls, code: str) -> "Response":
        code = code.strip()
        if code == "NVC":
            return cls()
        if len(code) == 3 and code[0] in MOODS and code[1:] in DIRECTIONS:
            return cls(Mood(code[0]), code[1:])
        raise ValueError(f"invalid response code {code!r}")

    def __str__(self) -> str:
        return self.code


NVC = Response()

# Fixed response order used for every 9-way probability vector.
RESPONSE_CODES: tuple[str, ...] = tuple(
    f"{m}{d}" for m in MOODS for d in DIRECTIONS
) + ("NVC",)
RESPONSES: tuple[Response, ...] = tuple(Response.parse(c) for c in RESPONSE_CODES)
QUANTIFIED_CODES = RESPONSE_CODES[:8]
RESPONSE_INDEX = {code: i for i, code in enumerate(RESPONSE_CODES)}


@dataclass(frozen=True)
class ContentTriple:
    a: str
    b: str
    c: str

    def __post_init__(self):
        terms = [self.a, self.b, self.c]
        if any(not t or not t.strip() for t in terms):
            raise ValueError(f"content terms must be nonempty: {terms}")
        if len(set(terms)) != 3:
            raise ValueError(f"content terms must be distinct: {terms}")

    def term(self, index: int) -> str:
        return (self.a, self.b, self.c)[index]


PLACEHOLDERS = ContentTriple("A", "B", "C")


def enumerate_syllogisms() -> list[Syllogism]:
    """All 64 syllogisms ordered by mood1, mood2 (A, E, I, O) then figure."""
    return [Syllogism(Mood(m1), Mood(m2), f) for m1 in MOODS for m2 in MOODS for f in FIGURES]


SYLLOGISM_IDS: tuple[str, ...] = tuple(s.id for s in enumerate_syllogisms())


def _sentence(mood: Mood, x: str, y: str) -> str:
    return mood.template.format(x=x, y=y)


def render(s: Syllogism | str, t: ContentTriple = PLACEHOLDERS) -> tuple[str, str]:
    if isinstance(s, str):
        s = Syllogism.parse(s)
    (m1, s1, o1), (m2, s2, o2) = s.premises
    return _sentence(m1, t.term(s1), t.term(o1)), _sentence(m2, t.term(s2), t.term(o2))


def render_response(r: Response | str, t: ContentTriple = PLACEHOLDERS) -> str:
    if isinstance(r, str):
        r = Response.parse(r)
    if r.is_nvc:
        return NOTHING_FOLLOWS
    x, y = (t.a, t.c) if r.direction == "ac" else (t.c, t.a)
    return _sentence(r.mood, x, y)


_WS = re.compile(r"\s+")


def _normalize(text: str) -> str:
    return _WS.sub(" ", text.lower())


def parse_response(text: str, t: ContentTriple = PLACEHOLDERS) -> set[Response]:
    """Every response whose rendering occurs in ``text``, ignoring case and
    runs of whitespace."""
    haystack = _normalize(text)
    return {r for r in RESPONSES if _normalize(render_response(r, t)) in haystack}


def load_triples(source: str | Path | None = None) -> list[ContentTriple]:
    """Read content triples from a CSV with header ``a,b,c``.

    With no argument the bundled 30 triples are returned.
    """
    if source is None:
        text = resources.files("syllab.data").joinpath("triples.csv").read_text()
    else:
        text = Path(source).read_text()
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["a", "b", "c"]:
        raise ValueError(f"triple file must have header a,b,c; got {reader.fieldnames}")
    return [ContentTriple(row["a"].strip(), row["b"].strip(), row["c"].strip()) for row in reader]


def as_syllogism(s: Syllogism | str) -> Syllogism:
    return Syllogism.parse(s) if isinstance(s, str) else s


def as_codes(responses: Iterable[Response]) -> list[str]:
    return sorted((r.code for r in responses), key=RESPONSE_INDEX.__getitem__)
