"""File formats: human responses, LM sample logs, profiles and reports.

human.csv
    ``participant_id,syllogism_id,response_code``; one row per answer and
    at most one answer per participant and syllogism.
lm_log.jsonl
    one JSON object per sample with ``run_id, syllogism_id, triple_index,
    sample_index, raw_text, parsed, accepted``; ``accepted`` is true exactly
    when ``parsed`` is nonempty.
profile CSV
    ``syllogism_id,n,<9 response codes>``.
"""
from __future__ import annotations

import csv
import json
import logging
import math
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import RESPONSE_CODES, RESPONSE_INDEX, SYLLOGISM_IDS
from .oracle import Oracle, default_oracle
from .profiles import ReasonerProfile, ResponseDistribution

log = logging.getLogger(__name__)

HUMAN_COLUMNS = ("participant_id", "syllogism_id", "response_code")
PROFILE_COLUMNS = ("syllogism_id", "n") + RESPONSE_CODES
LM_FIELDS = ("run_id", "syllogism_id", "triple_index", "sample_index", "raw_text", "parsed", "accepted")
COUNT_MODES = ("fractional", "per_member", "argmax")
N_TRIPLES = 30


class DataError(ValueError):
    pass


# human data


@dataclass(frozen=True)
class HumanResponseRecord:
    participant_id: str
    syllogism_id: str
    response_code: str


def read_human(path: str | Path) -> list[HumanResponseRecord]:
    path = Path(path)
    records: list[HumanResponseRecord] = []
    seen: dict[tuple[str, str], int] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise DataError(f"{path}: empty file")
        if tuple(h.strip() for h in header) != HUMAN_COLUMNS:
            raise DataError(f"{path}:1: expected header {','.join(HUMAN_COLUMNS)}, got {','.join(header)}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not f.strip() for f in row):
                continue
            if len(row) != 3:
                raise DataError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            pid, sid, code = (f.strip() for f in row)
            if not pid:
                raise DataError(f"{path}:{lineno}: empty participant_id")
            if sid not in SYLLOGISM_IDS:
                raise DataError(f"{path}:{lineno}: unknown syllogism id {sid!r}")
            if code not in RESPONSE_INDEX:
                raise DataError(f"{path}:{lineno}: unknown response code {code!r}")
            if (pid, sid) in seen:
                raise DataError(f"{path}:{lineno}: participant {pid} already answered {sid} "
                                f"on line {seen[pid, sid]}")
            seen[pid, sid] = lineno
            records.append(HumanResponseRecord(pid, sid, code))
    if not records:
        raise DataError(f"{path}: no responses")
    return records


def profile_from_human(records: Iterable[HumanResponseRecord], label: str = "human") -> ReasonerProfile:
    counts: dict[str, np.ndarray] = defaultdict(lambda: np.zeros(len(RESPONSE_CODES)))
    for r in records:
        counts[r.syllogism_id][RESPONSE_INDEX[r.response_code]] += 1
    profile = ReasonerProfile.from_distributions(
        label, (ResponseDistribution.from_counts(sid, c) for sid, c in counts.items()))
    profile.missing = [sid for sid in SYLLOGISM_IDS if sid not in profile]
    return profile


def ingest_human(path: str | Path, label: str = "human") -> ReasonerProfile:
    return profile_from_human(read_human(path), label)


def human_shape(records: Sequence[HumanResponseRecord]) -> dict:
    """Participant and row counts; a complete participant answered all 64."""
    per: dict[str, int] = defaultdict(int)
    for r in records:
        per[r.participant_id] += 1
    complete = sum(1 for n in per.values() if n == len(SYLLOGISM_IDS))
    return {"rows": len(records), "participants": len(per), "complete_participants": complete,
            "rectangular": complete == len(per) and len(records) == complete * len(SYLLOGISM_IDS)}


# LM logs


@dataclass
class LMResponseRecord:
    run_id: str
    syllogism_id: str
    triple_index: int
    sample_index: int
    raw_text: str
    parsed: list[str] = field(default_factory=list)
    accepted: bool = False

    def __post_init__(self):
        if self.syllogism_id not in SYLLOGISM_IDS:
            raise DataError(f"unknown syllogism id {self.syllogism_id!r}")
        if not isinstance(self.triple_index, int) or not 0 <= self.triple_index < N_TRIPLES:
            raise DataError(f"triple_index must be an int in 0..{N_TRIPLES - 1}, got {self.triple_index!r}")
        if not isinstance(self.sample_index, int) or self.sample_index < 0:
            raise DataError(f"sample_index must be a nonnegative int, got {self.sample_index!r}")
        bad = [c for c in self.parsed if c not in RESPONSE_INDEX]
        if bad:
            raise DataError(f"unknown response codes {bad}")
        if len(set(self.parsed)) != len(self.parsed):
            raise DataError(f"duplicate parsed codes {self.parsed}")
        self.parsed = sorted(self.parsed, key=RESPONSE_INDEX.__getitem__)
        if self.accepted != bool(self.parsed):
            raise DataError(f"accepted={self.accepted} but parsed={self.parsed}")

    @classmethod
    def from_json(cls, obj: dict) -> "LMResponseRecord":
        missing = [f for f in LM_FIELDS if f not in obj]
        if missing:
            raise DataError(f"missing fields {missing}")
        if not isinstance(obj["parsed"], list) or not isinstance(obj["accepted"], bool):
            raise DataError("parsed must be a list and accepted a boolean")
        return cls(**{f: obj[f] for f in LM_FIELDS})

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=False)


def write_lm_log(records: Iterable[LMResponseRecord], path: str | Path) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")


def read_lm_log(path: str | Path) -> list[LMResponseRecord]:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(LMResponseRecord.from_json(json.loads(line)))
            except (json.JSONDecodeError, DataError, TypeError) as exc:
                log.error("%s:%d: %s", path, lineno, exc)
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return out


@dataclass
class LMIngest:
    profile: ReasonerProfile
    item_answers: dict[tuple[str, int], str]
    rejected: int = 0


def _item_argmax(weights: np.ndarray) -> str:
    return RESPONSE_CODES[int(np.argmax(weights))]


def profile_from_lm(records: Iterable[LMResponseRecord], mode: str = "fractional",
                    label: str | None = None) -> LMIngest:
    """Pool accepted samples per syllogism.

    ``fractional`` credits each of a sample's k parsed responses with 1/k,
    ``per_member`` credits each with 1, and ``argmax`` counts one response
    per (syllogism, triple) item: the item's most frequent response under
    fractional weights, ties going to the earlier code.  Syllogisms with no
    accepted sample are listed in ``profile.missing``.
    """
    if mode not in COUNT_MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {COUNT_MODES}")
    items: dict[tuple[str, int], np.ndarray] = {}
    member: dict[tuple[str, int], np.ndarray] = {}
    seen_ids: set[str] = set()
    rejected = 0
    run_ids = set()
    for r in records:
        run_ids.add(r.run_id)
        seen_ids.add(r.syllogism_id)
        if not r.accepted:
            rejected += 1
            continue
        key = (r.syllogism_id, r.triple_index)
        frac = items.setdefault(key, np.zeros(len(RESPONSE_CODES)))
        full = member.setdefault(key, np.zeros(len(RESPONSE_CODES)))
        for code in r.parsed:
            frac[RESPONSE_INDEX[code]] += 1.0 / len(r.parsed)
            full[RESPONSE_INDEX[code]] += 1.0
    answers = {key: _item_argmax(items[key]) for key in sorted(items, key=lambda k: (SYLLOGISM_IDS.index(k[0]), k[1]))}
    pooled: dict[str, np.ndarray] = defaultdict(lambda: np.zeros(len(RESPONSE_CODES)))
    for key in answers:
        sid = key[0]
        if mode == "fractional":
            pooled[sid] += items[key]
        elif mode == "per_member":
            pooled[sid] += member[key]
        else:
            pooled[sid][RESPONSE_INDEX[answers[key]]] += 1.0
    label = label or (",".join(sorted(run_ids)) if run_ids else "lm")
    profile = ReasonerProfile.from_distributions(
        label, (ResponseDistribution.from_counts(sid, c) for sid, c in pooled.items()))
    profile.missing = [sid for sid in SYLLOGISM_IDS if sid in seen_ids and sid not in profile]
    return LMIngest(profile, answers, rejected)


def ingest_lm_log(path: str | Path, mode: str = "fractional", label: str | None = None) -> LMIngest:
    return profile_from_lm(read_lm_log(path), mode, label)


# profiles


def write_profile_csv(profile: ReasonerProfile, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(PROFILE_COLUMNS)
        for sid, d in profile.distributions.items():
            writer.writerow([sid, repr(float(d.n))] + [repr(float(p)) for p in d.probs])


def read_profile_csv(path: str | Path, label: str | None = None) -> ReasonerProfile:
    path = Path(path)
    dists = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != PROFILE_COLUMNS:
            raise DataError(f"{path}:1: expected header {','.join(PROFILE_COLUMNS)}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(PROFILE_COLUMNS):
                raise DataError(f"{path}:{lineno}: expected {len(PROFILE_COLUMNS)} fields, got {len(row)}")
            try:
                dists.append(ResponseDistribution(row[0], np.array(row[2:], dtype=float), float(row[1])))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
    return ReasonerProfile.from_distributions(label or path.stem, dists)


def load_profile(path: str | Path, label: str | None = None, mode: str = "fractional") -> ReasonerProfile:
    """Load a profile from a profile CSV, a human CSV or an LM log,
    telling them apart by extension and header."""
    path = Path(path)
    if path.suffix == ".jsonl":
        return ingest_lm_log(path, mode, label).profile
    with open(path, newline="") as fh:
        header = tuple(next(csv.reader(fh), ()))
    if header == HUMAN_COLUMNS:
        return ingest_human(path, label or path.stem)
    return read_profile_csv(path, label)


# reports


@dataclass
class Analysis:
    """One named analysis: a JSON-ready summary and long-format rows
    ``(syllogism, measure, value, reasoner)``."""

    name: str
    summary: dict = field(default_factory=dict)
    rows: list[tuple[str, str, float, str]] = field(default_factory=list)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    return x


LONG_COLUMNS = ("syllogism", "measure", "value", "reasoner")


def _write_rows(path: Path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LONG_COLUMNS)
        for sid, measure, value, reasoner in rows:
            writer.writerow([sid, measure, repr(float(value)), reasoner])


def emit_report(analyses: Sequence[Analysis], outdir: str | Path, oracle: Oracle | None = None) -> list[Path]:
    """Write ``summary.json``, one ``<name>.csv`` per analysis and a
    combined ``long.csv``.  Returns the written paths in order."""
    oracle = oracle or default_oracle()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    names = [a.name for a in analyses]
    if len(set(names)) != len(names):
        raise ValueError(f"duplicate analysis names in {names}")
    summary = {
        "oracle_partition": {"valid": oracle.partition()[0], "nvc": oracle.partition()[1]},
        "existential_import": oracle.semantics.existential_import,
        "analyses": {a.name: _jsonable(a.summary) for a in analyses},
    }
    written = [outdir / "summary.json"]
    written[0].write_text(json.dumps(summary, indent=2, allow_nan=False) + "\n")
    all_rows = []
    for a in analyses:
        path = outdir / f"{a.name}.csv"
        _write_rows(path, a.rows)
        written.append(path)
        all_rows.extend(a.rows)
    long_path = outdir / "long.csv"
    _write_rows(long_path, all_rows)
    written.append(long_path)
    return written


def read_long_csv(path: str | Path) -> list[tuple[str, str, float, str]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        if tuple(next(reader, ())) != LONG_COLUMNS:
            raise DataError(f"{path}:1: expected header {','.join(LONG_COLUMNS)}")
        return [(r[0], r[1], float(r[2]), r[3]) for r in reader]
