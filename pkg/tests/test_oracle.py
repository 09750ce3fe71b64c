import itertools
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from syllab.core import QUANTIFIED_CODES, SYLLOGISM_IDS, Mood, Response, Syllogism
from syllab.oracle import (
    Oracle,
    ValiditySemantics,
    World,
    all_worlds,
    partition_counts,
    premise_holds,
    region,
    valid_conclusions,
)

IMPORT_OFF = ValiditySemantics(existential_import=False)


# An independent check: explicit finite domains of up to five individuals,
# each individual being the set of predicates it satisfies.  Under import
# every term must apply to someone.

TYPES = [frozenset(i for i in range(3) if mask >> i & 1) for mask in range(8)]


def _holds(mood, subj, obj, domain, imp):
    s = [x for x in domain if subj in x]
    if mood == "A":
        return all(obj in x for x in s) and (bool(s) or not imp)
    if mood == "E":
        return all(obj not in x for x in s) and (bool(s) or not imp)
    if mood == "I":
        return any(obj in x for x in s)
    return any(obj not in x for x in s)


def _brute_valid(sid, imp, max_size=5):
    s = Syllogism.parse(sid)
    models = [
        d for n in range(max_size + 1)
        for d in itertools.combinations_with_replacement(TYPES, n)
        if all(_holds(m.value, a, b, d, imp) for m, a, b in s.premises)
        and (not imp or all(any(t in x for x in d) for t in range(3)))
    ]
    out = set()
    for code in QUANTIFIED_CODES:
        mood, direction = code[0], code[1:]
        x, y = (0, 2) if direction == "ac" else (2, 0)
        if all(_holds(mood, x, y, d, imp) for d in models):
            out.add(code)
    return out or {"NVC"}


@pytest.mark.parametrize("imp", [True, False])
def test_matches_explicit_domain_enumeration(imp):
    oracle = Oracle(ValiditySemantics(imp))
    for sid in SYLLOGISM_IDS:
        assert set(oracle.valid(sid)) == _brute_valid(sid, imp), sid


def test_world_count():
    assert len(all_worlds()) == 256
    with pytest.raises(ValueError):
        World(256)


def test_premise_holds_examples():
    only_ab_not_c = World.from_regions([region(True, True, False)])
    assert premise_holds(Mood.I, 0, 1, only_ab_not_c)
    empty = World(0)
    assert not premise_holds(Mood.A, 0, 1, empty)
    assert premise_holds(Mood.A, 0, 1, empty, IMPORT_OFF)
    abc = World.from_regions([region(True, True, True)])
    assert not premise_holds(Mood.E, 0, 1, abc)


def test_valid_conclusion_examples():
    assert valid_conclusions("EA1") == {Response.parse("Oca")}
    assert Response.parse("Aac") in valid_conclusions("AA1")
    assert valid_conclusions("II1") == {Response()}
    # E conclusions convert under import
    assert {"Eac", "Eca", "Oac", "Oca"} <= {r.code for r in valid_conclusions("AE1")}


def test_partition_default():
    t0 = time.perf_counter()
    assert partition_counts() == (27, 37)
    assert time.perf_counter() - t0 < 1.0


def test_partition_without_import():
    n_valid, n_nvc = partition_counts(IMPORT_OFF)
    assert n_valid + n_nvc == 64
    assert (n_valid, n_nvc) == (22, 42)


@given(st.sampled_from(SYLLOGISM_IDS))
def test_nvc_never_mixed(sid):
    v = valid_conclusions(sid)
    assert v == {Response()} or Response() not in v


@pytest.mark.parametrize("sid", SYLLOGISM_IDS)
def test_monotonicity_and_symmetry(sid, oracle):
    v = oracle.valid(sid)
    for d in ("ac", "ca"):
        if "A" + d in v:
            assert "I" + d in v
        if "E" + d in v:
            assert "O" + d in v
    assert ("Eac" in v) == ("Eca" in v)
    assert ("Iac" in v) == ("Ica" in v)


def test_oracle_table_and_csv(tmp_path, oracle):
    assert oracle.partition() == (27, 37)
    assert len(oracle.valid_ids) == 27 and len(oracle.nvc_ids) == 37
    path = tmp_path / "valid.csv"
    oracle.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "syllogism_id,response_code"
    assert "EA1,Oca" in lines
    assert sum(1 for line in lines[1:] if line.endswith(",NVC")) == 37
    assert oracle.rows() == Oracle().rows()
