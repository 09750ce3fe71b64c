import pytest
from hypothesis import given
from hypothesis import strategies as st

from syllab.core import (
    NVC,
    PLACEHOLDERS,
    RESPONSE_CODES,
    RESPONSES,
    SYLLOGISM_IDS,
    ContentTriple,
    Mood,
    Response,
    Syllogism,
    enumerate_syllogisms,
    load_triples,
    parse_response,
    render,
    render_response,
)

ABC = ContentTriple("artists", "bakers", "chemists")

words = st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=10)
triples = st.lists(words, min_size=3, max_size=3, unique=True).map(lambda w: ContentTriple(*w))


def test_enumeration_size_and_order():
    syl = enumerate_syllogisms()
    assert len(syl) == 64
    assert len({s.id for s in syl}) == 64
    assert syl[0].id == "AA1"
    assert syl[-1].id == "OO4"
    assert [s.id for s in syl].count("EA1") == 1


def test_mood_templates():
    assert len(Mood) == 4
    assert Mood("A").template == "All {x} are {y}"
    assert Mood("O").template == "Some {x} are not {y}"


@pytest.mark.parametrize("sid", SYLLOGISM_IDS)
def test_id_round_trip(sid):
    assert Syllogism.parse(sid).id == sid


@pytest.mark.parametrize("bad", ["", "AA", "AA5", "XA1", "AA11", "aa1"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        Syllogism.parse(bad)


def test_response_codes():
    assert len(RESPONSES) == 9
    assert RESPONSE_CODES[-1] == "NVC"
    for code in RESPONSE_CODES:
        assert Response.parse(code).code == code
    with pytest.raises(ValueError):
        Response.parse("Xac")


def test_render_examples():
    assert render("EA1", ABC) == ("No artists are bakers", "All bakers are chemists")
    assert render("AA1") == ("All A are B", "All B are C")
    # figure 2 orders the terms B-A then C-B
    assert render("AI2") == ("All B are A", "Some C are B")
    assert render("AA3") == ("All A are B", "All C are B")
    assert render("AA4") == ("All B are A", "All B are C")


def test_render_response_examples():
    assert render_response("Iac", ABC) == "Some artists are chemists"
    assert render_response(NVC, ABC) == "nothing follows"
    assert render_response("Oca", ABC) == "Some chemists are not artists"


def test_parse_response_examples():
    assert parse_response("...therefore Some Artists Are Chemists.", ABC) == {Response.parse("Iac")}
    assert parse_response("blah", ABC) == set()
    both = parse_response("so some artists are chemists, or maybe nothing   follows", ABC)
    assert both == {Response.parse("Iac"), NVC}


@given(triples)
def test_render_then_parse_recovers_response(t):
    for r in RESPONSES:
        assert r in parse_response(render_response(r, t), t)


@given(triples)
def test_conclusions_never_mention_middle_term(t):
    for r in RESPONSES:
        assert t.b not in render_response(r, t).split()


@given(st.sampled_from(SYLLOGISM_IDS), triples)
def test_figure_term_orders(sid, t):
    s = Syllogism.parse(sid)
    p1, p2 = render(s, t)
    first = {1: (t.a, t.b), 2: (t.b, t.a), 3: (t.a, t.b), 4: (t.b, t.a)}[s.figure]
    second = {1: (t.b, t.c), 2: (t.c, t.b), 3: (t.c, t.b), 4: (t.b, t.c)}[s.figure]
    assert p1.split()[1] == first[0] and p1.split()[-1] == first[1]
    assert p2.split()[1] == second[0] and p2.split()[-1] == second[1]


def test_bundled_triples():
    ts = load_triples()
    assert len(ts) == 30
    assert len(set(ts)) == 30


def test_triple_validation(tmp_path):
    with pytest.raises(ValueError):
        ContentTriple("a", "a", "b")
    with pytest.raises(ValueError):
        ContentTriple("a", "", "b")
    bad = tmp_path / "t.csv"
    bad.write_text("x,y,z\n1,2,3\n")
    with pytest.raises(ValueError):
        load_triples(bad)
    good = tmp_path / "g.csv"
    good.write_text("a,b,c\ncats,dogs,mice\n")
    assert load_triples(good) == [ContentTriple("cats", "dogs", "mice")]


def test_placeholders():
    assert PLACEHOLDERS == ContentTriple("A", "B", "C")
