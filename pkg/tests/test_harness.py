import json
import math
from collections import Counter

import httpx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from syllab.core import QUANTIFIED_CODES, RESPONSE_CODES, ContentTriple, render_response
from syllab.harness import (
    TRIGGERS,
    VARIANTS,
    HarnessError,
    HTTPCompletionClient,
    MockClient,
    PromptSpec,
    RequestRejected,
    SamplingConfig,
    binary_decision,
    build_binary_prompt,
    build_mc_prompt,
    build_prompt,
    conclusion_order,
    run_binary,
    run_generative,
    run_items,
    run_multiple_choice,
)

T = ContentTriple("artists", "bakers", "chemists")
SPEC = PromptSpec("EA1", T, "stepxstep", 11)


def test_sampling_defaults():
    c = SamplingConfig()
    assert (c.temperature, c.max_tokens, c.n_samples) == (0.5, 75, 30)
    with pytest.raises(ValueError):
        SamplingConfig(temperature=0)


def test_prompt_determinism_and_content():
    assert build_prompt(SPEC) == build_prompt(PromptSpec("EA1", T, "stepxstep", 11))
    prompt = build_prompt(SPEC)
    assert "Let's think this through, step by step" in prompt
    assert "Premise 1: No artists are bakers, Premise 2: All bakers are chemists," in prompt
    assert sorted(SPEC.conclusions()) == sorted(render_response(c, T) for c in RESPONSE_CODES)
    assert len(SPEC.conclusions()) == 9
    listed = prompt.split("\n")[0]
    for c in SPEC.conclusions():
        assert f'"{c}"' in listed


@pytest.mark.parametrize("variant", VARIANTS)
def test_variant_triggers(variant):
    prompt = build_prompt(PromptSpec("AA1", T, variant, 0))
    if TRIGGERS[variant]:
        assert prompt.endswith(TRIGGERS[variant])
    else:
        assert prompt.splitlines()[-1].startswith("Premise 1:")


def test_alt_puts_nvc_note_late():
    prompt = build_prompt(PromptSpec("AA1", T, "alt", 0))
    assert prompt.rindex("nothing follows") > prompt.index("Premise 1:")
    with pytest.raises(ValueError):
        PromptSpec("AA1", T, "chatty", 0)


def test_conclusion_order_uniform():
    first = Counter(conclusion_order(seed)[0] for seed in range(10_000))
    assert set(first) == set(RESPONSE_CODES)
    assert chisquare([first[c] for c in RESPONSE_CODES]).pvalue > 1e-3


def test_mc_and_binary_prompts():
    assert build_mc_prompt(SPEC).endswith("The conclusion that necessarily follows is: ")
    assert build_binary_prompt(SPEC, "Oca").startswith("Is this conclusion valid given the premises:")
    assert "Some chemists are not artists" in build_binary_prompt(SPEC, "Oca")


# generative

IAC = render_response("Iac", T)
EAC = render_response("Eac", T)


def test_generative_point_mass():
    res = run_generative(SPEC, SamplingConfig(), MockClient([f"Thus {IAC}."]))
    assert res.distribution["Iac"] == 1.0 and res.answer == "Iac"
    assert all(r.accepted for r in res.records) and len(res.records) == 30


def test_generative_all_rejected():
    res = run_generative(SPEC, SamplingConfig(), MockClient(["no idea"]))
    assert res.missing and res.answer is None
    assert not any(r.accepted for r in res.records)


def test_generative_mixture():
    texts = [IAC] * 20 + [EAC.upper()] * 10
    res = run_generative(SPEC, SamplingConfig(), MockClient(texts))
    assert res.distribution["Iac"] == pytest.approx(2 / 3)
    assert res.distribution["Eac"] == pytest.approx(1 / 3)


def test_generative_tie_goes_to_earlier_code():
    res = run_generative(SPEC, SamplingConfig(n_samples=2), MockClient([IAC, EAC]))
    assert res.answer == "Eac"


@settings(max_examples=30, deadline=None)
@given(st.permutations([IAC] * 5 + [EAC] * 3 + ["junk"] * 2 + [f"{IAC} or nothing follows"] * 2))
def test_generative_order_invariant(texts):
    base = run_generative(SPEC, SamplingConfig(n_samples=12), MockClient(sorted(texts)))
    res = run_generative(SPEC, SamplingConfig(n_samples=12), MockClient(texts))
    assert np.allclose(base.distribution.probs, res.distribution.probs)


def test_sample_count_checked():
    class Short(MockClient):
        def sample(self, prompt, config):
            return ["x"]
    with pytest.raises(HarnessError):
        run_generative(SPEC, SamplingConfig(), Short())


# multiple choice

def test_mc_equal_scores_uniform():
    res = run_multiple_choice(SPEC, MockClient(scores=lambda p, c: -3.0))
    assert np.allclose(res.distribution.probs, 1 / 9)


def _mi_client(mi: dict[str, float], offset=0.0):
    texts = {render_response(c, T): c for c in RESPONSE_CODES}

    def score(prompt, cont):
        if prompt == "":
            return -5.0
        return -5.0 + mi[texts[cont]] + offset
    return MockClient(scores=score)


def test_mc_softmax_two_live():
    mi = {c: -math.inf for c in RESPONSE_CODES}
    mi["Oca"], mi["Eac"] = math.log(2), 0.0
    res = run_multiple_choice(SPEC, _mi_client(mi))
    assert res.distribution["Oca"] == pytest.approx(2 / 3, abs=1e-9)
    assert res.distribution["Eac"] == pytest.approx(1 / 3, abs=1e-9)
    assert res.answer == "Oca"


def test_mc_fixture_hand_computed():
    mi = dict(zip(RESPONSE_CODES, [0.0, 1.0, -1.0, 0.5, 2.0, 0.0, -2.0, 0.25, 0.0]))
    res = run_multiple_choice(SPEC, _mi_client(mi))
    z = sum(math.exp(v) for v in mi.values())
    for c, v in mi.items():
        assert res.distribution[c] == pytest.approx(math.exp(v) / z, abs=1e-9)
    assert res.answer == "Iac"


@given(st.floats(-50, 50))
def test_mc_shift_invariance(shift):
    mi = dict(zip(RESPONSE_CODES, [0.0, 1.0, -1.0, 0.5, 2.0, 0.0, -2.0, 0.25, 0.0]))
    a = run_multiple_choice(SPEC, _mi_client(mi))
    b = run_multiple_choice(SPEC, _mi_client(mi, shift))
    assert np.allclose(a.distribution.probs, b.distribution.probs, atol=1e-9)


def test_mc_non_finite_is_fatal():
    with pytest.raises(HarnessError):
        run_multiple_choice(SPEC, MockClient(scores=lambda p, c: math.nan))


# binary

def _binary_client(pv: dict[str, float]):
    prompts = {build_binary_prompt(SPEC, c): c for c in QUANTIFIED_CODES}

    def score(prompt, cont):
        if prompt == "":
            return -1.0
        p = pv[prompts[prompt]]
        return math.log(p) if cont == "valid" else math.log(1 - p)
    return MockClient(scores=score)


def test_binary_all_low_is_nvc():
    res = run_binary(SPEC, _binary_client({c: 0.4 for c in QUANTIFIED_CODES}))
    assert res.answer == "NVC"
    assert res.distribution["Aac"] == pytest.approx(1 / 8)


def test_binary_one_high():
    pv = {c: 0.1 for c in QUANTIFIED_CODES}
    pv["Oca"] = 0.9
    res = run_binary(SPEC, _binary_client(pv))
    assert res.answer == "Oca"
    assert res.distribution["Oca"] == pytest.approx(0.9 / 1.6, abs=1e-9)
    assert res.scores["Oca"] == pytest.approx(0.9, abs=1e-9)


def test_binary_symmetric_scores_is_nvc():
    res = run_binary(SPEC, MockClient(scores=lambda p, c: -2.0))
    assert all(v == pytest.approx(0.5) for v in res.scores.values())
    assert res.answer == "NVC"


def test_binary_decision_edges():
    probs, answer = binary_decision({c: 0.0 for c in QUANTIFIED_CODES})
    assert answer == "NVC" and probs[-1] == 1.0
    _, answer = binary_decision({**{c: 0.2 for c in QUANTIFIED_CODES}, "Iac": 0.51})
    assert answer == "Iac"


def test_only_binary_says_nvc_when_scores_ignore_it():
    nvc_text = render_response("NVC", T)
    prefer_iac = MockClient(scores=lambda p, c: (-1.0 if c == IAC else -30.0 if c == nvc_text else -6.0)
                            if p else -6.0)
    assert run_multiple_choice(SPEC, prefer_iac).answer != "NVC"
    assert run_generative(SPEC, SamplingConfig(), MockClient([IAC])).answer != "NVC"
    low = _binary_client({c: 0.3 for c in QUANTIFIED_CODES})
    assert run_binary(SPEC, low).answer == "NVC"


def test_run_items_order_and_jobs():
    triples = [T, ContentTriple("cats", "dogs", "mice")]
    client = MockClient(lambda prompt: [IAC if "artists" in prompt else "some cats are mice"])
    a = run_items("generative", ["AA1", "EA1"], triples, client, config=SamplingConfig(n_samples=3))
    b = run_items("generative", ["AA1", "EA1"], triples, client, config=SamplingConfig(n_samples=3), jobs=3)
    assert [(r.syllogism_id, r.triple_index) for r in a] == [("AA1", 0), ("AA1", 1), ("EA1", 0), ("EA1", 1)]
    assert [r.answer for r in a] == [r.answer for r in b] == ["Iac"] * 4
    mc = run_items("multiple_choice", ["AA1"], triples, MockClient(scores=lambda p, c: -1.0))
    assert mc[0].records[0].parsed == [mc[0].answer]
    with pytest.raises(ValueError):
        run_items("oracle", ["AA1"], triples, client)


# HTTP client

def _handler(log, fail_first=0, status=500):
    state = {"n": 0}

    def handle(request):
        state["n"] += 1
        body = json.loads(request.content)
        log.append((dict(request.headers), body))
        if state["n"] <= fail_first:
            return httpx.Response(status, json={"error": "busy"})
        if body["echo"]:
            n_tokens = len(body["prompt"].split())
            return httpx.Response(200, json={"choices": [{"text": body["prompt"],
                                                          "token_logprobs": [None] + [-1.0] * (n_tokens - 1)}]})
        return httpx.Response(200, json={"choices": [{"text": f"t{i}"} for i in range(body["n"])]})
    return handle


def test_http_sample_and_score(monkeypatch):
    monkeypatch.setenv("SYLLAB_API_TOKEN", "secret")
    log = []
    client = HTTPCompletionClient("http://lm/complete", transport=httpx.MockTransport(_handler(log)))
    assert client.sample("hi", SamplingConfig(n_samples=3)) == ["t0", "t1", "t2"]
    headers, body = log[0]
    assert headers["authorization"] == "Bearer secret"
    assert body == {"prompt": "hi", "temperature": 0.5, "max_tokens": 75, "n": 3, "echo": False}
    # "a b c" + " d e" scores 4 tokens after the first, minus the prompt's 2
    assert client.score("a b c", " d e") == pytest.approx(-2.0)
    assert client.score("", "x y") == pytest.approx(-1.0)


def test_http_retries_then_succeeds():
    log, sleeps = [], []
    client = HTTPCompletionClient("http://lm", token="", transport=httpx.MockTransport(_handler(log, 2)),
                                  sleep=sleeps.append, backoff=0.5)
    assert client.sample("p", SamplingConfig(n_samples=1)) == ["t0"]
    assert sleeps == [0.5, 1.0]


def test_http_gives_up_after_three():
    log, sleeps = [], []
    client = HTTPCompletionClient("http://lm", token="", transport=httpx.MockTransport(_handler(log, 10)),
                                  sleep=sleeps.append)
    with pytest.raises(HarnessError, match="after 3 attempts"):
        client.sample("p", SamplingConfig(n_samples=1))
    assert len(log) == 3 and sleeps == [1.0, 2.0]


def test_http_client_error_not_retried():
    log, sleeps = [], []
    client = HTTPCompletionClient("http://lm", token="", transport=httpx.MockTransport(_handler(log, 10, 401)),
                                  sleep=sleeps.append)
    with pytest.raises(RequestRejected):
        client.sample("p", SamplingConfig(n_samples=1))
    assert len(log) == 1 and sleeps == []


def test_http_transport_error_retried():
    calls = []

    def boom(request):
        calls.append(1)
        raise httpx.ConnectError("down")
    client = HTTPCompletionClient("http://lm", token="", transport=httpx.MockTransport(boom), sleep=lambda s: None)
    with pytest.raises(HarnessError):
        client.score("a", "b")
    assert len(calls) == 3
