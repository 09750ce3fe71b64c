"""Completion clients.

A client samples continuations and scores a continuation by its total log
probability given a prompt (an empty prompt is allowed).
"""
from __future__ import annotations

import logging
import math
import os
import re
import time
import zlib
from dataclasses import dataclass
from typing import Callable, Mapping, Protocol, Sequence

import httpx

log = logging.getLogger(__name__)

TOKEN_ENV = "SYLLAB_API_TOKEN"


class HarnessError(RuntimeError):
    pass


class RequestRejected(HarnessError):
    """A 4xx answer; retrying will not help."""


@dataclass(frozen=True)
class SamplingConfig:
    temperature: float = 0.5
    max_tokens: int = 75
    n_samples: int = 30

    def __post_init__(self):
        if not self.temperature > 0:
            raise ValueError(f"temperature must be positive, got {self.temperature}")
        if self.max_tokens < 1 or self.n_samples < 1:
            raise ValueError("max_tokens and n_samples must be positive")


class CompletionClient(Protocol):
    def sample(self, prompt: str, config: SamplingConfig) -> list[str]: ...

    def score(self, prompt: str, continuation: str) -> float: ...


class MockClient:
    """Deterministic table-driven client.

    ``texts`` is a list of completions returned in turn (cycled), or a
    function ``prompt -> list`` of them.  ``scores`` maps
    ``(prompt, continuation)`` or ``("*", continuation)`` to a log
    probability, or is a function of the pair; unmatched pairs score
    ``default_score``.
    """

    def __init__(self, texts: Sequence[str] | Callable[[str], Sequence[str]] = (),
                 scores: Mapping[tuple[str, str], float] | Callable[[str, str], float] | None = None,
                 default_score: float = -20.0):
        self.texts = texts
        self.scores = scores or {}
        self.default_score = default_score
        self.calls: list[tuple[str, str]] = []

    def sample(self, prompt: str, config: SamplingConfig) -> list[str]:
        self.calls.append(("sample", prompt))
        pool = list(self.texts(prompt) if callable(self.texts) else self.texts)
        if not pool:
            raise HarnessError("mock client has no texts to sample")
        return [pool[i % len(pool)] for i in range(config.n_samples)]

    def score(self, prompt: str, continuation: str) -> float:
        self.calls.append(("score", prompt + "\x00" + continuation))
        if callable(self.scores):
            return float(self.scores(prompt, continuation))
        for key in ((prompt, continuation), ("*", continuation)):
            if key in self.scores:
                return float(self.scores[key])
        return self.default_score


_LISTED = re.compile(r'"([^"]+)"')


class ListingMockClient:
    """Offline stand-in that answers from the conclusions listed in the
    prompt, picking with a hash of the prompt and sample index, and scores
    by a hash of the text.  Useful for dry runs of the whole pipeline."""

    def __init__(self, reject_every: int = 5):
        self.reject_every = reject_every

    @staticmethod
    def _h(*parts: str) -> int:
        return zlib.crc32("\x00".join(parts).encode())

    def sample(self, prompt: str, config: SamplingConfig) -> list[str]:
        options = _LISTED.findall(prompt.split("\n", 1)[0])
        out = []
        for i in range(config.n_samples):
            h = self._h(prompt, str(i))
            if not options or (self.reject_every and h % self.reject_every == 0):
                out.append("I am not sure.")
            else:
                out.append(f"So the answer is: {options[h % len(options)].lower()}.")
        return out

    def score(self, prompt: str, continuation: str) -> float:
        return -0.1 * len(continuation) - (self._h(prompt, continuation) % 1000) / 500.0


class HTTPCompletionClient:
    """Client for a JSON completion endpoint.

    Requests are ``{prompt, temperature, max_tokens, n, echo}``; responses
    are ``{choices: [{text, token_logprobs}]}``.  Scoring echoes the prompt
    with zero new tokens and sums token log probabilities, so
    ``score(p, c) = logP(p + c) - logP(p)``.  Failed requests are retried
    with exponential backoff before raising ``HarnessError``.
    """

    def __init__(self, url: str, token: str | None = None, timeout: float = 60.0, attempts: int = 3,
                 backoff: float = 1.0, transport: httpx.BaseTransport | None = None,
                 sleep: Callable[[float], None] = time.sleep):
        token = token if token is not None else os.environ.get(TOKEN_ENV)
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self.url = url
        self.attempts = attempts
        self.backoff = backoff
        self.sleep = sleep
        self._http = httpx.Client(headers=headers, timeout=timeout, transport=transport)
        self._prefix_cache: dict[str, float] = {}

    def close(self) -> None:
        self._http.close()

    def _post(self, body: dict) -> dict:
        last: Exception | None = None
        for attempt in range(self.attempts):
            try:
                resp = self._http.post(self.url, json=body)
                if resp.status_code == 429 or resp.status_code >= 500:
                    raise HarnessError(f"server returned {resp.status_code}")
                if resp.status_code >= 400:
                    raise RequestRejected(f"request rejected with {resp.status_code}: {resp.text[:200]}")
                data = resp.json()
                if not isinstance(data, dict) or not isinstance(data.get("choices"), list) or not data["choices"]:
                    raise HarnessError(f"malformed response: {data!r:.200}")
                return data
            except RequestRejected:
                raise
            except (httpx.TransportError, HarnessError, ValueError) as exc:
                last = exc
                log.warning("request failed (attempt %d/%d): %s", attempt + 1, self.attempts, exc)
                if attempt + 1 < self.attempts:
                    self.sleep(self.backoff * 2 ** attempt)
        raise HarnessError(f"request failed after {self.attempts} attempts: {last}") from last

    def sample(self, prompt: str, config: SamplingConfig) -> list[str]:
        data = self._post({"prompt": prompt, "temperature": config.temperature,
                           "max_tokens": config.max_tokens, "n": config.n_samples, "echo": False})
        return [str(c.get("text", "")) for c in data["choices"]]

    def _logprob(self, text: str) -> float:
        if not text:
            return 0.0
        if text in self._prefix_cache:
            return self._prefix_cache[text]
        data = self._post({"prompt": text, "temperature": 0.0, "max_tokens": 0, "n": 1, "echo": True})
        lps = data["choices"][0].get("token_logprobs")
        if lps is None:
            raise HarnessError("endpoint returned no token_logprobs; scoring unsupported")
        total = float(sum(x for x in lps if x is not None))
        self._prefix_cache[text] = total
        return total

    def score(self, prompt: str, continuation: str) -> float:
        value = self._logprob(prompt + continuation) - self._logprob(prompt)
        if not math.isfinite(value):
            raise HarnessError(f"non-finite score for continuation {continuation!r}")
        return value
