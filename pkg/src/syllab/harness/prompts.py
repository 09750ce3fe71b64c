"""Prompt construction for the three elicitation methods."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import (
    NOTHING_FOLLOWS,
    RESPONSE_CODES,
    ContentTriple,
    Syllogism,
    as_syllogism,
    render,
    render_response,
)

VARIANTS = ("stepxstep", "logically", "empty", "alt")

INSTRUCTION = (
    'Choose the conclusion that necessarily follows from the premises or "nothing follows" '
    "if none of the other conclusions logically follow, the possible conclusions are: "
)
ALT_INSTRUCTION = "Choose the conclusion that necessarily follows from the premises. The possible conclusions are: "
ALT_NVC_NOTE = (
    'If none of these conclusions necessarily follows from the two premises, the answer is "nothing follows". '
    "Use the exact wording of one of the possible conclusions in your answer."
)
TRIGGERS = {
    "stepxstep": "Let's think this through, step by step",
    "logically": "Think logically",
    "empty": "",
    "alt": "Let's think step by step",
}
MC_TRIGGER = "The conclusion that necessarily follows is: "
BINARY_PREFIX = "Is this conclusion valid given the premises:"
BINARY_LABELS = ("valid", "invalid")


def conclusion_order(seed: int) -> list[str]:
    """A seeded permutation of the nine response codes."""
    perm = np.random.default_rng(seed).permutation(len(RESPONSE_CODES))
    return [RESPONSE_CODES[i] for i in perm]


def item_seed(base_seed: int, syllogism_id: str, triple_index: int) -> int:
    """Derived per-item seed so every (syllogism, triple) gets its own order."""
    s = as_syllogism(syllogism_id)
    idx = ("AEIO".index(s.mood1.value) * 4 + "AEIO".index(s.mood2.value)) * 4 + s.figure - 1
    return int(np.random.SeedSequence([base_seed, idx, triple_index]).generate_state(1)[0])


@dataclass(frozen=True)
class PromptSpec:
    syllogism: Syllogism
    triple: ContentTriple
    variant: str = "stepxstep"
    seed: int = 0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown prompt variant {self.variant!r}; expected one of {VARIANTS}")
        object.__setattr__(self, "syllogism", as_syllogism(self.syllogism))

    @property
    def order(self) -> list[str]:
        return conclusion_order(self.seed)

    def conclusions(self) -> list[str]:
        return [render_response(code, self.triple) for code in self.order]

    def premises(self) -> tuple[str, str]:
        return render(self.syllogism, self.triple)


def _body(spec: PromptSpec, instruction: str) -> list[str]:
    p1, p2 = spec.premises()
    listed = ", ".join(f'"{c}"' for c in spec.conclusions())
    return [instruction + listed + ".", f"Premise 1: {p1}, Premise 2: {p2},"]


def build_prompt(spec: PromptSpec, trigger: str | None = None) -> str:
    """The generative prompt for ``spec``; ``trigger`` overrides the
    variant's closing line."""
    if spec.variant == "alt":
        lines = _body(spec, ALT_INSTRUCTION) + [ALT_NVC_NOTE]
    else:
        lines = _body(spec, INSTRUCTION)
    closing = TRIGGERS[spec.variant] if trigger is None else trigger
    if closing:
        lines.append(closing)
    return "\n".join(lines)


def build_mc_prompt(spec: PromptSpec) -> str:
    return build_prompt(spec, MC_TRIGGER)


def build_binary_prompt(spec: PromptSpec, code: str) -> str:
    p1, p2 = spec.premises()
    conclusion = render_response(code, spec.triple)
    return f"{BINARY_PREFIX} Premise 1: {p1}, Premise 2: {p2}, Conclusion: {conclusion}?\nAnswer: "


__all__ = [
    "VARIANTS", "TRIGGERS", "MC_TRIGGER", "BINARY_PREFIX", "BINARY_LABELS", "NOTHING_FOLLOWS",
    "PromptSpec", "build_prompt", "build_mc_prompt", "build_binary_prompt", "conclusion_order", "item_seed",
]
