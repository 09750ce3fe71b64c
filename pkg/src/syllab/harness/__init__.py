"""Eliciting syllogistic judgments from text-completion models."""
from .clients import (
    CompletionClient,
    HarnessError,
    HTTPCompletionClient,
    ListingMockClient,
    MockClient,
    RequestRejected,
    SamplingConfig,
)
from .methods import (
    METHODS,
    ItemResult,
    binary_decision,
    mutual_information,
    p_valid,
    run_binary,
    run_generative,
    run_items,
    run_multiple_choice,
)
from .prompts import (
    TRIGGERS,
    VARIANTS,
    PromptSpec,
    build_binary_prompt,
    build_mc_prompt,
    build_prompt,
    conclusion_order,
    item_seed,
)

__all__ = [
    "CompletionClient", "HarnessError", "HTTPCompletionClient", "ListingMockClient", "MockClient",
    "RequestRejected", "SamplingConfig", "METHODS", "ItemResult", "binary_decision", "mutual_information",
    "p_valid", "run_binary", "run_generative", "run_items", "run_multiple_choice", "TRIGGERS", "VARIANTS",
    "PromptSpec", "build_binary_prompt", "build_mc_prompt", "build_prompt", "conclusion_order", "item_seed",
]
