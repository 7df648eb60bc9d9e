"""Denoising-pair generation: sentence shuffling plus Poisson span masking.

Produces (corrupted, original) whitespace-token sequences. The corruption
pipeline is sentence split -> random sentence permutation -> span infilling,
where span lengths are Poisson draws and every span (including length zero,
which is an insertion) collapses to a single mask token.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

# Terminators: '.', '!', the Greek question mark (both the dedicated codepoint
# and the ASCII semicolon used in practice), ellipsis, and newline.
_TERMINATORS = frozenset({".", "!", ";", ";", "…"})

# Common Greek abbreviations that end in a period but do not end a sentence,
# compared casefolded. Single-letter entries ("κ.") are listed explicitly;
# there is no blanket single-letter rule, so enumerations like "Α. Β. Γ."
# still split into three sentences.
GREEK_ABBREVIATIONS = frozenset(
    {
        "κ.",
        "κκ.",
        "κ.λπ.",
        "κλπ.",
        "κ.τ.λ.",
        "κτλ.",
        "κ.ά.",
        "κ.ο.κ.",
        "π.χ.",
        "λ.χ.",
        "δηλ.",
        "βλ.",
        "σελ.",
        "αρ.",
        "τηλ.",
        "αγ.",
        "τ.μ.",
        "π.μ.",
        "μ.μ.",
        "μ.χ.",
        "υγ.",
        "στρ.",
        "χλμ.",
    }
)


def _guarded(text: str, seg_start: int, dot: int, abbreviations: frozenset[str]) -> bool:
    # Token containing the period: from the last whitespace (or segment start)
    # up to and including the dot.
    tok_start = dot
    while tok_start > seg_start and not text[tok_start - 1].isspace():
        tok_start -= 1
    token = text[tok_start : dot + 1]
    return token.casefold() in abbreviations


def split_sentences(
    text: str, abbreviations: frozenset[str] = GREEK_ABBREVIATIONS
) -> list[str]:
    """Split text into sentences on '.', '!', ';', ellipsis, and newline.

    A terminator only splits when followed by whitespace or end of text, so
    in-token periods ("3.5", "π.χ.") never break. Periods are additionally
    guarded by the abbreviation list. Whitespace-only input gives [].
    """
    sentences: list[str] = []
    start = 0
    n = len(text)
    for i, ch in enumerate(text):
        if ch == "\n":
            boundary = True
        elif ch in _TERMINATORS and (i + 1 == n or text[i + 1].isspace()):
            boundary = not (ch == "." and _guarded(text, start, i, abbreviations))
        else:
            boundary = False
        if boundary:
            segment = text[start : i + 1].strip()
            if segment:
                sentences.append(segment)
            start = i + 1
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


@dataclass
class NoiseConfig:
    """Corruption parameters; defaults mask 30% of tokens with Poisson(3.5) spans."""

    mask_ratio: float = 0.30
    poisson_lambda: float = 3.5
    permute_sentences: bool = True
    mask_token: str = "[MASK]"
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.mask_ratio < 1:
            raise ValueError("mask_ratio must be in [0, 1)")
        if self.poisson_lambda <= 0:
            raise ValueError("poisson_lambda must be positive")

    @classmethod
    def from_dict(cls, obj: dict) -> "NoiseConfig":
        allowed = {"mask_ratio", "poisson_lambda", "permute_sentences", "mask_token", "seed"}
        unknown = set(obj) - allowed
        if unknown:
            raise ValueError(f"unknown noise config fields: {sorted(unknown)}")
        return cls(**obj)


@dataclass
class NoisedPair:
    """A (corrupted, original) token-sequence pair plus the bookkeeping to undo it.

    ``span_starts`` are positions in the permuted token sequence;
    ``sentence_order`` lists original sentence indices in presentation order,
    and ``sentence_token_counts`` the token count of each original sentence,
    which together let a validator map every corrupted position back to the
    original sequence.
    """

    original: list[str]
    corrupted: list[str]
    masked_token_count: int
    span_lengths: list[int]
    span_starts: list[int] = field(default_factory=list)
    sentence_order: list[int] = field(default_factory=list)
    sentence_token_counts: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "original": self.original,
            "corrupted": self.corrupted,
            "spans": self.span_lengths,
            "span_starts": self.span_starts,
            "sentence_order": self.sentence_order,
            "sentence_token_counts": self.sentence_token_counts,
        }


def sample_span_length(rng: np.random.Generator, lam: float = 3.5) -> int:
    """One Poisson(lam) span length; zero is legal and means mask insertion."""
    return int(rng.poisson(lam))


def _mask_budget(mask_ratio: float, n_tokens: int) -> int:
    # floor(ratio * n); the epsilon absorbs float artifacts like 0.3*10 -> 2.9999...
    return int(math.floor(mask_ratio * n_tokens + 1e-9))


def _sample_spans(
    n: int,
    budget: int,
    rng: np.random.Generator,
    sampler: Callable[[np.random.Generator], int],
) -> list[tuple[int, int]]:
    """Non-overlapping (start, length) spans totalling exactly ``budget`` tokens.

    Starts are uniform over the placements still admissible for the drawn
    length. When no gap fits the draw, the length shrinks to the largest free
    gap (remaining budget > 0 guarantees a free token, so progress is certain);
    the last draw is truncated to land exactly on the budget.
    """
    occupied = np.zeros(n, dtype=bool)
    zero_gaps: set[int] = set()
    spans: list[tuple[int, int]] = []
    masked = 0

    def inside_span(gap: int) -> bool:
        return any(s < gap < s + ln for s, ln in spans if ln > 0)

    while masked < budget:
        length = sampler(rng)
        length = min(length, budget - masked)
        if length == 0:
            gaps = [g for g in range(n + 1) if g not in zero_gaps and not inside_span(g)]
            if not gaps:
                continue
            gap = gaps[int(rng.integers(len(gaps)))]
            zero_gaps.add(gap)
            spans.append((gap, 0))
            continue
        starts = _valid_starts(n, length, occupied, zero_gaps)
        while not starts:
            # No gap fits this length; shrink until one does. Length 1 always
            # places somewhere because masked < budget < n leaves a free token.
            length -= 1
            starts = _valid_starts(n, length, occupied, zero_gaps)
        start = starts[int(rng.integers(len(starts)))]
        occupied[start : start + length] = True
        spans.append((start, length))
        masked += length
    spans.sort()
    return spans


def _valid_starts(
    n: int, length: int, occupied: np.ndarray, zero_gaps: set[int]
) -> list[int]:
    # A start is valid when the window is free and would not swallow a
    # zero-length insertion point.
    out = []
    for s in range(n - length + 1):
        if occupied[s : s + length].any():
            continue
        if any(s < g < s + length for g in zero_gaps):
            continue
        out.append(s)
    return out


def _apply_spans(
    tokens: Sequence[str], spans: list[tuple[int, int]], mask_token: str
) -> list[str]:
    nonzero = {s: ln for s, ln in spans if ln > 0}
    zero = {s for s, ln in spans if ln == 0}
    out: list[str] = []
    i = 0
    n = len(tokens)
    while i <= n:
        if i in zero:
            out.append(mask_token)
        if i in nonzero:
            out.append(mask_token)
            i += nonzero[i]
            continue
        if i < n:
            out.append(tokens[i])
        i += 1
    return out


def text_infill(
    tokens: Sequence[str],
    cfg: NoiseConfig,
    rng: np.random.Generator,
    span_sampler: Callable[[np.random.Generator], int] | None = None,
) -> NoisedPair:
    """Mask exactly floor(mask_ratio * len(tokens)) tokens with Poisson-length spans.

    A budget below one token returns the identity pair. ``span_sampler``
    overrides the Poisson draw (used by tests to force degenerate lengths).
    """
    if not tokens:
        raise ValueError("empty input")
    tokens = list(tokens)
    sampler = span_sampler or (lambda r: sample_span_length(r, cfg.poisson_lambda))
    budget = _mask_budget(cfg.mask_ratio, len(tokens))
    if budget < 1:
        return NoisedPair(
            original=tokens,
            corrupted=list(tokens),
            masked_token_count=0,
            span_lengths=[],
            sentence_order=[0],
            sentence_token_counts=[len(tokens)],
        )
    spans = _sample_spans(len(tokens), budget, rng, sampler)
    return NoisedPair(
        original=tokens,
        corrupted=_apply_spans(tokens, spans, cfg.mask_token),
        masked_token_count=sum(ln for _, ln in spans),
        span_lengths=[ln for _, ln in spans],
        span_starts=[s for s, _ in spans],
        sentence_order=[0],
        sentence_token_counts=[len(tokens)],
    )


def permute_sentences(sentences: list[str], rng: np.random.Generator) -> list[str]:
    """Uniformly random reordering of the sentences (Fisher-Yates via the generator)."""
    order = rng.permutation(len(sentences))
    return [sentences[int(i)] for i in order]


def corrupt(document, cfg: NoiseConfig) -> NoisedPair:
    """Full corruption pipeline for one document.

    Sentence split -> permutation (when enabled) -> whitespace tokenization ->
    span infilling. ``original`` holds the unpermuted, unmasked token sequence.
    Deterministic for a fixed config seed.
    """
    text = getattr(document, "text", document)
    rng = np.random.default_rng(cfg.seed)
    sentences = split_sentences(text)
    if not sentences:
        raise ValueError("empty input")
    if cfg.permute_sentences:
        order = [int(i) for i in rng.permutation(len(sentences))]
    else:
        order = list(range(len(sentences)))
    sentence_tokens = [s.split() for s in sentences]
    original = [t for toks in sentence_tokens for t in toks]
    permuted = [t for i in order for t in sentence_tokens[i]]

    budget = _mask_budget(cfg.mask_ratio, len(permuted))
    if budget < 1:
        spans: list[tuple[int, int]] = []
    else:
        spans = _sample_spans(
            len(permuted), budget, rng, lambda r: sample_span_length(r, cfg.poisson_lambda)
        )
    return NoisedPair(
        original=original,
        corrupted=_apply_spans(permuted, spans, cfg.mask_token),
        masked_token_count=sum(ln for _, ln in spans),
        span_lengths=[ln for _, ln in spans],
        span_starts=[s for s, _ in spans],
        sentence_order=order,
        sentence_token_counts=[len(toks) for toks in sentence_tokens],
    )
