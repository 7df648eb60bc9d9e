"""ROUGE-1/2/L, novel n-gram abstractivity, repetition rate, and length stats.

All metrics operate on case-folded, punctuation-trimmed whitespace tokens.
No stemming, no stopword removal.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .noising import split_sentences


@dataclass
class TokenizedText:
    tokens: list[str]
    sentence_bounds: list[tuple[int, int]]


def _trim_punct(token: str) -> str:
    start, end = 0, len(token)
    while start < end and unicodedata.category(token[start]).startswith("P"):
        start += 1
    while end > start and unicodedata.category(token[end - 1]).startswith("P"):
        end -= 1
    return token[start:end]


def tokenize(text: str) -> TokenizedText:
    """Lowercase, split on whitespace, trim surrounding punctuation, drop empties.

    str.lower() rather than str.casefold(): casefolding rewrites the Greek
    final sigma (ς -> σ), which would distort every reported token.
    """
    tokens: list[str] = []
    bounds: list[tuple[int, int]] = []
    for sentence in split_sentences(text):
        start = len(tokens)
        for raw in sentence.split():
            tok = _trim_punct(raw).lower()
            if tok:
                tokens.append(tok)
        if len(tokens) > start:
            bounds.append((start, len(tokens)))
    return TokenizedText(tokens=tokens, sentence_bounds=bounds)


def _tokens(text) -> Sequence[str]:
    if isinstance(text, TokenizedText):
        return text.tokens
    if isinstance(text, str):
        return tokenize(text).tokens
    return text


@dataclass
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, match: int, cand_total: int, ref_total: int) -> "RougeScore":
        p = match / cand_total if cand_total else 0.0
        r = match / ref_total if ref_total else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        return cls(precision=p, recall=r, f1=f)


def _ngrams(tokens: Sequence[str], n: int) -> list[tuple[str, ...]]:
    return [tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1)]


def rouge_n(candidate, reference, n: int) -> RougeScore:
    """Clipped n-gram overlap: each n-gram counts at most min(cand, ref) times."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cand = Counter(_ngrams(_tokens(candidate), n))
    ref = Counter(_ngrams(_tokens(reference), n))
    match = sum(min(count, ref[g]) for g, count in cand.items())
    return RougeScore.from_counts(match, sum(cand.values()), sum(ref.values()))


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate, reference) -> RougeScore:
    """LCS over the whole token sequences (sentence bounds ignored), F1 with beta=1."""
    cand = _tokens(candidate)
    ref = _tokens(reference)
    return RougeScore.from_counts(_lcs_length(cand, ref), len(cand), len(ref))


class NgramNovelty(NamedTuple):
    value: float
    defined: bool


def novel_ngram_proportion(
    summary, document, n: int, occurrence_based: bool = False
) -> NgramNovelty:
    """Fraction of summary n-grams absent from the document.

    Set semantics over distinct n-grams by default; ``occurrence_based``
    weights by occurrence instead. A summary shorter than n tokens is
    undefined and reported as (0.0, defined=False).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    summary_tokens = _tokens(summary)
    if len(summary_tokens) < n:
        return NgramNovelty(0.0, False)
    doc_ngrams = set(_ngrams(_tokens(document), n))
    grams = _ngrams(summary_tokens, n)
    if not occurrence_based:
        grams = list(set(grams))
    novel = sum(1 for g in grams if g not in doc_ngrams)
    return NgramNovelty(novel / len(grams), True)


def repetition_rate(summary) -> float:
    """(token count - distinct token count) / token count; 0 for empty input."""
    tokens = _tokens(summary)
    if not tokens:
        return 0.0
    return (len(tokens) - len(set(tokens))) / len(tokens)


def rouge_report(candidates: Sequence, references: Sequence) -> dict:
    """Corpus-mean ROUGE-1/2/L as `{rouge1: {p, r, f}, ...}`, values x100, 2 decimals."""
    if len(candidates) != len(references):
        raise ValueError("candidate/reference counts differ")
    if not candidates:
        raise ValueError("empty evaluation set")
    totals = {"rouge1": [0.0, 0.0, 0.0], "rouge2": [0.0, 0.0, 0.0], "rougeL": [0.0, 0.0, 0.0]}
    for cand, ref in zip(candidates, references):
        cand_tok = tokenize(cand) if isinstance(cand, str) else cand
        ref_tok = tokenize(ref) if isinstance(ref, str) else ref
        for key, score in (
            ("rouge1", rouge_n(cand_tok, ref_tok, 1)),
            ("rouge2", rouge_n(cand_tok, ref_tok, 2)),
            ("rougeL", rouge_l(cand_tok, ref_tok)),
        ):
            totals[key][0] += score.precision
            totals[key][1] += score.recall
            totals[key][2] += score.f1
    n = len(candidates)
    return {
        key: {
            "p": round(100 * p / n, 2),
            "r": round(100 * r / n, 2),
            "f": round(100 * f / n, 2),
        }
        for key, (p, r, f) in totals.items()
    }


@dataclass
class AbstractivityReport:
    novel_fraction: dict[int, float]
    mean_summary_words: float
    undefined: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "novel_ngrams_pct": {n: round(100 * v, 2) for n, v in self.novel_fraction.items()},
            "mean_summary_words": round(self.mean_summary_words, 2),
            "undefined_counts": dict(self.undefined),
        }


def abstractivity_report(
    summaries: Sequence[str], documents: Sequence[str], max_n: int = 4
) -> AbstractivityReport:
    """Mean novel n-gram proportion for n=1..max_n plus mean summary length in words.

    Summaries shorter than n tokens are excluded from the n-gram mean and
    tallied under ``undefined``.
    """
    if len(summaries) != len(documents):
        raise ValueError("summary/document counts differ")
    sums = {n: 0.0 for n in range(1, max_n + 1)}
    counts = {n: 0 for n in range(1, max_n + 1)}
    undefined = {n: 0 for n in range(1, max_n + 1)}
    total_words = 0
    for summary, document in zip(summaries, documents):
        s_tok = tokenize(summary)
        d_tok = tokenize(document)
        total_words += len(s_tok.tokens)
        for n in range(1, max_n + 1):
            novelty = novel_ngram_proportion(s_tok, d_tok, n)
            if novelty.defined:
                sums[n] += novelty.value
                counts[n] += 1
            else:
                undefined[n] += 1
    return AbstractivityReport(
        novel_fraction={n: (sums[n] / counts[n] if counts[n] else 0.0) for n in sums},
        mean_summary_words=total_words / len(summaries) if summaries else 0.0,
        undefined=undefined,
    )


def corpus_repetition(summaries: Sequence[str]) -> float:
    """Mean per-summary repetition rate over the corpus."""
    if not summaries:
        return 0.0
    return sum(repetition_rate(s) for s in summaries) / len(summaries)
