"""Summarization-task construction from raw news article records.

Applies a fixed filter cascade (empty body -> short title -> short abstract ->
duplicate body -> duplicate title -> duplicate abstract -> abstract-novelty
cut), assigns article-level train/valid/test splits, and emits three task
files: title summarization, abstract summarization, and category
classification.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import IO, Callable, Iterable, Sequence

import numpy as np

from .metrics import novel_ngram_proportion, tokenize
from .noising import split_sentences

CATEGORIES = ("politics", "society", "economy", "culture", "world")
MIN_TITLE_WORDS = 2
MIN_ABSTRACT_WORDS = 5

FILTER_STAGES = (
    "empty",
    "short_title",
    "short_abstract",
    "dup_body",
    "dup_title",
    "dup_abstract",
    "novelty",
)


@dataclass
class Article:
    url: str
    title: str
    abstract: str
    body: str
    category: str
    date: dt.date

    def __post_init__(self) -> None:
        if self.category not in CATEGORIES:
            raise ValueError(
                f"unknown category {self.category!r}; expected one of {CATEGORIES}"
            )
        if isinstance(self.date, str):
            self.date = dt.date.fromisoformat(self.date)

    @property
    def doc_id(self) -> str:
        return hashlib.blake2b(self.url.encode("utf-8"), digest_size=8).hexdigest()


@dataclass
class SummExample:
    doc_id: str
    source_text: str
    target_text: str
    task: str  # "title" | "abstract"
    split: str  # "train" | "valid" | "test"
    category: str


@dataclass
class BuildReport:
    input_count: int = 0
    removed: dict[str, int] = field(default_factory=lambda: {s: 0 for s in FILTER_STAGES})
    novelty_threshold: float | None = None
    final_count: int = 0
    split_sizes: dict[str, int] = field(default_factory=dict)

    @property
    def total_removed(self) -> int:
        return sum(self.removed.values())

    def to_dict(self) -> dict:
        return {
            "input_count": self.input_count,
            "removed": dict(self.removed),
            "novelty_threshold": self.novelty_threshold,
            "final_count": self.final_count,
            "split_sizes": dict(self.split_sizes),
        }


def _winners(articles: Sequence[Article], key: Callable[[Article], str]) -> set[int]:
    """Indices of the earliest-dated article per key (ties by url)."""
    best: dict[str, int] = {}
    for i, article in enumerate(articles):
        k = key(article)
        if k not in best:
            best[k] = i
        else:
            j = best[k]
            if (article.date, article.url) < (articles[j].date, articles[j].url):
                best[k] = i
    return set(best.values())


def filter_articles(articles: Sequence[Article]) -> tuple[list[Article], BuildReport]:
    """Length filters then exact-duplicate removal by body, title, abstract.

    Duplicate groups keep the earliest-dated article (ties broken by url);
    output preserves input order. Stage counts land in the report.
    """
    report = BuildReport(input_count=len(articles))
    kept: list[Article] = []
    for article in articles:
        if not article.body.strip():
            report.removed["empty"] += 1
        elif len(article.title.split()) < MIN_TITLE_WORDS:
            report.removed["short_title"] += 1
        elif len(article.abstract.split()) < MIN_ABSTRACT_WORDS:
            report.removed["short_abstract"] += 1
        else:
            kept.append(article)

    for stage, key in (
        ("dup_body", lambda a: a.body),
        ("dup_title", lambda a: a.title),
        ("dup_abstract", lambda a: a.abstract),
    ):
        winners = _winners(kept, key)
        report.removed[stage] += len(kept) - len(winners)
        kept = [a for i, a in enumerate(kept) if i in winners]

    report.final_count = len(kept)
    return kept, report


def abstract_novelty(article: Article) -> float:
    """Proportion of the abstract's distinct unigrams absent from the body."""
    return novel_ngram_proportion(tokenize(article.abstract), tokenize(article.body), 1).value


def novelty_filter(
    articles: Sequence[Article], quantile: float = 0.10
) -> tuple[list[Article], float | None]:
    """Drop the ceil(quantile*N) articles with the most novel abstracts.

    Ties break toward the higher proportion, then stable input order. Returns
    the survivors (input order) and the smallest removed proportion as the
    threshold; empty input or a zero quantile gives threshold None.
    """
    if not 0 <= quantile <= 1:
        raise ValueError("quantile must be in [0, 1]")
    n = len(articles)
    n_remove = math.ceil(quantile * n)
    if n == 0 or n_remove == 0:
        return list(articles), None
    proportions = [abstract_novelty(a) for a in articles]
    order = sorted(range(n), key=lambda i: (-proportions[i], i))
    removed = set(order[:n_remove])
    threshold = proportions[order[n_remove - 1]]
    return [a for i, a in enumerate(articles) if i not in removed], threshold


def make_splits(
    articles: Sequence[Article],
    test_n: int = 10_000,
    valid_n: int = 10_000,
    seed: int = 0,
) -> list[str]:
    """Random article-level split labels: test_n test, valid_n valid, rest train."""
    n = len(articles)
    if n <= test_n + valid_n:
        raise ValueError(
            f"need more than {test_n + valid_n} articles for test={test_n} valid={valid_n}, got {n}"
        )
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    labels = ["train"] * n
    for i in perm[:test_n]:
        labels[int(i)] = "test"
    for i in perm[test_n : test_n + valid_n]:
        labels[int(i)] = "valid"
    return labels


@dataclass
class BuildResult:
    title: list[SummExample]
    abstract: list[SummExample]
    ncc: list[dict]
    report: BuildReport


def build_dataset(
    articles: Sequence[Article],
    test_n: int = 10_000,
    valid_n: int = 10_000,
    novelty_quantile: float = 0.10,
    seed: int = 0,
    novelty_applies_to: str = "abstract",
) -> BuildResult:
    """Run the full cascade and emit the three tasks with shared splits.

    Splits are drawn over the novelty survivors so both summarization tasks
    keep full-size test/valid sets; articles the novelty cut removed can only
    ever appear as extra training data for the title and classification tasks
    (``novelty_applies_to="both"`` drops them everywhere).
    """
    if novelty_applies_to not in ("abstract", "both"):
        raise ValueError("novelty_applies_to must be 'abstract' or 'both'")
    survivors, report = filter_articles(articles)
    kept, threshold = novelty_filter(survivors, novelty_quantile)
    report.removed["novelty"] = len(survivors) - len(kept)
    report.novelty_threshold = threshold
    report.final_count = len(kept)

    labels = make_splits(kept, test_n, valid_n, seed)
    split_of = {a.doc_id: lbl for a, lbl in zip(kept, labels)}
    report.split_sizes = {
        lbl: sum(1 for v in split_of.values() if v == lbl)
        for lbl in ("train", "valid", "test")
    }

    wide_set = kept if novelty_applies_to == "both" else survivors
    title = [
        SummExample(a.doc_id, a.body, a.title, "title", split_of.get(a.doc_id, "train"), a.category)
        for a in wide_set
    ]
    abstract = [
        SummExample(a.doc_id, a.body, a.abstract, "abstract", split_of[a.doc_id], a.category)
        for a in kept
    ]
    ncc = [
        {
            "doc_id": a.doc_id,
            "source": a.body,
            "label": a.category,
            "split": split_of.get(a.doc_id, "train"),
        }
        for a in wide_set
    ]
    return BuildResult(title=title, abstract=abstract, ncc=ncc, report=report)


@dataclass
class TaskStats:
    pairs: int
    avg_doc_words: float
    avg_doc_sentences: float
    avg_summary_words: float
    avg_summary_sentences: float
    doc_vocab: int
    summary_vocab: int

    def to_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "avg_doc_words": round(self.avg_doc_words, 2),
            "avg_doc_sentences": round(self.avg_doc_sentences, 2),
            "avg_summary_words": round(self.avg_summary_words, 2),
            "avg_summary_sentences": round(self.avg_summary_sentences, 2),
            "doc_vocab": self.doc_vocab,
            "summary_vocab": self.summary_vocab,
            "doc_vocab_k": round(self.doc_vocab / 1000, 1),
            "summary_vocab_k": round(self.summary_vocab / 1000, 1),
        }


def dataset_stats(pairs: Iterable[tuple[str, str]]) -> TaskStats:
    """Average lengths (words, sentences) and vocabulary sizes for (doc, summary) pairs."""
    n = 0
    doc_words = doc_sents = sum_words = sum_sents = 0
    doc_vocab: set[str] = set()
    summary_vocab: set[str] = set()
    for document, summary in pairs:
        n += 1
        d_tok = tokenize(document)
        s_tok = tokenize(summary)
        doc_words += len(d_tok.tokens)
        sum_words += len(s_tok.tokens)
        doc_sents += len(split_sentences(document))
        sum_sents += len(split_sentences(summary))
        doc_vocab.update(d_tok.tokens)
        summary_vocab.update(s_tok.tokens)
    if n == 0:
        return TaskStats(0, 0.0, 0.0, 0.0, 0.0, 0, 0)
    return TaskStats(
        pairs=n,
        avg_doc_words=doc_words / n,
        avg_doc_sentences=doc_sents / n,
        avg_summary_words=sum_words / n,
        avg_summary_sentences=sum_sents / n,
        doc_vocab=len(doc_vocab),
        summary_vocab=len(summary_vocab),
    )


def read_articles(fp: IO[str]) -> list[Article]:
    articles = []
    for lineno, line in enumerate(fp, 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            articles.append(
                Article(
                    url=obj["url"],
                    title=obj["title"],
                    abstract=obj["abstract"],
                    body=obj["body"],
                    category=obj["category"],
                    date=obj["date"],
                )
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad article record on line {lineno}: {exc}") from exc
    return articles


def write_task(fp: IO[str], examples: Iterable[SummExample]) -> int:
    n = 0
    for ex in examples:
        fp.write(
            json.dumps(
                {
                    "doc_id": ex.doc_id,
                    "source": ex.source_text,
                    "target": ex.target_text,
                    "split": ex.split,
                },
                ensure_ascii=False,
            )
            + "\n"
        )
        n += 1
    return n


def read_task(fp: IO[str]) -> list[dict]:
    rows = []
    for lineno, line in enumerate(fp, 1):
        line = line.strip()
        if not line:
            continue
        try:
            rows.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ValueError(f"bad task record on line {lineno}: {exc}") from exc
    return rows
