"""LEAD-N and EXT-ORACLE extractive baselines."""

from __future__ import annotations

from dataclasses import dataclass

from .metrics import rouge_report, rouge_l, tokenize
from .noising import split_sentences

METHODS = ("lead", "ext-oracle")


def lead(document: str, n: int = 1) -> str:
    """First min(n, sentence_count) sentences of the document, in order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    sentences = split_sentences(document)
    if not sentences:
        raise ValueError("empty document")
    return " ".join(sentences[:n])


def ext_oracle(document: str, gold: str) -> str:
    """Document sentence with the highest ROUGE-L F1 against the gold summary.

    Ties go to the earliest sentence.
    """
    sentences = split_sentences(document)
    if not sentences:
        raise ValueError("empty document")
    if not gold.strip():
        raise ValueError("empty gold summary")
    gold_tok = tokenize(gold)
    best_sentence = sentences[0]
    best_f1 = -1.0
    for sentence in sentences:
        f1 = rouge_l(tokenize(sentence), gold_tok).f1
        if f1 > best_f1:
            best_f1 = f1
            best_sentence = sentence
    return best_sentence


@dataclass
class BaselineRun:
    method: str
    split: str
    predictions: list[dict]  # {"doc_id", "prediction"}
    report: dict  # rouge_report output, x100

    def to_dict(self) -> dict:
        return {"method": self.method, "split": self.split, "rouge": self.report}


def evaluate_baseline(
    rows: list[dict], method: str, n: int = 1, split: str = "test"
) -> BaselineRun:
    """Run a baseline over one split of a task file and report corpus-mean ROUGE.

    ``rows`` are task records with "doc_id", "source", "target", "split";
    rows without a split label are treated as part of the requested split.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    subset = [r for r in rows if r.get("split", split) == split]
    if not subset:
        raise ValueError(f"no rows in split {split!r}")
    predictions = []
    for row in subset:
        if method == "lead":
            pred = lead(row["source"], n)
        else:
            pred = ext_oracle(row["source"], row["target"])
        predictions.append({"doc_id": row.get("doc_id", ""), "prediction": pred})
    report = rouge_report(
        [p["prediction"] for p in predictions], [r["target"] for r in subset]
    )
    return BaselineRun(method=method, split=split, predictions=predictions, report=report)
