"""Domain and wire models for the best-worst-scaling study."""

from __future__ import annotations

import hashlib
import itertools
import random
from typing import Literal

from pydantic import BaseModel, Field, model_validator


class StudyDocument(BaseModel):
    doc_id: str
    text: str


class StudyManifest(BaseModel):
    """Immutable study definition: documents, systems, summaries, annotators."""

    systems: list[str] = Field(min_length=2)
    documents: list[StudyDocument] = Field(min_length=1)
    summaries: dict[str, dict[str, str]]  # system -> doc_id -> summary text
    annotators: list[str] = Field(min_length=1)
    k: int = 3
    seed: int = 0
    blind: bool = True  # identities hidden, presentation sides randomized

    @model_validator(mode="after")
    def _check(self) -> "StudyManifest":
        if len(set(self.systems)) != len(self.systems):
            raise ValueError("duplicate system names")
        if len(set(self.annotators)) != len(self.annotators):
            raise ValueError("duplicate annotator ids")
        if len(set(d.doc_id for d in self.documents)) != len(self.documents):
            raise ValueError("duplicate doc_ids")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if len(self.annotators) < self.k:
            raise ValueError(
                f"need at least k={self.k} annotators, got {len(self.annotators)}"
            )
        doc_ids = {d.doc_id for d in self.documents}
        for system in self.systems:
            missing = doc_ids - set(self.summaries.get(system, {}))
            if missing:
                raise ValueError(f"system {system!r} lacks summaries for {sorted(missing)}")
        return self


class BwsPair(BaseModel):
    pair_id: str
    doc_id: str
    system_a: str
    system_b: str
    left: str  # system shown on the left
    right: str  # system shown on the right
    annotators: list[str]

    @model_validator(mode="after")
    def _check(self) -> "BwsPair":
        if self.system_a == self.system_b:
            raise ValueError("pair systems must differ")
        if {self.left, self.right} != {self.system_a, self.system_b}:
            raise ValueError("left/right must present exactly the pair's systems")
        if len(set(self.annotators)) != len(self.annotators):
            raise ValueError("pair annotators must be distinct")
        return self


class BwsStudy(BaseModel):
    study_id: str
    manifest: StudyManifest
    pairs: list[BwsPair]

    def pair(self, pair_id: str) -> BwsPair | None:
        return next((p for p in self.pairs if p.pair_id == pair_id), None)

    @property
    def expected_judgments(self) -> int:
        return len(self.pairs) * self.manifest.k


class BwsJudgment(BaseModel):
    pair_id: str
    annotator: str
    best: str  # system name
    worst: str  # system name
    timestamp: str

    @model_validator(mode="after")
    def _check(self) -> "BwsJudgment":
        if self.best == self.worst:
            raise ValueError("degenerate")
        return self


class SystemScore(BaseModel):
    score: float | None
    appearances: int
    best: int
    worst: int


class BwsScoreReport(BaseModel):
    systems: dict[str, SystemScore]
    judgments: int


def study_id_for(manifest: StudyManifest) -> str:
    """Deterministic 16-hex id derived from the manifest content."""
    canonical = manifest.model_dump_json()
    return hashlib.blake2b(canonical.encode("utf-8"), digest_size=8).hexdigest()


def create_study(manifest: StudyManifest) -> BwsStudy:
    """Enumerate all document x system-pair combinations and assign annotators.

    Every pair gets k distinct annotators chosen greedily by lowest current
    load with seeded random tie-breaking, which keeps per-annotator loads
    within +/-1 of each other. Presentation sides are randomized per pair.
    """
    rng = random.Random(manifest.seed)
    loads = {a: 0 for a in manifest.annotators}
    pairs: list[BwsPair] = []
    index = 0
    for doc in manifest.documents:
        for sys_a, sys_b in itertools.combinations(manifest.systems, 2):
            ranked = sorted(manifest.annotators, key=lambda a: (loads[a], rng.random()))
            chosen = ranked[: manifest.k]
            for a in chosen:
                loads[a] += 1
            left, right = (sys_a, sys_b) if rng.random() < 0.5 else (sys_b, sys_a)
            pairs.append(
                BwsPair(
                    pair_id=f"p{index:05d}",
                    doc_id=doc.doc_id,
                    system_a=sys_a,
                    system_b=sys_b,
                    left=left,
                    right=right,
                    annotators=chosen,
                )
            )
            index += 1
    return BwsStudy(study_id=study_id_for(manifest), manifest=manifest, pairs=pairs)


def score_study(study: BwsStudy, judgments: list[BwsJudgment]) -> BwsScoreReport:
    """Per-system 100 * (best - worst) / appearances over judged pairs only."""
    appearances = {s: 0 for s in study.manifest.systems}
    best = {s: 0 for s in study.manifest.systems}
    worst = {s: 0 for s in study.manifest.systems}
    for judgment in judgments:
        pair = study.pair(judgment.pair_id)
        if pair is None:
            continue
        appearances[pair.system_a] += 1
        appearances[pair.system_b] += 1
        best[judgment.best] += 1
        worst[judgment.worst] += 1
    systems = {
        s: SystemScore(
            score=(100.0 * (best[s] - worst[s]) / appearances[s]) if appearances[s] else None,
            appearances=appearances[s],
            best=best[s],
            worst=worst[s],
        )
        for s in study.manifest.systems
    }
    return BwsScoreReport(systems=systems, judgments=len(judgments))


def study_progress(study: BwsStudy, judgments: list[BwsJudgment]) -> float:
    return len(judgments) / study.expected_judgments if study.expected_judgments else 0.0


# Wire models for the HTTP API.


class CreateStudyResponse(BaseModel):
    study_id: str
    pairs: int
    expected_judgments: int


class NextPair(BaseModel):
    pair_id: str
    document_text: str
    summary_left: str
    summary_right: str


class StudyDone(BaseModel):
    done: Literal[True] = True


class JudgmentRequest(BaseModel):
    pair_id: str
    annotator: str
    best: Literal["left", "right"]
    worst: Literal["left", "right"]


class ProgressResponse(BaseModel):
    judged: int
    expected: int
    progress: float
