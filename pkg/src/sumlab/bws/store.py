"""Append-only persistence for studies: immutable manifest + judgment log.

Layout under the data root:

    <root>/<study_id>/manifest.json     written once at creation
    <root>/<study_id>/judgments.jsonl   append-only, one judgment per line

The log is the source of truth; a partially written (truncated) tail line is
dropped on load, so recovery always equals replaying the surviving prefix.
Duplicate detection is atomic with the append under a per-store lock.
"""

from __future__ import annotations

import datetime as dt
import json
import threading
from pathlib import Path
from typing import Iterator

from .models import (
    BwsJudgment,
    BwsScoreReport,
    BwsStudy,
    StudyManifest,
    create_study,
    score_study,
    study_progress,
)


class JudgmentRejected(Exception):
    def __init__(self, reason: str, status: int = 409):
        super().__init__(reason)
        self.reason = reason
        self.status = status


class StudyStore:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._studies: dict[str, BwsStudy] = {}
        self._judgments: dict[str, list[BwsJudgment]] = {}
        self._judged_keys: dict[str, set[tuple[str, str]]] = {}
        for manifest_file in sorted(self.root.glob("*/manifest.json")):
            self._load_study_dir(manifest_file.parent)

    def _load_study_dir(self, study_dir: Path) -> BwsStudy:
        manifest = StudyManifest.model_validate_json(
            (study_dir / "manifest.json").read_text(encoding="utf-8")
        )
        study = create_study(manifest)
        self._studies[study.study_id] = study
        self._judgments[study.study_id] = list(
            _read_log(study_dir / "judgments.jsonl")
        )
        self._judged_keys[study.study_id] = {
            (j.pair_id, j.annotator) for j in self._judgments[study.study_id]
        }
        return study

    def _study_dir(self, study_id: str) -> Path:
        return self.root / study_id

    def create(self, manifest: StudyManifest) -> BwsStudy:
        study = create_study(manifest)
        study_dir = self._study_dir(study.study_id)
        with self._lock:
            if study.study_id in self._studies:
                return self._studies[study.study_id]
            study_dir.mkdir(parents=True, exist_ok=True)
            (study_dir / "manifest.json").write_text(
                manifest.model_dump_json(indent=2), encoding="utf-8"
            )
            (study_dir / "judgments.jsonl").touch()
            self._studies[study.study_id] = study
            self._judgments[study.study_id] = []
            self._judged_keys[study.study_id] = set()
        return study

    def get(self, study_id: str) -> BwsStudy | None:
        return self._studies.get(study_id)

    def study_ids(self) -> list[str]:
        return sorted(self._studies)

    def judgments(self, study_id: str) -> list[BwsJudgment]:
        return list(self._judgments.get(study_id, []))

    def submit(
        self, study_id: str, pair_id: str, annotator: str, best: str, worst: str
    ) -> BwsJudgment:
        """Validate and append one judgment; best/worst are system names."""
        study = self._studies.get(study_id)
        if study is None:
            raise JudgmentRejected("unknown study", status=404)
        pair = study.pair(pair_id)
        if pair is None:
            raise JudgmentRejected("unknown pair", status=404)
        if annotator not in pair.annotators:
            raise JudgmentRejected("annotator not assigned to pair", status=403)
        if best == worst:
            raise JudgmentRejected("degenerate")
        systems = {pair.system_a, pair.system_b}
        if best not in systems or worst not in systems:
            raise JudgmentRejected("judgment names a system outside the pair")
        with self._lock:
            if (pair_id, annotator) in self._judged_keys[study_id]:
                raise JudgmentRejected("already judged")
            judgment = BwsJudgment(
                pair_id=pair_id,
                annotator=annotator,
                best=best,
                worst=worst,
                timestamp=dt.datetime.now(dt.timezone.utc).isoformat(),
            )
            with open(self._study_dir(study_id) / "judgments.jsonl", "a", encoding="utf-8") as fp:
                fp.write(judgment.model_dump_json() + "\n")
                fp.flush()
            self._judgments[study_id].append(judgment)
            self._judged_keys[study_id].add((pair_id, annotator))
        return judgment

    def next_pair(self, study_id: str, annotator: str):
        """First assigned, not-yet-judged pair for this annotator, or None."""
        study = self._studies.get(study_id)
        if study is None:
            return None
        judged = self._judged_keys.get(study_id, set())
        for pair in study.pairs:
            if annotator in pair.annotators and (pair.pair_id, annotator) not in judged:
                return pair
        return None

    def score(self, study_id: str) -> BwsScoreReport:
        study = self._studies[study_id]
        return score_study(study, self._judgments[study_id])

    def progress(self, study_id: str) -> float:
        study = self._studies[study_id]
        return study_progress(study, self._judgments[study_id])

    def export(self, study_id: str) -> Iterator[str]:
        """Lossless JSONL archive: one manifest record, then the judgments."""
        study = self._studies[study_id]
        yield json.dumps(
            {"type": "manifest", "data": study.manifest.model_dump()}, ensure_ascii=False
        )
        for judgment in self._judgments[study_id]:
            yield json.dumps(
                {"type": "judgment", "data": judgment.model_dump()}, ensure_ascii=False
            )

    def import_archive(self, lines: Iterator[str]) -> BwsStudy:
        manifest: StudyManifest | None = None
        judgments: list[BwsJudgment] = []
        for line in lines:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if record["type"] == "manifest":
                manifest = StudyManifest.model_validate(record["data"])
            elif record["type"] == "judgment":
                judgments.append(BwsJudgment.model_validate(record["data"]))
            else:
                raise ValueError(f"unknown archive record type {record['type']!r}")
        if manifest is None:
            raise ValueError("archive has no manifest record")
        study = self.create(manifest)
        log = self._study_dir(study.study_id) / "judgments.jsonl"
        with self._lock:
            with open(log, "a", encoding="utf-8") as fp:
                for judgment in judgments:
                    key = (judgment.pair_id, judgment.annotator)
                    if key in self._judged_keys[study.study_id]:
                        continue
                    fp.write(judgment.model_dump_json() + "\n")
                    self._judgments[study.study_id].append(judgment)
                    self._judged_keys[study.study_id].add(key)
        return study


def _read_log(path: Path) -> Iterator[BwsJudgment]:
    """Replay the judgment log, dropping a truncated or corrupt tail.

    Reading stops at the first record that fails to parse; everything before
    it is the surviving prefix. A final chunk without a newline is accepted
    only if it forms a complete valid record.
    """
    if not path.exists():
        return
    raw = path.read_bytes()
    for chunk in raw.split(b"\n"):
        if not chunk.strip():
            continue
        try:
            yield BwsJudgment.model_validate_json(chunk.decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            return
