"""HTTP service: best-worst-scaling study collection plus evaluation endpoints.

The annotation API is the study's only mutation path; annotators never see
system identities, only randomized left/right sides. Evaluation endpoints
expose the core metrics for small request-sized payloads (bulk work goes
through the CLI, which reads files directly).
"""

from __future__ import annotations

from pathlib import Path
from typing import Union

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .. import metrics
from .models import (
    BwsScoreReport,
    CreateStudyResponse,
    JudgmentRequest,
    NextPair,
    ProgressResponse,
    StudyDone,
    StudyManifest,
)
from .store import JudgmentRejected, StudyStore


class RougeRequest(BaseModel):
    candidates: list[str] = Field(min_length=1)
    references: list[str] = Field(min_length=1)


class AbstractivityRequest(BaseModel):
    summaries: list[str] = Field(min_length=1)
    documents: list[str] = Field(min_length=1)
    max_n: int = 4


class RepetitionRequest(BaseModel):
    summaries: list[str] = Field(min_length=1)


class RepetitionResponse(BaseModel):
    repetition_pct: float


def create_app(data_dir: Path | str, ui_dir: Path | str | None = None) -> FastAPI:
    app = FastAPI(title="sumlab")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    store = StudyStore(data_dir)
    app.state.store = store

    @app.post("/studies", response_model=CreateStudyResponse, status_code=201)
    def post_study(manifest: StudyManifest) -> CreateStudyResponse:
        study = store.create(manifest)
        return CreateStudyResponse(
            study_id=study.study_id,
            pairs=len(study.pairs),
            expected_judgments=study.expected_judgments,
        )

    @app.get("/studies/{study_id}/next", response_model=Union[NextPair, StudyDone])
    def get_next(study_id: str, annotator: str = Query(...)):
        study = store.get(study_id)
        if study is None:
            raise HTTPException(status_code=404, detail="unknown study")
        pair = store.next_pair(study_id, annotator)
        if pair is None:
            return StudyDone()
        document = next(
            d.text for d in study.manifest.documents if d.doc_id == pair.doc_id
        )
        summaries = study.manifest.summaries
        return NextPair(
            pair_id=pair.pair_id,
            document_text=document,
            summary_left=summaries[pair.left][pair.doc_id],
            summary_right=summaries[pair.right][pair.doc_id],
        )

    @app.post("/studies/{study_id}/judgments", status_code=201)
    def post_judgment(study_id: str, body: JudgmentRequest):
        study = store.get(study_id)
        if study is None:
            raise HTTPException(status_code=404, detail="unknown study")
        pair = study.pair(body.pair_id)
        if pair is None:
            raise HTTPException(status_code=404, detail="unknown pair")
        if body.best == body.worst:
            raise HTTPException(status_code=409, detail="degenerate")
        sides = {"left": pair.left, "right": pair.right}
        try:
            judgment = store.submit(
                study_id,
                body.pair_id,
                body.annotator,
                best=sides[body.best],
                worst=sides[body.worst],
            )
        except JudgmentRejected as exc:
            raise HTTPException(status_code=exc.status, detail=exc.reason) from exc
        return {"status": "accepted", "pair_id": judgment.pair_id}

    @app.get("/studies/{study_id}/score", response_model=BwsScoreReport)
    def get_score(study_id: str) -> BwsScoreReport:
        if store.get(study_id) is None:
            raise HTTPException(status_code=404, detail="unknown study")
        return store.score(study_id)

    @app.get("/studies/{study_id}/progress", response_model=ProgressResponse)
    def get_progress(study_id: str) -> ProgressResponse:
        study = store.get(study_id)
        if study is None:
            raise HTTPException(status_code=404, detail="unknown study")
        return ProgressResponse(
            judged=len(store.judgments(study_id)),
            expected=study.expected_judgments,
            progress=store.progress(study_id),
        )

    @app.post("/eval/rouge")
    def post_rouge(body: RougeRequest) -> dict:
        if len(body.candidates) != len(body.references):
            raise HTTPException(status_code=422, detail="candidate/reference counts differ")
        return metrics.rouge_report(body.candidates, body.references)

    @app.post("/eval/abstractivity")
    def post_abstractivity(body: AbstractivityRequest) -> dict:
        if len(body.summaries) != len(body.documents):
            raise HTTPException(status_code=422, detail="summary/document counts differ")
        return metrics.abstractivity_report(
            body.summaries, body.documents, body.max_n
        ).to_dict()

    @app.post("/eval/repetition", response_model=RepetitionResponse)
    def post_repetition(body: RepetitionRequest) -> RepetitionResponse:
        return RepetitionResponse(
            repetition_pct=round(100 * metrics.corpus_repetition(body.summaries), 2)
        )

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
