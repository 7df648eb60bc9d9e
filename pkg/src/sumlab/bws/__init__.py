from .models import (
    BwsJudgment,
    BwsPair,
    BwsScoreReport,
    BwsStudy,
    StudyManifest,
    create_study,
    score_study,
    study_progress,
)
from .store import JudgmentRejected, StudyStore

__all__ = [
    "BwsJudgment",
    "BwsPair",
    "BwsScoreReport",
    "BwsStudy",
    "StudyManifest",
    "create_study",
    "score_study",
    "study_progress",
    "JudgmentRejected",
    "StudyStore",
]
