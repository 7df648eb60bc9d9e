"""Streaming cleaning, deduplication, sampling, and stats for a multi-source pretraining corpus.

Documents flow through as JSON Lines (`{"id", "source", "text"}`); every
operation here is either a pure per-document function (clean, stats) or a
single-pass generator (dedup, sample), so the pipeline can be sharded freely
except for the dedup decision point.
"""

from __future__ import annotations

import hashlib
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

SOURCES = ("wikipedia", "europarl", "oscar", "web", "other")

# Everything except Wikipedia uses the 1000-character floor.
DEFAULT_MIN_CHARS = 1000
MIN_CHARS = {"wikipedia": 30}

_URL_RE = re.compile(r"(?<!\S)(?:[A-Za-z][A-Za-z0-9+.-]*://\S+|www\.\S+)")
_TAG_RE = re.compile(r"</?[A-Za-z!][^<>]*>")
_HASHTAG_RE = re.compile(r"(?<!\S)#\S+")

# Codepoint ranges with default emoji presentation (Unicode emoji data),
# plus regional indicators and the invisible sequence glue (VS15/16, ZWJ,
# combining keycap). Dedicated pictographic blocks are taken wholesale.
_EMOJI_RANGES = (
    (0x200D, 0x200D),
    (0x20E3, 0x20E3),
    (0x231A, 0x231B),
    (0x23E9, 0x23EC),
    (0x23F0, 0x23F0),
    (0x23F3, 0x23F3),
    (0x25FD, 0x25FE),
    (0x2614, 0x2615),
    (0x2648, 0x2653),
    (0x267F, 0x267F),
    (0x2693, 0x2693),
    (0x26A1, 0x26A1),
    (0x26AA, 0x26AB),
    (0x26BD, 0x26BE),
    (0x26C4, 0x26C5),
    (0x26CE, 0x26CE),
    (0x26D4, 0x26D4),
    (0x26EA, 0x26EA),
    (0x26F2, 0x26F3),
    (0x26F5, 0x26F5),
    (0x26FA, 0x26FA),
    (0x26FD, 0x26FD),
    (0x2705, 0x2705),
    (0x270A, 0x270B),
    (0x2728, 0x2728),
    (0x274C, 0x274C),
    (0x274E, 0x274E),
    (0x2753, 0x2755),
    (0x2757, 0x2757),
    (0x2795, 0x2797),
    (0x27B0, 0x27B0),
    (0x27BF, 0x27BF),
    (0x2B1B, 0x2B1C),
    (0x2B50, 0x2B50),
    (0x2B55, 0x2B55),
    (0xFE0E, 0xFE0F),
    (0x1F004, 0x1F004),
    (0x1F0CF, 0x1F0CF),
    (0x1F18E, 0x1F18E),
    (0x1F191, 0x1F19A),
    (0x1F1E6, 0x1F1FF),
    (0x1F201, 0x1F202),
    (0x1F21A, 0x1F21A),
    (0x1F22F, 0x1F22F),
    (0x1F232, 0x1F23A),
    (0x1F250, 0x1F251),
    (0x1F300, 0x1F5FF),
    (0x1F600, 0x1F64F),
    (0x1F680, 0x1F6FF),
    (0x1F7E0, 0x1F7EB),
    (0x1F900, 0x1F9FF),
    (0x1FA70, 0x1FAFF),
)

_EMOJI_RE = re.compile(
    "[" + "".join(f"{chr(lo)}-{chr(hi)}" for lo, hi in _EMOJI_RANGES) + "]"
)


def content_id(text: str) -> str:
    """Stable 64-bit content hash of ``text``, as 16 hex characters."""
    return hashlib.blake2b(text.encode("utf-8"), digest_size=8).hexdigest()


@dataclass
class Document:
    """One cleaned text unit of the pretraining corpus."""

    id: str
    source: str
    text: str
    char_count: int

    @classmethod
    def from_text(cls, text: str, source: str) -> "Document":
        if source not in SOURCES:
            raise ValueError(f"unknown source {source!r}; expected one of {SOURCES}")
        return cls(id=content_id(text), source=source, text=text, char_count=len(text))


def clean_text(raw: str, reject_patterns: Iterable[re.Pattern] = ()) -> str:
    """Strip URLs, emoji, markup tags, and hashtags; normalize whitespace.

    Emoji removal runs first so that deleting an emoji never exposes a new
    URL/hashtag token; tag removal runs before URL removal because stripping
    a tag can expose a URL that was glued to it.
    """
    text = raw.replace("\r\n", "\n").replace("\r", "\n")
    text = _EMOJI_RE.sub("", text)
    text = _TAG_RE.sub("", text)
    text = _URL_RE.sub("", text)
    text = _HASHTAG_RE.sub("", text)
    lines = (" ".join(line.split()) for line in text.split("\n"))
    kept = (line for line in lines if line)
    if reject_patterns:
        kept = (ln for ln in kept if not any(p.search(ln) for p in reject_patterns))
    return "\n".join(kept)


def clean_document(
    raw: str | bytes,
    source: str,
    reject_patterns: Iterable[re.Pattern] = (),
) -> Document | None:
    """Clean one raw document; returns None when it fails the length floor.

    ``reject_patterns`` is the pluggable noisy-line filter (empty by default:
    the corpora need per-dataset rules that only a human pass can supply).
    """
    if isinstance(raw, (bytes, bytearray)):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ValueError(f"invalid UTF-8 at byte offset {exc.start}") from exc
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}; expected one of {SOURCES}")
    text = clean_text(raw, reject_patterns)
    if len(text) < MIN_CHARS.get(source, DEFAULT_MIN_CHARS):
        return None
    return Document(id=content_id(text), source=source, text=text, char_count=len(text))


def deduplicate(documents: Iterable[Document]) -> Iterator[Document]:
    """Emit each distinct text once, in first-occurrence order.

    Keyed on the 64-bit content hash; colliding hashes fall back to a
    full-text comparison so distinct texts always survive.
    """
    seen: dict[str, list[str]] = {}
    for doc in documents:
        bucket = seen.setdefault(doc.id, [])
        if doc.text in bucket:
            continue
        bucket.append(doc.text)
        yield doc


@dataclass
class SampleResult:
    documents: list[Document]
    sampled_bytes: int
    total_bytes: int
    undersized: bool = False


def sample_for_vocab(
    documents: Iterable[Document], target_bytes: int, seed: int
) -> SampleResult:
    """Uniform random subset whose UTF-8 size lands within one document of the target.

    Two-pass: materialize, shuffle with the seeded generator, take the shortest
    prefix reaching ``target_bytes``, and emit it in original corpus order.
    A corpus smaller than the target is returned whole with ``undersized`` set.
    """
    import numpy as np

    if target_bytes <= 0:
        raise ValueError("target_bytes must be positive")
    docs = list(documents)
    sizes = np.array([len(d.text.encode("utf-8")) for d in docs], dtype=np.int64)
    total = int(sizes.sum()) if len(docs) else 0
    if total <= target_bytes:
        return SampleResult(docs, total, total, undersized=True)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(docs))
    cumulative = np.cumsum(sizes[order])
    count = int(np.searchsorted(cumulative, target_bytes, side="left")) + 1
    chosen = sorted(int(i) for i in order[:count])
    return SampleResult([docs[i] for i in chosen], int(cumulative[count - 1]), total)


def character_coverage(documents: Iterable[Document], coverage: float) -> list[str]:
    """Smallest frequency-ordered character prefix whose cumulative share meets ``coverage``.

    Ordered by descending frequency, ties by codepoint. Empty corpus gives [].
    """
    if not 0 < coverage <= 1:
        raise ValueError("coverage must be in (0, 1]")
    counts: Counter[str] = Counter()
    for doc in documents:
        counts.update(doc.text)
    total = sum(counts.values())
    if total == 0:
        return []
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    needed = coverage * total
    out: list[str] = []
    cumulative = 0
    for ch, n in ranked:
        out.append(ch)
        cumulative += n
        if cumulative >= needed:
            break
    return out


@dataclass
class SourceStats:
    docs_before: int = 0
    docs_after: int = 0
    bytes_before: int = 0
    bytes_after: int = 0


@dataclass
class CorpusStats:
    per_source: dict[str, SourceStats] = field(default_factory=dict)

    @property
    def total_bytes_before(self) -> int:
        return sum(s.bytes_before for s in self.per_source.values())

    @property
    def total_bytes_after(self) -> int:
        return sum(s.bytes_after for s in self.per_source.values())

    def to_dict(self) -> dict:
        report = {
            source: {
                "docs_before": s.docs_before,
                "docs_after": s.docs_after,
                "bytes_before": s.bytes_before,
                "bytes_after": s.bytes_after,
            }
            for source, s in sorted(self.per_source.items())
        }
        report["total"] = {
            "bytes_before": self.total_bytes_before,
            "bytes_after": self.total_bytes_after,
        }
        return report


def corpus_stats(
    before: Iterable[Document], after: Iterable[Document]
) -> CorpusStats:
    """Per-source document counts and byte sizes before/after deduplication."""
    stats = CorpusStats()
    for doc in before:
        s = stats.per_source.setdefault(doc.source, SourceStats())
        s.docs_before += 1
        s.bytes_before += len(doc.text.encode("utf-8"))
    for doc in after:
        s = stats.per_source.setdefault(doc.source, SourceStats())
        s.docs_after += 1
        s.bytes_after += len(doc.text.encode("utf-8"))
    return stats


def read_documents(fp: IO[str]) -> Iterator[Document]:
    """Parse document JSON Lines; malformed lines raise ValueError with the line number."""
    for lineno, line in enumerate(fp, 1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
            yield Document(
                id=obj["id"],
                source=obj["source"],
                text=obj["text"],
                char_count=len(obj["text"]),
            )
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"bad document record on line {lineno}: {exc}") from exc


def write_documents(fp: IO[str], documents: Iterable[Document]) -> int:
    n = 0
    for doc in documents:
        fp.write(
            json.dumps(
                {"id": doc.id, "source": doc.source, "text": doc.text},
                ensure_ascii=False,
            )
            + "\n"
        )
        n += 1
    return n
