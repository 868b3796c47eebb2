"""Embedding-based CHAIR variant (the ``chair-men`` metric).

Instead of string matching, each noun phrase of a caption is embedded and
compared to class-name embeddings by cosine. Matching is a strict
three-step rule:

1. the most similar class among the image's annotated objects, if its
   cosine reaches the present threshold;
2. otherwise the most similar class among all other classes, if its cosine
   reaches the (higher) absent threshold - that is a hallucination;
3. otherwise the phrase stays unassigned.

Matching against the image's own objects first keeps semantically related
but absent classes from stealing phrases that describe real objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .annotations import Corpus
from .chair import CaptionRecord, ChairResult, ImageChairDetail
from .errors import ScoringError, TransportError, ValidationError
from .grounded import word_count
from .providers import EmbeddingProvider, NounPhraseProvider

DEFAULT_PRESENT_THRESHOLD = 0.73
DEFAULT_ABSENT_THRESHOLD = 0.78


@dataclass(frozen=True)
class ChairMenConfig:
    present_threshold: float = DEFAULT_PRESENT_THRESHOLD
    absent_threshold: float = DEFAULT_ABSENT_THRESHOLD
    class_template: str = "{name}"  # embedding input per class name

    def __post_init__(self):
        for name in ("present_threshold", "absent_threshold"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValidationError(f"{name} must be in (0, 1], got {v}")


@dataclass(frozen=True)
class NpAssignment:
    phrase: str
    verdict: str  # "present" | "absent" | "unassigned"
    class_id: int | None
    best_present_cosine: float | None
    best_absent_cosine: float | None


def _best(np_vec: np.ndarray, class_embeddings: list[tuple[int, np.ndarray]]):
    best_id, best_cos = None, None
    for cid, vec in class_embeddings:
        if vec.shape != np_vec.shape:
            raise ValidationError(
                f"class {cid} embedding dim {vec.shape[0]} != phrase dim {np_vec.shape[0]}"
            )
        c = float(np.dot(np_vec, vec))
        if best_cos is None or c > best_cos:
            best_id, best_cos = cid, c
    return best_id, best_cos


def assign(
    np_embedding: np.ndarray,
    present_class_embeddings: list[tuple[int, np.ndarray]],
    absent_class_embeddings: list[tuple[int, np.ndarray]],
    cfg: ChairMenConfig,
    phrase: str = "",
) -> NpAssignment:
    """Apply the three-step matching rule to one phrase embedding.

    Class embedding lists are (class_id, unit vector) pairs; argmax ties
    break toward the lower class id, which the iteration order guarantees
    when the lists are sorted by id.
    """
    present_sorted = sorted(present_class_embeddings, key=lambda p: p[0])
    absent_sorted = sorted(absent_class_embeddings, key=lambda p: p[0])
    best_present_id, best_present = _best(np_embedding, present_sorted)
    best_absent_id, best_absent = _best(np_embedding, absent_sorted)

    if best_present is not None and best_present >= cfg.present_threshold:
        verdict, cid = "present", best_present_id
    elif best_absent is not None and best_absent >= cfg.absent_threshold:
        verdict, cid = "absent", best_absent_id
    else:
        verdict, cid = "unassigned", None
    return NpAssignment(
        phrase=phrase,
        verdict=verdict,
        class_id=cid,
        best_present_cosine=best_present,
        best_absent_cosine=best_absent,
    )


def extract_nps(plain_caption: str, np_provider: NounPhraseProvider) -> list[str]:
    """Noun phrases of a plain caption, in order, duplicates preserved."""
    if not plain_caption.strip():
        return []
    return np_provider.nps(plain_caption)


@dataclass
class CaptionAssignments:
    image_id: int | str
    assignments: list[NpAssignment] = field(default_factory=list)


@dataclass
class ChairMenResult:
    chair: ChairResult
    assignments: list[CaptionAssignments] = field(default_factory=list)
    raw_np_count: int = 0
    unassigned_count: int = 0


def class_embeddings(
    corpus: Corpus, cfg: ChairMenConfig, embedder: EmbeddingProvider
) -> dict[int, np.ndarray]:
    """Embed every registry class name once (template applied)."""
    ids = corpus.registry.ids()
    texts = [cfg.class_template.format(name=corpus.registry.name_of(cid)) for cid in ids]
    response = embedder.embed(texts)
    return dict(zip(ids, response.vectors))


def score_chair_men(
    records: list[CaptionRecord],
    corpus: Corpus,
    cfg: ChairMenConfig,
    embedding_provider: EmbeddingProvider,
    np_provider: NounPhraseProvider,
    checkpoint_path: str | Path | None = None,
) -> ChairMenResult:
    """CHAIR aggregates computed from noun-phrase/class cosine matching.

    Duplicate phrases mapping to one class count once per caption (set
    semantics). Coverage counts only present-verdict classes. With a
    checkpoint path, per-caption verdicts are appended as JSON Lines and
    already-checkpointed captions are skipped on resume; a provider failure
    mid-run raises :class:`TransportError` after flushing the checkpoint.
    """
    unknown = sorted({str(r.image_id) for r in records if r.image_id not in corpus})
    if unknown:
        raise ScoringError(f"captions reference unknown image ids: {', '.join(unknown)}")

    cls_embs = class_embeddings(corpus, cfg, embedding_provider)

    done: dict = {}
    checkpoint_file = Path(checkpoint_path) if checkpoint_path else None
    if checkpoint_file and checkpoint_file.exists():
        for line in checkpoint_file.read_text("utf-8").splitlines():
            if line.strip():
                entry = json.loads(line)
                done[entry["image_id"]] = entry

    per_caption: list[dict] = []
    try:
        for rec in records:
            if rec.image_id in done:
                per_caption.append(done[rec.image_id])
                continue
            phrases = extract_nps(rec.caption, np_provider)
            present_ids = sorted(corpus.present(rec.image_id))
            absent_ids = [cid for cid in corpus.registry.ids() if cid not in set(present_ids)]
            present_pairs = [(cid, cls_embs[cid]) for cid in present_ids]
            absent_pairs = [(cid, cls_embs[cid]) for cid in absent_ids]
            assignments = []
            for phrase in phrases:
                vec = embedding_provider.embed_one(phrase)
                assignments.append(assign(vec, present_pairs, absent_pairs, cfg, phrase=phrase))
            entry = {
                "image_id": rec.image_id,
                "caption": rec.caption,
                "assignments": [
                    {
                        "phrase": a.phrase,
                        "verdict": a.verdict,
                        "class_id": a.class_id,
                        "best_present_cosine": a.best_present_cosine,
                        "best_absent_cosine": a.best_absent_cosine,
                    }
                    for a in assignments
                ],
            }
            per_caption.append(entry)
            if checkpoint_file:
                with checkpoint_file.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry, sort_keys=True) + "\n")
    except TransportError as exc:
        raise TransportError(
            f"provider failed after {len(per_caption)}/{len(records)} captions"
            + (f"; resume from checkpoint {checkpoint_file}" if checkpoint_file else "")
        ) from exc

    # Fold verdicts into the same aggregate shape as string-matching CHAIR.
    per_image: list[ImageChairDetail] = []
    out_assignments: list[CaptionAssignments] = []
    matched_total = 0
    hallucinated_total = 0
    hallucinated_caps = 0
    objects_sum = 0
    words_sum = 0
    coverage_values: list[float] = []
    raw_np_count = 0
    unassigned_count = 0

    for rec, entry in zip(records, per_caption):
        gold = corpus.present(rec.image_id)
        assignments = [
            NpAssignment(
                phrase=a["phrase"],
                verdict=a["verdict"],
                class_id=a["class_id"],
                best_present_cosine=a["best_present_cosine"],
                best_absent_cosine=a["best_absent_cosine"],
            )
            for a in entry["assignments"]
        ]
        raw_np_count += len(assignments)
        unassigned_count += sum(1 for a in assignments if a.verdict == "unassigned")
        present_classes = {a.class_id for a in assignments if a.verdict == "present"}
        absent_classes = {a.class_id for a in assignments if a.verdict == "absent"}
        matched = present_classes | absent_classes
        matched_total += len(matched)
        hallucinated_total += len(absent_classes)
        if absent_classes:
            hallucinated_caps += 1
        objects_sum += len(matched)
        words = word_count(rec.caption)
        words_sum += words
        if gold:
            cov = len(present_classes) / len(gold)
            coverage_values.append(cov)
        else:
            cov = None
        per_image.append(
            ImageChairDetail(
                image_id=rec.image_id,
                matched=sorted(matched),
                hallucinated=sorted(absent_classes),
                gold=sorted(gold),
                words=words,
                coverage=cov,
            )
        )
        out_assignments.append(CaptionAssignments(image_id=rec.image_id, assignments=assignments))

    n = len(records)
    chair = ChairResult(
        chair_i=(hallucinated_total / matched_total) if matched_total else 0.0,
        chair_s=(hallucinated_caps / n) if n else 0.0,
        coverage=(sum(coverage_values) / len(coverage_values)) if coverage_values else None,
        avg_objects=(objects_sum / n) if n else 0.0,
        avg_words=(words_sum / n) if n else 0.0,
        matched_total=matched_total,
        hallucinated_total=hallucinated_total,
        chair_i_defined=matched_total > 0,
        per_image=per_image,
    )
    return ChairMenResult(
        chair=chair,
        assignments=out_assignments,
        raw_np_count=raw_np_count,
        unassigned_count=unassigned_count,
    )
