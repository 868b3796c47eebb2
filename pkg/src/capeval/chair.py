"""String-matching CHAIR: find mentioned object classes by exact matching
against class names and synonyms, then score hallucination and coverage.

The matcher lowercases the caption, strips punctuation, and scans left to
right trying the longest synonym phrase first (so "hot dog" wins over
"dog"). Plural handling is deliberately naive: a trailing "s" or "es" is
stripped before lookup, nothing more.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field

from .annotations import ClassRegistry, Corpus
from .errors import ScoringError
from .grounded import word_count

_PUNCT_TABLE = str.maketrans({c: " " for c in string.punctuation})
_WORD_RE = re.compile(r"\S+")


@dataclass(frozen=True)
class CaptionRecord:
    image_id: int | str
    caption: str


@dataclass
class ImageChairDetail:
    image_id: int | str
    matched: list[int]
    hallucinated: list[int]
    gold: list[int]
    words: int
    coverage: float | None  # None when the image has no annotated objects


@dataclass
class ChairResult:
    """Dataset-level CHAIR aggregates (all ratios in [0, 1])."""

    chair_i: float
    chair_s: float
    coverage: float | None
    avg_objects: float
    avg_words: float
    matched_total: int
    hallucinated_total: int
    chair_i_defined: bool
    per_image: list[ImageChairDetail] = field(default_factory=list)


def tokenize(caption: str) -> list[str]:
    """Lowercased words with punctuation removed."""
    return [m.group(0) for m in _WORD_RE.finditer(caption.lower().translate(_PUNCT_TABLE))]


def singular_variants(phrase: str) -> list[str]:
    """The phrase plus its last word with a trailing "s" / "es" stripped."""
    variants = [phrase]
    words = phrase.split(" ")
    last = words[-1]
    if last.endswith("s") and len(last) > 2:
        variants.append(" ".join(words[:-1] + [last[:-1]]))
    if last.endswith("es") and len(last) > 3:
        variants.append(" ".join(words[:-1] + [last[:-2]]))
    return variants


def match_string(caption: str, registry: ClassRegistry) -> set[int]:
    """Distinct class ids mentioned in the caption."""
    lexicon = registry.match_lexicon()
    max_len = max((phrase.count(" ") + 1 for phrase in lexicon), default=1)
    tokens = tokenize(caption)
    matched: set[int] = set()
    i = 0
    while i < len(tokens):
        hit_len = 0
        for length in range(min(max_len, len(tokens) - i), 0, -1):
            ngram = " ".join(tokens[i : i + length])
            for variant in singular_variants(ngram):
                cid = lexicon.get(variant)
                if cid is not None:
                    matched.add(cid)
                    hit_len = length
                    break
            if hit_len:
                break
        i += hit_len or 1
    return matched


def score_chair(records: list[CaptionRecord], corpus: Corpus) -> ChairResult:
    """Score a set of captions against the corpus gold annotations."""
    unknown = sorted({str(r.image_id) for r in records if r.image_id not in corpus})
    if unknown:
        raise ScoringError(f"captions reference unknown image ids: {', '.join(unknown)}")

    per_image: list[ImageChairDetail] = []
    matched_total = 0
    hallucinated_total = 0
    hallucinated_caps = 0
    objects_sum = 0
    words_sum = 0
    coverage_values: list[float] = []

    for rec in records:
        gold = corpus.present(rec.image_id)
        matched = match_string(rec.caption, corpus.registry)
        hallucinated = matched - gold
        matched_total += len(matched)
        hallucinated_total += len(hallucinated)
        if hallucinated:
            hallucinated_caps += 1
        objects_sum += len(matched)
        words = word_count(rec.caption)
        words_sum += words
        if gold:
            cov = len(matched & gold) / len(gold)
            coverage_values.append(cov)
        else:
            cov = None
        per_image.append(
            ImageChairDetail(
                image_id=rec.image_id,
                matched=sorted(matched),
                hallucinated=sorted(hallucinated),
                gold=sorted(gold),
                words=words,
                coverage=cov,
            )
        )

    n = len(records)
    return ChairResult(
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
