"""POPE-style object-existence benchmarks: balanced yes/no question sets
with random, popular, or adversarial negatives, plus answer scoring.

Generation pairs every positive question (an annotated class of a sampled
image) with one negative question about the same image. Negatives are
classes absent from the image, picked per strategy; repeated draws of the
same image walk down the strategy's ranking so no (image, class) pair ever
repeats within a set.
"""

from __future__ import annotations

import json
import logging
import random
import string
from dataclasses import dataclass
from pathlib import Path

from .annotations import CooccurrenceTable, Corpus
from .errors import GenerationError, ScoringError, ValidationError

log = logging.getLogger(__name__)

STRATEGIES = ("random", "popular", "adversarial")

ANSWER_SUFFIX = "Answer with yes or no."

_PUNCT_TABLE = str.maketrans({c: " " for c in string.punctuation})


@dataclass(frozen=True)
class PopeQuestion:
    question_id: int
    image_id: int | str
    class_id: int
    class_name: str
    text: str
    label: str  # "yes" | "no"
    strategy: str


@dataclass
class PopeSet:
    questions: list[PopeQuestion]
    seed: int
    strategy: str
    corpus_digest: str

    def __len__(self) -> int:
        return len(self.questions)

    def write_jsonl(self, path: str | Path) -> None:
        with Path(path).open("w", encoding="utf-8") as fh:
            for q in self.questions:
                fh.write(
                    json.dumps(
                        {
                            "question_id": q.question_id,
                            "image_id": q.image_id,
                            "class": q.class_name,
                            "text": q.text,
                            "label": q.label,
                            "strategy": q.strategy,
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )

    @staticmethod
    def read_jsonl(path: str | Path, seed: int = -1, corpus_digest: str = "") -> "PopeSet":
        questions = []
        strategy = ""
        for line in Path(path).read_text("utf-8").splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            strategy = rec["strategy"]
            questions.append(
                PopeQuestion(
                    question_id=rec["question_id"],
                    image_id=rec["image_id"],
                    class_id=-1,
                    class_name=rec["class"],
                    text=rec["text"],
                    label=rec["label"],
                    strategy=rec["strategy"],
                )
            )
        return PopeSet(questions=questions, seed=seed, strategy=strategy, corpus_digest=corpus_digest)


def render_question(class_name: str) -> str:
    """``Is there a {name} in the image? Answer with yes or no.``"""
    name = class_name.strip()
    if not name:
        raise ValidationError("class name must be non-empty")
    article = "an" if name[0].lower() in "aeiou" else "a"
    return f"Is there {article} {name} in the image? {ANSWER_SUFFIX}"


def _pick_negative(
    strategy: str,
    candidates: list[int],
    present: frozenset[int],
    stats: CooccurrenceTable,
    rng: random.Random,
    adversarial_agg: str,
) -> int:
    if strategy == "random":
        return rng.choice(sorted(candidates))
    if strategy == "popular":
        return min(candidates, key=lambda c: (-stats.freq(c), c))
    if strategy == "adversarial":
        if adversarial_agg == "max":
            def score(c):
                return max((stats.pair(c, p) for p in present), default=0)
        else:
            def score(c):
                return sum(stats.pair(c, p) for p in present)
        return min(candidates, key=lambda c: (-score(c), c))
    raise ValidationError(f"unknown strategy {strategy!r}")


def generate(
    corpus: Corpus,
    stats: CooccurrenceTable,
    strategy: str,
    n: int,
    seed: int,
    adversarial_agg: str = "sum",
) -> PopeSet:
    """Generate a balanced question set of ``n`` questions (n/2 yes, n/2 no).

    Deterministic for a fixed (corpus, strategy, n, seed). Images whose
    annotated or absent classes are exhausted drop out of the draw; if the
    requested size cannot be met, a :class:`GenerationError` reports the
    achievable count.
    """
    if strategy not in STRATEGIES:
        raise ValidationError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    if n <= 0 or n % 2 != 0:
        raise ValidationError(f"question count must be a positive even integer, got {n}")
    if adversarial_agg not in ("sum", "max"):
        raise ValidationError(f"adversarial_agg must be 'sum' or 'max', got {adversarial_agg!r}")

    rng = random.Random(seed)
    registry_ids = corpus.registry.ids()
    used_present: dict = {img.image_id: set() for img in corpus.images}
    used_absent: dict = {img.image_id: set() for img in corpus.images}
    warned_infeasible: set = set()

    questions: list[PopeQuestion] = []
    pairs_needed = n // 2

    for _ in range(pairs_needed):
        eligible = []
        for img in corpus.images:
            if not img.present:
                continue
            free_present = len(img.present) - len(used_present[img.image_id])
            free_absent = (
                len(registry_ids) - len(img.present) - len(used_absent[img.image_id])
            )
            if free_present > 0 and free_absent <= 0 and img.image_id not in warned_infeasible:
                log.warning(
                    "image %s has no unused absent class for a negative; skipping", img.image_id
                )
                warned_infeasible.add(img.image_id)
            if free_present > 0 and free_absent > 0:
                eligible.append(img)
        if not eligible:
            raise GenerationError(
                f"cannot generate {n} questions; only {len(questions)} achievable",
                achievable=len(questions),
            )
        img = eligible[rng.randrange(len(eligible))]
        pos_candidates = sorted(set(img.present) - used_present[img.image_id])
        pos_class = pos_candidates[rng.randrange(len(pos_candidates))]
        used_present[img.image_id].add(pos_class)

        neg_candidates = [
            c
            for c in registry_ids
            if c not in img.present and c not in used_absent[img.image_id]
        ]
        neg_class = _pick_negative(
            strategy, neg_candidates, img.present, stats, rng, adversarial_agg
        )
        used_absent[img.image_id].add(neg_class)

        for cid, label in ((pos_class, "yes"), (neg_class, "no")):
            name = corpus.registry.name_of(cid)
            questions.append(
                PopeQuestion(
                    question_id=len(questions) + 1,
                    image_id=img.image_id,
                    class_id=cid,
                    class_name=name,
                    text=render_question(name),
                    label=label,
                    strategy=strategy,
                )
            )

    return PopeSet(
        questions=questions, seed=seed, strategy=strategy, corpus_digest=corpus.digest()
    )


def normalize_answer(raw_text: str) -> str | None:
    """Map free-form model output to "yes"/"no" (None if unparseable)."""
    tokens = raw_text.lower().translate(_PUNCT_TABLE).split()
    if not tokens:
        return None
    if tokens[0] in ("yes", "no"):
        return tokens[0]
    for tok in tokens:
        if tok in ("yes", "no"):
            return tok
    return None


@dataclass
class PopeScore:
    accuracy: float
    accuracy_per_strategy: dict[str, float]
    yes_rate: float
    unparseable: int
    total: int
    correct: int
    unanswered: int = 0


def score(answers: list[dict], pope_set: PopeSet) -> PopeScore:
    """Accuracy of raw answers against a question set.

    Unparseable answers count as wrong (and are tallied); so do questions
    with no answer at all.
    """
    by_id = {q.question_id: q for q in pope_set.questions}
    unknown = [a["question_id"] for a in answers if a["question_id"] not in by_id]
    if unknown:
        raise ScoringError(f"answers reference unknown question ids: {unknown[:10]}")
    answered: dict[int, str] = {}
    for a in answers:
        qid = a["question_id"]
        if qid in answered:
            raise ScoringError(f"duplicate answer for question id {qid}")
        answered[qid] = a["raw_text"]

    correct = 0
    unparseable = 0
    yes_count = 0
    per_strategy: dict[str, list[int]] = {}
    for q in pope_set.questions:
        raw = answered.get(q.question_id)
        verdict = normalize_answer(raw) if raw is not None else None
        if raw is not None and verdict is None:
            unparseable += 1
        if verdict == "yes":
            yes_count += 1
        ok = int(verdict == q.label)
        correct += ok
        per_strategy.setdefault(q.strategy, []).append(ok)

    total = len(pope_set.questions)
    return PopeScore(
        accuracy=correct / total if total else 0.0,
        accuracy_per_strategy={
            s: sum(v) / len(v) for s, v in sorted(per_strategy.items())
        },
        yes_rate=yes_count / total if total else 0.0,
        unparseable=unparseable,
        total=total,
        correct=correct,
        unanswered=total - len(answered),
    )
