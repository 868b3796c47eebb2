"""Referring-expression grounding: pull a predicted box out of free-form
model output and score Precision@K against the gold box."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import BoxParseError, ValidationError
from .geometry import BBox, covering_box, iou, parse_group

_GROUP_RE = re.compile(r"\[[^\]]*\]")


@dataclass(frozen=True)
class RefExpExample:
    example_id: int | str
    expression: str
    gold: BBox
    predicted_raw: str


@dataclass
class RefExpResult:
    precision: float  # percentage (0-100)
    threshold: float
    mean_iou: float
    parse_failures: int
    total: int
    successes: int
    per_example: list[dict] = field(default_factory=list)


def extract_predicted_box(predicted_raw: str) -> BBox | None:
    """First well-formed box group in the text, merged to one covering box."""
    for m in _GROUP_RE.finditer(predicted_raw):
        try:
            group = parse_group(m.group(0))
        except BoxParseError:
            continue
        return covering_box(group)
    return None


def extract_all_boxes(predicted_raw: str) -> list[BBox]:
    """Covering boxes of every well-formed group in the text, in order."""
    boxes = []
    for m in _GROUP_RE.finditer(predicted_raw):
        try:
            boxes.append(covering_box(parse_group(m.group(0))))
        except BoxParseError:
            continue
    return boxes


def precision_at(
    examples: list[RefExpExample], k: float = 0.5, selection: str = "first"
) -> RefExpResult:
    """Fraction of examples with predicted/gold IoU >= k, as a percentage.

    IoU exactly equal to k counts as a success. Unparseable predictions are
    failures (tallied separately), never errors. ``selection`` picks the
    scored box when the output contains several groups: the first
    well-formed one (default) or the best-IoU one.
    """
    if not examples:
        raise ValidationError("precision_at needs a non-empty example list")
    if not 0.0 < k <= 1.0:
        raise ValidationError(f"threshold must be in (0, 1], got {k}")
    if selection not in ("first", "best"):
        raise ValidationError(f"selection must be 'first' or 'best', got {selection!r}")

    successes = 0
    parse_failures = 0
    iou_sum = 0.0
    per_example = []
    for ex in examples:
        if selection == "first":
            predicted = extract_predicted_box(ex.predicted_raw)
        else:
            candidates = extract_all_boxes(ex.predicted_raw)
            predicted = (
                max(candidates, key=lambda b: iou(b, ex.gold)) if candidates else None
            )
        if predicted is None:
            parse_failures += 1
            value = 0.0
            ok = False
        else:
            value = iou(predicted, ex.gold)
            ok = value >= k
        successes += int(ok)
        iou_sum += value
        per_example.append(
            {
                "example_id": ex.example_id,
                "iou": value,
                "success": ok,
                "parsed": predicted is not None,
            }
        )
    n = len(examples)
    return RefExpResult(
        precision=100.0 * successes / n,
        threshold=k,
        mean_iou=iou_sum / n,
        parse_failures=parse_failures,
        total=n,
        successes=successes,
        per_example=per_example,
    )


def load_examples(path: str | Path) -> list[RefExpExample]:
    """Read a JSON Lines examples file
    ({example_id, expression, gold:[x1,y1,x2,y2], predicted_raw})."""
    examples = []
    for line in Path(path).read_text("utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        examples.append(
            RefExpExample(
                example_id=rec["example_id"],
                expression=rec["expression"],
                gold=BBox(*rec["gold"]),
                predicted_raw=rec["predicted_raw"],
            )
        )
    return examples
