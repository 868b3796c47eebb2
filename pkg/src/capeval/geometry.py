"""Relative-coordinate bounding boxes and their textual encoding.

Boxes live in [0, 1] x [0, 1] (left, top, right, bottom). Groups of boxes
serialize into a single bracket pair with coordinates fixed to two decimal
places, members joined by semicolons, e.g.

    [0.10, 0.05, 0.64, 1.00; 0.50, 0.15, 0.64, 1.00]

Groups longer than three boxes are replaced by their covering box on encode
to keep the serialized form short.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BoxParseError, ValidationError

# Parsed coordinates slightly outside [0, 1] are clamped; beyond this it is
# a parse error, not sloppy model output.
COORD_TOLERANCE = 0.01

# Groups longer than this encode as their covering box.
MAX_ENCODED_BOXES = 3


@dataclass(frozen=True)
class BBox:
    """Axis-aligned rectangle in relative image coordinates."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self):
        for name in ("x1", "y1", "x2", "y2"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or v != v:  # rejects NaN
                raise ValidationError(f"box coordinate {name}={v!r} is not a number")
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"box coordinate {name}={v} outside [0, 1]")
        if self.x2 < self.x1 or self.y2 < self.y1:
            raise ValidationError(
                f"box corners out of order: ({self.x1}, {self.y1}, {self.x2}, {self.y2})"
            )

    @property
    def area(self) -> float:
        return (self.x2 - self.x1) * (self.y2 - self.y1)

    def contains(self, other: "BBox") -> bool:
        return (
            self.x1 <= other.x1
            and self.y1 <= other.y1
            and self.x2 >= other.x2
            and self.y2 >= other.y2
        )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x1, self.y1, self.x2, self.y2)


@dataclass(frozen=True)
class BoxGroup:
    """Non-empty ordered collection of boxes sharing one bracket pair."""

    boxes: tuple[BBox, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "boxes", tuple(self.boxes))
        if not self.boxes:
            raise ValidationError("box group must contain at least one box")

    def __len__(self) -> int:
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)


def iou(a: BBox, b: BBox) -> float:
    """Intersection over union of two boxes; 0.0 when the union has no area."""
    iw = min(a.x2, b.x2) - max(a.x1, b.x1)
    ih = min(a.y2, b.y2) - max(a.y1, b.y1)
    inter = max(0.0, iw) * max(0.0, ih)
    union = a.area + b.area - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def covering_box(group: BoxGroup | list[BBox] | tuple[BBox, ...]) -> BBox:
    """Minimal box containing every member of the group."""
    boxes = group.boxes if isinstance(group, BoxGroup) else tuple(group)
    if not boxes:
        raise ValidationError("cannot cover an empty group")
    return BBox(
        min(b.x1 for b in boxes),
        min(b.y1 for b in boxes),
        max(b.x2 for b in boxes),
        max(b.y2 for b in boxes),
    )


def encode_group(group: BoxGroup) -> str:
    """Render a group as canonical bracket text (two decimals per coordinate)."""
    boxes = group.boxes
    if len(boxes) > MAX_ENCODED_BOXES:
        boxes = (covering_box(group),)
    body = "; ".join(
        ", ".join(f"{c:.2f}" for c in box.as_tuple()) for box in boxes
    )
    return f"[{body}]"


_NUMBER_RE = re.compile(r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?")


def _parse_coord(token: str, offset: int) -> float:
    stripped = token.strip()
    if not stripped or not _NUMBER_RE.fullmatch(stripped):
        raise BoxParseError(f"expected a coordinate, got {token.strip()!r}", offset)
    value = float(stripped)
    if value < -COORD_TOLERANCE or value > 1.0 + COORD_TOLERANCE:
        raise BoxParseError(f"coordinate {value} outside [0, 1]", offset)
    return min(1.0, max(0.0, value))


def parse_group(text: str) -> BoxGroup:
    """Parse one bracketed box group.

    Accepts arbitrary whitespace around separators and clamps coordinates
    within ``COORD_TOLERANCE`` of [0, 1]. Raises :class:`BoxParseError`
    (with a byte offset) on anything else.
    """
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if not stripped.startswith("["):
        raise BoxParseError("box group must start with '['", lead)
    if not stripped.endswith("]"):
        raise BoxParseError("box group must end with ']'", lead + len(stripped))
    body = stripped[1:-1]
    if "[" in body or "]" in body:
        raise BoxParseError("nested brackets in box group", lead + 1 + body.index("[" if "[" in body else "]"))

    boxes = []
    cursor = lead + 1  # offset of body within the original text
    for segment in body.split(";"):
        coords = segment.split(",")
        if len(coords) != 4:
            raise BoxParseError(
                f"box needs exactly 4 coordinates, got {len(coords)}", cursor
            )
        values = []
        coord_offset = cursor
        for token in coords:
            values.append(_parse_coord(token, coord_offset))
            coord_offset += len(token) + 1
        x1, y1, x2, y2 = values
        if x2 < x1 or y2 < y1:
            raise BoxParseError("box corners out of order", cursor)
        boxes.append(BBox(x1, y1, x2, y2))
        cursor += len(segment) + 1
    return BoxGroup(tuple(boxes))
