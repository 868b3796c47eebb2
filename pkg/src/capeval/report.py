"""Metric report assembly: a reproducible JSON document per evaluation run,
plus the signed-delta comparison between two runs.

Reports never contain timestamps (those live in a sidecar metadata file),
so equal inputs and config produce byte-identical report files. Headline
ratio metrics are stored on the conventional percentage scale used by
caption-evaluation tables; a labeled null slot is kept for metrics the
engine does not compute (CIDEr) so exported tables stay aligned.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ValidationError

SCHEMA_VERSION = "1"
TOOL_NAME = "capeval"
TOOL_VERSION = "0.1.0"

# Canonical column order for table-style rendering.
METRIC_COLUMNS = [
    "cider",
    "clip_score",
    "words",
    "chair_i",
    "chair_s",
    "coverage",
    "objects",
    "faith_score",
    "facts",
    "pope_accuracy",
    "yes_rate",
    "precision_at_50",
    "mean_iou",
]


def file_digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def pct(value: float | None) -> float | None:
    """Ratio -> rounded percentage."""
    return None if value is None else round(100.0 * value, 2)


def mean2(value: float | None) -> float | None:
    return None if value is None else round(value, 2)


@dataclass
class MetricReport:
    metrics: dict
    detail: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    dataset_digest: str | None = None
    predictions_digest: str | None = None
    schema_version: str = SCHEMA_VERSION
    tool: dict = field(default_factory=lambda: {"name": TOOL_NAME, "version": TOOL_VERSION})

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "tool": self.tool,
            "dataset_digest": self.dataset_digest,
            "predictions_digest": self.predictions_digest,
            "config": self.config,
            "metrics": self.metrics,
            "detail": self.detail,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def write(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), "utf-8")

    @staticmethod
    def from_dict(data: dict) -> "MetricReport":
        return MetricReport(
            metrics=data.get("metrics", {}),
            detail=data.get("detail", {}),
            config=data.get("config", {}),
            dataset_digest=data.get("dataset_digest"),
            predictions_digest=data.get("predictions_digest"),
            schema_version=data.get("schema_version", SCHEMA_VERSION),
            tool=data.get("tool", {"name": TOOL_NAME, "version": TOOL_VERSION}),
        )

    @staticmethod
    def read(path: str | Path) -> "MetricReport":
        return MetricReport.from_dict(json.loads(Path(path).read_text("utf-8")))

    def to_markdown(self) -> str:
        columns = [c for c in METRIC_COLUMNS if c in self.metrics]
        extras = sorted(k for k in self.metrics if k not in METRIC_COLUMNS)
        columns += extras
        header = "| " + " | ".join(columns) + " |"
        ruler = "|" + "|".join([" --- "] * len(columns)) + "|"
        cells = []
        for c in columns:
            v = self.metrics[c]
            cells.append("—" if v is None else f"{v:.2f}" if isinstance(v, float) else str(v))
        row = "| " + " | ".join(cells) + " |"
        lines = [f"# {TOOL_NAME} report", "", header, ruler, row, ""]
        if self.dataset_digest:
            lines.append(f"- dataset: `{self.dataset_digest}`")
        if self.predictions_digest:
            lines.append(f"- predictions: `{self.predictions_digest}`")
        notes = self.detail.get("notes", [])
        for note in notes:
            lines.append(f"- {note}")
        return "\n".join(lines) + "\n"


def diff_reports(a: MetricReport, b: MetricReport) -> dict:
    """Per-metric deltas (b minus a) between two runs on the same dataset.

    Returns ``{"deltas": {metric: {a, b, delta, formatted}}, "notices": [...]}``
    with signed two-decimal formatting; metrics missing from either side are
    listed in the notices instead of producing a delta.
    """
    if a.dataset_digest != b.dataset_digest:
        raise ValidationError(
            f"dataset digests differ: {a.dataset_digest!r} vs {b.dataset_digest!r}"
        )
    deltas: dict = {}
    notices: list[str] = []
    keys = sorted(set(a.metrics) | set(b.metrics))
    for key in keys:
        va = a.metrics.get(key)
        vb = b.metrics.get(key)
        if key not in a.metrics or key not in b.metrics:
            notices.append(f"metric {key!r} present in only one report; omitted from diff")
            continue
        if va is None or vb is None:
            notices.append(f"metric {key!r} is null in at least one report; omitted from diff")
            continue
        delta = vb - va
        deltas[key] = {
            "a": va,
            "b": vb,
            "delta": delta,
            "formatted": f"{delta:.2f}",
        }
    return {"deltas": deltas, "notices": notices}
