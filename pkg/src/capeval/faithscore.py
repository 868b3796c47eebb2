"""FaithScore: decompose captions into atomic facts with a chat LLM, verify
each fact with a VQA model, and report the positive fraction.

The extraction prompt is a versioned asset; its hash travels with every
result so scores from different prompts are never silently compared.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .chair import CaptionRecord
from .errors import TransportError
from .pope import normalize_answer
from .providers import ChatProvider, VqaProvider

VERIFY_TEMPLATE = "Is the following statement correct? {statement}"

FACT_CATEGORIES = ("entity", "color", "relation", "count", "other")

_COLOR_WORDS = {
    "red", "orange", "yellow", "green", "blue", "purple", "pink", "brown",
    "black", "white", "gray", "grey", "golden", "silver", "beige", "tan",
}
_COUNT_WORDS = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    "ten", "several", "many", "few", "couple", "single", "pair",
}
_RELATION_WORDS = {
    "on", "in", "under", "above", "behind", "beside", "near", "next",
    "between", "inside", "against", "around", "riding", "holding",
    "wearing", "eating", "standing", "sitting", "lying",
}

_BULLET_RE = re.compile(r"^\s*(?:[-*•]|\d+[.)])\s*")


def load_prompt_template(path: str | Path | None = None) -> str:
    """The fact-extraction prompt; ``None`` loads the bundled asset."""
    if path is None:
        return resources.files("capeval.data").joinpath("fact_prompt.txt").read_text("utf-8")
    return Path(path).read_text("utf-8")


def prompt_hash(template: str) -> str:
    return "sha256:" + hashlib.sha256(template.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class AtomicFact:
    statement: str
    category: str
    image_id: int | str


def categorize(statement: str) -> str:
    """Keyword heuristic for diagnostic breakdowns only."""
    words = set(re.findall(r"[a-z]+", statement.lower()))
    if any(ch.isdigit() for ch in statement) or words & _COUNT_WORDS:
        return "count"
    if words & _COLOR_WORDS:
        return "color"
    if words & _RELATION_WORDS:
        return "relation"
    if statement.lower().startswith(("there is", "there are")):
        return "entity"
    return "other"


def _clean_fact_line(line: str) -> str | None:
    text = _BULLET_RE.sub("", line).strip()
    if not text:
        return None
    lowered = text.lower()
    if lowered.startswith(("caption:", "facts:", "fact:")):
        text = text.split(":", 1)[1].strip()
        if not text:
            return None
    if text.endswith("?") or text.endswith(":"):
        return None
    # Keep a single sentence; drop anything after the first terminator.
    first = re.split(r"(?<=[.!])\s+", text)[0].strip()
    first = first.rstrip(".")
    if len(first.split()) < 2:
        return None
    return first


def extract_facts(
    caption: str,
    chat_provider: ChatProvider,
    template: str | None = None,
    image_id: int | str = "",
) -> list[AtomicFact]:
    """One atomic fact per declarative output line of the extraction LLM."""
    if not caption.strip():
        return []
    template = template if template is not None else load_prompt_template()
    prompt = template.replace("{caption}", caption)
    output = chat_provider.chat(prompt)
    facts = []
    for line in output.splitlines():
        statement = _clean_fact_line(line)
        if statement:
            facts.append(
                AtomicFact(statement=statement, category=categorize(statement), image_id=image_id)
            )
    return facts


def verify_fact(fact: AtomicFact, image_id, vqa_provider: VqaProvider) -> bool:
    """Ask the VQA model whether the statement holds for the image."""
    question = VERIFY_TEMPLATE.format(statement=fact.statement)
    answer = vqa_provider.vqa(image_id, question)
    return normalize_answer(answer) == "yes"


@dataclass
class CaptionFacts:
    image_id: int | str
    facts: list[AtomicFact] = field(default_factory=list)
    verdicts: list[bool] = field(default_factory=list)


@dataclass
class FaithResult:
    faith_score: float
    avg_facts: float
    total_facts: int
    positive_facts: int
    faith_score_defined: bool
    incomplete: bool
    unparseable_verdicts: int
    per_caption: list[CaptionFacts] = field(default_factory=list)


def score_faith(
    records: list[CaptionRecord],
    chat_provider: ChatProvider,
    vqa_provider: VqaProvider,
    template: str | None = None,
    checkpoint_path: str | Path | None = None,
) -> FaithResult:
    """Corpus-level FaithScore with per-caption checkpointing.

    A provider outage mid-run flushes the checkpoint and returns the
    partial result with ``incomplete=True``.
    """
    template = template if template is not None else load_prompt_template()

    done: dict = {}
    checkpoint_file = Path(checkpoint_path) if checkpoint_path else None
    if checkpoint_file and checkpoint_file.exists():
        for line in checkpoint_file.read_text("utf-8").splitlines():
            if line.strip():
                entry = json.loads(line)
                done[entry["image_id"]] = entry

    per_caption: list[CaptionFacts] = []
    unparseable = 0
    incomplete = False
    for rec in records:
        if rec.image_id in done:
            entry = done[rec.image_id]
            per_caption.append(
                CaptionFacts(
                    image_id=rec.image_id,
                    facts=[
                        AtomicFact(statement=s, category=categorize(s), image_id=rec.image_id)
                        for s in entry["facts"]
                    ],
                    verdicts=[bool(v) for v in entry["verdicts"]],
                )
            )
            continue
        try:
            facts = extract_facts(rec.caption, chat_provider, template, image_id=rec.image_id)
            verdicts = []
            for fact in facts:
                question = VERIFY_TEMPLATE.format(statement=fact.statement)
                answer = vqa_provider.vqa(rec.image_id, question)
                parsed = normalize_answer(answer)
                if parsed is None:
                    unparseable += 1
                verdicts.append(parsed == "yes")
        except TransportError:
            incomplete = True
            break
        per_caption.append(CaptionFacts(image_id=rec.image_id, facts=facts, verdicts=verdicts))
        if checkpoint_file:
            with checkpoint_file.open("a", encoding="utf-8") as fh:
                fh.write(
                    json.dumps(
                        {
                            "image_id": rec.image_id,
                            "facts": [f.statement for f in facts],
                            "verdicts": verdicts,
                        },
                        sort_keys=True,
                    )
                    + "\n"
                )

    total = sum(len(c.verdicts) for c in per_caption)
    positive = sum(sum(c.verdicts) for c in per_caption)
    n_caps = len(per_caption)
    return FaithResult(
        faith_score=(positive / total) if total else 0.0,
        avg_facts=(sum(len(c.facts) for c in per_caption) / n_caps) if n_caps else 0.0,
        total_facts=sum(len(c.facts) for c in per_caption),
        positive_facts=positive,
        faith_score_defined=total > 0,
        incomplete=incomplete,
        unparseable_verdicts=unparseable,
        per_caption=per_caption,
    )
