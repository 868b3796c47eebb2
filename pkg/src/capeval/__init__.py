"""Deterministic evaluation engine for object hallucination in open-ended
image captioning: benchmark generation (POPE), string and semantic CHAIR,
FaithScore orchestration, and referring-expression grounding precision."""

__version__ = "0.1.0"

from .annotations import (  # noqa: F401
    ClassRegistry,
    CooccurrenceTable,
    Corpus,
    build_stats,
    load_coco_instances,
    load_synonyms,
)
from .chair import CaptionRecord, ChairResult, match_string, score_chair  # noqa: F401
from .chair_men import (  # noqa: F401
    ChairMenConfig,
    ChairMenResult,
    NpAssignment,
    assign,
    extract_nps,
    score_chair_men,
)
from .faithscore import AtomicFact, FaithResult, extract_facts, score_faith, verify_fact  # noqa: F401
from .geometry import BBox, BoxGroup, covering_box, encode_group, iou, parse_group  # noqa: F401
from .grounded import GroundedCaption, Mention, parse_grounded, strip_boxes, word_count  # noqa: F401
from .pope import PopeQuestion, PopeSet, generate, render_question  # noqa: F401
from .providers import (  # noqa: F401
    ChatProvider,
    EmbeddingProvider,
    EmbeddingResponse,
    NounPhraseProvider,
    ProviderConfig,
    VqaProvider,
    clip_score,
    cosine,
)
from .refexp import RefExpExample, RefExpResult, precision_at  # noqa: F401
from .report import MetricReport, diff_reports  # noqa: F401
