"""HTTP sidecar serving the model-backed endpoints the caption-evaluation
engine consumes: sentence embeddings, noun-phrase extraction, and optional
chat/VQA proxies, with record mode for offline fixture replay."""

__version__ = "0.1.0"

from .app import SidecarConfig, create_app, serve  # noqa: F401
from .models import chunk_noun_phrases, ngram_embedding  # noqa: F401
