"""Self-contained deterministic NLP backends for the sidecar service.

Two builtin models ship with the service so it runs (and its fixtures
replay) without any model downloads:

* ``builtin:ngram``   - hashed character-trigram + word-unigram embeddings,
* ``builtin:chunker`` - rule-based noun-phrase chunking over closed-class
  word lists.

A ``st:<model-id>`` embedding backend loads a sentence-transformers model
when one is available locally; it is never required by the test suite.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

DEFAULT_EMBEDDING_DIM = 64

_TOKEN_RE = re.compile(r"[A-Za-z0-9']+|[^\sA-Za-z0-9']")

# Words that start or extend a noun phrase without being its head.
_DETERMINERS = {
    "a", "an", "the", "this", "that", "these", "those", "his", "her", "its",
    "their", "my", "your", "our", "some", "any", "each", "every", "another",
    "other", "both", "all", "no", "one", "two", "three", "four", "five",
    "six", "seven", "eight", "nine", "ten", "several", "many", "few",
}

# Closed-class words (plus a small common-verb list) that end a chunk.
_BOUNDARY = {
    "is", "are", "was", "were", "be", "been", "being", "am", "has", "have",
    "had", "do", "does", "did", "will", "would", "can", "could", "may",
    "might", "must", "shall", "should", "and", "or", "but", "nor", "so",
    "yet", "of", "in", "on", "at", "by", "for", "with", "to", "from",
    "into", "onto", "over", "under", "above", "below", "near", "beside",
    "behind", "between", "through", "during", "without", "within", "along",
    "across", "around", "past", "toward", "towards", "off", "out", "up",
    "down", "as", "than", "which", "who", "whom", "whose", "where", "when",
    "while", "if", "because", "although", "though", "since", "until",
    "before", "after", "not", "very", "too", "also", "just", "only",
    "there", "here", "it", "he", "she", "they", "we", "you", "i", "them",
    "him", "us", "me", "what", "how", "why",
    # frequent caption verbs the suffix rules cannot catch
    "chase", "chases", "spray", "sprays", "perch", "perches", "sit", "sits",
    "sat", "hang", "hangs", "graze", "grazes", "throw", "throws", "hold",
    "holds", "rest", "rests", "play", "plays", "fly", "flies", "board",
    "boards", "slice", "slices", "carry", "carries", "pull", "pulls",
    "ride", "rides", "rode", "walk", "walks", "run", "runs", "ran",
    "stand", "stands", "stood", "sleep", "sleeps", "eat", "eats", "ate",
    "drink", "drinks", "jump", "jumps", "look", "looks", "watch",
    "watches", "wear", "wears", "drive", "drives", "leave", "leaves",
    "left", "move", "moves", "come", "comes", "go", "goes", "get", "gets",
    "make", "makes", "take", "takes", "see", "sees", "saw", "say", "says",
    "put", "puts", "lie", "lies", "lay",
}


def ngram_embedding(text: str, dim: int = DEFAULT_EMBEDDING_DIM) -> list[float]:
    """Deterministic unit vector from hashed character trigrams and words."""
    normalized = " ".join(text.lower().split())
    vec = np.zeros(dim, dtype=np.float64)
    features = []
    padded = f" {normalized} "
    for i in range(len(padded) - 2):
        features.append("c:" + padded[i : i + 3])
    for word in re.findall(r"[a-z0-9']+", normalized):
        features.append("w:" + word)
    for feat in features:
        digest = hashlib.blake2b(feat.encode("utf-8"), digest_size=8).digest()
        value = int.from_bytes(digest, "big")
        idx = value % dim
        sign = 1.0 if (value >> 32) % 2 == 0 else -1.0
        vec[idx] += sign
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        vec[0] = 1.0
        norm = 1.0
    return (vec / norm).tolist()


def _is_verbish(token: str, prev_in_chunk: str | None) -> bool:
    lower = token.lower()
    if len(lower) > 4 and (lower.endswith("ing") or lower.endswith("ed")):
        # participial adjectives directly after a determiner stay in the
        # chunk ("a peeled apple"); anything else reads as a verb
        return prev_in_chunk is None or prev_in_chunk.lower() not in _DETERMINERS
    return False


def chunk_noun_phrases(text: str) -> list[dict]:
    """Noun-phrase spans as ``{"text", "start", "end"}`` dicts."""
    phrases: list[dict] = []
    chunk: list[re.Match] = []

    def flush():
        nonlocal chunk
        if chunk and any(m.group(0).lower() not in _DETERMINERS for m in chunk):
            phrases.append(
                {
                    "text": text[chunk[0].start() : chunk[-1].end()],
                    "start": chunk[0].start(),
                    "end": chunk[-1].end(),
                }
            )
        chunk = []

    for m in _TOKEN_RE.finditer(text):
        token = m.group(0)
        lower = token.lower()
        if not token[0].isalnum():
            flush()
            continue
        if lower in _BOUNDARY or (len(lower) > 3 and lower.endswith("ly")):
            flush()
            continue
        if lower in _DETERMINERS:
            if chunk and chunk[-1].group(0).lower() not in _DETERMINERS:
                flush()
            chunk.append(m)
            continue
        prev = chunk[-1].group(0) if chunk else None
        if _is_verbish(token, prev):
            flush()
            continue
        chunk.append(m)
    flush()
    return phrases
