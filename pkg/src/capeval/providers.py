"""Uniform contracts for model-backed dependencies: sentence embeddings,
noun-phrase extraction, chat LLM, and VQA.

Every provider role supports three interchangeable backends:

* ``http``    - POST to a conforming service (see the wire formats below),
* ``fixture`` - replay recorded responses from a JSON Lines file,
* ``mock``    - a deterministic rule supplied by tests.

Wire formats (shared with the sidecar service):

* ``POST /embed {"texts": [...]}``        -> ``{"model": m, "dim": n, "vectors": [[...]]}``
* ``POST /noun_phrases {"text": t}``      -> ``{"phrases": [{"text", "start", "end"}]}``
* ``POST /chat {"prompt": p}``            -> ``{"text": t}``
* ``POST /vqa {"image_id", "question"}``  -> ``{"text": t}``
* ``GET /health``                         -> 200 when ready

Every call is cached by a hash of the whitespace-normalized input, so
repeated identical requests never touch the transport twice.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
import requests

from .errors import FixtureError, TransportError, ValidationError

UNIT_NORM_TOLERANCE = 1e-4


def normalize_text(text: str) -> str:
    """Trim and collapse internal whitespace (cache/fixture key form)."""
    return " ".join(text.split())


def input_key(*parts: str) -> str:
    joined = "\x1f".join(normalize_text(p) for p in parts)
    return hashlib.sha256(joined.encode("utf-8")).hexdigest()


def as_unit_vector(values: Sequence[float]) -> np.ndarray:
    """Validate and renormalize an embedding to unit norm."""
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1 or vec.size == 0:
        raise ValidationError("embedding must be a non-empty 1-d vector")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0 or not np.isfinite(norm):
        raise ValidationError("embedding has zero or non-finite norm")
    return vec / norm


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine similarity; raises on dimension mismatch or zero vectors."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValidationError("cosine undefined for zero vectors")
    return float(np.dot(a, b) / (na * nb))


def clip_score(image_embedding: Sequence[float], caption_embedding: Sequence[float]) -> float:
    """Image/caption agreement as embedding cosine (one caption)."""
    return cosine(image_embedding, caption_embedding)


@dataclass
class ProviderConfig:
    kind: str  # "http" | "fixture" | "mock"
    endpoint: str | None = None
    fixture_path: str | Path | None = None
    rule: Callable | None = None
    timeout_ms: int = 30000
    max_retries: int = 2
    max_in_flight: int = 4
    bearer_token: str | None = None

    def __post_init__(self):
        backends = {
            "http": self.endpoint is not None,
            "fixture": self.fixture_path is not None,
            "mock": self.rule is not None,
        }
        if self.kind not in backends:
            raise ValidationError(f"unknown provider kind {self.kind!r}")
        if not backends[self.kind]:
            raise ValidationError(f"provider kind {self.kind!r} is missing its backend setting")
        configured = [k for k, v in backends.items() if v]
        if len(configured) > 1:
            raise ValidationError(f"exactly one backend must be configured, got {configured}")

    @staticmethod
    def http(endpoint: str, **kw) -> "ProviderConfig":
        return ProviderConfig(kind="http", endpoint=endpoint.rstrip("/"), **kw)

    @staticmethod
    def fixture(path: str | Path, **kw) -> "ProviderConfig":
        return ProviderConfig(kind="fixture", fixture_path=path, **kw)

    @staticmethod
    def mock(rule: Callable, **kw) -> "ProviderConfig":
        return ProviderConfig(kind="mock", rule=rule, **kw)


@dataclass
class EmbeddingResponse:
    vectors: list[np.ndarray]
    model: str
    dim: int


class _BaseProvider:
    """Shared transport, fixture, and cache plumbing for one provider role."""

    role = "base"

    def __init__(self, config: ProviderConfig):
        self.config = config
        self.transport_calls = 0
        self._cache: dict[str, object] = {}
        self._lock = threading.Lock()
        self._inflight = threading.BoundedSemaphore(max(1, config.max_in_flight))
        self._fixture: dict[str, dict] | None = None
        self._session = requests.Session() if config.kind == "http" else None

    # -- cache ---------------------------------------------------------

    def _cached(self, key: str):
        with self._lock:
            return self._cache.get(key)

    def _store(self, key: str, value):
        # Values are deterministic per key, so last-write-wins is benign.
        with self._lock:
            self._cache[key] = value

    # -- http ----------------------------------------------------------

    def _post(self, path: str, payload: dict) -> dict:
        url = f"{self.config.endpoint}{path}"
        headers = {}
        if self.config.bearer_token:
            headers["Authorization"] = f"Bearer {self.config.bearer_token}"
        timeout = self.config.timeout_ms / 1000.0
        last_error: Exception | None = None
        for attempt in range(self.config.max_retries + 1):
            try:
                with self._inflight:
                    self.transport_calls += 1
                    resp = self._session.post(url, json=payload, timeout=timeout, headers=headers)
                if resp.status_code >= 500:
                    raise TransportError(f"{url} returned {resp.status_code}")
                if resp.status_code != 200:
                    raise TransportError(f"{url} returned {resp.status_code}: {resp.text[:200]}")
                return resp.json()
            except (requests.RequestException, TransportError, ValueError) as exc:
                last_error = exc
                if attempt < self.config.max_retries:
                    time.sleep(0.05 * (attempt + 1))
        raise TransportError(f"provider call {url} failed after retries: {last_error}")

    # -- fixtures ------------------------------------------------------

    def _fixture_lines(self) -> dict[str, dict]:
        if self._fixture is None:
            table: dict[str, dict] = {}
            path = Path(self.config.fixture_path)
            if not path.exists():
                raise FixtureError(f"fixture file {path} does not exist")
            for line in path.read_text("utf-8").splitlines():
                if not line.strip():
                    continue
                record = json.loads(line)
                table[self._fixture_key(record)] = record
            self._fixture = table
        return self._fixture

    def _fixture_key(self, record: dict) -> str:
        raise NotImplementedError

    def _fixture_lookup(self, keys: list[str], describe: list[str]) -> list[dict]:
        table = self._fixture_lines()
        missing = [d for k, d in zip(keys, describe) if k not in table]
        if missing:
            raise FixtureError(
                f"{self.role} fixture is missing {len(missing)} input(s): "
                + "; ".join(repr(m) for m in missing[:5]),
                missing=missing,
            )
        return [table[k] for k in keys]


class EmbeddingProvider(_BaseProvider):
    """Sentence embeddings, renormalized to unit norm before use."""

    role = "embed"

    def __init__(self, config: ProviderConfig):
        super().__init__(config)
        self._model = {"http": None, "fixture": "fixture", "mock": "mock"}[config.kind]

    def _fixture_key(self, record: dict) -> str:
        return input_key(record["text"])

    def embed(self, texts: list[str]) -> EmbeddingResponse:
        keys = [input_key(t) for t in texts]
        missing_idx = [i for i, k in enumerate(keys) if self._cached(k) is None]
        if missing_idx:
            missing_texts = [texts[i] for i in missing_idx]
            if self.config.kind == "http":
                data = self._post("/embed", {"texts": missing_texts})
                vectors = data["vectors"]
                self._model = data.get("model", "http")
            elif self.config.kind == "fixture":
                records = self._fixture_lookup(
                    [keys[i] for i in missing_idx], missing_texts
                )
                vectors = [r["vector"] for r in records]
            else:
                vectors = [self.config.rule(t) for t in missing_texts]
            if len(vectors) != len(missing_texts):
                raise TransportError(
                    f"embedding backend returned {len(vectors)} vectors for {len(missing_texts)} texts"
                )
            for i, vec in zip(missing_idx, vectors):
                self._store(keys[i], as_unit_vector(vec))
        out = [self._cached(k) for k in keys]
        dims = {v.shape[0] for v in out}
        if len(dims) > 1:
            raise ValidationError(f"inconsistent embedding dimensions: {sorted(dims)}")
        dim = dims.pop() if dims else 0
        return EmbeddingResponse(vectors=out, model=self._model or "http", dim=dim)

    def embed_one(self, text: str) -> np.ndarray:
        return self.embed([text]).vectors[0]


class NounPhraseProvider(_BaseProvider):
    role = "noun_phrases"

    def _fixture_key(self, record: dict) -> str:
        return input_key(record["text"])

    def nps(self, text: str) -> list[str]:
        key = input_key(text)
        cached = self._cached(key)
        if cached is None:
            if self.config.kind == "http":
                data = self._post("/noun_phrases", {"text": text})
                phrases = [p["text"] if isinstance(p, dict) else p for p in data["phrases"]]
            elif self.config.kind == "fixture":
                record = self._fixture_lookup([key], [text])[0]
                phrases = [p["text"] if isinstance(p, dict) else p for p in record["phrases"]]
            else:
                phrases = list(self.config.rule(text))
            cached = phrases
            self._store(key, cached)
        return list(cached)


class ChatProvider(_BaseProvider):
    role = "chat"

    def _fixture_key(self, record: dict) -> str:
        return input_key(record["prompt"])

    def chat(self, prompt: str) -> str:
        key = input_key(prompt)
        cached = self._cached(key)
        if cached is None:
            if self.config.kind == "http":
                cached = self._post("/chat", {"prompt": prompt})["text"]
            elif self.config.kind == "fixture":
                cached = self._fixture_lookup([key], [prompt[:80]])[0]["text"]
            else:
                cached = self.config.rule(prompt)
            self._store(key, cached)
        return cached


class VqaProvider(_BaseProvider):
    role = "vqa"

    def _fixture_key(self, record: dict) -> str:
        return input_key(str(record["image_id"]), record["question"])

    def vqa(self, image_id, question: str) -> str:
        key = input_key(str(image_id), question)
        cached = self._cached(key)
        if cached is None:
            if self.config.kind == "http":
                cached = self._post("/vqa", {"image_id": image_id, "question": question})["text"]
            elif self.config.kind == "fixture":
                cached = self._fixture_lookup([key], [f"{image_id}: {question[:60]}"])[0]["text"]
            else:
                cached = self.config.rule(image_id, question)
            self._store(key, cached)
        return cached
