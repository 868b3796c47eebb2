"""HTTP sidecar exposing embedding / noun-phrase / chat / VQA endpoints on
the evaluation engine's wire protocol, with an optional record mode that
writes fixture files the engine can replay offline.

Endpoints:

* ``POST /embed {"texts": [...]}``        -> unit-norm vectors
* ``POST /noun_phrases {"text": ...}``    -> character-span phrases
* ``POST /chat {"prompt": ...}``          -> text (optional; off by default)
* ``POST /vqa {"image_id", "question"}``  -> text (optional; off by default)
* ``GET /health``                         -> 200 once models are ready, 503 before
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests as _requests
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .models import DEFAULT_EMBEDDING_DIM, chunk_noun_phrases, ngram_embedding

DEFAULT_BATCH_LIMIT = 256


@dataclass
class SidecarConfig:
    embedding_model: str = "builtin:ngram"
    np_pipeline: str = "builtin:chunker"
    host: str = "127.0.0.1"
    port: int = 8731
    record_dir: str | None = None
    batch_limit: int = DEFAULT_BATCH_LIMIT
    chat_mode: str = "off"  # off | echo | proxy:<url>
    vqa_mode: str = "off"  # off | always-yes | always-no | proxy:<url>
    embedding_dim: int = DEFAULT_EMBEDDING_DIM


class _EmbeddingBackend:
    def __init__(self, config: SidecarConfig):
        self.model_id = config.embedding_model
        if config.embedding_model == "builtin:ngram":
            self.dim = config.embedding_dim
            self._encode = lambda texts: [ngram_embedding(t, self.dim) for t in texts]
        elif config.embedding_model.startswith("st:"):
            from sentence_transformers import SentenceTransformer

            model = SentenceTransformer(config.embedding_model[3:])
            probe = model.encode(["probe"], normalize_embeddings=True)
            self.dim = int(np.asarray(probe).shape[1])
            self._encode = lambda texts: [
                v.tolist() for v in model.encode(texts, normalize_embeddings=True)
            ]
        else:
            raise ValueError(f"unknown embedding model {config.embedding_model!r}")
        # fixed-dimension contract: refuse to serve a model that drifts
        sample = self._encode(["a", "ab"])
        if any(len(v) != self.dim for v in sample):
            raise ValueError(f"embedding model {self.model_id!r} has unstable dimension")

    def embed(self, texts: list[str]) -> list[list[float]]:
        out = []
        for vec in self._encode(texts):
            arr = np.asarray(vec, dtype=np.float64)
            norm = float(np.linalg.norm(arr))
            if norm == 0.0:
                arr = np.zeros(self.dim)
                arr[0] = 1.0
                norm = 1.0
            out.append((arr / norm).tolist())
        return out


class _Recorder:
    """Append-only fixture writer in the engine's JSON Lines formats."""

    def __init__(self, record_dir: str | Path):
        self.dir = Path(record_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._seen: set[tuple[str, str]] = set()

    @staticmethod
    def _key(*parts: str) -> str:
        return "\x1f".join(" ".join(p.split()) for p in parts)

    def write(self, role: str, key_parts: tuple[str, ...], record: dict) -> None:
        key = (role, self._key(*key_parts))
        with self._lock:
            if key in self._seen:
                return
            self._seen.add(key)
            with (self.dir / f"{role}.jsonl").open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")


class EmbedRequest(BaseModel):
    texts: list[str]


class NounPhraseRequest(BaseModel):
    text: str


class ChatRequest(BaseModel):
    prompt: str


class VqaRequest(BaseModel):
    image_id: int | str
    question: str


def create_app(config: SidecarConfig | None = None) -> FastAPI:
    config = config or SidecarConfig()
    state = {"ready": False, "embedder": None}
    recorder = _Recorder(config.record_dir) if config.record_dir else None
    if config.np_pipeline != "builtin:chunker":
        raise ValueError(f"unknown noun-phrase pipeline {config.np_pipeline!r}")

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        state["embedder"] = _EmbeddingBackend(config)
        state["ready"] = True
        yield

    app = FastAPI(title="capeval-sidecar", lifespan=lifespan)

    @app.get("/health")
    def health():
        if not state["ready"]:
            return JSONResponse({"status": "loading"}, status_code=503)
        return {"status": "ok", "model": state["embedder"].model_id, "dim": state["embedder"].dim}

    @app.post("/embed")
    def embed(payload: EmbedRequest):
        if not state["ready"]:
            return JSONResponse({"error": "models not ready"}, status_code=503)
        if len(payload.texts) > config.batch_limit:
            return JSONResponse(
                {"error": "batch too large", "limit": config.batch_limit}, status_code=413
            )
        embedder = state["embedder"]
        vectors = embedder.embed(payload.texts)
        if recorder:
            for text, vector in zip(payload.texts, vectors):
                recorder.write("embed", (text,), {"text": text, "vector": vector})
        return {"model": embedder.model_id, "dim": embedder.dim, "vectors": vectors}

    @app.post("/noun_phrases")
    def noun_phrases(payload: NounPhraseRequest):
        if not state["ready"]:
            return JSONResponse({"error": "models not ready"}, status_code=503)
        phrases = chunk_noun_phrases(payload.text)
        if recorder:
            recorder.write(
                "noun_phrases",
                (payload.text,),
                {"text": payload.text, "phrases": [p["text"] for p in phrases]},
            )
        return {"phrases": phrases}

    def _proxy(url: str, body: dict) -> str:
        resp = _requests.post(url, json=body, timeout=60)
        resp.raise_for_status()
        return resp.json()["text"]

    @app.post("/chat")
    def chat(payload: ChatRequest):
        if config.chat_mode == "off":
            return JSONResponse({"error": "chat endpoint not configured"}, status_code=503)
        if config.chat_mode == "echo":
            text = payload.prompt
        elif config.chat_mode.startswith("proxy:"):
            text = _proxy(config.chat_mode[6:] + "/chat", {"prompt": payload.prompt})
        else:
            return JSONResponse({"error": f"bad chat mode {config.chat_mode}"}, status_code=500)
        if recorder:
            recorder.write("chat", (payload.prompt,), {"prompt": payload.prompt, "text": text})
        return {"text": text}

    @app.post("/vqa")
    def vqa(payload: VqaRequest):
        if config.vqa_mode == "off":
            return JSONResponse({"error": "vqa endpoint not configured"}, status_code=503)
        if config.vqa_mode == "always-yes":
            text = "yes"
        elif config.vqa_mode == "always-no":
            text = "no"
        elif config.vqa_mode.startswith("proxy:"):
            text = _proxy(
                config.vqa_mode[6:] + "/vqa",
                {"image_id": payload.image_id, "question": payload.question},
            )
        else:
            return JSONResponse({"error": f"bad vqa mode {config.vqa_mode}"}, status_code=500)
        if recorder:
            recorder.write(
                "vqa",
                (str(payload.image_id), payload.question),
                {"image_id": payload.image_id, "question": payload.question, "text": text},
            )
        return {"text": text}

    @app.exception_handler(Exception)
    async def on_error(request: Request, exc: Exception):
        return JSONResponse({"error": str(exc)}, status_code=500)

    return app


def serve(config: SidecarConfig) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")
