"""Command-line launcher for the sidecar service."""

from __future__ import annotations

import argparse

from .app import DEFAULT_BATCH_LIMIT, SidecarConfig, serve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capeval-sidecar", description=__doc__)
    parser.add_argument("--embedding-model", default="builtin:ngram",
                        help="builtin:ngram or st:<sentence-transformers id>")
    parser.add_argument("--np-pipeline", default="builtin:chunker")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8731)
    parser.add_argument("--record-dir", help="append request/response fixtures here")
    parser.add_argument("--batch-limit", type=int, default=DEFAULT_BATCH_LIMIT)
    parser.add_argument("--chat-mode", default="off", help="off | echo | proxy:<url>")
    parser.add_argument("--vqa-mode", default="off",
                        help="off | always-yes | always-no | proxy:<url>")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    serve(
        SidecarConfig(
            embedding_model=args.embedding_model,
            np_pipeline=args.np_pipeline,
            host=args.host,
            port=args.port,
            record_dir=args.record_dir,
            batch_limit=args.batch_limit,
            chat_mode=args.chat_mode,
            vqa_mode=args.vqa_mode,
        )
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
