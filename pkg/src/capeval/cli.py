"""Command-line surface for the evaluation engine.

Subcommands: chair, chair-men, faithscore, pope-gen, pope-score, refexp,
stats, calibrate, diff. Every run writes a reproducible ``report.json``
(and a markdown table on request); run timestamps go to a separate
``.meta.json`` sidecar so report files stay byte-identical across runs.

Flags resolve in priority order: command line, then ``CAPEVAL_*``
environment variables, then the ``--config`` key/value file, then
defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import annotations, chair, chair_men, faithscore, pope, refexp
from .errors import (
    BoxParseError,
    CapevalError,
    FixtureError,
    GenerationError,
    IngestionError,
    ScoringError,
    TransportError,
    ValidationError,
)
from .grounded import has_box_group, parse_grounded
from .providers import (
    ChatProvider,
    EmbeddingProvider,
    NounPhraseProvider,
    ProviderConfig,
    VqaProvider,
    clip_score,
)
from .report import MetricReport, diff_reports, file_digest, mean2, pct

ENV_PREFIX = "CAPEVAL_"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_TRANSPORT = 3


def read_config_file(path: str | Path) -> dict[str, str]:
    """Flat ``key = value`` file; '#' starts a comment, quotes optional."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValidationError(f"config line {lineno}: expected 'key = value'")
        key, _, value = stripped.partition("=")
        value = value.split("#", 1)[0].strip().strip("\"'")
        values[key.strip().replace("-", "_")] = value
    return values


def resolve(args: argparse.Namespace, name: str, default=None, cast=None):
    """CLI flag > CAPEVAL_ env var > config file > default."""
    value = getattr(args, name, None)
    if value is None:
        value = os.environ.get(ENV_PREFIX + name.upper())
    if value is None:
        value = getattr(args, "_config_values", {}).get(name)
    if value is None:
        return default
    if cast is not None and isinstance(value, str):
        if cast is bool:
            return value.lower() in ("1", "true", "yes", "on")
        return cast(value)
    return value


def load_predictions(path: str | Path) -> list[dict]:
    records = []
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestionError(f"predictions line {lineno}: invalid JSON: {exc}") from exc
        if "image_id" not in rec or "caption" not in rec:
            raise IngestionError(f"predictions line {lineno}: needs image_id and caption")
        records.append(rec)
    return records


def prepare_captions(raw_records: list[dict], keep_boxes: bool = False):
    """Strip box groups from grounded captions (auto-detected) and collect
    per-caption grounding statistics."""
    grounded_count = 0
    mention_count = 0
    malformed = 0
    box_count = 0
    records = []
    for rec in raw_records:
        caption = rec["caption"]
        if has_box_group(caption):
            parsed = parse_grounded(caption)
            grounded_count += 1
            mention_count += len(parsed.mentions)
            malformed += parsed.malformed_groups
            box_count += sum(len(m.boxes) for m in parsed.mentions)
            if not keep_boxes:
                caption = parsed.plain
        else:
            malformed += parse_grounded(caption).malformed_groups
        records.append(chair.CaptionRecord(image_id=rec["image_id"], caption=caption))
    stats = {
        "grounded_captions": grounded_count,
        "mentions": mention_count,
        "malformed_groups": malformed,
        "boxes": box_count,
        "stripped": not keep_boxes,
    }
    return records, stats


def load_corpus(args: argparse.Namespace) -> annotations.Corpus:
    corpus_path = resolve(args, "corpus")
    if not corpus_path:
        raise ValidationError("--corpus is required")
    synonyms_path = resolve(args, "synonyms")
    synonyms = annotations.load_synonyms(synonyms_path)
    registry_filter = None
    split_path = resolve(args, "class_filter")
    if split_path:
        names = annotations.load_class_split(split_path)
        data = json.loads(Path(corpus_path).read_text("utf-8"))
        by_name = {c["name"].lower(): c["id"] for c in data.get("categories", [])}
        missing = [n for n in names if n not in by_name]
        if missing:
            raise IngestionError(f"class filter names not in corpus: {missing[:5]}")
        registry_filter = {by_name[n] for n in names}
    return annotations.load_coco_instances(corpus_path, registry_filter, synonyms)


def provider_from_flags(args: argparse.Namespace, role: str, provider_cls):
    backend = resolve(args, f"{role}_backend")
    endpoint = resolve(args, f"{role}_endpoint")
    fixture = resolve(args, f"{role}_fixture")
    if backend is None:
        backend = "http" if endpoint else "fixture" if fixture else None
    if backend is None:
        raise ValidationError(f"no backend configured for {role} provider")
    if backend == "http":
        if not endpoint:
            raise ValidationError(f"--{role}-endpoint required for http backend")
        cfg = ProviderConfig.http(
            endpoint,
            timeout_ms=resolve(args, "timeout_ms", 30000, int),
            max_retries=resolve(args, "max_retries", 2, int),
            max_in_flight=resolve(args, "max_in_flight", 4, int),
            bearer_token=resolve(args, "bearer_token"),
        )
    elif backend == "fixture":
        if not fixture:
            raise ValidationError(f"--{role}-fixture required for fixture backend")
        cfg = ProviderConfig.fixture(fixture)
    else:
        raise ValidationError(f"unsupported backend {backend!r} for {role} (http or fixture)")
    return provider_cls(cfg), {"kind": backend, "endpoint": endpoint, "fixture": str(fixture) if fixture else None}


def write_report(
    report: MetricReport, args: argparse.Namespace, transport: dict | None = None
) -> None:
    """Write report.json plus a .meta.json sidecar.

    Timestamps and transport details (endpoints, fixture paths) live in the
    sidecar so equal inputs produce byte-identical reports, including
    between a live provider run and its record/replay rerun.
    """
    report_path = Path(resolve(args, "report", "report.json"))
    report.write(report_path)
    meta = {"created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()), "report": report_path.name}
    if transport:
        meta["providers"] = transport
    report_path.with_suffix(".meta.json").write_text(json.dumps(meta, sort_keys=True) + "\n", "utf-8")
    if resolve(args, "markdown", False, bool):
        report_path.with_suffix(".md").write_text(report.to_markdown(), "utf-8")
    print(f"wrote {report_path}")


def chair_metrics_block(result: chair.ChairResult) -> dict:
    return {
        "chair_i": pct(result.chair_i),
        "chair_s": pct(result.chair_s),
        "coverage": pct(result.coverage),
        "objects": mean2(result.avg_objects),
        "words": mean2(result.avg_words),
        "cider": None,
    }


def chair_detail_block(result: chair.ChairResult, box_stats: dict) -> dict:
    return {
        "matched_total": result.matched_total,
        "hallucinated_total": result.hallucinated_total,
        "chair_i_defined": result.chair_i_defined,
        "grounding": box_stats,
        "notes": ["chair_s is informational; chair_i is the headline hallucination rate"],
        "per_image": [
            {
                "image_id": d.image_id,
                "matched": d.matched,
                "hallucinated": d.hallucinated,
                "gold": d.gold,
                "words": d.words,
                "coverage": d.coverage,
            }
            for d in result.per_image
        ],
    }


def _maybe_clip_score(args: argparse.Namespace, metrics: dict) -> None:
    clip_path = resolve(args, "clip_fixture")
    metrics.setdefault("clip_score", None)
    if not clip_path:
        return
    values = []
    for line in Path(clip_path).read_text("utf-8").splitlines():
        if not line.strip():
            continue
        rec = json.loads(line)
        values.append(clip_score(rec["image"], rec["caption"]))
    if values:
        metrics["clip_score"] = pct(sum(values) / len(values))


def cmd_chair(args: argparse.Namespace) -> int:
    corpus = load_corpus(args)
    preds_path = resolve(args, "preds")
    if not preds_path:
        raise ValidationError("--preds is required")
    records, box_stats = prepare_captions(
        load_predictions(preds_path), resolve(args, "keep_boxes", False, bool)
    )
    result = chair.score_chair(records, corpus)
    metrics = chair_metrics_block(result)
    _maybe_clip_score(args, metrics)
    report = MetricReport(
        metrics=metrics,
        detail=chair_detail_block(result, box_stats),
        config={
            "subcommand": "chair",
            "keep_boxes": resolve(args, "keep_boxes", False, bool),
            "synonyms": str(resolve(args, "synonyms") or "bundled:mscoco"),
        },
        dataset_digest=corpus.digest(),
        predictions_digest=file_digest(preds_path),
    )
    write_report(report, args)
    return EXIT_OK


def cmd_chair_men(args: argparse.Namespace) -> int:
    corpus = load_corpus(args)
    preds_path = resolve(args, "preds")
    if not preds_path:
        raise ValidationError("--preds is required")
    records, box_stats = prepare_captions(
        load_predictions(preds_path), resolve(args, "keep_boxes", False, bool)
    )
    cfg = chair_men.ChairMenConfig(
        present_threshold=resolve(args, "present_threshold", chair_men.DEFAULT_PRESENT_THRESHOLD, float),
        absent_threshold=resolve(args, "absent_threshold", chair_men.DEFAULT_ABSENT_THRESHOLD, float),
        class_template=resolve(args, "class_template", "{name}"),
    )
    embedder, embed_cfg = provider_from_flags(args, "embed", EmbeddingProvider)
    np_provider, np_cfg = provider_from_flags(args, "np", NounPhraseProvider)
    result = chair_men.score_chair_men(
        records, corpus, cfg, embedder, np_provider,
        checkpoint_path=resolve(args, "checkpoint"),
    )
    metrics = chair_metrics_block(result.chair)
    _maybe_clip_score(args, metrics)
    detail = chair_detail_block(result.chair, box_stats)
    detail["raw_noun_phrases"] = result.raw_np_count
    detail["unassigned_phrases"] = result.unassigned_count
    detail["assignments"] = [
        {
            "image_id": c.image_id,
            "phrases": [
                {
                    "phrase": a.phrase,
                    "verdict": a.verdict,
                    "class_id": a.class_id,
                }
                for a in c.assignments
            ],
        }
        for c in result.assignments
    ]
    report = MetricReport(
        metrics=metrics,
        detail=detail,
        config={
            "subcommand": "chair-men",
            "present_threshold": cfg.present_threshold,
            "absent_threshold": cfg.absent_threshold,
            "class_template": cfg.class_template,
            "keep_boxes": resolve(args, "keep_boxes", False, bool),
        },
        dataset_digest=corpus.digest(),
        predictions_digest=file_digest(preds_path),
    )
    write_report(report, args, transport={"embed": embed_cfg, "noun_phrases": np_cfg})
    return EXIT_OK


def cmd_faithscore(args: argparse.Namespace) -> int:
    preds_path = resolve(args, "preds")
    if not preds_path:
        raise ValidationError("--preds is required")
    records, box_stats = prepare_captions(
        load_predictions(preds_path), resolve(args, "keep_boxes", False, bool)
    )
    chat_provider, chat_cfg = provider_from_flags(args, "chat", ChatProvider)
    vqa_provider, vqa_cfg = provider_from_flags(args, "vqa", VqaProvider)
    template = faithscore.load_prompt_template(resolve(args, "prompt_template"))
    result = faithscore.score_faith(
        records, chat_provider, vqa_provider, template,
        checkpoint_path=resolve(args, "checkpoint"),
    )
    dataset_digest = None
    if resolve(args, "corpus"):
        dataset_digest = load_corpus(args).digest()
    report = MetricReport(
        metrics={"faith_score": pct(result.faith_score), "facts": mean2(result.avg_facts)},
        detail={
            "total_facts": result.total_facts,
            "positive_facts": result.positive_facts,
            "faith_score_defined": result.faith_score_defined,
            "incomplete": result.incomplete,
            "unparseable_verdicts": result.unparseable_verdicts,
            "grounding": box_stats,
            "per_caption": [
                {
                    "image_id": c.image_id,
                    "facts": [f.statement for f in c.facts],
                    "categories": [f.category for f in c.facts],
                    "verdicts": c.verdicts,
                }
                for c in result.per_caption
            ],
        },
        config={
            "subcommand": "faithscore",
            "prompt_hash": faithscore.prompt_hash(template),
        },
        dataset_digest=dataset_digest,
        predictions_digest=file_digest(preds_path),
    )
    write_report(report, args, transport={"chat": chat_cfg, "vqa": vqa_cfg})
    return EXIT_OK


def cmd_pope_gen(args: argparse.Namespace) -> int:
    corpus = load_corpus(args)
    stats = annotations.build_stats(corpus)
    strategy = resolve(args, "strategy")
    if not strategy:
        raise ValidationError("--strategy is required")
    n = resolve(args, "n", 1500, int)
    seed = resolve(args, "seed", 0, int)
    pope_set = pope.generate(
        corpus, stats, strategy, n, seed,
        adversarial_agg=resolve(args, "adversarial_agg", "sum"),
    )
    out = resolve(args, "out", "pope_questions.jsonl")
    pope_set.write_jsonl(out)
    report = MetricReport(
        metrics={},
        detail={
            "questions": len(pope_set),
            "yes": sum(1 for q in pope_set.questions if q.label == "yes"),
            "no": sum(1 for q in pope_set.questions if q.label == "no"),
            "output": Path(out).name,
        },
        config={
            "subcommand": "pope-gen",
            "strategy": strategy,
            "n": n,
            "seed": seed,
            "adversarial_agg": resolve(args, "adversarial_agg", "sum"),
        },
        dataset_digest=corpus.digest(),
    )
    write_report(report, args)
    return EXIT_OK


def cmd_pope_score(args: argparse.Namespace) -> int:
    questions_path = resolve(args, "questions")
    answers_path = resolve(args, "answers")
    if not questions_path or not answers_path:
        raise ValidationError("--questions and --answers are required")
    pope_set = pope.PopeSet.read_jsonl(questions_path)
    answers = []
    for line in Path(answers_path).read_text("utf-8").splitlines():
        if line.strip():
            answers.append(json.loads(line))
    result = pope.score(answers, pope_set)
    report = MetricReport(
        metrics={
            "pope_accuracy": pct(result.accuracy),
            "yes_rate": pct(result.yes_rate),
        },
        detail={
            "accuracy_per_strategy": {k: pct(v) for k, v in result.accuracy_per_strategy.items()},
            "unparseable": result.unparseable,
            "unanswered": result.unanswered,
            "correct": result.correct,
            "total": result.total,
        },
        config={"subcommand": "pope-score"},
        dataset_digest=file_digest(questions_path),
        predictions_digest=file_digest(answers_path),
    )
    write_report(report, args)
    return EXIT_OK


def cmd_refexp(args: argparse.Namespace) -> int:
    examples_path = resolve(args, "examples")
    if not examples_path:
        raise ValidationError("--examples is required")
    k = resolve(args, "threshold", 0.5, float)
    selection = resolve(args, "selection", "first")
    examples = refexp.load_examples(examples_path)
    result = refexp.precision_at(examples, k, selection=selection)
    key = f"precision_at_{int(round(k * 100))}"
    report = MetricReport(
        metrics={key: round(result.precision, 2), "mean_iou": round(result.mean_iou, 4)},
        detail={
            "threshold": k,
            "parse_failures": result.parse_failures,
            "successes": result.successes,
            "total": result.total,
            "per_example": result.per_example,
        },
        config={"subcommand": "refexp", "threshold": k, "selection": selection},
        dataset_digest=file_digest(examples_path),
        predictions_digest=file_digest(examples_path),
    )
    write_report(report, args)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    corpus = load_corpus(args)
    stats = annotations.build_stats(corpus)
    ranking = stats.ranking()
    top_pairs = sorted(stats.counts.items(), key=lambda kv: (-kv[1], kv[0]))[:50]
    report = MetricReport(
        metrics={},
        detail={
            "images": len(corpus),
            "classes": len(corpus.registry),
            "frequency": {
                corpus.registry.name_of(cid): stats.freq(cid) for cid in ranking
            },
            "top_cooccurrences": [
                {
                    "a": corpus.registry.name_of(a),
                    "b": corpus.registry.name_of(b),
                    "count": count,
                }
                for (a, b), count in top_pairs
            ],
        },
        config={"subcommand": "stats"},
        dataset_digest=corpus.digest(),
    )
    write_report(report, args)
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    corpus = load_corpus(args)
    preds_path = resolve(args, "preds")
    if not preds_path:
        raise ValidationError("--preds is required")
    records, _ = prepare_captions(load_predictions(preds_path))
    reference = chair.score_chair(records, corpus)
    embedder, _ = provider_from_flags(args, "embed", EmbeddingProvider)
    np_provider, _ = provider_from_flags(args, "np", NounPhraseProvider)
    t1_grid = [float(v) for v in resolve(args, "present_grid", "0.6,0.7,0.73,0.8").split(",")]
    t2_grid = [float(v) for v in resolve(args, "absent_grid", "0.7,0.78,0.85").split(",")]
    rows = []
    for t1 in t1_grid:
        for t2 in t2_grid:
            cfg = chair_men.ChairMenConfig(present_threshold=t1, absent_threshold=t2)
            result = chair_men.score_chair_men(records, corpus, cfg, embedder, np_provider)
            rows.append(
                {
                    "present_threshold": t1,
                    "absent_threshold": t2,
                    "chair_i": pct(result.chair.chair_i),
                    "reference_chair_i": pct(reference.chair_i),
                    "gap": round(abs(pct(result.chair.chair_i) - pct(reference.chair_i)), 2),
                }
            )
    rows.sort(key=lambda r: (r["gap"], r["present_threshold"], r["absent_threshold"]))
    report = MetricReport(
        metrics={"best_gap": rows[0]["gap"] if rows else None},
        detail={"sweep": rows, "reference_chair_i": pct(reference.chair_i)},
        config={"subcommand": "calibrate"},
        dataset_digest=corpus.digest(),
        predictions_digest=file_digest(preds_path),
    )
    write_report(report, args)
    return EXIT_OK


def cmd_diff(args: argparse.Namespace) -> int:
    report_a = MetricReport.read(args.report_a)
    report_b = MetricReport.read(args.report_b)
    result = diff_reports(report_a, report_b)
    print(json.dumps(result, sort_keys=True, indent=2))
    out = resolve(args, "report")
    if out:
        Path(out).write_text(json.dumps(result, sort_keys=True, indent=2) + "\n", "utf-8")
    return EXIT_OK


def _add_report_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--report", help="report JSON output path (default report.json)")
    p.add_argument("--markdown", nargs="?", const="1", help="also write a markdown table")
    p.add_argument("--config", help="key = value config file mirroring flags")


def _add_corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--corpus", help="COCO instances JSON")
    p.add_argument("--synonyms", help="synonym TSV (default: bundled MSCOCO list)")
    p.add_argument("--class-filter", dest="class_filter", help="newline-separated class names to keep")


def _add_provider_flags(p: argparse.ArgumentParser, roles: list[str]) -> None:
    for role in roles:
        p.add_argument(f"--{role}-backend", dest=f"{role}_backend", choices=["http", "fixture"])
        p.add_argument(f"--{role}-endpoint", dest=f"{role}_endpoint")
        p.add_argument(f"--{role}-fixture", dest=f"{role}_fixture")
    p.add_argument("--timeout-ms", dest="timeout_ms", type=int)
    p.add_argument("--max-retries", dest="max_retries", type=int)
    p.add_argument("--max-in-flight", dest="max_in_flight", type=int)
    p.add_argument("--bearer-token", dest="bearer_token")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="capeval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chair", help="string-matching hallucination metric")
    _add_report_flags(p)
    _add_corpus_flags(p)
    p.add_argument("--preds", help="predictions JSONL {image_id, caption}")
    p.add_argument("--keep-boxes", dest="keep_boxes", action="store_const", const="1")
    p.add_argument("--clip-fixture", dest="clip_fixture", help="JSONL {image_id, image, caption} embedding pairs")
    p.set_defaults(func=cmd_chair)

    p = sub.add_parser("chair-men", help="embedding-matching hallucination metric")
    _add_report_flags(p)
    _add_corpus_flags(p)
    p.add_argument("--preds")
    p.add_argument("--keep-boxes", dest="keep_boxes", action="store_const", const="1")
    p.add_argument("--clip-fixture", dest="clip_fixture")
    p.add_argument("--present-threshold", dest="present_threshold", type=float)
    p.add_argument("--absent-threshold", dest="absent_threshold", type=float)
    p.add_argument("--class-template", dest="class_template")
    p.add_argument("--checkpoint")
    _add_provider_flags(p, ["embed", "np"])
    p.set_defaults(func=cmd_chair_men)

    p = sub.add_parser("faithscore", help="LLM fact extraction + VQA verification")
    _add_report_flags(p)
    _add_corpus_flags(p)
    p.add_argument("--preds")
    p.add_argument("--keep-boxes", dest="keep_boxes", action="store_const", const="1")
    p.add_argument("--prompt-template", dest="prompt_template")
    p.add_argument("--checkpoint")
    _add_provider_flags(p, ["chat", "vqa"])
    p.set_defaults(func=cmd_faithscore)

    p = sub.add_parser("pope-gen", help="generate a balanced object-existence question set")
    _add_report_flags(p)
    _add_corpus_flags(p)
    p.add_argument("--strategy", choices=list(pope.STRATEGIES))
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="questions JSONL output path")
    p.add_argument("--adversarial-agg", dest="adversarial_agg", choices=["sum", "max"])
    p.set_defaults(func=cmd_pope_gen)

    p = sub.add_parser("pope-score", help="score model answers against a question set")
    _add_report_flags(p)
    p.add_argument("--questions")
    p.add_argument("--answers")
    p.set_defaults(func=cmd_pope_score)

    p = sub.add_parser("refexp", help="referring-expression grounding precision")
    _add_report_flags(p)
    p.add_argument("--examples")
    p.add_argument("--threshold", type=float)
    p.add_argument("--selection", choices=["first", "best"],
                   help="which predicted group to score when several appear")
    p.set_defaults(func=cmd_refexp)

    p = sub.add_parser("stats", help="dump corpus frequency and co-occurrence statistics")
    _add_report_flags(p)
    _add_corpus_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("calibrate", help="threshold sweep matching chair-men to chair")
    _add_report_flags(p)
    _add_corpus_flags(p)
    p.add_argument("--preds")
    p.add_argument("--present-grid", dest="present_grid")
    p.add_argument("--absent-grid", dest="absent_grid")
    _add_provider_flags(p, ["embed", "np"])
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("diff", help="per-metric deltas between two reports (b minus a)")
    p.add_argument("report_a")
    p.add_argument("report_b")
    p.add_argument("--report", help="also write the diff to this path")
    p.set_defaults(func=cmd_diff)

    return parser


def _emit_error(kind: str, exc: Exception) -> None:
    payload = {"error": {"type": kind, "message": str(exc)}}
    print(json.dumps(payload, sort_keys=True), file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config_path = getattr(args, "config", None)
    args._config_values = read_config_file(config_path) if config_path else {}
    try:
        return args.func(args)
    except (TransportError, FixtureError) as exc:
        _emit_error(type(exc).__name__, exc)
        return EXIT_TRANSPORT
    except (ValidationError, IngestionError, ScoringError, GenerationError, BoxParseError) as exc:
        _emit_error(type(exc).__name__, exc)
        return EXIT_VALIDATION
    except CapevalError as exc:
        _emit_error(type(exc).__name__, exc)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        _emit_error("FileNotFoundError", exc)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
