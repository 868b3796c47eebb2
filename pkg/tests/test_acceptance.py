"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line. Everything here is oracle- or property-based and runs
offline against the bundled mini corpus and fixtures.
"""

import functools
import json
import random
import time
from pathlib import Path

import numpy as np
import pytest

import capeval.chair_men as chair_men
from capeval.annotations import build_stats, load_coco_instances, load_synonyms
from capeval.chair import CaptionRecord, match_string, score_chair
from capeval.cli import main as cli_main
from capeval.geometry import BBox, BoxGroup, covering_box, encode_group, iou, parse_group
from capeval.pope import generate, normalize_answer, score
from capeval.providers import EmbeddingProvider, NounPhraseProvider, ProviderConfig
from capeval.refexp import RefExpExample, precision_at
from capeval.report import MetricReport, diff_reports
from capeval.faithscore import score_faith
from capeval.providers import ChatProvider, VqaProvider

from oracles import grid_iou, ngram_synonym_oracle, three_step_rule
import test_chair_men as stub

MINI = Path(__file__).parent.parent / "src" / "capeval" / "data" / "mini"


def criterion(name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"FAIL  {name}")
                raise
            print(f"PASS  {name}")

        return wrapper

    return decorate


@pytest.fixture(scope="module")
def mini():
    return load_coco_instances(MINI / "instances.json", synonyms=load_synonyms())


def snapped_box(rng: random.Random) -> BBox:
    xs = sorted(round(rng.uniform(0, 1), 2) for _ in range(2))
    ys = sorted(round(rng.uniform(0, 1), 2) for _ in range(2))
    return BBox(xs[0], ys[0], xs[1], ys[1])


@criterion("IoU vs 1000x1000 grid oracle on 1000 random pairs, <10s")
def test_iou_grid_oracle():
    rng = random.Random(2024)
    start = time.monotonic()
    worst = 0.0
    for _ in range(1000):
        a, b = snapped_box(rng), snapped_box(rng)
        err = abs(iou(a, b) - grid_iou(a, b, 1000))
        worst = max(worst, err)
        assert err <= 2e-3, (a, b, err)
    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"grid oracle took {elapsed:.1f}s"


@criterion("box grammar round-trip: 10k groups, merge rule for size 4+")
def test_box_grammar_round_trip():
    rng = random.Random(7)
    for _ in range(10_000):
        members = tuple(snapped_box(rng) for _ in range(rng.randint(1, 3)))
        group = BoxGroup(members)
        parsed = parse_group(encode_group(group))
        assert len(parsed) == len(group)
        for a, b in zip(group.boxes, parsed.boxes):
            for u, v in zip(a.as_tuple(), b.as_tuple()):
                assert abs(u - v) <= 0.005
    for _ in range(500):
        members = tuple(snapped_box(rng) for _ in range(rng.randint(4, 7)))
        group = BoxGroup(members)
        assert encode_group(group) == encode_group(BoxGroup((covering_box(group),)))


# Frozen hand annotation of the bundled captions: which classes each
# caption mentions (independent of any matcher code).
HAND_MATCHED = {
    101: ["dog", "frisbee"],
    102: ["person", "hot dog", "bench"],
    103: ["person", "bicycle", "car"],
    104: ["person", "bus", "train"],
    105: ["cat", "laptop"],
    106: ["broccoli", "carrot", "bowl", "dining table"],
    107: ["zebra", "giraffe"],
    108: ["person", "sports ball", "baseball glove"],
    109: ["teddy bear", "bed", "remote"],
    110: ["wine glass", "fork", "dining table"],
    111: ["dog", "teddy bear", "umbrella"],
    112: ["traffic light", "stop sign"],
    113: ["airplane", "boat"],
    114: ["elephant", "bird"],
    115: ["person", "pizza", "microwave", "oven"],
    116: ["person", "skis", "snowboard"],
    117: ["person", "kite"],
    118: ["cell phone", "book", "clock"],
    119: ["horse", "fire hydrant"],
    120: ["cat", "tv", "couch"],
}


@criterion("CHAIR equals hand annotation and n-gram oracle exactly")
def test_chair_hand_oracle(mini):
    captions = {
        rec["image_id"]: rec["caption"]
        for rec in map(json.loads, (MINI / "captions.jsonl").read_text().splitlines())
    }
    records = [CaptionRecord(image_id, captions[image_id]) for image_id in sorted(captions)]
    result = score_chair(records, mini)

    # hand-computed aggregates from the frozen annotation
    matched_total = 0
    hallucinated_total = 0
    hallucinated_caps = 0
    coverages = []
    for image_id in sorted(captions):
        expected_ids = {mini.registry.id_of(n) for n in HAND_MATCHED[image_id]}
        gold = mini.present(image_id)
        assert match_string(captions[image_id], mini.registry) == expected_ids
        assert ngram_synonym_oracle(captions[image_id], mini.registry) == expected_ids
        matched_total += len(expected_ids)
        halluc = expected_ids - gold
        hallucinated_total += len(halluc)
        hallucinated_caps += bool(halluc)
        coverages.append(len(expected_ids & gold) / len(gold))
    assert abs(result.chair_i - hallucinated_total / matched_total) <= 1e-9
    assert abs(result.chair_s - hallucinated_caps / len(records)) <= 1e-9
    assert abs(result.coverage - sum(coverages) / len(coverages)) <= 1e-9


@criterion("CHAIR-MEN verdicts equal CHAIR under one-hot stub embedder")
def test_chair_men_stub_equivalence():
    from conftest import make_corpus, make_registry

    registry = make_registry((1, "dog"), (2, "cat"), (3, "car"), (4, "bench"), (5, "kite"))
    corpus = make_corpus(
        registry,
        {"a": {1, 4}, "b": {2}, "c": {3, 5}, "d": set(), "e": {1, 2, 3}},
    )
    records = [
        CaptionRecord("a", "a dog sleeps under the bench."),
        CaptionRecord("b", "the cat watches a kite."),
        CaptionRecord("c", "two cars near a kite."),
        CaptionRecord("d", "a dog and a cat."),
        CaptionRecord("e", "a dog a cat a car a bench."),
    ]
    classic = score_chair(records, corpus)
    semantic = chair_men.score_chair_men(
        records,
        corpus,
        chair_men.ChairMenConfig(),
        EmbeddingProvider(ProviderConfig.mock(stub.one_hot_embedder)),
        NounPhraseProvider(ProviderConfig.mock(stub.simple_np_rule)),
    )
    mismatches = [
        (c.image_id, c.matched, s.matched, c.hallucinated, s.hallucinated)
        for c, s in zip(classic.per_image, semantic.chair.per_image)
        if (c.matched, c.hallucinated) != (s.matched, s.hallucinated)
    ]
    assert mismatches == []
    assert semantic.chair.chair_i == classic.chair_i
    assert semantic.chair.chair_s == classic.chair_s
    assert semantic.chair.coverage == classic.coverage


@criterion("threshold rule: constructed cases and 1000-case step-order sweep")
def test_threshold_semantics():
    cfg = chair_men.ChairMenConfig()
    assert (cfg.present_threshold, cfg.absent_threshold) == (0.73, 0.78)
    u = np.zeros(4)
    u[0] = 1.0

    def vec(c, axis):
        out = c * u.copy()
        out[axis] = np.sqrt(max(0.0, 1 - c * c))
        return out

    present_090 = chair_men.assign(u, [(5, vec(0.90, 1))], [], cfg)
    assert present_090.verdict == "present" and present_090.class_id == 5
    absent_case = chair_men.assign(u, [(5, vec(0.70, 1))], [(9, vec(0.80, 2))], cfg)
    assert absent_case.verdict == "absent" and absent_case.class_id == 9
    neither = chair_men.assign(u, [(5, vec(0.70, 1))], [(9, vec(0.75, 2))], cfg)
    assert neither.verdict == "unassigned"

    rng = random.Random(99)
    for _ in range(1000):
        present = [(cid, vec(rng.uniform(-1, 1), 1 + cid % 3)) for cid in range(1, rng.randint(1, 5))]
        absent = [(cid, vec(rng.uniform(-1, 1), 1 + cid % 3)) for cid in range(20, 20 + rng.randint(1, 5) - 1)]
        got = chair_men.assign(u, present, absent, cfg)
        best_p = max((float(np.dot(u, v)) for _, v in present), default=None)
        best_a = max((float(np.dot(u, v)) for _, v in absent), default=None)
        assert got.verdict == three_step_rule(best_p, best_a, 0.73, 0.78)
        if best_p is not None and best_p >= 0.73:
            assert got.verdict == "present"  # even when some absent cosine is higher


def brute_force_cooccurrence(corpus):
    counts = {}
    freq = {}
    for img in corpus.images:
        for a in img.present:
            freq[a] = freq.get(a, 0) + 1
        for a in img.present:
            for b in img.present:
                if a < b:
                    counts[(a, b)] = counts.get((a, b), 0) + 1
    return freq, counts


@criterion("POPE: 750/750 balance, sound labels, exact adversarial argmax, determinism")
def test_pope_soundness(mini):
    stats = build_stats(mini)
    freq, pair_counts = brute_force_cooccurrence(mini)

    def pair(a, b):
        return pair_counts.get((a, b) if a < b else (b, a), 0)

    for strategy in ("random", "popular", "adversarial"):
        first = generate(mini, stats, strategy, 1500, seed=7)
        again = generate(mini, stats, strategy, 1500, seed=7)
        assert first.questions == again.questions

        labels = [q.label for q in first.questions]
        assert labels.count("yes") == 750
        assert labels.count("no") == 750

        pairs = [(q.image_id, q.class_id) for q in first.questions]
        assert len(set(pairs)) == 1500

        used_neg: dict = {}
        for q in first.questions:
            present = mini.present(q.image_id)
            if q.label == "yes":
                assert q.class_id in present
                continue
            assert q.class_id not in present
            if strategy == "adversarial":
                candidates = [
                    c
                    for c in mini.registry.ids()
                    if c not in present and c not in used_neg.get(q.image_id, set())
                ]
                scores = {c: sum(pair(c, p) for p in present) for c in candidates}
                best = max(scores.values())
                best_ids = sorted(c for c, s in scores.items() if s == best)
                assert q.class_id == best_ids[0]
            used_neg.setdefault(q.image_id, set()).add(q.class_id)


@criterion("POPE scoring: 100/50/0 percent answer files and normalization")
def test_pope_scoring(mini):
    stats = build_stats(mini)
    pope_set = generate(mini, stats, "random", 200, seed=5)

    def answers(fraction_correct):
        out = []
        for i, q in enumerate(pope_set.questions):
            correct = i < fraction_correct * len(pope_set.questions)
            text = q.label if correct else ("no" if q.label == "yes" else "yes")
            out.append({"question_id": q.question_id, "raw_text": text})
        return out

    assert score(answers(1.0), pope_set).accuracy == 1.0
    assert score(answers(0.5), pope_set).accuracy == 0.5
    assert score(answers(0.0), pope_set).accuracy == 0.0
    assert normalize_answer("Yes, there is.") == "yes"
    polite = [
        {"question_id": q.question_id, "raw_text": "Yes, there is." if q.label == "yes" else "No, there is not."}
        for q in pope_set.questions
    ]
    assert score(polite, pope_set).accuracy == 1.0


@criterion("FaithScore: allow-list fraction exact, k facts per caption, 1.0/0.0 extremes")
def test_faithscore_pipeline():
    records = [CaptionRecord(1, "caption one"), CaptionRecord(2, "caption two")]
    k = 4

    def chat_rule(prompt):
        return "\n".join(f"There is an object {i}" for i in range(k))

    allow = {"There is an object 0", "There is an object 2", "There is an object 3"}

    def vqa_rule(image_id, question):
        return "yes" if question.split("? ", 1)[1] in allow else "no"

    chat = ChatProvider(ProviderConfig.mock(chat_rule))
    result = score_faith(records, chat, VqaProvider(ProviderConfig.mock(vqa_rule)))
    assert result.avg_facts == k
    assert result.faith_score == len(allow) / k

    always_yes = score_faith(records, chat, VqaProvider(ProviderConfig.mock(lambda i, q: "yes")))
    assert always_yes.faith_score == 1.0
    always_no = score_faith(records, chat, VqaProvider(ProviderConfig.mock(lambda i, q: "no")))
    assert always_no.faith_score == 0.0


@criterion("Precision@50: {1.0, 0.5, 0.49, unparseable} scores exactly 50%")
def test_precision_at_50():
    gold = BBox(0.0, 0.0, 0.5, 0.5)
    examples = [
        RefExpExample(1, "r", gold, "[0.00, 0.00, 0.50, 0.50]"),
        RefExpExample(2, "r", gold, "[0.00, 0.00, 0.50, 0.25]"),
        RefExpExample(3, "r", gold, "[0.00, 0.00, 0.50, 0.245]"),
        RefExpExample(4, "r", gold, "I cannot find it"),
    ]
    result = precision_at(examples, 0.5)
    assert result.precision == 50.0
    assert result.parse_failures == 1
    assert result.per_example[1]["iou"] == pytest.approx(0.5)
    assert result.per_example[1]["success"]  # boundary counts as success


@criterion("diff harness reproduces the -1.18 grounded-captioning delta")
def test_diff_harness():
    base = MetricReport(metrics={"chair_i": 14.51}, dataset_digest="sha256:o365")
    grounded = MetricReport(metrics={"chair_i": 13.33}, dataset_digest="sha256:o365")
    result = diff_reports(base, grounded)
    assert result["deltas"]["chair_i"]["formatted"] == "-1.18"
    assert abs(result["deltas"]["chair_i"]["delta"] - (-1.18)) < 1e-9


@criterion("full fixture pipeline is byte-identical across 3 runs, <2 min")
def test_full_pipeline_determinism(tmp_path):
    start = time.monotonic()
    outputs = []
    for run in range(3):
        out = tmp_path / f"run{run}"
        out.mkdir()
        commands = [
            ["chair", "--corpus", MINI / "instances.json", "--preds", MINI / "captions.jsonl",
             "--report", out / "chair.json"],
            ["chair-men", "--corpus", MINI / "instances.json", "--preds", MINI / "captions.jsonl",
             "--np-fixture", MINI / "np_fixture.jsonl", "--embed-fixture", MINI / "emb_fixture.jsonl",
             "--report", out / "chair_men.json"],
            ["pope-gen", "--corpus", MINI / "instances.json", "--strategy", "adversarial",
             "--n", "1500", "--seed", "7", "--out", out / "pope.jsonl", "--report", out / "pope_gen.json"],
            ["faithscore", "--preds", MINI / "captions.jsonl",
             "--chat-fixture", MINI / "chat_fixture.jsonl", "--vqa-fixture", MINI / "vqa_fixture.jsonl",
             "--report", out / "faith.json"],
            ["refexp", "--examples", MINI / "refexp.jsonl", "--report", out / "refexp.json"],
        ]
        for argv in commands:
            assert cli_main([str(a) for a in argv]) == 0
        outputs.append(
            {
                name: (out / name).read_bytes()
                for name in ("chair.json", "chair_men.json", "pope.jsonl", "pope_gen.json", "faith.json", "refexp.json")
            }
        )
    for name in outputs[0]:
        assert outputs[0][name] == outputs[1][name] == outputs[2][name], name
    elapsed = time.monotonic() - start
    assert elapsed < 120.0, f"pipeline determinism harness took {elapsed:.1f}s"
