"""Acceptance suite. Each test prints one PASS/FAIL line (run with -s to see
them on success)."""

import random
import time

import numpy as np

from tegcer.abstraction import abstract_line, build_symbol_table
from tegcer.classifier import (
    NetworkConfig,
    evaluate,
    forward,
    gradient_check,
    init_params,
    predict_topk,
    split_dataset,
    train,
)
from tegcer.corpus import ProgramPair, detect_single_line_edit
from tegcer.diagnostics import TemplateRegistry, generalize
from tegcer.encoder import FeatureVocabulary, feature_tokens, vectorize
from tegcer.model_io import load_model, save_model
from tegcer.pipeline import featurize
from tegcer.repair import diff_repair
from tegcer.suggester import MAX_EXAMPLES_PER_LINE, more_examples, suggest

from test_repair import oracle_signed_set


def report(name, ok, detail=""):
    print(f"\n{name}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"{name} failed: {detail}"


def test_a1_gradient_correctness():
    """A1: analytic vs central-finite-difference gradients on 20 small nets."""
    t0 = time.time()
    rng = random.Random(0)
    worst = 0.0
    for trial in range(20):
        v = rng.randint(2, 8)
        h = rng.randint(2, 8)
        k = rng.randint(2, 8)
        worst = max(worst, gradient_check(v, h, k, n_samples=3, seed=trial))
    elapsed = time.time() - t0
    report("A1 gradient-correctness",
           worst < 1e-4 and elapsed < 10,
           f"max rel err {worst:.2e}, {elapsed:.1f}s")


def test_a2_diff_oracle():
    """A2: diff_repair vs brute-force edit-script oracle on 10k random pairs."""
    from tegcer.abstraction import AbstractLine
    t0 = time.time()
    rng = random.Random(42)
    alphabet = list("abcdef")
    mismatches = 0
    for _ in range(10_000):
        bad = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        good = tuple(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
        r = diff_repair(AbstractLine(bad), AbstractLine(good))
        ins, dels = oracle_signed_set(bad, good)
        if set(r.insertions) != ins or set(r.deletions) != dels:
            mismatches += 1
    elapsed = time.time() - t0
    report("A2 diff-oracle",
           mismatches == 0 and elapsed < 30,
           f"{mismatches} mismatches over 10000 pairs, {elapsed:.1f}s")


def test_a3_synthetic_benchmark(trained):
    """A3: >=1000 pairs, >=20 classes, Pred@1 >= 0.90 and Pred@3 >= 0.98 on
    the test split, defaults + fixed seed, fixture-mode compiler."""
    t0 = time.time()
    build, model = trained["build"], trained["model"]
    n_classes = len(build.class_table)
    n_examples = len(build.examples)
    _, data = featurize(build.examples, vocab=model.vocab)
    y = np.array([c for _, c in data])
    _, _, test_idx = split_dataset(y, model.config)
    rep = evaluate(model, [data[i] for i in test_idx])
    elapsed = time.time() - t0
    ok = (n_examples >= 1000 and n_classes >= 20
          and rep.pred_at_k[1] >= 0.90 and rep.pred_at_k[3] >= 0.98
          and elapsed < 300)
    report("A3 synthetic-benchmark", ok,
           f"{n_examples} examples, {n_classes} classes, "
           f"Pred@1={rep.pred_at_k[1]:.4f}, Pred@3={rep.pred_at_k[3]:.4f}, "
           f"{elapsed:.1f}s")


def test_a4_golden_pipeline_vector():
    """A4: b=xyz; -> b=a; with a,b declared int reproduces the golden
    abstraction, repair set, and sentinel-delimited feature sequence."""
    buggy = ("#include <stdio.h>\n" "int main() {\n" "    int a, b;\n"
             "    a = 1;\n" "    b=xyz;\n" "    return 0;\n" "}\n")
    repaired = buggy.replace("b=xyz;", "b=a;")
    edit = detect_single_line_edit(ProgramPair("golden", buggy, repaired))
    abs_buggy = abstract_line(edit.buggy_line, build_symbol_table(buggy))
    abs_repaired = abstract_line(edit.repaired_line, build_symbol_table(repaired))
    repair = diff_repair(abs_buggy, abs_repaired)

    registry = TemplateRegistry()
    registry.intern("filler one")
    registry.intern("filler two")
    tid = registry.intern(generalize("use of undeclared identifier 'xyz'"))
    tokens = feature_tokens(abs_buggy, {tid})

    ok = (abs_buggy.tokens == ("INT", "=", "INVALID", ";")
          and abs_repaired.tokens == ("INT", "=", "INT", ";")
          and repair.insertions == ("INT",) and repair.deletions == ("INVALID",)
          and tokens == ["<ERR>", "E_3", "<UNI>", "INT", "=", "INVALID", ";",
                         "<BI>", "INT_=", "=_INVALID", "INVALID_;", "<EOS>"])
    report("A4 golden-pipeline-vector", ok,
           f"abstract={abs_buggy.tokens} repair={repair.render()} tokens={tokens}")


def test_a5_invariants_suite(synth_corpus, tmp_path):
    """A5: softmax normalization, Pred@k monotonicity, one-hot weights,
    idempotent generalization, bit-identical deterministic retrain."""
    rng = np.random.default_rng(0)
    failures = []

    for seed in range(10):
        params = init_params(np.random.default_rng(seed), 7, 5, 6)
        x = rng.random((8, 7))
        probs, _ = forward(params, x)
        if not np.allclose(probs.sum(axis=1), 1.0, atol=1e-6) or (probs < 0).any():
            failures.append(f"softmax seed {seed}")

    for seed in range(10):
        data = [(rng.random(7).astype(np.float32), int(rng.integers(0, 6)))
                for _ in range(60)]
        model = train(data, NetworkConfig(hidden_units=5, epochs=1, seed=seed))
        rep = evaluate(model, data)
        if not rep.pred_at_k[1] <= rep.pred_at_k[3] <= rep.pred_at_k[5]:
            failures.append(f"pred@k monotonicity seed {seed}")

    vocab = FeatureVocabulary(["a", "b", "c", "d"])
    for toks in (["a"], ["a", "a", "b"], ["z"], ["a", "b", "c", "d"]):
        v = vectorize(toks, vocab)
        if int(v.sum()) != len({t for t in toks if t in vocab}):
            failures.append(f"one-hot weight {toks}")

    msgs = ["use of undeclared identifier 'x'", "expected ';' in 'for' statement",
            "plain text", "dangling ' quote", 'mixed "a" and \'b\'']
    for m in msgs:
        if generalize(generalize(m)) != generalize(m):
            failures.append(f"generalize idempotence {m!r}")

    data = [(rng.random(9).astype(np.float32), int(rng.integers(0, 4)))
            for _ in range(80)]
    cfg = NetworkConfig(hidden_units=6, epochs=2, seed=7)
    p1, p2 = tmp_path / "m1.tegc", tmp_path / "m2.tegc"
    save_model(train(data, cfg), p1)
    save_model(train(data, cfg), p2)
    if p1.read_bytes() != p2.read_bytes():
        failures.append("deterministic retrain not bit-identical")

    report("A5 invariants-suite", not failures, "; ".join(failures) or "all held")


def test_a6_model_round_trip(trained, tmp_path):
    """A6: save->load->predict bitwise equal on 100 random inputs; corrupted
    CRC rejected."""
    from tegcer.model_io import ModelFormatError
    model = trained["model"]
    path = tmp_path / "m.tegc"
    save_model(model, path)
    loaded = load_model(path)
    rng = np.random.default_rng(123)
    v = len(model.vocab)
    mismatch = 0
    for _ in range(100):
        x = (rng.random(v) > 0.8).astype(np.float32)
        pa, _ = forward(model.params, x)
        pb, _ = forward(loaded.params, x)
        if not np.array_equal(pa, pb):
            mismatch += 1
    blob = bytearray(path.read_bytes())
    blob[-1] ^= 0xFF
    path.write_bytes(bytes(blob))
    crc_rejected = False
    try:
        load_model(path)
    except ModelFormatError:
        crc_rejected = True
    report("A6 model-round-trip", mismatch == 0 and crc_rejected,
           f"{mismatch} prediction mismatches, crc_rejected={crc_rejected}")


def test_a7_suggestion_contract(trained, synth_corpus):
    """A7: served examples match their class, per-line totals cap at 10,
    ranking is frequency-descending against recomputed counts."""
    from collections import Counter
    build, model, index = trained["build"], trained["model"], trained["index"]
    failures = []

    # class-key consistency: every indexed example's concrete pair labels
    # back to the class it is indexed under
    by_pair = {}
    for ex in build.examples:
        by_pair.setdefault((ex.edit.buggy_line, ex.edit.repaired_line), set()).add(ex.class_id)
    for cls in build.class_table.classes:
        for entry in index.examples_for(cls.class_id):
            if cls.class_id not in by_pair.get((entry.erroneous, entry.repaired), set()):
                failures.append(f"class {cls.class_id} serves foreign example")
                break

    # recomputed frequency ranking
    recount: dict[int, Counter] = {}
    for ex in build.examples:
        recount.setdefault(ex.class_id, Counter())[ex.abstract_repaired.render()] += 1
    for cls in build.class_table.classes:
        entries = index.examples_for(cls.class_id)
        freqs = [e.frequency for e in entries]
        if freqs != sorted(freqs, reverse=True):
            failures.append(f"class {cls.class_id} not frequency-descending")
        if entries and max(freqs) != max(recount[cls.class_id].values()):
            failures.append(f"class {cls.class_id} frequency mismatch")

    # live suggestion paging obeys the 10-example cap
    out = suggest(synth_corpus["demo_source"], model, index,
                  compiler=trained["compiler"])
    for s in out:
        served = list(s.examples)
        offset = len(served)
        has_more = s.has_more
        while has_more and offset < MAX_EXAMPLES_PER_LINE:
            page, has_more = more_examples(s, offset)
            served.extend(page)
            offset += len(page)
        if len(served) > 10:
            failures.append(f"line {s.line_no} served {len(served)} examples")
        indexed = index.examples_for(s.served_class)
        if any(e not in indexed for e in served):
            failures.append(f"line {s.line_no} served foreign example")

    report("A7 suggestion-contract", not failures, "; ".join(failures) or "all held")
