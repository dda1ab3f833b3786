import os

import pytest

from tegcer import synth
from tegcer.classifier import NetworkConfig
from tegcer.corpus import load_corpus
from tegcer.diagnostics import CompilerConfig
from tegcer.pipeline import train_from_corpus
from tegcer.suggester import build_index


@pytest.fixture(scope="session")
def synth_corpus(tmp_path_factory):
    """1000+ pair mutation corpus with recorded diagnostics (no compiler)."""
    d = tmp_path_factory.mktemp("synth")
    corpus_path = os.path.join(d, "corpus.jsonl")
    fixture_path = os.path.join(d, "diags.jsonl")
    pairs = synth.generate_pairs(min_pairs=1000, seed=1234)
    synth.write_corpus(pairs, corpus_path, fixture_path)
    demo_source, demo_diags = synth.demo_program()
    synth.append_fixture(fixture_path, demo_source, demo_diags)
    return {
        "pairs": pairs,
        "corpus_path": corpus_path,
        "fixture_path": fixture_path,
        "demo_source": demo_source,
    }


@pytest.fixture(scope="session")
def trained(synth_corpus):
    """Model + dataset build + example index trained on the synth corpus."""
    loaded, report = load_corpus(synth_corpus["corpus_path"])
    assert not report
    compiler = CompilerConfig(fixture_path=synth_corpus["fixture_path"])
    model, build = train_from_corpus(
        loaded, NetworkConfig(seed=0), min_class_size=10, compiler=compiler
    )
    return {
        "model": model,
        "build": build,
        "index": build_index(build.examples),
        "compiler": compiler,
    }
