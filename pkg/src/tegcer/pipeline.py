"""End-to-end glue: labeled corpus -> features -> trained model."""

from __future__ import annotations

import numpy as np

from .classifier import NetworkConfig, TrainedModel, train
from .corpus import DatasetBuild, LabeledExample, ProgramPair, build_dataset
from .diagnostics import CompilerConfig
from .encoder import FeatureVocabulary, feature_tokens, vectorize


def example_feature_tokens(ex: LabeledExample) -> list[str]:
    return feature_tokens(ex.abstract_buggy, ex.error_templates)


def featurize(
    examples: list[LabeledExample], vocab: FeatureVocabulary | None = None
) -> tuple[FeatureVocabulary, list[tuple[np.ndarray, int]]]:
    """Build (or reuse) the vocabulary and vectorize every example."""
    token_lists = [example_feature_tokens(ex) for ex in examples]
    if vocab is None:
        vocab = FeatureVocabulary.build(token_lists)
    data = [(vectorize(toks, vocab), ex.class_id) for toks, ex in zip(token_lists, examples)]
    return vocab, data


def train_from_corpus(
    pairs: list[ProgramPair],
    config: NetworkConfig | None = None,
    min_class_size: int = 10,
    compiler: CompilerConfig | None = None,
) -> tuple[TrainedModel, DatasetBuild]:
    build = build_dataset(pairs, min_class_size=min_class_size, compiler=compiler)
    if not build.examples:
        raise ValueError("no labelable examples in corpus")
    vocab, data = featurize(build.examples)
    model = train(
        data, config or NetworkConfig(),
        vocab=vocab, class_table=build.class_table, template_registry=build.registry,
    )
    return model, build
