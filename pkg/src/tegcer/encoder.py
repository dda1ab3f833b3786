"""Feature tokenization and one-hot encoding for the classifier.

The input for one erroneous line is the sentinel-delimited sequence
<ERR> E_k... <UNI> unigrams <BI> bigrams <EOS>, turned into a binary
presence/absence vector over the frozen training vocabulary. Sentinels are
delimiters, not features, and stay out of the vocabulary.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .abstraction import AbstractLine

SENT_ERR = "<ERR>"
SENT_UNI = "<UNI>"
SENT_BI = "<BI>"
SENT_EOS = "<EOS>"
SENTINELS = {SENT_ERR, SENT_UNI, SENT_BI, SENT_EOS}


def error_token(template_id: int) -> str:
    return f"E_{template_id}"


def feature_tokens(line: AbstractLine, templates: Iterable[int]) -> list[str]:
    """Sentinel-delimited feature sequence for one abstract line."""
    unigrams = list(line.tokens)
    bigrams = [f"{a}_{b}" for a, b in zip(unigrams, unigrams[1:])]
    out = [SENT_ERR]
    out.extend(error_token(t) for t in sorted(set(templates)))
    out.append(SENT_UNI)
    out.extend(unigrams)
    out.append(SENT_BI)
    out.extend(bigrams)
    out.append(SENT_EOS)
    return out


class FeatureVocabulary:
    """Frozen bijection feature-token -> index 0..V-1."""

    def __init__(self, tokens: Sequence[str]):
        self._tokens = list(tokens)
        self._index = {t: i for i, t in enumerate(self._tokens)}
        if len(self._index) != len(self._tokens):
            raise ValueError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def index(self, token: str) -> int | None:
        return self._index.get(token)

    @property
    def tokens(self) -> list[str]:
        return list(self._tokens)

    @staticmethod
    def build(token_lists: Iterable[Sequence[str]]) -> "FeatureVocabulary":
        """Every non-sentinel token seen in the corpus, sorted for determinism."""
        seen: set[str] = set()
        for toks in token_lists:
            seen.update(toks)
        return FeatureVocabulary(sorted(seen - SENTINELS))


def vectorize(tokens: Sequence[str], vocab: FeatureVocabulary) -> np.ndarray:
    """Binary presence vector; unknown tokens and sentinels contribute nothing."""
    vec = np.zeros(len(vocab), dtype=np.float32)
    for t in tokens:
        idx = vocab.index(t)
        if idx is not None:
            vec[idx] = 1.0
    return vec


def encode_label(class_id: int, num_classes: int) -> np.ndarray:
    if not 0 <= class_id < num_classes:
        raise ValueError(f"class_id {class_id} out of range [0, {num_classes})")
    vec = np.zeros(num_classes, dtype=np.float32)
    vec[class_id] = 1.0
    return vec
