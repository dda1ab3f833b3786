"""TEGC1 model file format.

Layout: magic ``TEGC1\\0``, format version (u16 LE), then length-prefixed
sections (u32 LE byte length + payload) in fixed order:

  0 header      JSON {shapes, vocab_size, num_classes, model_version}
  1 vocab       JSON list of feature tokens, index order
  2 registry    JSON list of template patterns, id order (id = index + 1)
  3 classes     JSON list of {class_id, templates, insertions, deletions, frequency}
  4 config      JSON NetworkConfig fields
  5 metrics     JSON training metrics
  6..9 tensors  W1, b1, W2, b2 as little-endian float32, row-major

and a trailing CRC32 (u32 LE) of every byte before it.
"""

from __future__ import annotations

import json
import struct
import zlib
from dataclasses import asdict

import numpy as np

from .classifier import NetworkConfig, Params, TrainedModel
from .diagnostics import TemplateRegistry
from .encoder import FeatureVocabulary
from .repair import ClassTable, ErrorRepairClass, RepairTokenSet

MAGIC = b"TEGC1\x00"
FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """Raised with the byte offset where the file stopped making sense."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


def _json_bytes(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _tensor_bytes(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype="<f4").tobytes()


def save_model(model: TrainedModel, path) -> None:
    p = model.params
    header = {
        "model_version": FORMAT_VERSION,
        "vocab_size": len(model.vocab),
        "num_classes": len(model.class_table),
        "shapes": {"W1": list(p.W1.shape), "b1": list(p.b1.shape),
                   "W2": list(p.W2.shape), "b2": list(p.b2.shape)},
    }
    classes = [
        {"class_id": c.class_id, "templates": list(c.templates),
         "insertions": list(c.repair.insertions), "deletions": list(c.repair.deletions),
         "frequency": c.frequency}
        for c in model.class_table.classes
    ]
    cfg = asdict(model.config)
    cfg["split"] = list(cfg["split"])
    sections = [
        _json_bytes(header),
        _json_bytes(model.vocab.tokens),
        _json_bytes(model.template_registry.patterns),
        _json_bytes(classes),
        _json_bytes(cfg),
        _json_bytes(model.metrics),
        _tensor_bytes(p.W1), _tensor_bytes(p.b1),
        _tensor_bytes(p.W2), _tensor_bytes(p.b2),
    ]
    blob = bytearray()
    blob += MAGIC
    blob += struct.pack("<H", FORMAT_VERSION)
    for sec in sections:
        blob += struct.pack("<I", len(sec))
        blob += sec
    blob += struct.pack("<I", zlib.crc32(bytes(blob)))
    with open(path, "wb") as fh:
        fh.write(bytes(blob))


def load_model(path) -> TrainedModel:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < len(MAGIC) + 2 + 4:
        raise ModelFormatError("file too short", len(blob))
    if blob[: len(MAGIC)] != MAGIC:
        raise ModelFormatError('bad magic, expected "TEGC1"', 0)
    (version,) = struct.unpack_from("<H", blob, len(MAGIC))
    if version != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported format version {version}", len(MAGIC))
    (stored_crc,) = struct.unpack_from("<I", blob, len(blob) - 4)
    if zlib.crc32(blob[:-4]) != stored_crc:
        raise ModelFormatError("CRC32 mismatch", len(blob) - 4)

    offset = len(MAGIC) + 2
    sections: list[bytes] = []
    body_end = len(blob) - 4
    while offset < body_end:
        if offset + 4 > body_end:
            raise ModelFormatError("truncated section length", offset)
        (length,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        if offset + length > body_end:
            raise ModelFormatError("truncated section payload", offset)
        sections.append(blob[offset: offset + length])
        offset += length
    if len(sections) != 10:
        raise ModelFormatError(f"expected 10 sections, found {len(sections)}", offset)

    try:
        header = json.loads(sections[0])
        vocab_tokens = json.loads(sections[1])
        patterns = json.loads(sections[2])
        class_recs = json.loads(sections[3])
        cfg = json.loads(sections[4])
        metrics = json.loads(sections[5])
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"bad JSON section: {exc}", offset) from exc

    shapes = header["shapes"]

    def tensor(data: bytes, shape) -> np.ndarray:
        arr = np.frombuffer(data, dtype="<f4")
        expected = int(np.prod(shape)) if shape else 0
        if arr.size != expected:
            raise ModelFormatError(f"tensor size {arr.size} != {expected}", offset)
        return arr.reshape(shape).copy()

    params = Params(
        tensor(sections[6], shapes["W1"]), tensor(sections[7], shapes["b1"]),
        tensor(sections[8], shapes["W2"]), tensor(sections[9], shapes["b2"]),
    )
    cfg["split"] = tuple(cfg["split"])
    table = ClassTable([
        ErrorRepairClass(
            r["class_id"], tuple(r["templates"]),
            RepairTokenSet(tuple(r["insertions"]), tuple(r["deletions"])),
            r["frequency"],
        )
        for r in class_recs
    ])
    return TrainedModel(
        vocab=FeatureVocabulary(vocab_tokens),
        class_table=table,
        template_registry=TemplateRegistry(patterns, frozen=True),
        params=params,
        config=NetworkConfig(**cfg),
        metrics=metrics,
    )
