"""Corpus ingestion and labeled-dataset assembly.

A training unit is a (buggy, repaired) program pair whose repair is a single
edited line. The labeling pipeline runs diagnostics, localizes the edit,
abstracts both line versions, diffs them into a repair set, and buckets the
example into an error-repair class. Pairs that cannot be labeled are skipped
with a machine-readable reason.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .abstraction import AbstractLine, abstract_line, build_symbol_table
from .diagnostics import CompilerConfig, TemplateRegistry, compile_source, group_errors
from .repair import (
    ClassKey,
    ClassTable,
    EmptyRepairError,
    RepairTokenSet,
    classify_pair,
    diff_repair,
    make_class_key,
)


@dataclass(frozen=True)
class ProgramPair:
    pair_id: str
    buggy_source: str
    repaired_source: str
    assignment_id: str | None = None


@dataclass(frozen=True)
class SingleLineEdit:
    pair_id: str
    line_no: int  # 1-based
    buggy_line: str
    repaired_line: str


@dataclass(frozen=True)
class LabeledExample:
    edit: SingleLineEdit
    abstract_buggy: AbstractLine
    abstract_repaired: AbstractLine
    error_templates: tuple[int, ...]
    repair: RepairTokenSet
    class_id: int


@dataclass
class DatasetBuild:
    examples: list[LabeledExample]
    class_table: ClassTable
    registry: TemplateRegistry
    skipped: list[dict] = field(default_factory=list)


def load_corpus(path) -> tuple[list[ProgramPair], list[dict]]:
    """Read the JSONL corpus; malformed records go to the skip report."""
    pairs: list[ProgramPair] = []
    report: list[dict] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                rec = json.loads(raw)
                pair = ProgramPair(
                    pair_id=rec["pair_id"],
                    buggy_source=rec["buggy"],
                    repaired_source=rec["repaired"],
                    assignment_id=rec.get("assignment_id"),
                )
                if not pair.buggy_source or not pair.repaired_source:
                    raise ValueError("empty source")
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                report.append({"line": lineno, "reason": f"malformed record: {exc}"})
                continue
            pairs.append(pair)
    return pairs, report


def detect_single_line_edit(pair: ProgramPair) -> SingleLineEdit | None:
    """The edit, when both programs have equal line counts and exactly one
    line differs after trailing-whitespace strip; otherwise None."""
    buggy = pair.buggy_source.splitlines()
    repaired = pair.repaired_source.splitlines()
    if len(buggy) != len(repaired):
        return None
    diffs = [
        i for i, (b, r) in enumerate(zip(buggy, repaired)) if b.rstrip() != r.rstrip()
    ]
    if len(diffs) != 1:
        return None
    i = diffs[0]
    return SingleLineEdit(pair.pair_id, i + 1, buggy[i].rstrip(), repaired[i].rstrip())


@dataclass
class _Labeled:
    edit: SingleLineEdit
    abstract_buggy: AbstractLine
    abstract_repaired: AbstractLine
    templates: tuple[int, ...]  # provisional ids
    repair: RepairTokenSet


def _label_pair(pair: ProgramPair, config: CompilerConfig, registry: TemplateRegistry):
    """Returns (_Labeled, None) or (None, skip reason)."""
    edit = detect_single_line_edit(pair)
    if edit is None:
        return None, "not-single-line-edit"
    diags = compile_source(pair.buggy_source, config)
    if not diags:
        return None, "no-error"
    _, per_line = group_errors(diags, registry)
    if edit.line_no not in per_line:
        return None, "unlocalized"
    abs_buggy = abstract_line(edit.buggy_line, build_symbol_table(pair.buggy_source))
    abs_repaired = abstract_line(edit.repaired_line, build_symbol_table(pair.repaired_source))
    repair = diff_repair(abs_buggy, abs_repaired)
    if repair.empty:
        return None, "whitespace-only-edit"
    return _Labeled(edit, abs_buggy, abs_repaired, per_line[edit.line_no], repair), None


def build_dataset(
    pairs: list[ProgramPair],
    min_class_size: int = 10,
    compiler: CompilerConfig | None = None,
) -> DatasetBuild:
    """Full labeling pipeline over a corpus.

    Template ids are provisional during the scan and renumbered once, by
    descending frequency, before classes are built; class ids then rank the
    surviving classes by descending frequency. Deterministic for a given
    input order.
    """
    if min_class_size < 1:
        raise ValueError("min_class_size must be >= 1")
    config = compiler or CompilerConfig()
    registry = TemplateRegistry()
    skipped: list[dict] = []
    labeled: list[_Labeled] = []
    for pair in pairs:
        item, reason = _label_pair(pair, config, registry)
        if item is None:
            skipped.append({"pair_id": pair.pair_id, "reason": reason})
        else:
            labeled.append(item)

    # Freeze template numbering by frequency of appearance in kept examples.
    pattern_counts = Counter()
    for item in labeled:
        for tid in item.templates:
            pattern_counts[registry.pattern(tid)] += 1
    frozen, remap = registry.freeze_by_frequency(pattern_counts)
    for item in labeled:
        item.templates = tuple(sorted(remap[t] for t in item.templates))

    key_counts: Counter = Counter()
    keys: list[ClassKey] = []
    for item in labeled:
        key = classify_pair(item.edit.line_no, {item.edit.line_no: item.templates},
                            item.templates, item.repair)
        keys.append(key)
        key_counts[key] += 1

    table = ClassTable.from_counts(key_counts, min_class_size)
    examples: list[LabeledExample] = []
    for item, key in zip(labeled, keys):
        class_id = table.id_for(key)
        if class_id is None:
            skipped.append({"pair_id": item.edit.pair_id, "reason": "class-below-min-size"})
            continue
        examples.append(
            LabeledExample(
                edit=item.edit,
                abstract_buggy=item.abstract_buggy,
                abstract_repaired=item.abstract_repaired,
                error_templates=item.templates,
                repair=item.repair,
                class_id=class_id,
            )
        )
    return DatasetBuild(examples, table, frozen, skipped)


def write_skip_report(path, skipped: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in skipped:
            fh.write(json.dumps(rec) + "\n")
