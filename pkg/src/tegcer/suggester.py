"""Example-fix suggestions for buggy programs.

Indexes training examples by error-repair class and serves, per compiler-
reported line, the predicted classes plus frequency-ranked concrete
(erroneous, repaired) example pairs. At most 10 examples are served per line,
paged; the default page size of 1 matches the show-one-then-More? deployment.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .abstraction import abstract_line, build_symbol_table
from .classifier import TrainedModel, predict_topk
from .corpus import LabeledExample
from .diagnostics import CompilerConfig, RawDiagnostic, compile_source, group_errors
from .encoder import feature_tokens, vectorize

MAX_EXAMPLES_PER_LINE = 10


class ExampleCapError(ValueError):
    """More than MAX_EXAMPLES_PER_LINE examples requested for one line."""


@dataclass(frozen=True)
class ExampleEntry:
    erroneous: str
    repaired: str
    frequency: int  # of the repaired ABSTRACT line within the class


class ExampleIndex:
    """class_id -> examples ranked by (frequency desc, repaired line asc)."""

    def __init__(self, by_class: dict[int, list[ExampleEntry]]):
        self._by_class = by_class

    def examples_for(self, class_id: int) -> list[ExampleEntry]:
        return self._by_class.get(class_id, [])

    def __len__(self) -> int:
        return len(self._by_class)


def build_index(examples: list[LabeledExample]) -> ExampleIndex:
    freq: dict[int, Counter] = {}
    pairs: dict[int, dict[tuple[str, str], str]] = {}
    for ex in examples:
        abstract_rep = ex.abstract_repaired.render()
        freq.setdefault(ex.class_id, Counter())[abstract_rep] += 1
        pairs.setdefault(ex.class_id, {})[
            (ex.edit.buggy_line, ex.edit.repaired_line)
        ] = abstract_rep
    by_class: dict[int, list[ExampleEntry]] = {}
    for class_id, pair_map in pairs.items():
        entries = [
            ExampleEntry(bad, good, freq[class_id][abstract_rep])
            for (bad, good), abstract_rep in pair_map.items()
        ]
        entries.sort(key=lambda e: (-e.frequency, e.repaired, e.erroneous))
        by_class[class_id] = entries
    return ExampleIndex(by_class)


@dataclass
class Suggestion:
    line_no: int
    diagnostics: list[str]
    predicted: list[tuple[int, float]]  # (class_id, probability), ranked
    served_class: int
    examples: list[ExampleEntry]        # first page
    has_more: bool
    # full ranked list, already capped at MAX_EXAMPLES_PER_LINE
    all_examples: list[ExampleEntry] = field(default_factory=list, repr=False)
    page_size: int = 1


def more_examples(suggestion: Suggestion, offset: int) -> tuple[list[ExampleEntry], bool]:
    """Next page at the given offset; the per-line total is capped at 10."""
    if offset >= MAX_EXAMPLES_PER_LINE:
        raise ExampleCapError(f"at most {MAX_EXAMPLES_PER_LINE} examples per line")
    page = suggestion.all_examples[offset: offset + suggestion.page_size]
    has_more = offset + len(page) < len(suggestion.all_examples)
    return page, has_more


def suggest(
    source: str,
    model: TrainedModel,
    index: ExampleIndex,
    compiler: CompilerConfig | None = None,
    examples_per_page: int = 1,
    class_fallback_n: int = 3,
    top_k: int = 3,
) -> list[Suggestion]:
    """One Suggestion per compiler-reported line; empty list when the program
    compiles. Falls back through the next predicted classes (up to
    class_fallback_n) when the top class has no indexed examples."""
    config = compiler or CompilerConfig()
    diags = compile_source(source, config)
    if not diags:
        return []
    _, per_line = group_errors(diags, model.template_registry)
    messages_by_line: dict[int, list[RawDiagnostic]] = {}
    for d in diags:
        messages_by_line.setdefault(d.line, []).append(d)
    symtab = build_symbol_table(source)
    lines = source.splitlines()

    suggestions: list[Suggestion] = []
    for line_no in sorted(per_line):
        text = lines[line_no - 1] if 0 < line_no <= len(lines) else ""
        abstract = abstract_line(text, symtab)
        tokens = feature_tokens(abstract, per_line[line_no])
        x = vectorize(tokens, model.vocab)
        k = min(max(top_k, class_fallback_n), model.num_classes)
        predicted = predict_topk(model, x, k)
        served_class = predicted[0][0]
        ranked: list[ExampleEntry] = []
        for class_id, _ in predicted[:class_fallback_n]:
            ranked = index.examples_for(class_id)
            if ranked:
                served_class = class_id
                break
        capped = ranked[:MAX_EXAMPLES_PER_LINE]
        first = capped[:examples_per_page]
        suggestions.append(
            Suggestion(
                line_no=line_no,
                diagnostics=[d.message for d in messages_by_line[line_no]],
                predicted=predicted,
                served_class=served_class,
                examples=first,
                has_more=len(first) < len(capped),
                all_examples=capped,
                page_size=examples_per_page,
            )
        )
    return suggestions
