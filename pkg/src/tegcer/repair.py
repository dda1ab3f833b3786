"""Signed repair-token sets and canonical error-repair classes.

The repair between a buggy and a repaired abstract line is the signed set of
tokens an LCS alignment inserts (+) and deletes (−). A class is the canonical
pair (error-template set, repair set); class ids rank classes by descending
training frequency.
"""

from __future__ import annotations

from dataclasses import dataclass

from .abstraction import AbstractLine


class EmptyRepairError(ValueError):
    """Whitespace-only (or reorder-free identical) edit: nothing to learn."""


@dataclass(frozen=True)
class RepairTokenSet:
    insertions: tuple[str, ...]  # sorted, deduplicated
    deletions: tuple[str, ...]

    @staticmethod
    def make(insertions, deletions) -> "RepairTokenSet":
        return RepairTokenSet(tuple(sorted(set(insertions))), tuple(sorted(set(deletions))))

    @property
    def empty(self) -> bool:
        return not self.insertions and not self.deletions

    def render(self) -> str:
        parts = [f"+{t}" for t in self.insertions] + [f"-{t}" for t in self.deletions]
        return " ".join(parts)


# A class key: (templates ascending, insertions ascending, deletions ascending).
ClassKey = tuple[tuple[int, ...], tuple[str, ...], tuple[str, ...]]


def make_class_key(templates, repair: RepairTokenSet) -> ClassKey:
    return (tuple(sorted(set(templates))), repair.insertions, repair.deletions)


def _prefix_lcs(a: tuple[str, ...], b: tuple[str, ...]) -> list[list[int]]:
    """dp[i][j] = LCS length of a[:i], b[:j]."""
    na, nb = len(a), len(b)
    dp = [[0] * (nb + 1) for _ in range(na + 1)]
    for i in range(1, na + 1):
        prev, row = dp[i - 1], dp[i]
        for j in range(1, nb + 1):
            if a[i - 1] == b[j - 1]:
                row[j] = prev[j - 1] + 1
            else:
                row[j] = prev[j] if prev[j] >= row[j - 1] else row[j - 1]
    return dp


def _lcs_alignment_sets(bad: tuple[str, ...], good: tuple[str, ...]) -> tuple[set[str], set[str]]:
    """Signed sets over ALL alignments maximizing common tokens.

    A single canonical alignment would make the result depend on tie-breaks
    (and break symmetry, e.g. [a,b] vs [b,a]); the union over every optimal
    alignment is canonical, symmetric, and order-insensitive. A token of
    `bad` is deletable iff some optimal alignment leaves it unmatched, which
    holds iff the prefix LCS before it plus the suffix LCS after it still
    reaches the full LCS length; dually for insertions.
    """
    nb, ng = len(bad), len(good)
    pre = _prefix_lcs(bad, good)
    suf_rev = _prefix_lcs(bad[::-1], good[::-1])
    total = pre[nb][ng]

    def suf(i: int, j: int) -> int:  # LCS of bad[i:], good[j:]
        return suf_rev[nb - i][ng - j]

    dels = {
        bad[i]
        for i in range(nb)
        if any(pre[i][j] + suf(i + 1, j) == total for j in range(ng + 1))
    }
    ins = {
        good[j]
        for j in range(ng)
        if any(pre[i][j] + suf(i, j + 1) == total for i in range(nb + 1))
    }
    return ins, dels


def diff_repair(bad: AbstractLine, good: AbstractLine) -> RepairTokenSet:
    """Signed token set from token-level LCS alignment of the two lines."""
    ins, dels = _lcs_alignment_sets(bad.tokens, good.tokens)
    return RepairTokenSet.make(ins, dels)


def classify_pair(
    line_no: int,
    per_line_errors: dict[int, tuple[int, ...]],
    program_errors: tuple[int, ...],
    repair: RepairTokenSet,
) -> ClassKey:
    """Canonical class key for one edit.

    Line-level templates are preferred; when the compiler did not report the
    edited line the program-wide group is used instead.
    """
    if repair.empty:
        raise EmptyRepairError("edit produced no repair tokens")
    templates = per_line_errors.get(line_no, program_errors)
    return make_class_key(templates, repair)


@dataclass(frozen=True)
class ErrorRepairClass:
    class_id: int
    templates: tuple[int, ...]
    repair: RepairTokenSet
    frequency: int

    @property
    def key(self) -> ClassKey:
        return make_class_key(self.templates, self.repair)


class ClassTable:
    """Frozen class table: ids 0..K-1 in descending frequency order."""

    def __init__(self, classes: list[ErrorRepairClass]):
        self.classes = list(classes)
        self._by_key = {c.key: c.class_id for c in self.classes}
        for i, c in enumerate(self.classes):
            if c.class_id != i:
                raise ValueError("class ids must be contiguous from 0")

    def __len__(self) -> int:
        return len(self.classes)

    def id_for(self, key: ClassKey) -> int | None:
        return self._by_key.get(key)

    def by_id(self, class_id: int) -> ErrorRepairClass:
        return self.classes[class_id]

    @staticmethod
    def from_counts(counts: dict[ClassKey, int], min_class_size: int) -> "ClassTable":
        """Rank surviving keys by (frequency desc, key lexicographic)."""
        survivors = [(k, n) for k, n in counts.items() if n >= min_class_size]
        survivors.sort(key=lambda kn: (-kn[1], kn[0]))
        classes = [
            ErrorRepairClass(i, key[0], RepairTokenSet(key[1], key[2]), n)
            for i, (key, n) in enumerate(survivors)
        ]
        return ClassTable(classes)
