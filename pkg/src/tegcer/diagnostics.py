"""Compiler invocation, diagnostic parsing, and error-template handling.

Diagnostics are read from the GCC/Clang text convention
``file:line:col: error: message``. Messages are generalized into templates by
replacing quoted program-specific tokens with numbered placeholders, and
templates are interned in a registry whose ids are frozen (renumbered by
descending frequency) when a dataset is built.

A recorded-fixture mode maps sha256(source) to diagnostics so the whole
pipeline runs without any compiler installed.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
import subprocess
import tempfile
from dataclasses import dataclass, field

UNKNOWN_TEMPLATE = 0
PLACEHOLDER = "□"  # □

_DIAG_RE = re.compile(
    r"^(?P<file>[^:]*):(?P<line>\d+):(?:(?P<col>\d+):)?\s*"
    r"(?P<sev>fatal error|error|warning|note)\s*:\s?(?P<msg>.*)$"
)

MAX_STDERR_BYTES = 1 << 20


class CompilerError(Exception):
    pass


class CompilerNotFound(CompilerError):
    pass


class CompilerTimeout(CompilerError):
    pass


class FixtureMiss(CompilerError):
    """Source hash absent from the recorded-diagnostics fixture."""


@dataclass(frozen=True)
class RawDiagnostic:
    line: int  # 1-based
    col: int   # 1-based, 0 when the compiler omitted it
    message: str


@dataclass
class CompilerConfig:
    command: str = "cc -fsyntax-only -std=c99 {file}"
    timeout: float = 10.0
    fixture_path: str | None = None
    _fixture_cache: dict[str, list[RawDiagnostic]] | None = field(default=None, repr=False)


def source_sha256(source: str) -> str:
    return hashlib.sha256(source.encode("utf-8")).hexdigest()


def _load_fixtures(path: str) -> dict[str, list[RawDiagnostic]]:
    table: dict[str, list[RawDiagnostic]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            table[rec["source_sha256"]] = [
                RawDiagnostic(d["line"], d.get("col", 0), d["message"])
                for d in rec["diagnostics"]
            ]
    return table


def parse_diagnostics(stderr_text: str) -> tuple[list[RawDiagnostic], int]:
    """Parse compiler stderr; returns (error diagnostics, unparsed-line count)."""
    diags: list[RawDiagnostic] = []
    skipped = 0
    for raw in stderr_text.splitlines():
        if not raw.strip():
            continue
        m = _DIAG_RE.match(raw)
        if m is None:
            skipped += 1
            continue
        if m.group("sev") not in ("error", "fatal error"):
            continue
        diags.append(
            RawDiagnostic(int(m.group("line")), int(m.group("col") or 0), m.group("msg"))
        )
    return diags, skipped


def compile_source(source: str, config: CompilerConfig) -> list[RawDiagnostic]:
    """Run the configured compiler (or consult the fixture) on one program.

    Returns error-severity diagnostics in report order; empty list means the
    program compiles.
    """
    if config.fixture_path is not None:
        if config._fixture_cache is None:
            config._fixture_cache = _load_fixtures(config.fixture_path)
        digest = source_sha256(source)
        if digest not in config._fixture_cache:
            raise FixtureMiss(f"no recorded diagnostics for source {digest[:12]}...")
        return list(config._fixture_cache[digest])

    command = os.environ.get("TEGCER_CC", config.command)
    with tempfile.TemporaryDirectory(prefix="tegcer-cc-") as tmp:
        path = os.path.join(tmp, "input.c")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(source)
        argv = [a.replace("{file}", path) for a in command.split()]
        try:
            proc = subprocess.run(
                argv, capture_output=True, timeout=config.timeout, text=True,
                errors="replace",
            )
        except FileNotFoundError as exc:
            raise CompilerNotFound(f"compiler not found: {argv[0]}") from exc
        except subprocess.TimeoutExpired as exc:
            raise CompilerTimeout(f"compiler exceeded {config.timeout}s") from exc
    stderr = proc.stderr[:MAX_STDERR_BYTES]
    diags, _ = parse_diagnostics(stderr)
    return diags


def generalize(message: str) -> str:
    """Replace each quoted segment with a numbered placeholder.

    Both '...' and "..." segments are substituted, left to right. A dangling
    quote with no closing partner is kept as literal text.
    """
    out: list[str] = []
    i, n, k = 0, len(message), 0
    while i < n:
        c = message[i]
        if c in "'\"":
            j = message.find(c, i + 1)
            if j == -1:
                out.append(message[i:])
                break
            k += 1
            out.append(f"{PLACEHOLDER}_{k}")
            i = j + 1
        else:
            out.append(c)
            i += 1
    return "".join(out)


class TemplateRegistry:
    """Pattern -> stable integer id. Ids start at 1; 0 is UNKNOWN_TEMPLATE.

    Training mode allocates ids on demand; a frozen registry maps unseen
    patterns to UNKNOWN_TEMPLATE.
    """

    def __init__(self, patterns: list[str] | None = None, frozen: bool = False):
        self._patterns: list[str] = list(patterns or [])
        self._ids: dict[str, int] = {p: i + 1 for i, p in enumerate(self._patterns)}
        if len(self._ids) != len(self._patterns):
            raise ValueError("duplicate patterns in registry")
        self.frozen = frozen

    def __len__(self) -> int:
        return len(self._patterns)

    def intern(self, pattern: str) -> int:
        tid = self._ids.get(pattern)
        if tid is not None:
            return tid
        if self.frozen:
            return UNKNOWN_TEMPLATE
        self._patterns.append(pattern)
        tid = len(self._patterns)
        self._ids[pattern] = tid
        return tid

    def intern_message(self, message: str) -> int:
        return self.intern(generalize(message))

    def pattern(self, template_id: int) -> str:
        if not 1 <= template_id <= len(self._patterns):
            raise KeyError(template_id)
        return self._patterns[template_id - 1]

    @property
    def patterns(self) -> list[str]:
        return list(self._patterns)

    def freeze_by_frequency(self, counts: dict[str, int]) -> tuple["TemplateRegistry", dict[int, int]]:
        """Renumber by descending usage count (ties lexicographic) and freeze.

        Returns the frozen registry plus an old-id -> new-id mapping. Patterns
        never counted keep a slot at the tail so ids stay total.
        """
        ordered = sorted(self._patterns, key=lambda p: (-counts.get(p, 0), p))
        frozen = TemplateRegistry(ordered, frozen=True)
        remap = {self._ids[p]: frozen._ids[p] for p in self._patterns}
        return frozen, remap


def group_errors(
    diags: list[RawDiagnostic], registry: TemplateRegistry
) -> tuple[tuple[int, ...], dict[int, tuple[int, ...]]]:
    """Intern each diagnostic and group templates program-wide and per line.

    Groups are deduplicated sorted tuples of template ids, independent of the
    diagnostic input order.
    """
    if not diags:
        raise ValueError("group_errors requires at least one diagnostic")
    program: set[int] = set()
    per_line: dict[int, set[int]] = {}
    for d in diags:
        tid = registry.intern_message(d.message)
        program.add(tid)
        per_line.setdefault(d.line, set()).add(tid)
    return tuple(sorted(program)), {ln: tuple(sorted(s)) for ln, s in per_line.items()}
