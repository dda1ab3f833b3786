"""Synthetic training corpus: known token mutations over valid C programs.

Each generator skeleton is a small valid program; each mutation edits exactly
one line and records the diagnostic a compiler would report there, so the
corpus ships with a recorded-diagnostics fixture and the whole pipeline runs
compiler-free. Mutations are chosen so the corpus covers 20+ distinct
error-repair classes.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

from .diagnostics import source_sha256

M_DECL_SEMI = "expected ';' at end of declaration"
M_EXPR_SEMI = "expected ';' after expression"
M_RET_SEMI = "expected ';' after return statement"
M_ASSIGN_COND = "using the result of an assignment as a condition without parentheses"
M_EXPECT_EXPR = "expected expression"
M_FUNC_BODY = "expected function body after function declarator"
M_FOR_SEMI = "expected ';' in 'for' statement"


def m_undeclared(name: str) -> str:
    return f"use of undeclared identifier '{name}'"


def m_expected(tok: str) -> str:
    return f"expected '{tok}'"


def m_unknown_type(name: str) -> str:
    return f"unknown type name '{name}'"


def m_implicit_decl(name: str) -> str:
    return f"implicit declaration of function '{name}' is invalid in C99"


M_SCANF_FMT = "format specifies type 'int *' but the argument has type 'int'"
M_EXPECT_LPAREN_IF = "expected '(' after 'if'"

NAME_POOL = ["a", "b", "c", "d", "m", "p", "q", "r", "s", "t", "u", "v", "w",
             "val", "num", "cnt", "tmp", "res", "idx", "acc"]
OPS = ["+", "-", "*"]


@dataclass(frozen=True)
class SynthPair:
    pair_id: str
    buggy: str
    repaired: str
    line_no: int
    mutation: str
    message: str


def _pick_names(rng: random.Random, k: int) -> list[str]:
    return rng.sample(NAME_POOL, k)


def _skeleton_a(rng: random.Random):
    a, b = _pick_names(rng, 2)
    k1, k2 = rng.randint(1, 99), rng.randint(1, 99)
    op = rng.choice(OPS)
    lines = [
        "#include <stdio.h>",
        "int main() {",
        f"    int {a}, {b};",
        f'    scanf("%d", &{a});',
        f"    {b} = {a} {op} {k1};",
        f"    if ({b} == {k2}) {{",
        f'        printf("%d\\n", {b});',
        "    }",
        "    return 0;",
        "}",
    ]
    mutations = [
        ("decl_drop_semi", 3, f"    int {a}, {b}", M_DECL_SEMI),
        ("expr_drop_semi", 5, f"    {b} = {a} {op} {k1}", M_EXPR_SEMI),
        ("return_drop_semi", 9, "    return 0", M_RET_SEMI),
        ("cond_eq_to_assign", 6, f"    if ({b} = {k2}) {{", M_ASSIGN_COND),
        ("undeclared_int", 5, f"    {b} = xyz {op} {k1};", m_undeclared("xyz")),
        ("literal_to_undeclared", 5, f"    {b} = {a} {op} xyz;", m_undeclared("xyz")),
        ("printf_drop_paren", 7, f'        printf("%d\\n", {b};', m_expected(")")),
        ("printf_drop_comma", 7, f'        printf("%d\\n" {b});', m_expected(")")),
        ("scanf_drop_amp", 4, f'    scanf("%d", {a});', M_SCANF_FMT),
        ("if_drop_open_paren", 6, f"    if {b} == {k2}) {{", M_EXPECT_LPAREN_IF),
        ("drop_close_brace", 8, "", m_expected("}")),
        ("main_drop_brace", 2, "int main()", M_FUNC_BODY),
        ("int_typo", 3, f"    itn {a}, {b};", m_unknown_type("itn")),
        ("printf_typo", 7, f'        pritnf("%d\\n", {b});', m_implicit_decl("pritnf")),
    ]
    return lines, mutations


def _skeleton_b(rng: random.Random):
    arr, i, n = _pick_names(rng, 3)
    k1 = rng.randint(2, 9)
    size = rng.choice([10, 20, 50])
    lines = [
        "#include <stdio.h>",
        "int main() {",
        f"    int {arr}[{size}];",
        f"    int {i}, {n};",
        f"    {n} = {size};",
        f"    for ({i} = 0; {i} < {n}; {i}++) {{",
        f"        {arr}[{i}] = {i} * {k1};",
        "    }",
        f'    printf("%d\\n", {arr}[0]);',
        "    return 0;",
        "}",
    ]
    mutations = [
        ("undeclared_array", 7, f"        xyz[{i}] = {i} * {k1};", m_undeclared("xyz")),
        ("for_comma_for_semi", 6, f"    for ({i} = 0, {i} < {n}; {i}++) {{", M_FOR_SEMI),
        ("array_drop_lbracket", 7, f"        {arr} {i}] = {i} * {k1};", M_EXPECT_EXPR),
        ("decl_drop_semi", 4, f"    int {i}, {n}", M_DECL_SEMI),
    ]
    return lines, mutations


def _skeleton_c(rng: random.Random):
    x, y = _pick_names(rng, 2)
    fk = f"{rng.randint(1, 9)}.{rng.randint(1, 9)}"
    fk2 = f"{rng.randint(1, 9)}.{rng.randint(0, 9)}"
    op = rng.choice(["*", "+"])
    lines = [
        "#include <stdio.h>",
        "int main() {",
        f"    float {x}, {y};",
        f'    scanf("%f", &{x});',
        f"    {y} = {x} {op} {fk};",
        f"    if ({y} != {fk2}) {{",
        f'        printf("%f\\n", {y});',
        "    }",
        "    return 0;",
        "}",
    ]
    mutations = [
        ("undeclared_float", 5, f"    {y} = xyz {op} {fk};", m_undeclared("xyz")),
        ("neq_to_bang", 6, f"    if ({y} ! {fk2}) {{", m_expected(")")),
        ("expr_drop_semi", 5, f"    {y} = {x} {op} {fk}", M_EXPR_SEMI),
        ("literal_float_to_undeclared", 5, f"    {y} = {x} {op} xyz;", m_undeclared("xyz")),
    ]
    return lines, mutations


def _skeleton_d(rng: random.Random):
    c = rng.choice(["ch", "key", "sym", "letter"])
    q1 = rng.choice("abcdefgh")
    q2 = rng.choice("npqrstuv")
    lines = [
        "#include <stdio.h>",
        "int main() {",
        f"    char {c};",
        f"    {c} = '{q1}';",
        f"    if ({c} == '{q2}') {{",
        f'        printf("%c\\n", {c});',
        "    }",
        "    return 0;",
        "}",
    ]
    mutations = [
        ("undeclared_char", 4, f"    xyz = '{q1}';", m_undeclared("xyz")),
        ("char_literal_to_undeclared", 4, f"    {c} = xyz;", m_undeclared("xyz")),
        ("cond_eq_to_assign", 5, f"    if ({c} = '{q2}') {{", M_ASSIGN_COND),
        ("expr_drop_semi", 4, f"    {c} = '{q1}'", M_EXPR_SEMI),
    ]
    return lines, mutations


def _skeleton_e(rng: random.Random):
    f = rng.choice(["add", "calc", "combine", "mix"])
    p, q, a, b = _pick_names(rng, 4)
    k1, k2 = rng.randint(1, 50), rng.randint(1, 50)
    lines = [
        "#include <stdio.h>",
        f"int {f}(int {p}, int {q}) {{",
        f"    return {p} + {q};",
        "}",
        "int main() {",
        f"    int {a}, {b};",
        f"    {a} = {k1};",
        f"    {b} = {f}({a}, {k2});",
        f'    printf("%d\\n", {b});',
        "    return 0;",
        "}",
    ]
    mutations = [
        ("undeclared_func", 8, f"    {b} = xyz({a}, {k2});", m_implicit_decl("xyz")),
        ("call_drop_comma", 8, f"    {b} = {f}({a} {k2});", m_expected(")")),
        ("func_decl_drop_paren", 2, f"int {f}(int {p}, int {q} {{", m_expected(")")),
    ]
    return lines, mutations


SKELETONS = [("A", _skeleton_a), ("B", _skeleton_b), ("C", _skeleton_c),
             ("D", _skeleton_d), ("E", _skeleton_e)]


def generate_pairs(min_pairs: int = 1000, seed: int = 1234) -> list[SynthPair]:
    """Deterministic corpus of single-line-edit pairs with recorded messages."""
    rng = random.Random(seed)
    out: list[SynthPair] = []
    variant = 0
    while len(out) < min_pairs:
        for tag, skeleton in SKELETONS:
            lines, mutations = skeleton(rng)
            repaired = "\n".join(lines) + "\n"
            for name, line_no, buggy_line, message in mutations:
                buggy_lines = list(lines)
                buggy_lines[line_no - 1] = buggy_line
                out.append(
                    SynthPair(
                        pair_id=f"{tag}{variant:04d}-{name}",
                        buggy="\n".join(buggy_lines) + "\n",
                        repaired=repaired,
                        line_no=line_no,
                        mutation=name,
                        message=message,
                    )
                )
        variant += 1
    return out


def write_corpus(pairs: list[SynthPair], corpus_path, fixture_path) -> None:
    """Emit the JSONL corpus plus the recorded-diagnostics fixture.

    Fixture entries cover the buggy sources (one diagnostic each) and the
    repaired sources (no diagnostics), so clean programs also resolve.
    """
    with open(corpus_path, "w", encoding="utf-8") as fh:
        for p in pairs:
            fh.write(json.dumps({"pair_id": p.pair_id, "buggy": p.buggy,
                                 "repaired": p.repaired}) + "\n")
    seen: dict[str, list[dict]] = {}
    for p in pairs:
        seen.setdefault(source_sha256(p.buggy), [
            {"line": p.line_no, "col": 1, "message": p.message}
        ])
        seen.setdefault(source_sha256(p.repaired), [])
    with open(fixture_path, "w", encoding="utf-8") as fh:
        for digest, diags in seen.items():
            fh.write(json.dumps({"source_sha256": digest, "diagnostics": diags}) + "\n")


def demo_program() -> tuple[str, list[dict]]:
    """A three-error program (one mutation per line) plus its fixture record.

    Errors: undeclared identifier on the assignment, '=' for '==' in the if
    condition, and a missing ')' in the printf call.
    """
    lines = [
        "#include <stdio.h>",
        "int main() {",
        "    int a, b;",
        '    scanf("%d", &a);',
        "    b = xyz + 7;",
        "    if (b = 3) {",
        '        printf("%d\\n", b;',
        "    }",
        "    return 0;",
        "}",
    ]
    source = "\n".join(lines) + "\n"
    diagnostics = [
        {"line": 5, "col": 9, "message": m_undeclared("xyz")},
        {"line": 6, "col": 11, "message": M_ASSIGN_COND},
        {"line": 7, "col": 28, "message": m_expected(")")},
    ]
    return source, diagnostics


def append_fixture(fixture_path, source: str, diagnostics: list[dict]) -> None:
    with open(fixture_path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps({"source_sha256": source_sha256(source),
                             "diagnostics": diagnostics}) + "\n")
