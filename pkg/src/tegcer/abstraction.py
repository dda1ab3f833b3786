"""C source abstraction: lexing plus identifier/literal replacement with type tags.

A lightweight declaration scanner stands in for full type inference. Lines are
lexed with a hand-written maximal-munch tokenizer, then every identifier is
replaced by its declared type tag (INT, ARRAY, FUNC, ...) or INVALID when
undeclared, and literals become LITERAL_INT / LITERAL_FLOAT / LITERAL_CHAR /
LITERAL_STR. Keywords, operators and punctuation pass through verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

C_KEYWORDS = {
    "auto", "break", "case", "char", "const", "continue", "default", "do",
    "double", "else", "enum", "extern", "float", "for", "goto", "if",
    "inline", "int", "long", "register", "restrict", "return", "short",
    "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
    "unsigned", "void", "volatile", "while",
}

# Abstraction tags double as reserved words so that re-abstracting an already
# abstract line is a no-op.
TYPE_TAGS = {"INT", "FLOAT", "DOUBLE", "CHAR", "LONG", "ARRAY", "POINTER", "FUNC", "STDLIB"}
LITERAL_TAGS = {"LITERAL_INT", "LITERAL_FLOAT", "LITERAL_CHAR", "LITERAL_STR"}
INVALID_TAG = "INVALID"
ALL_TAGS = TYPE_TAGS | LITERAL_TAGS | {INVALID_TAG}

# Library names kept concrete in abstract lines.
STDLIB_NAMES = {
    "printf", "scanf", "main", "getchar", "putchar", "strlen", "strcpy",
    "strcmp", "sqrt", "pow", "abs", "malloc", "free",
}

BASE_TYPE_KEYWORDS = {"int", "float", "double", "char", "long", "short", "signed", "unsigned", "void"}

PUNCTUATION = {";", ",", "(", ")", "{", "}", "[", "]"}

# Longest-first so maximal munch falls out of ordered matching.
OPERATORS = [
    ">>=", "<<=", "...",
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "->", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~", "?",
    ":", ".", "#",
]

_IDENT_RE = re.compile(r"[A-Za-z_]\w*")
_FLOAT_RE = re.compile(r"(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?[fFlL]?|\d+[eE][+-]?\d+[fFlL]?")
_INT_RE = re.compile(r"0[xX][0-9a-fA-F]+[uUlL]*|\d+[uUlL]*")
_STRING_RE = re.compile(r'"(?:\\.|[^"\\])*"')
_CHAR_RE = re.compile(r"'(?:\\.|[^'\\])'")
_LINE_COMMENT_RE = re.compile(r"//[^\n]*")
_BLOCK_COMMENT_RE = re.compile(r"/\*.*?\*/", re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | identifier | operator | punctuation | *_literal
    text: str


@dataclass(frozen=True)
class AbstractLine:
    tokens: tuple[str, ...]

    def render(self) -> str:
        return " ".join(self.tokens)


def strip_comments(text: str) -> str:
    """Remove block and line comments, preserving newlines inside blocks."""
    def _blank(m: re.Match) -> str:
        return "".join(c if c == "\n" else " " for c in m.group())

    text = _BLOCK_COMMENT_RE.sub(_blank, text)
    return _LINE_COMMENT_RE.sub("", text)


def tokenize(text: str) -> list[Token]:
    """Lex C source into tokens. Total: unknown bytes come out as punctuation."""
    text = strip_comments(text)
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if m := _STRING_RE.match(text, i):
            tokens.append(Token("string_literal", m.group()))
            i = m.end()
            continue
        if m := _CHAR_RE.match(text, i):
            tokens.append(Token("char_literal", m.group()))
            i = m.end()
            continue
        if m := _FLOAT_RE.match(text, i):
            tokens.append(Token("float_literal", m.group()))
            i = m.end()
            continue
        if m := _INT_RE.match(text, i):
            tokens.append(Token("int_literal", m.group()))
            i = m.end()
            continue
        if m := _IDENT_RE.match(text, i):
            word = m.group()
            tokens.append(Token("keyword" if word in C_KEYWORDS else "identifier", word))
            i = m.end()
            continue
        if c in PUNCTUATION:
            tokens.append(Token("punctuation", c))
            i += 1
            continue
        for op in OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token("operator", op))
                i += len(op)
                break
        else:
            # Garbage in, punctuation out.
            tokens.append(Token("punctuation", c))
            i += 1
    return tokens


class SymbolTable:
    """identifier -> type tag, with the stdlib allowlist always present."""

    def __init__(self, entries: dict[str, str] | None = None):
        self._entries = dict(entries or {})

    def lookup(self, name: str) -> str | None:
        if name in STDLIB_NAMES:
            return "STDLIB"
        return self._entries.get(name)

    def declare(self, name: str, tag: str) -> None:
        if name not in STDLIB_NAMES:
            self._entries[name] = tag

    def as_dict(self) -> dict[str, str]:
        return dict(self._entries)


def _base_tag(specifiers: list[str]) -> str:
    for kw, tag in (("double", "DOUBLE"), ("float", "FLOAT"), ("char", "CHAR"), ("long", "LONG")):
        if kw in specifiers:
            return tag
    return "INT"


def _skip_balanced(tokens: list[Token], i: int, open_c: str, close_c: str) -> int:
    """i points at the opening token; returns index just past the match."""
    depth = 0
    while i < len(tokens):
        t = tokens[i].text
        if t == open_c:
            depth += 1
        elif t == close_c:
            depth -= 1
            if depth == 0:
                return i + 1
        i += 1
    return i


def _declare_params(tokens: list[Token], start: int, end: int, symtab: SymbolTable) -> None:
    """Parse a parameter list slice (exclusive of the parens) into the table."""
    depth = 0
    group: list[Token] = []
    groups: list[list[Token]] = []
    for t in tokens[start:end]:
        if t.text in "([":
            depth += 1
        elif t.text in ")]":
            depth -= 1
        if t.text == "," and depth == 0:
            groups.append(group)
            group = []
        else:
            group.append(t)
    if group:
        groups.append(group)

    for g in groups:
        specifiers = [t.text for t in g if t.text in BASE_TYPE_KEYWORDS]
        if not specifiers:
            continue
        name_idx = None
        for idx, t in enumerate(g):
            if t.kind == "identifier":
                name_idx = idx
        if name_idx is None:
            continue
        name = g[name_idx].text
        if name_idx + 1 < len(g) and g[name_idx + 1].text == "[":
            symtab.declare(name, "ARRAY")
        elif name_idx > 0 and g[name_idx - 1].text == "*":
            symtab.declare(name, "POINTER")
        else:
            symtab.declare(name, _base_tag(specifiers))


def build_symbol_table(source: str) -> SymbolTable:
    """Scan declaration statements of a whole program.

    Handles base-type declarator lists, arrays, pointers, function
    definitions/prototypes and their parameters. Anything fancier is left
    out of the table and later abstracts to INVALID.
    """
    tokens = tokenize(source)
    symtab = SymbolTable()
    i, n = 0, len(tokens)
    while i < n:
        if tokens[i].text not in BASE_TYPE_KEYWORDS:
            i += 1
            continue
        # A cast like (int) has '(' right before and ')' right after; skip it.
        if i > 0 and tokens[i - 1].text == "(":
            i += 1
            continue
        specifiers = []
        while i < n and tokens[i].text in BASE_TYPE_KEYWORDS:
            specifiers.append(tokens[i].text)
            i += 1
        tag = _base_tag(specifiers)
        # Declarator list until ';' or '{' (function body) or something odd.
        while i < n:
            pointer = False
            while i < n and tokens[i].text == "*":
                pointer = True
                i += 1
            if i >= n or tokens[i].kind != "identifier":
                break
            name = tokens[i].text
            i += 1
            if i < n and tokens[i].text == "[":
                symtab.declare(name, "ARRAY")
                i = _skip_balanced(tokens, i, "[", "]")
            elif i < n and tokens[i].text == "(":
                symtab.declare(name, "FUNC")
                close = _skip_balanced(tokens, i, "(", ")")
                _declare_params(tokens, i + 1, close - 1, symtab)
                i = close
            else:
                symtab.declare(name, "POINTER" if pointer else tag)
            # Skip an initializer up to the next top-level ',' or ';'.
            if i < n and tokens[i].text == "=":
                depth = 0
                i += 1
                while i < n:
                    t = tokens[i].text
                    if t in "([{":
                        depth += 1
                    elif t in ")]}":
                        depth -= 1
                    elif t in ",;" and depth == 0:
                        break
                    i += 1
            if i < n and tokens[i].text == ",":
                i += 1
                continue
            break
    return symtab


def abstract_token(tok: Token, symtab: SymbolTable) -> str:
    if tok.kind == "keyword":
        return tok.text
    if tok.kind == "identifier":
        # Tags are reserved (idempotence) and stdlib names stay concrete.
        if tok.text in ALL_TAGS or tok.text in STDLIB_NAMES:
            return tok.text
        return symtab.lookup(tok.text) or INVALID_TAG
    if tok.kind == "int_literal":
        return "LITERAL_INT"
    if tok.kind == "float_literal":
        return "LITERAL_FLOAT"
    if tok.kind == "char_literal":
        return "LITERAL_CHAR"
    if tok.kind == "string_literal":
        return "LITERAL_STR"
    return tok.text


def abstract_line(line: str, symtab: SymbolTable) -> AbstractLine:
    """Abstract one source line; 1:1 per token with the concrete lexing."""
    return AbstractLine(tuple(abstract_token(t, symtab) for t in tokenize(line)))
