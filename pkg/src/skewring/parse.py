"""Tokenizer and recursive-descent parser for ring and endomorphism specs.

Grammar (whitespace-insensitive)::

    ring := "Z(" INT ")" | "prod(" ring "," ring ")" | "mat(" INT "," ring ")"
          | "truncpoly(" ring "," INT ")" | "sub(" ring ";" elem ("," elem)* ")"
          | "ut2(" ring ")" | "ut2c(" ring ")" | "skewtrunc(" ring ";" endo ";" INT ")"
          | NAME
    endo := "id" | "table(" INT ":" INT ("," INT ":" INT)* ")" | NAME

Element literals inside ``sub`` are kept as source text and parsed later
against the parent ring, since their syntax depends on the ring.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN_RE = re.compile(r"\s*(?:(?P<INT>\d+)|(?P<NAME>[A-Za-z_][A-Za-z0-9_]*)|(?P<PUNCT>[()\[\],;:*^+-]))")

RING_CONSTRUCTORS = ("Z", "prod", "mat", "truncpoly", "sub", "ut2", "ut2c", "skewtrunc")


class SpecSyntaxError(ValueError):
    def __init__(self, offset: int, expected, text: str = ""):
        self.offset = offset
        self.expected = frozenset(expected)
        self.text = text
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"syntax error at offset {offset}: expected {exp}")


@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, PUNCT, END
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise SpecSyntaxError(pos, {"token"}, text)
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(Token("END", "", len(text)))
    return out


class TokenStream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "END":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("PUNCT", "NAME") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, what: str) -> Token:
        tok = self.peek()
        if what in ("INT", "NAME"):
            if tok.kind != what:
                self.fail(tok.offset, {what})
        elif tok.text != what or tok.kind == "END":
            self.fail(tok.offset, {repr(what)})
        self.pos += 1
        return tok

    def expect_end(self):
        tok = self.peek()
        if tok.kind != "END":
            self.fail(tok.offset, {"end of input"})

    def fail(self, offset: int, expected):
        raise SpecSyntaxError(offset, expected, self.text)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class ZSpec:
    n: int


@dataclass(frozen=True)
class ProdSpec:
    left: object
    right: object


@dataclass(frozen=True)
class MatSpec:
    k: int
    base: object


@dataclass(frozen=True)
class TruncPolySpec:
    base: object
    m: int


@dataclass(frozen=True)
class SubSpec:
    base: object
    elems: tuple  # raw element literal texts


@dataclass(frozen=True)
class Ut2Spec:
    base: object
    constant_diagonal: bool = False


@dataclass(frozen=True)
class SkewTruncSpec:
    base: object
    endo: object
    m: int


@dataclass(frozen=True)
class NameSpec:
    name: str


@dataclass(frozen=True)
class IdEndo:
    pass


@dataclass(frozen=True)
class TableEndo:
    pairs: tuple  # ((src, dst), ...)


@dataclass(frozen=True)
class NamedEndo:
    name: str


# ---------------------------------------------------------------------------
# parser


def _int(ts: TokenStream) -> int:
    return int(ts.expect("INT").text)


def _elem_text(ts: TokenStream) -> str:
    """Raw text of one element literal: up to a top-level ',' or ')'."""
    depth = 0
    start = ts.peek().offset
    end = start
    while True:
        tok = ts.peek()
        if tok.kind == "END":
            if depth:
                ts.fail(tok.offset, {"')'", "']'"})
            break
        if depth == 0 and tok.text in (",", ")") and tok.kind == "PUNCT":
            break
        if tok.text in ("(", "["):
            depth += 1
        elif tok.text in (")", "]"):
            depth -= 1
        end = tok.offset + len(tok.text)
        ts.next()
    if end == start:
        ts.fail(start, {"element literal"})
    return ts.text[start:end].strip()


def _ring(ts: TokenStream):
    tok = ts.peek()
    if tok.kind != "NAME":
        ts.fail(tok.offset, {"ring"})
    name = tok.text
    if name not in RING_CONSTRUCTORS or ts.peek(1).text != "(":
        ts.next()
        return NameSpec(name)
    ts.next()
    ts.expect("(")
    if name == "Z":
        node = ZSpec(_int(ts))
    elif name == "prod":
        left = _ring(ts)
        ts.expect(",")
        node = ProdSpec(left, _ring(ts))
    elif name == "mat":
        k = _int(ts)
        ts.expect(",")
        node = MatSpec(k, _ring(ts))
    elif name == "truncpoly":
        base = _ring(ts)
        ts.expect(",")
        node = TruncPolySpec(base, _int(ts))
    elif name == "sub":
        base = _ring(ts)
        ts.expect(";")
        elems = [_elem_text(ts)]
        while ts.accept(","):
            elems.append(_elem_text(ts))
        node = SubSpec(base, tuple(elems))
    elif name in ("ut2", "ut2c"):
        node = Ut2Spec(_ring(ts), constant_diagonal=name == "ut2c")
    else:  # skewtrunc
        base = _ring(ts)
        ts.expect(";")
        endo = _endo(ts)
        ts.expect(";")
        node = SkewTruncSpec(base, endo, _int(ts))
    ts.expect(")")
    return node


def _endo(ts: TokenStream):
    tok = ts.peek()
    if tok.kind != "NAME":
        ts.fail(tok.offset, {"endomorphism"})
    ts.next()
    if tok.text == "id":
        return IdEndo()
    if tok.text == "table" and ts.at("("):
        ts.expect("(")
        pairs = []
        while True:
            src = _int(ts)
            ts.expect(":")
            pairs.append((src, _int(ts)))
            if not ts.accept(","):
                break
        ts.expect(")")
        return TableEndo(tuple(pairs))
    return NamedEndo(tok.text)


def parse_ring_spec(text: str):
    ts = TokenStream(text)
    node = _ring(ts)
    ts.expect_end()
    return node


def parse_endo_spec(text: str):
    ts = TokenStream(text)
    node = _endo(ts)
    ts.expect_end()
    return node


def render_ring_spec(node) -> str:
    if isinstance(node, ZSpec):
        return f"Z({node.n})"
    if isinstance(node, ProdSpec):
        return f"prod({render_ring_spec(node.left)},{render_ring_spec(node.right)})"
    if isinstance(node, MatSpec):
        return f"mat({node.k},{render_ring_spec(node.base)})"
    if isinstance(node, TruncPolySpec):
        return f"truncpoly({render_ring_spec(node.base)},{node.m})"
    if isinstance(node, SubSpec):
        return f"sub({render_ring_spec(node.base)};{','.join(node.elems)})"
    if isinstance(node, Ut2Spec):
        return f"{'ut2c' if node.constant_diagonal else 'ut2'}({render_ring_spec(node.base)})"
    if isinstance(node, SkewTruncSpec):
        return f"skewtrunc({render_ring_spec(node.base)};{render_endo_spec(node.endo)};{node.m})"
    if isinstance(node, NameSpec):
        return node.name
    raise TypeError(f"not a ring spec: {node!r}")


def render_endo_spec(node) -> str:
    if isinstance(node, IdEndo):
        return "id"
    if isinstance(node, TableEndo):
        return "table(" + ",".join(f"{a}:{b}" for a, b in node.pairs) + ")"
    if isinstance(node, NamedEndo):
        return node.name
    raise TypeError(f"not an endomorphism spec: {node!r}")


# ---------------------------------------------------------------------------
# polynomial literals  c0 + c1*x + c2*x^2


def parse_poly_terms(ts: TokenStream, var: str, parse_coeff) -> dict[int, list[int]]:
    """Parse ``term (+ term)*`` and return degree -> coefficient list.

    ``parse_coeff`` parses one coefficient atom from the stream.
    """
    terms: dict[int, list[int]] = {}
    while True:
        coeff = None
        if not ts.at(var):
            coeff = parse_coeff(ts)
            if ts.accept("*"):
                ts.expect(var)
                deg = _power(ts)
            else:
                deg = 0
        else:
            ts.expect(var)
            deg = _power(ts)
        terms.setdefault(deg, []).append(coeff)
        if not ts.accept("+"):
            break
    return terms


def _power(ts: TokenStream) -> int:
    if ts.accept("^"):
        return _int(ts)
    return 1
