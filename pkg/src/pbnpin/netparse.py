"""Reader and writer for the ``.pbn`` network description language.

Example::

    pbn toggle
    node A { 0.6: A & B  0.4: !B }
    node B { 1: A }
    target A=1 B=1

Operators bind ``!`` tighter than ``&``, ``&`` tighter than ``^``, and
``^`` tighter than ``|``.  ``#`` starts a comment.  Probabilities are
decimal literals (or ``p/q``) and are read exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .boolexpr import And, BoolExpr, Const, Not, Or, Var, Xor, render
from .errors import CapExceededError, ModelError
from .pbnmodel import DEFAULT_MAX_INDEGREE, CandidateFunction, PbnModel, PbnNode

__all__ = ["SourceSpan", "ParseError", "parse", "parse_file", "serialize", "format_probability"]

KEYWORDS = {"pbn", "node", "target"}


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    offset: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(ModelError):
    def __init__(self, message: str, span: SourceSpan, node: Optional[str] = None):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span
        self.node = node


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}:()!&|^=])
""", re.VERBOSE)


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        span = SourceSpan(line, pos - line_start + 1, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "number" or kind == "ident":
            tokens.append(_Token(kind, chunk, span))
        elif kind == "punct":
            tokens.append(_Token(chunk, chunk, span))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", SourceSpan(line, pos - line_start + 1, pos)))
    return tokens


@dataclass
class _RawCandidate:
    prob: Fraction
    prob_span: SourceSpan
    expr: object  # nested tuples with names, resolved after all nodes are known


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str) -> _Token:
        if self.tok.kind != kind:
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise ParseError(f"expected {what}, found {found}", self.tok.span)
        return self.advance()

    def parse_file(self):
        name = None
        nodes = []
        target = None
        if self.tok.kind == "ident" and self.tok.text == "pbn":
            self.advance()
            t = self.expect("ident", "network name")
            name = t.text
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "ident" and t.text == "node":
                nodes.append(self.parse_node())
            elif t.kind == "ident" and t.text == "target":
                if target is not None:
                    raise ParseError("duplicate target clause", t.span)
                target = self.parse_target()
            else:
                raise ParseError(f"expected 'node' or 'target', found {t.text!r}", t.span)
        if not nodes:
            raise ParseError("network has no nodes", self.tok.span)
        return name, nodes, target

    def parse_node(self):
        self.advance()
        ident = self.expect("ident", "node name")
        if ident.text in KEYWORDS:
            raise ParseError(f"{ident.text!r} is a reserved word", ident.span)
        self.expect("{", "'{'")
        cands = []
        while self.tok.kind != "}":
            num = self.expect("number", "probability")
            self.expect(":", "':'")
            expr = self.parse_or()
            cands.append(_RawCandidate(Fraction(num.text), num.span, expr))
        close = self.advance()
        if not cands:
            raise ParseError(f"node {ident.text} has no candidate functions", close.span, ident.text)
        return ident, cands

    def parse_target(self):
        start = self.advance()
        pairs = []
        while self.tok.kind == "ident" and self.tok.text not in KEYWORDS:
            name = self.advance()
            self.expect("=", "'='")
            val = self.expect("number", "0 or 1")
            if val.text not in ("0", "1"):
                raise ParseError(f"target value must be 0 or 1, got {val.text}", val.span)
            pairs.append((name, int(val.text)))
        if not pairs:
            raise ParseError("empty target clause", start.span)
        return start, pairs

    # expression grammar: or := xor ('|' xor)* ; xor := and ('^' and)* ; and := unary ('&' unary)*
    def parse_or(self):
        left = self.parse_xor()
        while self.tok.kind == "|":
            self.advance()
            left = ("or", left, self.parse_xor())
        return left

    def parse_xor(self):
        left = self.parse_and()
        while self.tok.kind == "^":
            self.advance()
            left = ("xor", left, self.parse_and())
        return left

    def parse_and(self):
        left = self.parse_unary()
        while self.tok.kind == "&":
            self.advance()
            left = ("and", left, self.parse_unary())
        return left

    def parse_unary(self):
        if self.tok.kind == "!":
            self.advance()
            return ("not", self.parse_unary())
        t = self.tok
        if t.kind == "(":
            self.advance()
            inner = self.parse_or()
            self.expect(")", "')'")
            return inner
        if t.kind == "number":
            if t.text not in ("0", "1"):
                raise ParseError(f"expected 0 or 1 in expression, found {t.text}", t.span)
            self.advance()
            return ("const", t.text == "1")
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.advance()
            return ("var", t)
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected an expression, found {found}", t.span)


def _resolve(raw, index_of: dict[str, int], owner: str) -> BoolExpr:
    tag = raw[0]
    if tag == "const":
        return Const(raw[1])
    if tag == "var":
        tok = raw[1]
        if tok.text not in index_of:
            raise ParseError(f"unknown node {tok.text!r}", tok.span, owner)
        return Var(index_of[tok.text])
    if tag == "not":
        return Not(_resolve(raw[1], index_of, owner))
    cls = {"and": And, "or": Or, "xor": Xor}[tag]
    return cls(_resolve(raw[1], index_of, owner), _resolve(raw[2], index_of, owner))


def parse(text: str, max_indegree: int = DEFAULT_MAX_INDEGREE) -> PbnModel:
    """Parse ``.pbn`` source into a validated :class:`PbnModel`."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    name, raw_nodes, raw_target = _Parser(text).parse_file()
    index_of: dict[str, int] = {}
    for ident, _ in raw_nodes:
        if ident.text in index_of:
            raise ParseError(f"duplicate node name {ident.text!r}", ident.span, ident.text)
        index_of[ident.text] = len(index_of) + 1

    nodes = []
    for ident, cands in raw_nodes:
        built = []
        for rc in cands:
            if not 0 <= rc.prob <= 1:
                raise ParseError(f"probability {rc.prob} outside [0, 1]", rc.prob_span, ident.text)
            expr = _resolve(rc.expr, index_of, ident.text)
            try:
                built.append(CandidateFunction.build(expr, rc.prob, sorted(expr.variables()), max_indegree))
            except CapExceededError as exc:
                raise CapExceededError(f"node {ident.text}: {exc}") from exc
        total = sum((c.probability for c in built), Fraction(0))
        if total != 1:
            raise ParseError(f"probabilities of node {ident.text} sum to {format_probability(total)}, not 1",
                             ident.span, ident.text)
        nodes.append(PbnNode(ident.text, index_of[ident.text], tuple(built)))

    target = None
    if raw_target is not None:
        start, pairs = raw_target
        values: dict[str, int] = {}
        for tok, val in pairs:
            if tok.text not in index_of:
                raise ParseError(f"unknown node {tok.text!r} in target", tok.span)
            if tok.text in values:
                raise ParseError(f"node {tok.text!r} assigned twice in target", tok.span)
            values[tok.text] = val
        missing = [nm for nm in index_of if nm not in values]
        if missing:
            raise ParseError(f"target does not assign {', '.join(missing)}", start.span)
        target = tuple(values[nm] for nm in index_of)
    return PbnModel(tuple(nodes), name or "pbn", target)


def parse_file(path, max_indegree: int = DEFAULT_MAX_INDEGREE) -> PbnModel:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read(), max_indegree)


def format_probability(p: Fraction) -> str:
    """Exact decimal when the denominator allows it, otherwise ``p/q``."""
    p = Fraction(p)
    d = p.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"{p.numerator}/{p.denominator}"
    digits = max(twos, fives)
    if digits == 0:
        return str(p.numerator)
    scaled = p * 10 ** digits
    whole, frac = divmod(int(scaled), 10 ** digits)
    return f"{whole}.{frac:0{digits}d}"


def serialize(model: PbnModel) -> str:
    names = model.names()

    def name(i: int) -> str:
        return names[i - 1]

    lines = [f"pbn {model.name}", ""]
    for node in model.nodes:
        if len(node.candidates) == 1:
            c = node.candidates[0]
            lines.append(f"node {node.name} {{ {format_probability(c.probability)}: {render(c.expr, name)} }}")
            continue
        lines.append(f"node {node.name} {{")
        for c in node.candidates:
            lines.append(f"  {format_probability(c.probability)}: {render(c.expr, name)}")
        lines.append("}")
    if model.target is not None:
        lines.append("")
        lines.append("target " + " ".join(f"{nm}={v}" for nm, v in zip(names, model.target)))
    return "\n".join(lines) + "\n"
