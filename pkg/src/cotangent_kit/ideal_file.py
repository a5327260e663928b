"""Reader for ``.ideal`` files.

    # comment
    ring x y z;
    weights 1 1 1;          (optional, default all 1)
    gens x^2, x*y - 3/2*z^2;
    flags generically_ci: true;

Statements end with ``;`` (optional after the last one).  Tokens are
identifiers, integers and the symbols ^ * + - , ; / :.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra_core import Poly, RingSpec
from .groebner import IdealPresentation

_SYMBOLS = set("^*+-,;/:")
_KEYWORDS = ("ring", "weights", "gens", "flags")


class IdealFileError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class Token:
    kind: str  # ident | int | sym | eof
    text: str
    line: int
    column: int


@dataclass
class IdealFile:
    ideal: IdealPresentation
    flags: Dict[str, object] = field(default_factory=dict)
    sha256: str = ""
    source_name: str = ""


def tokenize(text: str) -> List[Token]:
    out = []
    i, line, col, n = 0, 1, 1, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
        elif ch.isspace():
            i, col = i + 1, col + 1
        elif ch == "#":
            while i < n and text[i] != "\n":
                i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(Token("ident", text[i:j], line, col))
            i, col = j, col + j - i
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(Token("int", text[i:j], line, col))
            i, col = j, col + j - i
        elif ch in _SYMBOLS:
            out.append(Token("sym", ch, line, col))
            i, col = i + 1, col + 1
        else:
            raise IdealFileError(f"unexpected character {ch!r}", line, col)
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.k = 0
        self.ring: Optional[RingSpec] = None
        self.names: List[str] = []
        self.weights: Optional[Tuple[int, ...]] = None
        self.gens: List[Tuple[Poly, Token]] = []
        self.flags: Dict[str, object] = {}

    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def error(self, msg: str, tok: Optional[Token] = None):
        t = tok or self.tok
        raise IdealFileError(msg, t.line, t.column)

    def take(self) -> Token:
        t = self.tok
        self.k += 1
        return t

    def expect_sym(self, s: str) -> Token:
        if self.tok.kind != "sym" or self.tok.text != s:
            self.error(f"expected {s!r}, found {self.tok.text or 'end of file'!r}")
        return self.take()

    def at_sym(self, s: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == s

    def end_statement(self):
        if self.at_sym(";"):
            self.take()
        elif self.tok.kind != "eof":
            self.error(f"expected ';', found {self.tok.text!r}")

    def parse(self):
        while self.tok.kind != "eof":
            if self.at_sym(";"):
                self.take()
                continue
            t = self.tok
            if t.kind != "ident":
                self.error(f"expected a statement keyword, found {t.text!r}")
            kw = self.take().text
            if kw == "ring":
                self.parse_ring(t)
            elif kw == "weights":
                self.parse_weights(t)
            elif kw == "gens":
                self.parse_gens(t)
            elif kw == "flags":
                self.parse_flags()
            else:
                self.error(f"unknown statement {kw!r}", t)
            self.end_statement()

    def parse_ring(self, kw: Token):
        if self.names:
            self.error("ring declared twice", kw)
        while self.tok.kind == "ident":
            name = self.take()
            if name.text in _KEYWORDS:
                self.error(f"{name.text!r} is a keyword (missing ';' before it?)", name)
            if name.text in self.names:
                self.error(f"variable {name.text!r} declared twice", name)
            self.names.append(name.text)
            if self.at_sym(","):
                self.take()
        if not self.names:
            self.error("ring needs at least one variable")

    def parse_weights(self, kw: Token):
        if not self.names:
            self.error("weights before ring", kw)
        if self.ring is not None:
            self.error("weights after gens", kw)
        ws = []
        while self.tok.kind == "int":
            ws.append(int(self.take().text))
            if self.at_sym(","):
                self.take()
        if len(ws) != len(self.names):
            self.error(f"{len(self.names)} weights expected, got {len(ws)}", kw)
        if any(w <= 0 for w in ws):
            self.error("weights must be positive", kw)
        self.weights = tuple(ws)

    def ensure_ring(self, kw: Token) -> RingSpec:
        if self.ring is None:
            if not self.names:
                self.error("gens before ring", kw)
            self.ring = RingSpec(tuple(self.names), self.weights or ())
        return self.ring

    def parse_gens(self, kw: Token):
        ring = self.ensure_ring(kw)
        while True:
            start = self.tok
            p = self.parse_expr(ring)
            self.gens.append((p, start))
            if self.at_sym(","):
                self.take()
                continue
            break

    def parse_expr(self, ring: RingSpec) -> Poly:
        sign = 1
        if self.at_sym("-") or self.at_sym("+"):
            sign = -1 if self.take().text == "-" else 1
        total = self.parse_term(ring).scale(sign)
        while self.at_sym("+") or self.at_sym("-"):
            op = self.take().text
            t = self.parse_term(ring)
            total = total + t if op == "+" else total - t
        return total

    def parse_term(self, ring: RingSpec) -> Poly:
        p = self.parse_factor(ring)
        while self.at_sym("*"):
            self.take()
            p = p * self.parse_factor(ring)
        return p

    def parse_factor(self, ring: RingSpec) -> Poly:
        t = self.tok
        if t.kind == "int":
            self.take()
            c = Fraction(int(t.text))
            if self.at_sym("/"):
                self.take()
                if self.tok.kind != "int":
                    self.error("expected an integer denominator")
                den = int(self.take().text)
                if den == 0:
                    self.error("zero denominator", t)
                c /= den
            return ring.const(c)
        if t.kind == "ident":
            self.take()
            if t.text not in ring.variable_names:
                self.error(f"unknown variable {t.text!r}", t)
            p = ring.var(t.text)
            if self.at_sym("^"):
                self.take()
                if self.tok.kind != "int":
                    self.error("expected an integer exponent")
                p = p ** int(self.take().text)
            return p
        self.error(f"expected a number or variable, found {t.text or 'end of file'!r}")

    def parse_flags(self):
        while self.tok.kind == "ident":
            name = self.take()
            self.expect_sym(":")
            v = self.tok
            if v.kind == "ident" and v.text in ("true", "false"):
                self.flags[name.text] = v.text == "true"
            elif v.kind == "int":
                self.flags[name.text] = int(v.text)
            else:
                self.error(f"flag value must be true, false or an integer, found {v.text!r}")
            self.take()
            if self.at_sym(","):
                self.take()


def parse_ideal_text(text: str, source_name: str = "<string>") -> IdealFile:
    p = _Parser(text)
    p.parse()
    if not p.names:
        raise IdealFileError("no ring declaration", 1, 1)
    ring = p.ensure_ring(p.tok)
    if not p.gens:
        raise IdealFileError("no generators", p.tok.line, p.tok.column)
    gens = []
    for k, (g, tok) in enumerate(p.gens):
        if g.is_zero():
            raise IdealFileError(f"generator {k + 1} is zero", tok.line, tok.column)
        degs = sorted(set(g.degrees()))
        if len(degs) > 1:
            raise IdealFileError(f"generator {k + 1} is not homogeneous: term degrees {degs[0]} and {degs[1]}", tok.line, tok.column)
        if degs[0] == 0:
            raise IdealFileError(f"generator {k + 1} is a nonzero constant", tok.line, tok.column)
        gens.append(g)
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    return IdealFile(IdealPresentation(ring, tuple(gens)), p.flags, digest, source_name)


def parse_ideal_file(path) -> IdealFile:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_ideal_text(text, os.path.basename(str(path)))
