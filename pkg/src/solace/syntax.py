"""Text syntax for pi-terms and solos terms.

pi:     0 | u!x.P | u?x.P | (P | Q) | new x y. P
solos:  0 | u!<x y z> | u?<x y z>@label | (P | Q) | new x:W y. P | Cat v

``|`` binds loosest; prefixes and ``new`` extend over a single unary term.
A bare prefix ``u!x`` abbreviates ``u!x.0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import pi, solos
from .solos import Polarity, SoloType


class ParseError(ValueError):
    pass


_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*(?:#[0-9]+)?)|(?P<zero>0)|(?P<punct>[!?.()|<>:@]))"
)
KEYWORDS = {"new", "Cat"}


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    i = 0
    text = text.rstrip()
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ParseError(f"unexpected character {text[i:].strip()[:1]!r} at offset {i}")
        kind = m.lastgroup
        assert kind is not None
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        i = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = _lex(text)
        self.i = 0

    def peek(self, k: int = 0) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def eat(self, text: str | None = None, kind: str | None = None) -> _Tok:
        t = self.peek()
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = text or kind
            raise ParseError(f"expected {want!r} at offset {t.pos}, found {t.text or 'end of input'!r}")
        self.i += 1
        return t

    def name(self) -> str:
        t = self.eat(kind="name")
        if t.text in KEYWORDS:
            raise ParseError(f"keyword {t.text!r} used as a name at offset {t.pos}")
        return t.text

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def done(self) -> None:
        if self.peek().kind != "eof":
            t = self.peek()
            raise ParseError(f"trailing input at offset {t.pos}: {t.text!r}")


# --- pi ---------------------------------------------------------------------


class _PiParser(_Parser):
    def par(self) -> pi.PiTerm:
        parts = [self.unary()]
        while self.at("|"):
            self.eat("|")
            parts.append(self.unary())
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = pi.Par(p, out)
        return out

    def unary(self) -> pi.PiTerm:
        t = self.peek()
        if t.kind == "zero":
            self.eat()
            return pi.Nil()
        if t.text == "(":
            self.eat("(")
            body = self.par()
            self.eat(")")
            return body
        if t.text == "new":
            self.eat()
            binders = [self.name()]
            while self.peek().kind == "name":
                binders.append(self.name())
            self.eat(".")
            return pi.nu_all(binders, self.unary())
        u = self.name()
        op = self.peek().text
        if op not in ("!", "?"):
            raise ParseError(f"expected '!' or '?' after {u!r} at offset {self.peek().pos}")
        self.eat()
        x = self.name()
        body: pi.PiTerm = pi.Nil()
        if self.at("."):
            self.eat(".")
            body = self.unary()
        return pi.Output(u, x, body) if op == "!" else pi.Input(u, x, body)


def parse_pi(text: str) -> pi.PiTerm:
    p = _PiParser(text)
    t = p.par()
    p.done()
    return t


def _pi_parts(t: pi.PiTerm) -> list[pi.PiTerm]:
    if isinstance(t, pi.Par):
        return _pi_parts(t.left) + _pi_parts(t.right)
    return [t]


def format_pi(t: pi.PiTerm) -> str:
    parts = _pi_parts(t)
    if len(parts) > 1:
        return " | ".join(_pi_unary(p) for p in parts)
    return _pi_unary(t)


def _pi_unary(t: pi.PiTerm) -> str:
    match t:
        case pi.Nil():
            return "0"
        case pi.Par():
            return f"({format_pi(t)})"
        case pi.Nu():
            binders = []
            while isinstance(t, pi.Nu):
                binders.append(t.binder)
                t = t.body
            return f"new {' '.join(binders)}. {_pi_unary(t)}"
        case pi.Input(u, x, p):
            return f"{u}?{x}.{_pi_unary(p)}"
        case pi.Output(u, x, p):
            return f"{u}!{x}.{_pi_unary(p)}"
    raise TypeError(t)


# --- solos --------------------------------------------------------------------


class _SolosParser(_Parser):
    def par(self) -> solos.SoloTerm:
        parts = [self.unary()]
        while self.at("|"):
            self.eat("|")
            parts.append(self.unary())
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = solos.Par(p, out)
        return out

    def unary(self) -> solos.SoloTerm:
        t = self.peek()
        if t.kind == "zero":
            self.eat()
            return solos.Nil()
        if t.text == "(":
            self.eat("(")
            body = self.par()
            self.eat(")")
            return body
        if t.text == "new":
            self.eat()
            binders = [self.binder()]
            while self.peek().kind == "name":
                binders.append(self.binder())
            self.eat(".")
            return solos.nu_all(binders, self.unary())
        if t.text == "Cat":
            self.eat()
            from .translate import cat

            return cat(self.name())
        u = self.name()
        op = self.peek().text
        if op not in ("!", "?"):
            raise ParseError(f"expected '!' or '?' after {u!r} at offset {self.peek().pos}")
        self.eat()
        self.eat("<")
        objs = (self.name(), self.name(), self.name())
        self.eat(">")
        label = None
        if self.at("@"):
            self.eat("@")
            tok = self.peek()
            if tok.kind not in ("name", "zero"):
                raise ParseError(f"expected a label at offset {tok.pos}")
            self.eat()
            label = tok.text
        pol = Polarity.OUT if op == "!" else Polarity.IN
        return solos.Atom(solos.Solo(pol, u, objs, label))

    def binder(self) -> tuple[str, SoloType | None]:
        x = self.name()
        if self.at(":"):
            self.eat(":")
            ty = self.eat(kind="name").text
            if ty not in ("V", "W"):
                raise ParseError(f"unknown type {ty!r}")
            return x, SoloType(ty)
        return x, None


def parse_solos(text: str) -> solos.SoloTerm:
    p = _SolosParser(text)
    t = p.par()
    p.done()
    return t


def format_solo(s: solos.Solo) -> str:
    label = f"@{s.label}" if s.label is not None else ""
    return f"{s.subject}{s.polarity.value}<{' '.join(s.objects)}>{label}"


def _solos_parts(t: solos.SoloTerm) -> list[solos.SoloTerm]:
    if isinstance(t, solos.Par):
        return _solos_parts(t.left) + _solos_parts(t.right)
    return [t]


def format_solos(t: solos.SoloTerm) -> str:
    parts = _solos_parts(t)
    if len(parts) > 1:
        return " | ".join(_solos_unary(p) for p in parts)
    return _solos_unary(t)


def _solos_unary(t: solos.SoloTerm) -> str:
    match t:
        case solos.Nil():
            return "0"
        case solos.Atom(s):
            return format_solo(s)
        case solos.Par():
            return f"({format_solos(t)})"
        case solos.Nu():
            binders = []
            while isinstance(t, solos.Nu):
                ann = f":{t.annotation.value}" if t.annotation is not None else ""
                binders.append(t.binder + ann)
                t = t.body
            return f"new {' '.join(binders)}. {_solos_unary(t)}"
    raise TypeError(t)
