"""Text syntax for twist words.

    word   := factor { "*" factor }
    factor := atom [ "^" int ]
    atom   := "t[" name "]" | "(" word ")" | "conj(" word "," word ")" | "1"

``conj(u, w)`` is ``w u w^-1``, kept letterwise so lengths are preserved.
The bare ``1`` is the empty word.  Whitespace is ignored.
"""
from __future__ import annotations

from .words import MappingClassWord, SurfaceSpec, TwistLetter


class DslSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line, self.column = line, col


class UnknownCurveError(KeyError):
    pass


class _Parser:
    def __init__(self, text: str, surface: SurfaceSpec):
        self.text = text
        self.pos = 0
        self.surface = surface

    def error(self, msg: str):
        raise DslSyntaxError(msg, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s: str) -> None:
        if not self.peek(s):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def word(self) -> tuple[TwistLetter, ...]:
        out = list(self.factor())
        while self.peek("*"):
            self.pos += 1
            out += self.factor()
        return tuple(out)

    def factor(self) -> tuple[TwistLetter, ...]:
        a = self.atom()
        if self.peek("^"):
            self.pos += 1
            k = self.integer()
            if k < 0:
                a = tuple(x.inverse() for x in reversed(a))
                k = -k
            a = a * k
        return a

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        s = self.text[start:self.pos]
        if s in ("", "+", "-"):
            self.pos = start
            self.error("expected an integer")
        return int(s)

    def atom(self) -> tuple[TwistLetter, ...]:
        if self.peek("t["):
            self.pos += 2
            end = self.text.find("]", self.pos)
            if end < 0:
                self.error("unterminated curve name")
            name = self.text[self.pos:end].strip()
            if not name:
                self.error("empty curve name")
            self.pos = end + 1
            return (TwistLetter(name),)
        if self.peek("conj("):
            self.pos += 5
            u = self.word()
            self.expect(",")
            w = self.word()
            self.expect(")")
            return tuple(x.conjugated(w) for x in u)
        if self.peek("("):
            self.pos += 1
            u = self.word()
            self.expect(")")
            return u
        if self.peek("1"):
            self.pos += 1
            return ()
        self.error("expected 't[', '(', 'conj(' or '1'")
        raise AssertionError


def parse_word(text: str, surface: SurfaceSpec, registry=None, check: bool = True) -> MappingClassWord:
    """Parse ``text`` into a word on ``surface``; curve names are checked against the registry."""
    p = _Parser(text, surface)
    letters = p.word()
    p.skip()
    if p.pos != len(text):
        p.error("unexpected trailing input")
    w = MappingClassWord(surface, letters)
    if check:
        if registry is None:
            from .surface import standard_registry
            registry = standard_registry(surface)
        for x in letters:
            _check_names(x, registry)
    return w


def _check_names(x: TwistLetter, registry) -> None:
    if x.curve not in registry:
        raise UnknownCurveError(f"unknown curve {x.curve!r} on {registry.surface}")
    for y in x.conj:
        _check_names(y, registry)


def format_letter(x: TwistLetter) -> str:
    s = f"t[{x.curve}]" + ("^-1" if x.sign < 0 else "")
    if x.conj:
        s = f"conj({s},{_join(x.conj)})"
    return s


def _join(letters) -> str:
    return "*".join(format_letter(x) for x in letters) if letters else "1"


def format_word(w: MappingClassWord) -> str:
    return _join(w.letters)
