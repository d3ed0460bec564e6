"""Mapping-class words: products of Dehn twist letters.

Words are written the way products of mapping classes are written: in
``t_{c_l} ... t_{c_1}`` the rightmost letter acts first.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass(frozen=True)
class SurfaceSpec:
    """The surface of genus ``g`` with ``n`` boundary components.

    ``split`` boundary components are attached beyond the second chain
    boundary instead of the first one; it only changes where the extra
    boundaries sit, not the topological type.
    """

    g: int
    n: int
    split: int = 0

    def __post_init__(self):
        if self.g < 0 or self.n < 1:
            raise ValueError(f"need g >= 0 and n >= 1, got g={self.g}, n={self.n}")
        if self.split < 0 or (self.split and (self.g < 1 or self.n - 2 - self.split < 0)):
            raise ValueError(f"invalid split {self.split} for g={self.g}, n={self.n}")

    @property
    def rank(self) -> int:
        return 2 * self.g + self.n - 1

    def to_json(self) -> dict:
        d = {"g": self.g, "n": self.n}
        if self.split:
            d["split"] = self.split
        return d

    @classmethod
    def from_json(cls, d: dict) -> "SurfaceSpec":
        return cls(int(d["g"]), int(d["n"]), int(d.get("split", 0)))

    def __str__(self) -> str:
        s = f"Sigma_{self.g}^{self.n}"
        return s + (f"[split={self.split}]" if self.split else "")


@dataclass(frozen=True)
class TwistLetter:
    """``t_{phi(c)}^sign`` where ``phi`` is the (possibly empty) conjugator."""

    curve: str
    sign: int = 1
    conj: tuple["TwistLetter", ...] = field(default=())

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    def inverse(self) -> "TwistLetter":
        return TwistLetter(self.curve, -self.sign, self.conj)

    def conjugated(self, by: Sequence["TwistLetter"]) -> "TwistLetter":
        """The letter ``by * self * by^-1``, i.e. the twist along ``by(curve)``."""
        by = tuple(by)
        if not by:
            return self
        return TwistLetter(self.curve, self.sign, _free_reduce(by + self.conj))

    @property
    def is_derived(self) -> bool:
        return bool(self.conj)

    def expand(self) -> tuple["TwistLetter", ...]:
        """The same mapping class as a freely reduced word of unconjugated letters."""
        phi: list[TwistLetter] = []
        for y in self.conj:
            phi.extend(y.expand())
        phi_t = _free_reduce(phi)
        core = TwistLetter(self.curve, self.sign)
        return _free_reduce(phi_t + (core,) + tuple(y.inverse() for y in reversed(phi_t)))


def _free_reduce(letters: Iterable[TwistLetter]) -> tuple[TwistLetter, ...]:
    out: list[TwistLetter] = []
    for x in letters:
        if out and out[-1] == x.inverse():
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def t(curve: str, sign: int = 1) -> TwistLetter:
    return TwistLetter(curve, sign)


@dataclass(frozen=True)
class MappingClassWord:
    surface: SurfaceSpec
    letters: tuple[TwistLetter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return MappingClassWord(self.surface, self.letters[k])
        return self.letters[k]

    def _check(self, other: "MappingClassWord") -> None:
        if self.surface != other.surface:
            raise ValueError(f"surface mismatch: {self.surface} vs {other.surface}")

    def __mul__(self, other: "MappingClassWord") -> "MappingClassWord":
        self._check(other)
        return MappingClassWord(self.surface, self.letters + other.letters)

    def __pow__(self, k: int) -> "MappingClassWord":
        if k < 0:
            return self.inverse() ** (-k)
        return MappingClassWord(self.surface, self.letters * k)

    def inverse(self) -> "MappingClassWord":
        return MappingClassWord(self.surface, tuple(x.inverse() for x in reversed(self.letters)))

    def conjugated(self, by: "MappingClassWord") -> "MappingClassWord":
        """Letterwise conjugation: ``by * self * by^-1`` as a word of the same length."""
        self._check(by)
        return MappingClassWord(self.surface, tuple(x.conjugated(by.letters) for x in self.letters))

    def is_positive(self) -> bool:
        return all(x.sign == 1 for x in self.letters)

    def free_reduced(self) -> "MappingClassWord":
        return MappingClassWord(self.surface, _free_reduce(self.letters))


def word(surface: SurfaceSpec, *parts) -> MappingClassWord:
    """Build a word from curve names, letters and words, left to right."""
    out: list[TwistLetter] = []
    for p in parts:
        if isinstance(p, str):
            out.append(TwistLetter(p))
        elif isinstance(p, TwistLetter):
            out.append(p)
        elif isinstance(p, MappingClassWord):
            out.extend(p.letters)
        else:
            for q in p:
                out.extend(word(surface, q).letters)
    return MappingClassWord(surface, tuple(out))
