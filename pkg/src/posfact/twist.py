"""Dehn-twist words realized exactly on pi_1 and on homology."""
from __future__ import annotations

import os
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .freegroup import Automorphism, FreeWord, abelianization_matrix, compose, product
from .surface import Curve, CurveRegistry, homology_matrix, standard_registry
from .words import MappingClassWord, TwistLetter

DEFAULT_LETTER_BUDGET = 10**7
BUDGET_ENV = "POSFACT_LETTER_BUDGET"


class ResourceBudgetError(RuntimeError):
    """A generator image outgrew the letter budget during exact realization."""


class SurfaceMismatchError(ValueError):
    pass


def letter_budget() -> int:
    v = os.environ.get(BUDGET_ENV)
    return int(v) if v else DEFAULT_LETTER_BUDGET


def basic_twist_automorphism(curve: Curve, rank: int, sign: int = 1) -> Automorphism:
    if not curve.is_basic or curve.crossings is None:
        raise ValueError(f"{curve.name!r} is not a basic curve with crossing data")
    cd = curve.crossings
    return Automorphism([
        product(rank, [FreeWord(rank, p, reduced=True) for p in cd.image_letters(i, sign)])
        for i in range(rank)
    ])


class Engine:
    """Exact realization with memo tables for one registry."""

    def __init__(self, registry: CurveRegistry, budget: int | None = None):
        self.registry = registry
        self.rank = registry.model.rank
        self.budget = letter_budget() if budget is None else budget
        self._basic: dict[tuple[str, int], Automorphism] = {}
        self._conj: dict[tuple[TwistLetter, ...], Automorphism] = {}
        self._letter: dict[TwistLetter, Automorphism] = {}
        self.peak = 0

    def basic(self, name: str, sign: int) -> Automorphism:
        key = (name, sign)
        f = self._basic.get(key)
        if f is None:
            f = basic_twist_automorphism(self.registry[name], self.rank, sign)
            self._basic[key] = f
        return f

    def letter(self, x: TwistLetter) -> Automorphism:
        f = self._letter.get(x)
        if f is not None:
            return self._checked(f)
        base, conj = self.registry.resolve(x.curve)
        conj = x.conj + conj
        f = self.basic(base, x.sign)
        if conj:
            phi = self.product(conj)
            phi_inv = self.product(tuple(y.inverse() for y in reversed(conj)))
            f = self._checked(compose(phi, compose(f, phi_inv)))
        self._letter[x] = f
        return f

    def product(self, letters: Sequence[TwistLetter]) -> Automorphism:
        letters = tuple(letters)
        if len(letters) == 1:
            return self.letter(letters[0])
        if letters in self._conj:
            return self._checked(self._conj[letters])
        acc = Automorphism.identity(self.rank)
        # rightmost letter acts first
        for x in reversed(letters):
            acc = self._checked(compose(self.letter(x), acc))
        if len(letters) <= 64:
            self._conj[letters] = acc
        return acc

    def _checked(self, f: Automorphism) -> Automorphism:
        m = f.max_image_length()
        if m > self.peak:
            self.peak = m
        if m > self.budget:
            raise ResourceBudgetError(f"generator image of length {m} exceeds the budget of {self.budget} letters")
        return f

    def realize(self, w: MappingClassWord) -> Automorphism:
        if w.surface != self.registry.surface:
            raise SurfaceMismatchError(f"word on {w.surface}, registry on {self.registry.surface}")
        for x in w.letters:
            self.registry.resolve(x.curve)
        return self.product(w.letters)


_ENGINES: dict[int, Engine] = {}


def engine_for(w_or_registry) -> Engine:
    reg = w_or_registry if isinstance(w_or_registry, CurveRegistry) else standard_registry(w_or_registry.surface)
    e = _ENGINES.get(id(reg))
    if e is None or e.registry is not reg or e.budget != letter_budget():
        e = Engine(reg)
        _ENGINES[id(reg)] = e
    return e


def clear_caches() -> None:
    """Drop memoized twist automorphisms, e.g. before timing a verification."""
    _ENGINES.clear()


def realize(w: MappingClassWord, registry: CurveRegistry | None = None) -> Automorphism:
    return engine_for(registry or w).realize(w)


def _same_surface(u: MappingClassWord, v: MappingClassWord) -> None:
    if u.surface != v.surface:
        raise SurfaceMismatchError(f"surface mismatch: {u.surface} vs {v.surface}")


def equal(u: MappingClassWord, v: MappingClassWord, registry: CurveRegistry | None = None) -> bool:
    _same_surface(u, v)
    if u.letters == v.letters:
        return True
    e = engine_for(registry or u)
    return e.realize(u) == e.realize(v)


def word_homology(w: MappingClassWord, registry: CurveRegistry | None = None) -> np.ndarray:
    reg = registry or standard_registry(w.surface)
    for x in w.letters:
        reg.resolve(x.curve)
    return homology_matrix(reg, w.letters)


def equal_homology(u: MappingClassWord, v: MappingClassWord, registry: CurveRegistry | None = None) -> bool:
    _same_surface(u, v)
    return bool(np.array_equal(word_homology(u, registry), word_homology(v, registry)))


def abelianized(f: Automorphism) -> np.ndarray:
    return abelianization_matrix(f)


@dataclass
class VerificationReport:
    homology: bool
    exact: bool | None
    lhs_length: int
    rhs_length: int
    seconds: float
    peak_image_length: int = 0

    @property
    def ok(self) -> bool:
        return self.homology and self.exact is not False

    @property
    def status(self) -> str:
        if not self.homology or self.exact is False:
            return "not equal"
        return "exactly equal" if self.exact else "homology-equal only"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "homology": self.homology,
            "exact": self.exact,
            "lhs_length": self.lhs_length,
            "rhs_length": self.rhs_length,
            "seconds": round(self.seconds, 6),
            "peak_image_length": self.peak_image_length,
        }


def verify_equal(u: MappingClassWord, v: MappingClassWord, level: str = "exact",
                 registry: CurveRegistry | None = None) -> VerificationReport:
    """Homology tier first; the exact tier only runs when requested and homology agrees."""
    if level not in ("exact", "homology"):
        raise ValueError(f"unknown level {level!r}")
    _same_surface(u, v)
    t0 = time.perf_counter()
    hom = equal_homology(u, v, registry)
    exact = None
    peak = 0
    if level == "exact":
        if not hom:
            exact = False
        else:
            e = engine_for(registry or u)
            e.peak = 0
            exact = u.letters == v.letters or e.realize(u) == e.realize(v)
            peak = e.peak
    return VerificationReport(hom, exact, len(u), len(v), time.perf_counter() - t0, peak)


class PositivityError(ValueError):
    pass


@dataclass(frozen=True)
class PositiveFactorization:
    word: MappingClassWord
    nonseparating_only: bool = True

    def __post_init__(self):
        if not self.word.is_positive():
            raise PositivityError("factorization contains a negative twist")
        if self.nonseparating_only:
            reg = standard_registry(self.word.surface)
            for x in self.word.letters:
                if not reg.is_nonseparating(x):
                    raise PositivityError(f"twist along {x.curve!r} is not certified nonseparating")

    @property
    def surface(self):
        return self.word.surface

    def __len__(self) -> int:
        return len(self.word)
