"""Length oracles, Lefschetz-fibration invariants and the low-genus length bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import intlinalg
from .freegroup import FreeWord
from .surface import cap_boundary, standard_registry
from .twist import PositiveFactorization, equal, homology_matrix
from .words import MappingClassWord, SurfaceSpec, TwistLetter


class OracleDomainError(ValueError):
    pass


class NotBoundaryMultitwistError(ValueError):
    pass


class BoundNotAvailableError(ValueError):
    pass


@dataclass(frozen=True)
class LengthValue:
    """An element of ``N u {+inf, -inf}``, or the marker for cases left open."""

    kind: str
    value: int | None = None

    def __post_init__(self):
        if self.kind not in ("finite", "+inf", "-inf", "unspecified"):
            raise ValueError(f"unknown length kind {self.kind!r}")
        if self.kind == "finite" and (self.value is None or self.value < 0):
            raise ValueError("finite lengths are natural numbers")

    @classmethod
    def finite(cls, v: int) -> "LengthValue":
        return cls("finite", int(v))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def as_number(self) -> float:
        """``inf``/``-inf``/the value; ``nan`` for unspecified cases."""
        return {"+inf": math.inf, "-inf": -math.inf, "unspecified": math.nan}.get(self.kind, self.value)

    def __str__(self) -> str:
        if self.kind == "finite":
            return str(self.value)
        return {"+inf": "+inf", "-inf": "-inf", "unspecified": "unspecified-by-paper"}[self.kind]

    def to_json(self):
        return self.value if self.kind == "finite" else str(self)


PLUS_INF = LengthValue("+inf")
MINUS_INF = LengthValue("-inf")
UNSPECIFIED = LengthValue("unspecified")


def _finite_length(g: int) -> int:
    if g == 1:
        return 12
    if g == 2:
        return 40
    if g <= 6:
        return 6 * g + 18
    return 8 * g + 4


def length_oracle(g: int, n: int) -> LengthValue:
    """Longest positive factorization of the boundary multitwist of ``Sigma_g^n``."""
    if n < 1:
        raise OracleDomainError(f"need at least one boundary component, got n={n}")
    if g < 0:
        raise OracleDomainError(f"genus must be nonnegative, got g={g}")
    if g == 0:
        # no nonseparating curves at all; a convention, see the module notes
        return MINUS_INF
    if (g == 1 and n > 9) or (g >= 2 and n > 4 * g + 4):
        return MINUS_INF
    if n <= 2 * g - 4:
        return PLUS_INF
    return LengthValue.finite(_finite_length(g))


def power_oracle(g: int, n: int, k: int) -> LengthValue:
    """Longest positive factorization of the ``k``-th power of the boundary multitwist."""
    if n < 1:
        raise OracleDomainError(f"need at least one boundary component, got n={n}")
    if k < 0:
        return MINUS_INF
    if k == 0:
        return LengthValue.finite(0)
    if k == 1:
        return length_oracle(g, n)
    if g == 1:
        return LengthValue.finite(12 * k) if n <= 9 else UNSPECIFIED
    if g >= 2:
        return PLUS_INF
    return UNSPECIFIED


@dataclass(frozen=True)
class ImageDescriptor:
    """Which values ``L`` takes on a mapping class group."""

    naturals: bool
    plus_inf: bool
    minus_inf: bool

    def contains(self, v: LengthValue) -> bool:
        if v.kind == "finite":
            return self.naturals or v.value == 0
        return {"+inf": self.plus_inf, "-inf": self.minus_inf}.get(v.kind, False)

    def __str__(self) -> str:
        if not self.naturals:
            return "{0}"
        extra = [s for s, on in (("-inf", self.minus_inf), ("+inf", self.plus_inf)) if on]
        return "N" + "".join(f" u {{{e}}}" for e in extra)


def image_descriptor(g: int, n: int) -> ImageDescriptor:
    if n < 1 or g < 0:
        raise OracleDomainError(f"no surface Sigma_{g}^{n} with boundary")
    if g == 0 and n == 1:
        # the disk: only the identity, with its empty factorization
        return ImageDescriptor(False, False, False)
    return ImageDescriptor(True, g >= 2, True)


def multitwist_witness(s: SurfaceSpec, k: int) -> PositiveFactorization:
    """``t_c1^k``: its only positive factorization has length ``k``."""
    if s.g < 1:
        raise OracleDomainError("witnesses use a nonseparating curve, which needs g >= 1")
    return PositiveFactorization(MappingClassWord(s, (TwistLetter("c1"),) * k))


# ------------------------------------------------------ fibration invariants

@dataclass(frozen=True)
class FibrationInvariants:
    euler: int
    h1_rank: int
    h1_torsion: tuple[int, ...]
    length: int

    def to_json(self) -> dict:
        return {"euler": self.euler, "h1_rank": self.h1_rank,
                "h1_torsion": list(self.h1_torsion), "length": self.length}


def _boundary_names(s: SurfaceSpec) -> set[str]:
    return {f"delta{i}" for i in range(1, s.n + 1)}


def check_boundary_multitwist(target: MappingClassWord) -> None:
    names = _boundary_names(target.surface)
    for x in target.letters:
        if x.sign < 0 or x.conj or x.curve not in names:
            raise NotBoundaryMultitwistError(
                f"target letter {x.curve!r} is not a positive boundary twist")


def capped_classes(w: MappingClassWord) -> np.ndarray:
    """The ``2g x l`` matrix of vanishing-cycle classes in the capped fiber."""
    s = w.surface
    reg = standard_registry(s)
    cap = np.eye(reg.model.rank, dtype=object) if s.n < 2 else cap_boundary(reg)
    cols = [cap.dot(np.asarray(reg.letter_homology(x), dtype=object)) for x in w.letters]
    if not cols:
        return np.zeros((2 * s.g, 0), dtype=object)
    return np.array(cols, dtype=object).T


def fibration_invariants(f, target: MappingClassWord | None = None) -> FibrationInvariants:
    """Euler characteristic and ``H_1`` of the fibration over the disk-capped fiber.

    ``f`` is a :class:`PositiveFactorization` or a generated factorization
    carrying its own target.  With an explicit target the equality is checked
    exactly; without one the product must at least act trivially on ``H_1``.
    """
    if target is None and hasattr(f, "target"):
        target = f.target
    word = f.word
    s = word.surface
    if target is not None:
        check_boundary_multitwist(target)
        if not equal(word, target):
            raise NotBoundaryMultitwistError("factorization does not realize its target")
    else:
        reg = standard_registry(s)
        if not np.array_equal(homology_matrix(reg, word.letters), np.eye(reg.model.rank, dtype=np.int64)):
            raise NotBoundaryMultitwistError("product acts nontrivially on homology")
    l = len(word)
    M = capped_classes(word)
    divisors = intlinalg.elementary_divisors(M) if l else []
    r = sum(1 for d in divisors if d != 0)
    torsion = tuple(int(d) for d in divisors if d not in (0, 1))
    return FibrationInvariants(4 - 4 * s.g + l, 2 * s.g - r, torsion, l)


# -------------------------------------------------------- low-genus bounds

def _capped_torus_word(s: SurfaceSpec, letters: tuple[int, ...]) -> FreeWord:
    """Image of a ``pi_1`` word after capping every boundary except the last."""
    reg = standard_registry(s)
    names = reg.model.gen_names
    killed = {i + 1 for i, nm in enumerate(names) if nm.startswith("eps")}
    subst: dict[int, tuple[int, ...]] = {}
    if s.n >= 2:
        rel = FreeWord(reg.model.rank, [x for x in reg.model.boundary_words[s.n - 2] if abs(x) not in killed])
        if tuple(rel) != (1, 3):
            raise AssertionError(f"unexpected capped boundary relator {tuple(rel)}")
        subst = {3: (-1,), -3: (1,)}
    out: list[int] = []
    for x in letters:
        if abs(x) in killed:
            continue
        out.extend(subst.get(x, (x,)))
    return FreeWord(2, out)


def _torus_weight(s: SurfaceSpec, curve: str) -> int:
    reg = standard_registry(s)
    base, _ = reg.resolve(curve)
    c = reg[base]
    if reg.capped_nonzero(c.homology):
        return 1
    return 0 if _capped_torus_word(s, c.word).is_identity() else 12


def _planar_weight(s: SurfaceSpec, x: TwistLetter) -> int:
    """Number of boundaries ``i < n`` that the curve separates from boundary ``n``."""
    reg = standard_registry(s)
    B = np.array([reg[f"delta{i}"].homology for i in range(1, s.n)], dtype=float).T
    h = np.asarray(reg.letter_homology(x), dtype=float)
    k, *_ = np.linalg.lstsq(B, h, rcond=None)
    k = np.rint(k).astype(int)
    if not np.array_equal(B.dot(k), h):
        raise AssertionError(f"class of {x.curve!r} is not a sum of boundary classes")
    return int(np.count_nonzero(k))


def abelianized_bound(w: MappingClassWord) -> int:
    """Length bound read off the abelianization after capping boundaries.

    On a torus with boundary this is the common length of every nonseparating
    positive factorization of ``w`` (negative: there is none).  On a planar
    surface each boundary ``i`` is paired with the last one and the capped
    annulus twist counts are summed, which bounds the length of any positive
    factorization into essential curves.
    """
    s = w.surface
    if s.g >= 2:
        raise BoundNotAvailableError("no abelianization bound exists for g >= 2")
    if s.g == 1:
        return sum(x.sign * _torus_weight(s, x.curve) for x in w.letters)
    if s.n < 2:
        return 0
    return sum(x.sign * _planar_weight(s, x) for x in w.letters)


LengthLike = Union[LengthValue, int]
