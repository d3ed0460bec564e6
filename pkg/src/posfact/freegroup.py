"""Free groups of finite rank and their automorphisms.

Letters are packed into signed integers: generator ``i`` is ``i + 1`` and its
inverse is ``-(i + 1)``.  Words are immutable and always freely reduced.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class RankMismatchError(ValueError):
    """Operands live in free groups of different rank."""


class InversionError(ArithmeticError):
    """An automorphism could not be inverted within the search budget."""


def letter(gen: int, sign: int = 1) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign * (gen + 1)


def _append_reduced(stack: list[int], word: Sequence[int]) -> None:
    # both operands are reduced, so cancellation only happens at the seam
    k = 0
    top = len(stack)
    n = len(word)
    while k < n and k < top and stack[top - 1 - k] == -word[k]:
        k += 1
    if k:
        del stack[top - k:]
    if k < n:
        stack.extend(word[k:] if k else word)


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a valid letter")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


class FreeWord:
    """A freely reduced element of the free group of a given rank."""

    __slots__ = ("rank", "letters", "_hash")

    def __init__(self, rank: int, letters: Iterable[int] = (), *, reduced: bool = False):
        letters = tuple(letters)
        if not reduced:
            for x in letters:
                if x == 0 or abs(x) > rank:
                    raise ValueError(f"letter {x} out of range for rank {rank}")
            letters = reduce_letters(letters)
        self.rank = rank
        self.letters = letters
        self._hash = None

    @classmethod
    def identity(cls, rank: int) -> "FreeWord":
        return cls(rank, (), reduced=True)

    @classmethod
    def generator(cls, rank: int, i: int) -> "FreeWord":
        if not 0 <= i < rank:
            raise ValueError(f"generator {i} out of range for rank {rank}")
        return cls(rank, (i + 1,), reduced=True)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rank, self.letters))
        return self._hash

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeWord):
            return NotImplemented
        if self.rank != other.rank or len(self.letters) != len(other.letters):
            return False
        # hash is a fast negative only; equality is decided letterwise
        if hash(self) != hash(other):
            return False
        return self.letters == other.letters

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return multiply(self, other)

    def __invert__(self) -> "FreeWord":
        return invert(self)

    def __pow__(self, k: int) -> "FreeWord":
        return power(self, k)

    def is_identity(self) -> bool:
        return not self.letters

    def __repr__(self) -> str:
        return f"FreeWord({self.rank}, {list(self.letters)})"

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if not self.letters:
            return "1"
        names = names or [f"x{i}" for i in range(self.rank)]
        out = []
        for x in self.letters:
            out.append(names[abs(x) - 1] + ("" if x > 0 else "^-1"))
        return " ".join(out)


def _check_rank(*words) -> int:
    ranks = {w.rank for w in words}
    if len(ranks) != 1:
        raise RankMismatchError(f"rank mismatch: {sorted(ranks)}")
    return ranks.pop()


def reduce(rank: int, letters: Iterable[int]) -> FreeWord:
    return FreeWord(rank, letters)


def multiply(u: FreeWord, v: FreeWord) -> FreeWord:
    rank = _check_rank(u, v)
    stack = list(u.letters)
    _append_reduced(stack, v.letters)
    return FreeWord(rank, stack, reduced=True)


def product(rank: int, words: Iterable[FreeWord]) -> FreeWord:
    stack: list[int] = []
    for w in words:
        if w.rank != rank:
            raise RankMismatchError(f"rank mismatch: {rank} vs {w.rank}")
        _append_reduced(stack, w.letters)
    return FreeWord(rank, stack, reduced=True)


def invert(w: FreeWord) -> FreeWord:
    return FreeWord(w.rank, tuple(-x for x in reversed(w.letters)), reduced=True)


def power(w: FreeWord, k: int) -> FreeWord:
    if k < 0:
        return power(invert(w), -k)
    return product(w.rank, [w] * k)


def conjugate(w: FreeWord, by: FreeWord) -> FreeWord:
    """Return ``by * w * by^-1``."""
    _check_rank(w, by)
    return product(w.rank, [by, w, invert(by)])


def cyclic_reduce(w: FreeWord) -> tuple[FreeWord, FreeWord]:
    """Split ``w = c * core * c^-1`` with ``core`` cyclically reduced."""
    xs = w.letters
    i, j = 0, len(xs) - 1
    while i < j and xs[i] == -xs[j]:
        i += 1
        j -= 1
    core = FreeWord(w.rank, xs[i:j + 1], reduced=True)
    return FreeWord(w.rank, xs[:i], reduced=True), core


def cyclic_rotations(letters: Sequence[int]) -> list[tuple[int, ...]]:
    n = len(letters)
    return [tuple(letters[k:]) + tuple(letters[:k]) for k in range(n)]


def conjugacy_key(w: FreeWord) -> tuple[int, ...]:
    """Canonical representative of the conjugacy class (unoriented is not identified)."""
    core = cyclic_reduce(w)[1].letters
    if not core:
        return ()
    return min(cyclic_rotations(core))


def abelianize(w: FreeWord) -> np.ndarray:
    v = np.zeros(w.rank, dtype=np.int64)
    for x in w.letters:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


class Automorphism:
    """Endomorphism of a free group given by generator images.

    Automorphisms built from Dehn twists are invertible; :func:`aut_invert`
    recovers the inverse for arbitrary inputs by Nielsen reduction.
    """

    __slots__ = ("rank", "images", "_inv_images")

    def __init__(self, images: Sequence[FreeWord]):
        images = tuple(images)
        if images:
            _check_rank(*images)
            if images[0].rank != len(images):
                raise RankMismatchError("number of images must equal the rank")
        self.rank = len(images)
        self.images = images
        self._inv_images = None

    @classmethod
    def identity(cls, rank: int) -> "Automorphism":
        return cls([FreeWord.generator(rank, i) for i in range(rank)])

    def _image_of_letter(self, x: int) -> tuple[int, ...]:
        if x > 0:
            return self.images[x - 1].letters
        if self._inv_images is None:
            self._inv_images = tuple(invert(w).letters for w in self.images)
        return self._inv_images[-x - 1]

    def __call__(self, w: FreeWord) -> FreeWord:
        return apply(self, w)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Automorphism):
            return NotImplemented
        return aut_equal(self, other)

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Automorphism({[list(w.letters) for w in self.images]})"

    def max_image_length(self) -> int:
        return max((len(w) for w in self.images), default=0)

    def total_length(self) -> int:
        return sum(len(w) for w in self.images)

    def is_identity(self) -> bool:
        return all(w.letters == (i + 1,) for i, w in enumerate(self.images))


def apply(f: Automorphism, w: FreeWord) -> FreeWord:
    if f.rank != w.rank:
        raise RankMismatchError(f"rank mismatch: {f.rank} vs {w.rank}")
    stack: list[int] = []
    for x in w.letters:
        _append_reduced(stack, f._image_of_letter(x))
    return FreeWord(f.rank, stack, reduced=True)


def compose(f: Automorphism, g: Automorphism) -> Automorphism:
    """The automorphism ``w -> f(g(w))``."""
    if f.rank != g.rank:
        raise RankMismatchError(f"rank mismatch: {f.rank} vs {g.rank}")
    return Automorphism([apply(f, w) for w in g.images])


def aut_equal(f: Automorphism, g: Automorphism) -> bool:
    if f.rank != g.rank:
        raise RankMismatchError(f"rank mismatch: {f.rank} vs {g.rank}")
    return all(a == b for a, b in zip(f.images, g.images))


def aut_invert(f: Automorphism, max_steps: int = 100_000) -> Automorphism:
    """Invert ``f`` by Nielsen reduction of its image tuple.

    Keeps pairs ``(u_i, w_i)`` with ``u_i = f(w_i)`` and greedily shortens the
    ``u_i``.  Raises :class:`InversionError` if the tuple does not reduce to
    signed generators within ``max_steps`` moves.
    """
    rank = f.rank
    us = list(f.images)
    ws = [FreeWord.generator(rank, i) for i in range(rank)]
    for _ in range(max_steps):
        best = None
        for i in range(rank):
            li = len(us[i])
            for j in range(rank):
                if i == j:
                    continue
                for eps in (1, -1):
                    uj = us[j] if eps == 1 else invert(us[j])
                    for side in (0, 1):
                        cand = multiply(us[i], uj) if side == 0 else multiply(uj, us[i])
                        gain = li - len(cand)
                        if gain > 0 and (best is None or gain > best[0]):
                            best = (gain, i, j, eps, side, cand)
        if best is None:
            break
        _, i, j, eps, side, cand = best
        wj = ws[j] if eps == 1 else invert(ws[j])
        us[i] = cand
        ws[i] = multiply(ws[i], wj) if side == 0 else multiply(wj, ws[i])
    inverse: list[FreeWord | None] = [None] * rank
    for u, w in zip(us, ws):
        if len(u) != 1 or inverse[abs(u.letters[0]) - 1] is not None:
            raise InversionError("images do not Nielsen-reduce to a basis")
        x = u.letters[0]
        inverse[abs(x) - 1] = w if x > 0 else invert(w)
    inv = Automorphism(inverse)  # type: ignore[arg-type]
    if not compose(f, inv).is_identity():
        raise InversionError("inversion failed to round-trip")
    return inv


def abelianization_matrix(f: Automorphism) -> np.ndarray:
    """Integer matrix ``M`` with ``abelianize(f(w)) = M @ abelianize(w)``."""
    if f.rank == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return np.stack([abelianize(w) for w in f.images], axis=1)
