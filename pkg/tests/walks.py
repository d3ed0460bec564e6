"""Random Hurwitz walks that stay among small vanishing cycles.

An unconstrained random walk makes the curves' intersection numbers grow
doubly exponentially, so each step picks uniformly among the moves whose new
letters keep every homology coordinate within ``slack`` of the starting size.
Letters are replaced by the shortest known letter for the same curve.
"""
from __future__ import annotations

import random
from typing import Iterator

import numpy as np

from posfact.relations import LetterTable, hurwitz_move
from posfact.surface import standard_registry
from posfact.twist import PositiveFactorization
from posfact.words import MappingClassWord


def _size(reg, x) -> int:
    return int(np.max(np.abs(reg.letter_homology(x)))) if reg.model.rank else 0


def bounded_walk(f: PositiveFactorization, steps: int, rnd: random.Random,
                 slack: int = 1) -> Iterator[PositiveFactorization]:
    """Yield the factorization after each of ``steps`` Hurwitz moves."""
    reg = standard_registry(f.surface)
    bound = max((_size(reg, x) for x in f.word.letters), default=0) + slack
    table = LetterTable(f.surface)
    for _ in range(steps):
        moves = [(i, d) for i in range(len(f) - 1) for d in ("left", "right")]
        rnd.shuffle(moves)
        for i, d in moves:
            w = hurwitz_move(f.word, i, d)
            if all(_size(reg, x) <= bound for x in w.letters[i:i + 2]):
                letters = list(w.letters)
                letters[i:i + 2] = [table.shortest(x) for x in letters[i:i + 2]]
                f = PositiveFactorization(MappingClassWord(f.surface, tuple(letters)), f.nonseparating_only)
                break
        else:
            raise RuntimeError("no Hurwitz move stays within the bound")
        yield f
