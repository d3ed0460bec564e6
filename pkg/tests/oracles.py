"""Independent reference computations used to check the library.

Each oracle uses a different method from the code under test: repeated
scanning instead of a stack, determinantal divisors instead of elimination,
and explicit 2x2 matrices for the torus.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction


def naive_reduce(letters) -> tuple[int, ...]:
    w = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def naive_apply(images: list[tuple[int, ...]], letters) -> tuple[int, ...]:
    """Substitute generator images letter by letter, then reduce."""
    out: list[int] = []
    for x in letters:
        img = images[abs(x) - 1]
        out.extend(img if x > 0 else [-y for y in reversed(img)])
    return naive_reduce(out)


def _det(rows) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def determinantal_divisors(A) -> list[int]:
    """Nonzero elementary divisors via gcds of k x k minors."""
    rows, cols = len(A), len(A[0]) if A else 0
    ds = [1]
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = math.gcd(g, int(_det([[A[r][c] for c in ci] for r in ri])))
        if g == 0:
            break
        ds.append(g)
    return [ds[i] // ds[i - 1] for i in range(1, len(ds))]


# Sigma_1^1 with c1, c2 meeting once: the standard SL(2, Z) action.
TORUS_TWISTS = {
    ("c1", 1): ((1, 1), (0, 1)),
    ("c1", -1): ((1, -1), (0, 1)),
    ("c2", 1): ((1, 0), (-1, 1)),
    ("c2", -1): ((1, 0), (1, 1)),
}


def mat_mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0])))
                 for i in range(len(A)))


def torus_matrix(letters) -> tuple:
    """Product of the torus twist matrices, rightmost letter acting first."""
    M = ((1, 0), (0, 1))
    for x in letters:
        M = mat_mul(M, TORUS_TWISTS[(x.curve, x.sign)])
    return M
