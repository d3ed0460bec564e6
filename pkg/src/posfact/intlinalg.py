"""Exact integer matrix reductions (Smith normal form and friends)."""
from __future__ import annotations

import numpy as np


def _as_obj(a) -> np.ndarray:
    # python ints never overflow during elimination
    return np.array(a, dtype=object).reshape(np.shape(a))


def smith_normal_form(a) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(D, U, V)`` with ``U @ A @ V = D`` diagonal, ``d_i | d_{i+1}``.

    ``U`` and ``V`` are unimodular.  Entries are Python ints (object arrays).
    """
    A = _as_obj(a).copy()
    m, n = A.shape
    U = _as_obj(np.eye(m, dtype=int))
    V = _as_obj(np.eye(n, dtype=int))
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i, j]), i, j) for i in range(t, m) for j in range(t, n) if A[i, j] != 0]
        if not nz:
            break
        _, i, j = min(nz)
        A[[t, i]] = A[[i, t]]
        U[[t, i]] = U[[i, t]]
        A[:, [t, j]] = A[:, [j, t]]
        V[:, [t, j]] = V[:, [j, t]]
        done = False
        while not done:
            done = True
            p = A[t, t]
            for i in range(t + 1, m):
                q = A[i, t] // p
                if q:
                    A[i] -= q * A[t]
                    U[i] -= q * U[t]
                if A[i, t] != 0:
                    A[[t, i]] = A[[i, t]]
                    U[[t, i]] = U[[i, t]]
                    done = False
                    break
            if not done:
                continue
            p = A[t, t]
            for j in range(t + 1, n):
                q = A[t, j] // p
                if q:
                    A[:, j] -= q * A[:, t]
                    V[:, j] -= q * V[:, t]
                if A[t, j] != 0:
                    A[:, [t, j]] = A[:, [j, t]]
                    V[:, [t, j]] = V[:, [j, t]]
                    done = False
                    break
            if not done:
                continue
            # divisibility: fold any offending row into row t and retry
            p = A[t, t]
            for i in range(t + 1, m):
                if any(A[i, j] % p for j in range(t + 1, n)):
                    A[t] += A[i]
                    U[t] += U[i]
                    done = False
                    break
        if A[t, t] < 0:
            A[t] = -A[t]
            U[t] = -U[t]
        t += 1
    return A, U, V


def elementary_divisors(a) -> list[int]:
    D, _, _ = smith_normal_form(a)
    k = min(D.shape) if D.size else 0
    return [int(D[i, i]) for i in range(k) if D[i, i] != 0]


def rank(a) -> int:
    return len(elementary_divisors(a)) if np.size(a) else 0


def cokernel(a) -> tuple[int, list[int]]:
    """Free rank and torsion coefficients (> 1) of ``Z^m / A Z^n``."""
    a = _as_obj(a)
    m = a.shape[0]
    divs = elementary_divisors(a) if a.size else []
    return m - len(divs), [d for d in divs if d > 1]


def determinant(a) -> int:
    a = _as_obj(a)
    n = a.shape[0]
    if n == 0:
        return 1
    D, U, V = smith_normal_form(a)
    d = 1
    for i in range(n):
        d *= D[i, i]
    # det U, det V are +-1; recover them by fraction-free elimination
    return d * _unimodular_sign(U) * _unimodular_sign(V)


def _unimodular_sign(u) -> int:
    from fractions import Fraction
    m = [[Fraction(int(x)) for x in row] for row in u]
    n = len(m)
    sign = 1
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    prod = Fraction(1)
    for c in range(n):
        prod *= m[c][c]
    return sign * (1 if prod > 0 else -1)


def to_int(a) -> np.ndarray:
    return np.array(a, dtype=np.int64)
