"""Named twist words used by the relations and the long factorizations.

Every function takes the surface the word lives on and returns a
:class:`MappingClassWord`.  Words are right-to-left: the last letter acts first.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .words import MappingClassWord, SurfaceSpec, TwistLetter


def T(curve: str, sign: int = 1, conj: Sequence[TwistLetter] = ()) -> TwistLetter:
    return TwistLetter(curve, sign).conjugated(tuple(conj))


def c(i: int, sign: int = 1) -> TwistLetter:
    return TwistLetter(f"c{i}", sign)


def W(s: SurfaceSpec, *parts) -> MappingClassWord:
    out: list[TwistLetter] = []
    for p in parts:
        if isinstance(p, TwistLetter):
            out.append(p)
        elif isinstance(p, str):
            out.append(TwistLetter(p))
        elif isinstance(p, int):
            out.append(c(p))
        elif isinstance(p, MappingClassWord):
            out.extend(p.letters)
        else:
            out.extend(W(s, *p).letters)
    return MappingClassWord(s, tuple(out))


def inv(letters: Iterable[TwistLetter]) -> tuple[TwistLetter, ...]:
    return tuple(x.inverse() for x in reversed(tuple(letters)))


def _chain_index(name: str) -> int | None:
    if name.startswith("c") and name[1:].isdigit():
        return int(name[1:])
    return None


def _disjoint(a: str, b: str) -> bool:
    i, j = _chain_index(a), _chain_index(b)
    return i is not None and j is not None and abs(i - j) >= 2


def simplify(x: TwistLetter) -> TwistLetter:
    """Drop conjugator letters next to the base curve that are disjoint from it."""
    conj = list(x.conj)
    while conj and not conj[-1].conj and _disjoint(conj[-1].curve, x.curve):
        conj.pop()
    return TwistLetter(x.curve, x.sign, tuple(conj))


def conj_word(w: MappingClassWord, by: Sequence[TwistLetter] | MappingClassWord) -> MappingClassWord:
    """``by * w * by^-1`` kept letterwise."""
    by = tuple(by.letters if isinstance(by, MappingClassWord) else by)
    return MappingClassWord(w.surface, tuple(simplify(x.conjugated(by)) for x in w.letters))


# ------------------------------------------------------------------ chains

def chain_product(s: SurfaceSpec, first: int, last: int) -> MappingClassWord:
    """``t_first t_first+1 ... t_last`` (descending when ``first > last``)."""
    step = 1 if last >= first else -1
    return W(s, *range(first, last + step, step))


def H(s: SurfaceSpec, i: int) -> MappingClassWord:
    return chain_product(s, 1, i)


def Hbar(s: SurfaceSpec, i: int) -> MappingClassWord:
    return chain_product(s, i, 1)


def I_block(s: SurfaceSpec, g: int) -> MappingClassWord:
    return W(s, *[f"d{j}" for j in range(10, 2 * g + 2)])


def J_block(s: SurfaceSpec, g: int) -> MappingClassWord:
    return W(s, *[f"e{j}" for j in range(2 * g + 1, 7, -1)])


def K4(s: SurfaceSpec) -> MappingClassWord:
    return W(s, "f9", "f8", "f7", "f6")


def L16(s: SurfaceSpec) -> MappingClassWord:
    return W(s, *[(i + 3, i + 2, i + 1, i) for i in range(1, 5)])


# -------------------------------------------------------- the genus-2 core

def T10m(s: SurfaceSpec, m: int) -> MappingClassWord:
    return W(s, (1, 2, 3, 1, 2, 3, 2, 1, 3, 2)) ** m


def phi12(s: SurfaceSpec) -> MappingClassWord:
    return W(s, 4, 3, 2, 1, 1, 2, 3, 4, 4, "d", 3, 4)


def phi12m(s: SurfaceSpec, m: int) -> MappingClassWord:
    """``t_c3^-m t_e^m phi12 t_e^-m t_c3^m`` as the letterwise conjugate of ``phi12``."""
    by = (c(3, -1),) * m + (T("e"),) * m
    return conj_word(phi12(s), by)


def D9(s: SurfaceSpec) -> MappingClassWord:
    g_inv = inv((c(4), T("d"), c(3)))
    return W(s, T("c5", conj=g_inv), 1, T("c2", conj=(c(3, -1),)), T("c3", conj=g_inv),
             "e", T("c4", conj=(c(3, -1),)), 2, 1, 5)


def D8(s: SurfaceSpec) -> MappingClassWord:
    return D9(s)[:-1]


def M9(s: SurfaceSpec) -> MappingClassWord:
    a = inv((c(4), T("d"), c(3), c(4)))
    b = inv((c(5), c(4)))
    return W(s, T("c5", conj=a), 2, T("c6", conj=b), "d", T("c3", conj=(c(4, -1),)),
             7, T("c6", conj=b), "d", T("e", conj=(c(4, -1),)))


# ``Delta^2 = Y t_c3^4`` on the chain c1, c2, c3: the eight letters of Y
def Y8(s: SurfaceSpec) -> MappingClassWord:
    return W(s, T("c3", conj=(c(1), c(2))), 1, 1, 3, T("c2", conj=(c(3, -1),)), 2, 1,
             T("c2", conj=(c(3),)))


# one period of T_10m with t_c1^2 split off at the end: T_10 = Z8 t_c1^2
def Z8(s: SurfaceSpec) -> MappingClassWord:
    return W(s, 2, 3, 1, 2, 2, 1, 3, 2)


def O_block(s: SurfaceSpec, m: int, n: int) -> MappingClassWord:
    """The positive word with ``T_10m = O t_c1^2 t_d^(n-2) t_e^(n-2)``; length ``10m-12n+22``."""
    if m - 2 * n + 3 < 0:
        raise ValueError(f"need m >= 2n - 3 to split T_10m, got m={m}, n={n}")
    w10 = T10m(s, 1)
    tail = conj_word(Y8(s) ** (n - 2), (c(1), c(1)))
    return w10 ** (m - 2 * n + 3) * Z8(s) * tail


def P_block(s: SurfaceSpec, g: int) -> MappingClassWord:
    """``(t_c1..t_c(2g+1))^(2g+2) = (t_c1..t_c5)^6 t_c4 P``; length ``4g^2+6g-29``."""
    N = 2 * g + 1
    blocks = [list(range(j, 0, -1)) + list(range(1, j + 1)) for j in range(6, N + 1)]
    first = blocks[0]
    k = first.index(4)
    head = conj_word(W(s, *first[:k]), (c(4, -1),))
    rest = W(s, *first[k + 1:], *[x for b in blocks[1:] for x in b])
    return head * rest


def Psi1(s: SurfaceSpec) -> MappingClassWord:
    """Half twist of the chain c1..c4: swaps c1 with c4 (and c2 with c3)."""
    return W(s, 1, 2, 3, 4, 1, 2, 3, 1, 2, 1)


def Psi2(s: SurfaceSpec) -> MappingClassWord:
    """Half twist of the chain c1, c2, c3, c4, d': swaps c1 with d'."""
    return W(s, 1, 2, 3, 4, "d'", 1, 2, 3, 4, 1, 2, 3, 1, 2, 1)
