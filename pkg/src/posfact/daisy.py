"""Daisy curves: the curves ``x_i`` of the daisy relation on each side of the chain.

On a sphere with boundaries ``alpha`` (the centre), ``alpha'`` and petals
``delta_1..delta_l``, the daisy relation reads

    t_alpha^(l-1) t_delta_1 ... t_delta_l t_alpha' = t_x_1 ... t_x_l t_beta

where ``x_i`` surrounds ``alpha`` and ``delta_i`` and ``beta`` surrounds
``alpha`` and ``alpha'``.  In the chain model the sphere is the region between
the sub-chains ``c_1..c_3`` and ``c_5..c_N`` on one side of the chain.

A curve around ``alpha`` and one petal is a face of a sub-ribbon graph, but
which face is "straight" depends on where the petal loops sit in the boundary
face.  Candidates are produced by sliding the loops to every gap of that face
and transporting back; the relation itself then selects among them.
"""
from __future__ import annotations

import itertools
from typing import Sequence

from .freegroup import Automorphism, FreeWord, compose, cyclic_reduce, product
from .ribbon import NotSimpleError, RibbonGraph, insert_loops
from .words import word


def _twist(graph: RibbonGraph, w: Sequence[int]) -> Automorphism:
    cd = graph.crossing_data(w)
    r = graph.rank
    return Automorphism([product(r, [FreeWord(r, p) for p in cd.image_letters(i, 1)]) for i in range(r)])


def _commutes(graph: RibbonGraph, a: Sequence[int], b: Sequence[int]) -> bool:
    A, B = _twist(graph, a), _twist(graph, b)
    return compose(A, B) == compose(B, A)


def _transport(w: Sequence[int], loops: set[int], u: Sequence[int], rank: int) -> tuple[int, ...]:
    inv = [-y for y in reversed(u)]
    out: list[int] = []
    for x in w:
        if abs(x) - 1 in loops:
            out += inv + [x] + list(u)
        else:
            out.append(x)
    return cyclic_reduce(FreeWord(rank, out))[1].letters


def petal_candidates(model, side: str) -> list[list[tuple[int, ...]]]:
    """Candidate words for ``x_1..x_l`` on one side, in petal order."""
    base = model.base_graph
    gaps, face = model.side_faces[side]
    loops = model.side_loops[side]
    a = gaps.index(model.side_gap[side])
    N = model.chain_length
    H = [0, 1, 2]
    K = list(range(4, N))
    rank = model.rank
    chain = H + K
    graph = model.graph
    cands: list[list[tuple[int, ...]]] = [[] for _ in range(len(loops) + 1)]
    for b in range(len(gaps)):
        # slide the loops to gap b, then pull the faces back to gap a
        test = insert_loops(base, gaps[b], len(loops))
        relabel = {N + k: j for k, j in enumerate(loops)}
        shift = lambda w: tuple((relabel[abs(x) - 1] + 1) * (1 if x > 0 else -1) if abs(x) - 1 in relabel else x for x in w)  # noqa: E731
        u = face[a:b] if b >= a else tuple(-y for y in reversed(face[b:a]))
        new_loops = [N + k for k in range(len(loops))]
        words = []
        for k, j in enumerate(new_loops):
            known = {w for _, w in test.faces(H)}
            fs = [w for _, w in test.faces(H + [j]) if w not in known and len(w) > 1]
            words.append(fs[0] if len(fs) == 1 else None)
        known = {w for _, w in test.faces(K)}
        fs = [w for _, w in test.faces(K + new_loops) if w not in known and len(w) > 1 and any(abs(x) - 1 in new_loops for x in w)]
        words.append(fs[0] if len(fs) == 1 else None)
        for i, w in enumerate(words):
            if w is None:
                continue
            w = _transport(shift(w), set(loops), u, rank)
            if w in cands[i]:
                continue
            try:
                ok = all(_commutes(graph, w, (j + 1,)) for j in chain)
            except NotSimpleError:
                continue
            if ok:
                cands[i].append(w)
    # loops inserted later sit earlier in the cyclic order around alpha
    return cands[-2::-1] + cands[-1:]


def add_daisy_curves(reg) -> None:
    """Register ``x_i`` (and ``x'_i`` beyond ``delta'``) when the surface has petals."""
    from .twist import Engine
    model = reg.model
    spec = reg.surface
    if spec.g == 0:
        if spec.n >= 3:
            eps = list(range(spec.n - 1))
            for i in eps:
                others = [j for j in eps if j != i]
                w = [w for _, w in model.graph.faces(others) if len(w) > 1 or len(others) == 1]
                reg.add_basic(f"x{i + 1}", w[0])
        return
    if spec.g < 2 or spec.n < 2:
        return
    n, s = spec.n, spec.split
    sides = [("delta", "d", "d'" if spec.g >= 3 else "c5", "x", list(range(1, n - s)))]
    if s:
        sides.append(("delta'", "e", "e'" if spec.g >= 3 else "c5", "x'", list(range(n - s, n + 1))))
    for side, alpha, alpha2, prefix, petals in sides:
        l = len(petals)
        if l == 1:
            # a single petal: the daisy degenerates and x_1 is alpha' itself
            reg.add_alias(f"{prefix}1", alpha2)
            reg.daisy[side] = {"alpha": alpha, "alpha'": alpha2, "beta": side,
                               "petals": [f"delta{petals[0]}"], "x": [f"{prefix}1"]}
            continue
        cands = petal_candidates(model, side)
        lhs = word(spec, *([alpha] * (l - 1)), *[f"delta{i}" for i in petals], alpha2)
        names = [f"_{prefix}{i + 1}" for i in range(l)]
        found = None
        for choice in itertools.product(*[range(len(c)) for c in cands]):
            trial = {}
            for i, k in enumerate(choice):
                trial[names[i]] = cands[i][k]
            for nm, w in trial.items():
                if nm in reg:
                    reg._curves.pop(nm)
                reg.add_basic(nm, w)
            rhs = word(spec, *names, side)
            eng = Engine(reg)
            if eng.realize(lhs) == eng.realize(rhs):
                found = trial
                break
        for nm in names:
            reg._curves.pop(nm, None)
        if found is None:
            raise RuntimeError(f"no daisy configuration found on the {side} side of {spec}")
        for i, nm in enumerate(names):
            reg.add_basic(f"{prefix}{i + 1}", found[nm])
        reg.daisy[side] = {
            "alpha": alpha, "alpha'": alpha2, "beta": side,
            "petals": [f"delta{i}" for i in petals],
            "x": [f"{prefix}{i + 1}" for i in range(l)],
        }
