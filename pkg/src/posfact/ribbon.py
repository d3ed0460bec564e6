"""One-vertex ribbon graphs and the chord model of simple closed curves.

A compact surface with boundary deformation retracts onto a ribbon graph with
a single vertex.  Each loop edge carries a free generator of ``pi_1``; the
cyclic order of the ``2r`` half-edges around the vertex determines the surface.
The basepoint sits on the boundary, in the gap just before slot 0.

A cyclically reduced word for a simple closed curve is realized as parallel
strands along the ribbons joined by pairwise disjoint chords in the vertex
disk.  Dehn twists are read off from where the generator loops cross those
chords.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

OUT, IN = 0, 1


class NotSimpleError(ValueError):
    """The word does not describe a primitive simple closed curve."""


@dataclass(frozen=True)
class CrossingData:
    """Signed crossings of each generator loop with a curve.

    ``before[i]`` lists crossings met on the way out to ribbon ``i`` and
    ``after[i]`` those met on the way back; each entry is ``(start, direction)``
    meaning the loop around the curve is the rotation of its word starting at
    ``start``, traversed forwards (+1) or backwards (-1).
    """

    word: tuple[int, ...]
    before: tuple[tuple[tuple[int, int], ...], ...]
    after: tuple[tuple[tuple[int, int], ...], ...]

    def algebraic(self, gen: int) -> int:
        return sum(d for _, d in self.before[gen]) + sum(d for _, d in self.after[gen])

    def loop(self, start: int, direction: int) -> tuple[int, ...]:
        w = self.word
        rot = w[start:] + w[:start]
        if direction > 0:
            return rot
        return tuple(-x for x in reversed(rot))

    def image_letters(self, gen: int, sign: int) -> list[list[int]]:
        """Pieces whose product is the image of generator ``gen`` under ``t^sign``."""
        pieces = [list(self.loop(k, d * sign)) for k, d in self.before[gen]]
        pieces.append([gen + 1])
        pieces.extend(list(self.loop(k, d * sign)) for k, d in self.after[gen])
        return pieces


class RibbonGraph:
    """A one-vertex ribbon graph: ``order`` lists half-edges ``(gen, end)`` ccw."""

    def __init__(self, rank: int, order: Sequence[tuple[int, int]]):
        order = [tuple(h) for h in order]
        if len(order) != 2 * rank or set(order) != {(g, e) for g in range(rank) for e in (OUT, IN)}:
            raise ValueError("order must list every half-edge exactly once")
        self.rank = rank
        self.order = order
        self.slot = {h: k for k, h in enumerate(order)}

    # ------------------------------------------------------------------ faces
    def faces(self, gens: Iterable[int] | None = None) -> list[tuple[list[int], tuple[int, ...]]]:
        """Faces of the sub-ribbon graph on ``gens`` as ``(gap slots, word)``.

        Gap ``k`` is the gap following half-edge ``k`` of the (restricted)
        order; gap slots are reported as global slot indices of that half-edge.
        """
        sub = self.order if gens is None else [h for h in self.order if h[0] in set(gens)]
        n = len(sub)
        if n == 0:
            return []
        idx = {h: k for k, h in enumerate(sub)}
        seen = [False] * n
        out = []
        for start in range(n):
            if seen[start]:
                continue
            gaps, word = [], []
            k = start
            while not seen[k]:
                seen[k] = True
                gaps.append(self.slot[sub[k]])
                h = sub[(k + 1) % n]
                word.append(h[0] + 1 if h[1] == OUT else -(h[0] + 1))
                k = idx[(h[0], 1 - h[1])]
            out.append((gaps, tuple(word)))
        return out

    def basepoint_face(self) -> int:
        """Index into :meth:`faces` of the face containing the basepoint gap."""
        last = 2 * self.rank - 1
        for i, (gaps, _) in enumerate(self.faces()):
            if last in gaps:
                return i
        raise ValueError("empty graph has no basepoint face")

    def containing_gap(self, gens: Iterable[int], slot: int) -> int:
        """Global slot of the sub-graph half-edge whose following gap contains gap ``slot``."""
        gens = set(gens)
        for k in range(slot, slot - 2 * self.rank, -1):
            h = self.order[k % (2 * self.rank)]
            if h[0] in gens:
                return k % (2 * self.rank)
        raise ValueError("sub-graph is empty")

    def genus_and_boundaries(self) -> tuple[int, int]:
        nf = len(self.faces())
        chi = 1 - self.rank
        genus2 = 2 - chi - nf
        return genus2 // 2, nf

    # -------------------------------------------------------------- homology
    def intersection_matrix(self) -> list[list[int]]:
        """Pairing of generator loops from slot interleaving.

        Signed so that a twist acts on homology by ``x -> x + <x, c> c``.
        """
        r = self.rank
        om = [[0] * r for _ in range(r)]
        for i in range(r):
            oi, ii = self.slot[(i, OUT)], self.slot[(i, IN)]
            lo, hi = min(oi, ii), max(oi, ii)
            for j in range(r):
                if i == j:
                    continue
                a = lo < self.slot[(j, OUT)] < hi
                b = lo < self.slot[(j, IN)] < hi
                if a != b:
                    om[i][j] = (-1 if a else 1) * (1 if oi < ii else -1)
        return om

    # ----------------------------------------------------------- chord model
    def _dep(self, x: int) -> int:
        return self.slot[(abs(x) - 1, OUT if x > 0 else IN)]

    def _arr(self, x: int) -> int:
        return self.slot[(abs(x) - 1, IN if x > 0 else OUT)]

    def crossing_data(self, word: Sequence[int]) -> CrossingData:
        """Realize a cyclically reduced word as disjoint chords.

        Raises :class:`NotSimpleError` when the chords cannot be made
        disjoint, or the word is a proper power.
        """
        w = tuple(word)
        L = len(w)
        if L == 0:
            raise NotSimpleError("empty word is not an essential curve")
        for k in range(L):
            if w[k] == -w[(k + 1) % L]:
                raise NotSimpleError("word is not cyclically reduced")
        two_r = 2 * self.rank

        # walking away from an endpoint: ('dep', k) is joined by a chord to
        # ('arr', k-1); ('arr', k) to ('dep', k+1)
        def key(k: int, end: str) -> tuple[int, ...]:
            out = []
            for _ in range(2 * L + 2):
                if end == "dep":
                    src, k = self._dep(w[k]), (k - 1) % L
                    tgt, end = self._arr(w[k]), "arr"
                else:
                    src, k = self._arr(w[k]), (k + 1) % L
                    tgt, end = self._dep(w[k]), "dep"
                out.append((tgt - src) % two_r)
                # cross the ribbon to the other end of the same strand
                end = "arr" if end == "dep" else "dep"
            return tuple(out)

        strands: dict[int, list[int]] = {}
        for k, x in enumerate(w):
            strands.setdefault(abs(x) - 1, []).append(k)
        pos_dep = [0] * L
        pos_arr = [0] * L
        count = [0] * self.rank
        for gen, ks in strands.items():
            m = len(ks)
            count[gen] = m
            keyed = []
            for k in ks:
                end = "dep" if w[k] > 0 else "arr"
                keyed.append((key(k, end), k))
            keys = [kk for kk, _ in keyed]
            if len(set(keys)) != len(keys):
                raise NotSimpleError("word is a proper power")
            # later along the slot <=> lexicographically smaller key
            keyed.sort(key=lambda t: t[0], reverse=True)
            for j, (_, k) in enumerate(keyed):
                if w[k] > 0:
                    pos_dep[k], pos_arr[k] = j, m - 1 - j
                else:
                    pos_arr[k], pos_dep[k] = j, m - 1 - j

        # chord k joins the arrival of letter k to the departure of letter k+1
        chords = []
        for k in range(L):
            k1 = (k + 1) % L
            a = (self._arr(w[k]), pos_arr[k])
            b = (self._dep(w[k1]), pos_dep[k1])
            chords.append((a, b))
        ordered = sorted(range(L), key=lambda k: min(chords[k]))
        for ia in range(L):
            a0, a1 = sorted(chords[ordered[ia]])
            for ib in range(ia + 1, L):
                b0, b1 = sorted(chords[ordered[ib]])
                if b0 > a1:
                    break
                if a0 < b0 < a1 < b1:
                    raise NotSimpleError("chords cross; curve is not simple")

        before, after = [], []
        for gen in range(self.rank):
            p = (self.slot[(gen, OUT)], -0.5)
            q = (self.slot[(gen, IN)], count[gen] + 0.5)
            bef, aft = [], []
            for k, (a, b) in enumerate(chords):
                # chord k: a is the arrival end (backward), b the departure end (forward)
                if (a < p) != (b < p):
                    fwd = b < p
                    bef.append((b if fwd else a, (k + 1) % L, 1 if fwd else -1))
                if (a > q) != (b > q):
                    fwd = b > q
                    aft.append((b if fwd else a, (k + 1) % L, 1 if fwd else -1))
            bef.sort()
            aft.sort()
            before.append(tuple((k, d) for _, k, d in bef))
            after.append(tuple((k, d) for _, k, d in aft))
        return CrossingData(w, tuple(before), tuple(after))


def contract_tree(vertices: dict, edges: dict, tree: Sequence) -> tuple[list, dict]:
    """Contract ``tree`` edges of a ribbon graph to a single vertex.

    ``vertices`` maps vertex -> ccw list of half-edge ids; ``edges`` maps edge
    -> (tail half-edge, head half-edge).  Returns the merged cyclic order and
    the half-edge -> vertex map of the survivor.
    """
    verts = {v: list(hs) for v, hs in vertices.items()}
    where = {h: v for v, hs in verts.items() for h in hs}
    for e in tree:
        a, b = edges[e]
        u, v = where[a], where[b]
        if u == v:
            raise ValueError(f"tree edge {e} is a loop")
        lu, lv = verts.pop(u), verts.pop(v)
        iu, iv = lu.index(a), lv.index(b)
        merged = lu[iu + 1:] + lu[:iu] + lv[iv + 1:] + lv[:iv]
        verts[u] = merged
        for h in merged:
            where[h] = u
        del where[a], where[b]
    if len(verts) != 1:
        raise ValueError("tree does not span")
    (order,) = verts.values()
    return order, where


def chain_ribbon(length: int) -> RibbonGraph:
    """Ribbon graph of a regular neighbourhood of a chain ``c_1, ..., c_length``.

    Generator ``i`` is the chain curve ``c_{i+1}``.  At each crossing point the
    half-edges run (c_i out, c_{i+1} out, c_i in, c_{i+1} in) counterclockwise.
    """
    if length < 1:
        raise ValueError("chain must be non-empty")
    if length == 1:
        return RibbonGraph(1, [(0, OUT), (0, IN)])
    # vertices p_1..p_{length-1}; slots E, N, W, S
    vertices = {p: [(p, "E"), (p, "N"), (p, "W"), (p, "S")] for p in range(1, length)}
    edges = {}
    half_to_gen = {}
    edges[("c", 1)] = ((1, "E"), (1, "W"))
    for i in range(2, length):
        edges[("tau", i)] = ((i - 1, "N"), (i, "W"))
        edges[("c", i)] = ((i, "E"), (i - 1, "S"))
    edges[("c", length)] = ((length - 1, "N"), (length - 1, "S"))
    for (kind, i), (t, h) in edges.items():
        if kind == "c":
            half_to_gen[t] = (i - 1, OUT)
            half_to_gen[h] = (i - 1, IN)
    tree = [("tau", i) for i in range(2, length)]
    order, _ = contract_tree(vertices, edges, tree)
    return RibbonGraph(length, [half_to_gen[h] for h in order])


def rotate_basepoint(graph: RibbonGraph, gap_slot: int) -> RibbonGraph:
    """Move the basepoint into the gap following ``gap_slot``."""
    n = len(graph.order)
    k = (gap_slot + 1) % n
    return RibbonGraph(graph.rank, graph.order[k:] + graph.order[:k])


def insert_loops(graph: RibbonGraph, gap_slot: int, count: int) -> RibbonGraph:
    """Insert ``count`` new loop edges, each with adjacent half-edges, into a gap."""
    r = graph.rank
    new = [(r + j, h) for j in range(count) for h in (OUT, IN)]
    order = graph.order[:gap_slot + 1] + new + graph.order[gap_slot + 1:]
    return RibbonGraph(r + count, order)
