"""Surfaces, their homology lattice, and the registry of named curves.

Every surface with ``g >= 1`` is modelled on a regular neighbourhood of a chain
of curves ``c_1, ..., c_N`` (``N = 2g + 1`` with two chain boundaries ``delta``
and ``delta'``, or ``N = 2g`` when ``n = 1``).  Extra boundary components are
small loops inserted next to ``delta`` (or, with ``split``, next to
``delta'``), which is the same as gluing a holed sphere along the chain
boundary.  Chain curves are single generators of ``pi_1``; the curves bounding
sub-chains (``d, e, d', e', a, b``) are face words of sub-ribbon graphs.

Orientation convention: right-handed twists turn right in the ribbon picture,
and homology classes are written in the basis of free generators with the
pairing chosen so that ``t_c`` acts by ``x -> x + <x, c> c``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import intlinalg
from .freegroup import FreeWord, abelianize, cyclic_reduce, conjugacy_key
from .ribbon import OUT, IN, CrossingData, NotSimpleError, RibbonGraph, chain_ribbon, insert_loops, rotate_basepoint
from .words import MappingClassWord, SurfaceSpec, TwistLetter, word


class MissingCurveError(KeyError):
    """A curve name is not registered on this surface."""


class RegistryError(ValueError):
    """Registry data is internally inconsistent."""


@dataclass(frozen=True)
class Curve:
    """A named simple closed curve.

    Basic curves carry a cyclically reduced ``pi_1`` word and the crossing data
    used to build their twist.  Derived curves are images ``phi(base)``.
    """

    name: str
    kind: str
    homology: tuple[int, ...]
    word: tuple[int, ...] | None = None
    crossings: CrossingData | None = field(default=None, compare=False, repr=False)
    base: str | None = None
    conjugator: tuple[TwistLetter, ...] = ()
    nonseparating: bool = True

    @property
    def is_basic(self) -> bool:
        return self.kind == "basic"


class SurfaceModel:
    """The ribbon graph of a surface together with named generators and boundaries."""

    def __init__(self, spec: SurfaceSpec):
        self.spec = spec
        g, n = spec.g, spec.n
        self.chain_length = 0
        self.chain_faces: dict[str, tuple[int, ...]] = {}
        self.side_loops: dict[str, list[int]] = {"delta": [], "delta'": []}
        self.side_faces: dict[str, tuple[list[int], tuple[int, ...]]] = {}
        self.side_gap: dict[str, int] = {}
        self.base_graph: RibbonGraph | None = None
        if g == 0:
            graph = RibbonGraph(n - 1, [(j, h) for j in range(n - 1) for h in (OUT, IN)])
            self.gen_names = [f"eps{j + 1}" for j in range(n - 1)]
            self.side_loops["delta"] = list(range(n - 1))
            if n >= 2:
                graph = rotate_basepoint(graph, 2 * (n - 1) - 1)
        elif n == 1:
            N = 2 * g
            graph = chain_ribbon(N)
            self.chain_length = N
            self.gen_names = [f"c{i + 1}" for i in range(N)]
        else:
            N = 2 * g + 1
            base = chain_ribbon(N)
            self.chain_length = N
            f0, f1 = base.faces()
            # delta is the chain boundary that receives the extra boundaries
            delta_gaps, delta_word = f1
            dprime_gaps, dprime_word = f0
            self.chain_faces = {"delta": delta_word, "delta'": dprime_word}
            self.base_graph = base
            self.side_faces = {"delta": f1, "delta'": f0}
            self.side_gap = {"delta": delta_gaps[0], "delta'": dprime_gaps[0]}
            n_delta = n - 2 - spec.split
            graph = insert_loops(base, delta_gaps[0], n_delta)
            self.side_loops["delta"] = list(range(N, N + n_delta))
            # after insertion the delta' gap shifts by the inserted half-edges
            h = base.order[dprime_gaps[0]]
            graph = insert_loops(graph, graph.slot[h], spec.split)
            self.side_loops["delta'"] = list(range(N + n_delta, N + n_delta + spec.split))
            last = spec.split
            anchor = graph.slot[h] + 2 * last
            graph = rotate_basepoint(graph, anchor)
            self.gen_names = [f"c{i + 1}" for i in range(N)] + [
                f"eps{j + 1}" for j in range(n - 2)
            ]
        self.graph = graph
        self.rank = graph.rank
        if self.rank != spec.rank:
            raise RegistryError("model rank disagrees with 2g + n - 1")
        gg, nf = graph.genus_and_boundaries() if self.rank else (0, 1)
        if (gg, nf) != (g, n):
            raise RegistryError(f"model has type ({gg}, {nf}), expected ({g}, {n})")
        self.pairing_matrix = np.array(graph.intersection_matrix() if self.rank else [], dtype=np.int64).reshape(self.rank, self.rank)
        self.boundary_words = self._name_boundaries()

    def _name_boundaries(self) -> list[tuple[int, ...]]:
        """Face words of delta_1..delta_n, basepoint component last."""
        if self.rank == 0:
            return [()]
        faces = self.graph.faces()
        bp = self.graph.basepoint_face()
        loops = self.side_loops["delta"] + self.side_loops["delta'"]
        small = {}
        for i, (_, w) in enumerate(faces):
            if i != bp and len(w) == 1 and abs(w[0]) - 1 in loops:
                small[abs(w[0]) - 1] = i
        order: list[int] = []
        if self.spec.g == 0:
            order = [small[j] for j in self.side_loops["delta"]]
        else:
            rest = [i for i in range(len(faces)) if i not in small.values() and i != bp]
            order = [small[j] for j in reversed(self.side_loops["delta"])]
            if self.spec.n >= 2:
                if len(rest) != 1:
                    raise RegistryError("could not identify the delta-side boundary")
                order.append(rest[0])
            order += [small[j] for j in reversed(self.side_loops["delta'"])]
        order.append(bp)
        words = []
        for i in order:
            w = faces[i][1]
            if i == bp:
                # start the basepoint face at the basepoint gap
                gaps = faces[i][0]
                k = gaps.index(2 * self.rank - 1)
                w = w[k:] + w[:k]
            # faces are traced with the surface on the right; flip to the boundary orientation
            words.append(tuple(-x for x in reversed(w)))
        return words

    def pairing(self, x, y) -> int:
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if x.shape != (self.rank,) or y.shape != (self.rank,):
            raise ValueError(f"dimension mismatch: expected vectors of length {self.rank}")
        return int(x @ self.pairing_matrix @ y)

    def enclosing_face(self, gens: Iterable[int], known: Iterable[tuple[int, ...]]) -> tuple[int, ...]:
        """The unique face of the sub-graph on ``gens`` not conjugate to a ``known`` word."""
        known_keys = {_unoriented_key(self.rank, w) for w in known}
        cands = [w for _, w in self.graph.faces(gens) if _unoriented_key(self.rank, w) not in known_keys]
        if len(cands) != 1:
            raise RegistryError(f"expected one new face, found {len(cands)}")
        return cands[0]

    def sub_faces(self, gens: Iterable[int]) -> list[tuple[list[int], tuple[int, ...]]]:
        return self.graph.faces(gens)

    def face_containing(self, gens: Sequence[int], gap_slot: int) -> tuple[int, ...]:
        """Face of the sub-graph on ``gens`` whose region contains global gap ``gap_slot``."""
        k = self.graph.containing_gap(gens, gap_slot)
        for gaps, w in self.graph.faces(gens):
            if k in gaps:
                return w
        raise RegistryError("gap not found")


def _unoriented_key(rank: int, w: Sequence[int]) -> tuple[int, ...]:
    fw = FreeWord(rank, w)
    return min(conjugacy_key(fw), conjugacy_key(FreeWord(rank, tuple(-x for x in reversed(fw.letters)))))


class CurveRegistry:
    """Named curves on one surface; immutable once built."""

    def __init__(self, model: SurfaceModel):
        self.model = model
        self.surface = model.spec
        self._curves: dict[str, Curve] = {}
        self.daisy: dict[str, dict] = {}
        self._cap: np.ndarray | None = None

    # ----------------------------------------------------------- building
    def add_basic(self, name: str, letters: Sequence[int], nonseparating: bool | None = None) -> Curve:
        if name in self._curves:
            raise RegistryError(f"duplicate curve name {name!r}")
        rank = self.model.rank
        _, core = cyclic_reduce(FreeWord(rank, letters))
        if core.is_identity():
            raise RegistryError(f"curve {name!r} is null-homotopic")
        try:
            cd = self.model.graph.crossing_data(core.letters)
        except NotSimpleError as exc:
            raise RegistryError(f"curve {name!r}: {exc}") from exc
        hom = abelianize(core)
        for i in range(rank):
            e = np.zeros(rank, dtype=np.int64)
            e[i] = 1
            if cd.algebraic(i) != self.model.pairing(e, hom):
                raise RegistryError(f"crossing data of {name!r} disagrees with the pairing")
        if nonseparating is None:
            nonseparating = self.capped_nonzero(hom)
        c = Curve(name, "basic", tuple(int(v) for v in hom), core.letters, cd, nonseparating=nonseparating)
        self._curves[name] = c
        return c

    def add_alias(self, name: str, target: str) -> None:
        if name in self._curves:
            raise RegistryError(f"duplicate curve name {name!r}")
        c = self[target]
        self._curves[name] = Curve(name, c.kind, c.homology, c.word, c.crossings, c.base, c.conjugator, c.nonseparating)

    def add_derived(self, name: str, base: str, conjugator: MappingClassWord | Sequence[TwistLetter]) -> Curve:
        if name in self._curves:
            raise RegistryError(f"duplicate curve name {name!r}")
        letters = tuple(conjugator.letters if isinstance(conjugator, MappingClassWord) else conjugator)
        b = self[base]
        for x in letters:
            self._check_letter(x)
        M = homology_matrix(self, letters)
        hom = tuple(int(v) for v in M @ np.array(b.homology, dtype=np.int64))
        c = Curve(name, "derived", hom, base=base, conjugator=letters, nonseparating=b.nonseparating)
        self._curves[name] = c
        return c

    def _check_letter(self, x: TwistLetter) -> None:
        self[x.curve]
        for y in x.conj:
            self._check_letter(y)

    # ------------------------------------------------------------ lookups
    def __getitem__(self, name: str) -> Curve:
        try:
            return self._curves[name]
        except KeyError:
            raise MissingCurveError(f"curve {name!r} is not defined on {self.surface}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._curves

    def names(self) -> list[str]:
        return list(self._curves)

    def curves(self) -> list[Curve]:
        return list(self._curves.values())

    def resolve(self, name: str) -> tuple[str, tuple[TwistLetter, ...]]:
        """Chase derived entries down to a basic curve and a conjugator."""
        c = self[name]
        conj: tuple[TwistLetter, ...] = ()
        seen = set()
        while not c.is_basic:
            if c.name in seen:
                raise RegistryError(f"derived chain through {name!r} is cyclic")
            seen.add(c.name)
            conj = c.conjugator + conj
            c = self[c.base]
        return c.name, conj

    def letter_homology(self, x: TwistLetter) -> np.ndarray:
        base = np.array(self[x.curve].homology, dtype=np.int64)
        if x.conj:
            base = homology_matrix(self, x.conj) @ base
        return base

    def capped_nonzero(self, hom) -> bool:
        """Whether a class survives capping every boundary (so its curve is nonseparating)."""
        if self.surface.n < 2:
            return bool(np.any(hom))
        if self._cap is None:
            self._cap = cap_boundary(self)
        return bool(np.any(self._cap.dot(np.asarray(hom, dtype=object))))

    def is_nonseparating(self, x: TwistLetter) -> bool:
        """Certified nonseparating: image of a nonseparating curve, or nonzero capped class."""
        return self[x.curve].nonseparating or self.capped_nonzero(self.letter_homology(x))

    def boundary_word(self, i: int) -> FreeWord:
        n = self.surface.n
        if not 1 <= i <= n:
            raise IndexError(f"boundary index {i} out of range 1..{n}")
        return FreeWord(self.model.rank, self.model.boundary_words[i - 1])

    # ----------------------------------------------------------------- io
    def to_json(self) -> dict:
        from .dsl import format_word
        out = []
        for c in self._curves.values():
            d = {"name": c.name, "kind": c.kind, "homology": list(c.homology)}
            if c.is_basic:
                d["pi1_word"] = FreeWord(self.model.rank, c.word).to_string(self.model.gen_names)
                d["crossings"] = {
                    self.model.gen_names[i]: {"before": [list(p) for p in c.crossings.before[i]],
                                              "after": [list(p) for p in c.crossings.after[i]]}
                    for i in range(self.model.rank)
                    if c.crossings.before[i] or c.crossings.after[i]
                }
            else:
                d["base"] = c.base
                d["conjugator"] = format_word(MappingClassWord(self.surface, c.conjugator))
            out.append(d)
        return {
            "surface": self.surface.to_json(),
            "convention": "right-handed twists turn right; t_c(x) = x + <x,c> c on homology; "
                          "basepoint on the last boundary component",
            "generators": list(self.model.gen_names),
            "curves": out,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, ensure_ascii=False)


def load_registry(data: dict | str) -> CurveRegistry:
    """Rebuild a registry from its JSON dump, checking every stored fact."""
    from .dsl import parse_word
    if isinstance(data, str):
        data = json.loads(data)
    spec = SurfaceSpec.from_json(data["surface"])
    model = SurfaceModel(spec)
    reg = CurveRegistry(model)
    names = model.gen_names
    lookup = {nm: i + 1 for i, nm in enumerate(names)}
    for d in data["curves"]:
        if d["kind"] == "basic":
            letters = []
            text = d["pi1_word"].strip()
            if text != "1":
                for tok in text.split():
                    inv = tok.endswith("^-1")
                    nm = tok[:-3] if inv else tok
                    if nm not in lookup:
                        raise RegistryError(f"unknown generator {nm!r}")
                    letters.append(-lookup[nm] if inv else lookup[nm])
            c = reg.add_basic(d["name"], letters)
            stored = {
                nm: (tuple(tuple(p) for p in v["before"]), tuple(tuple(p) for p in v["after"]))
                for nm, v in d.get("crossings", {}).items()
            }
            for i, nm in enumerate(names):
                got = (c.crossings.before[i], c.crossings.after[i])
                if stored.get(nm, ((), ())) != got:
                    raise RegistryError(f"crossing data of {c.name!r} is inconsistent")
        else:
            conj = parse_word(d["conjugator"], spec)
            c = reg.add_derived(d["name"], d["base"], conj)
        if list(c.homology) != list(d["homology"]):
            raise RegistryError(f"homology of {d['name']!r} is inconsistent")
    return reg


# ---------------------------------------------------------------- homology

def transvection(reg: CurveRegistry, cls: np.ndarray, sign: int = 1) -> np.ndarray:
    """Matrix of ``x -> x + sign * <x, c> c``."""
    om = reg.model.pairing_matrix
    c = np.asarray(cls, dtype=np.int64)
    return np.eye(reg.model.rank, dtype=np.int64) + sign * np.outer(c, c @ om.T)


def homology_matrix(reg: CurveRegistry, letters: Sequence[TwistLetter]) -> np.ndarray:
    """Action on ``H_1`` of the product of ``letters`` (rightmost acts first)."""
    r = reg.model.rank
    M = np.eye(r, dtype=np.int64)
    for x in letters:
        M = M @ transvection(reg, reg.letter_homology(x), x.sign)
    return M


def cap_boundary(reg_or_spec, keep: int | None = None) -> np.ndarray:
    """Quotient map ``H_1(Sigma_g^n) -> H_1(Sigma_g^1)`` killing capped boundaries.

    Capping every boundary but ``keep`` kills exactly the radical of the
    pairing, so the map is the same for every ``keep``.
    """
    reg = reg_or_spec if isinstance(reg_or_spec, CurveRegistry) else standard_registry(reg_or_spec)
    spec = reg.surface
    if spec.n < 2:
        raise ValueError("capping needs at least two boundary components")
    if keep is not None and not 1 <= keep <= spec.n:
        raise IndexError(f"boundary index {keep} out of range 1..{spec.n}")
    om = reg.model.pairing_matrix
    D, U, V = intlinalg.smith_normal_form(om)
    k = len([i for i in range(min(D.shape)) if D[i, i] != 0])
    if k != 2 * spec.g or any(D[i, i] != 1 for i in range(k)):
        raise RegistryError("pairing is not unimodular modulo its radical")
    Vinv = _unimodular_inverse(V)
    return intlinalg.to_int(Vinv[:k])


def _unimodular_inverse(V) -> np.ndarray:
    from fractions import Fraction
    n = V.shape[0]
    m = [[Fraction(int(V[i, j])) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    out = np.array([[int(m[i][n + j]) for j in range(n)] for i in range(n)], dtype=object)
    return out


# ------------------------------------------------------------ the registry

_REGISTRY_CACHE: dict[SurfaceSpec, CurveRegistry] = {}


def standard_registry(spec: SurfaceSpec) -> CurveRegistry:
    """The registry of all curves the constructions use, for ``spec``."""
    if spec in _REGISTRY_CACHE:
        return _REGISTRY_CACHE[spec]

    from .daisy import add_daisy_curves
    model = SurfaceModel(spec)
    reg = CurveRegistry(model)
    g, n = spec.g, spec.n
    N = model.chain_length
    for i in range(N):
        reg.add_basic(f"c{i + 1}", (i + 1,))
    if model.rank:
        for i in range(n):
            reg.add_basic(f"delta{i + 1}", model.boundary_words[i], nonseparating=False)
    if g >= 1 and n >= 2:
        reg.add_basic("delta", model.chain_faces["delta"], nonseparating=False)
        reg.add_basic("delta'", model.chain_faces["delta'"], nonseparating=False)
        gap = _chain_delta_gap(model)
        chain = list(range(N))
        if g >= 2:
            _add_pair(reg, model, [0, 1, 2], gap, "d", "e")
            _add_pair(reg, model, [0, 1, 2, 3, 4], gap, "a", "b")
        if g >= 3:
            _add_pair(reg, model, list(range(4, N)), gap, "d'", "e'")
        del chain
    if g == 1:
        reg.add_alias("a", "c1")
        reg.add_alias("b", "c2")
        if n >= 2:
            # boundary of a neighbourhood of a and b, a separating curve
            reg.add_basic("delta_ab", model.sub_faces([0, 1])[0][1], nonseparating=False)
    _add_chain_derived(reg, N)
    add_daisy_curves(reg)

    _REGISTRY_CACHE[spec] = reg
    return reg


def _chain_delta_gap(model: SurfaceModel) -> int:
    """A global gap slot lying in the region of the chain boundary ``delta``."""
    for gaps, w in model.graph.faces(range(model.chain_length)):
        if _unoriented_key(model.rank, w) == _unoriented_key(model.rank, model.chain_faces["delta"]):
            return gaps[0]
    raise RegistryError("delta face not found")


def _add_pair(reg: CurveRegistry, model: SurfaceModel, gens: list[int], delta_gap: int, near: str, far: str) -> None:
    """Register the two boundary curves of the sub-chain ``gens``.

    ``near`` is the one facing the chain boundary ``delta``.
    """
    faces = model.sub_faces(gens)
    if len(faces) != 2:
        raise RegistryError(f"sub-chain {gens} does not have two boundary curves")
    w_near = model.face_containing(gens, delta_gap)
    w_far = next(w for _, w in faces if w != w_near)
    reg.add_basic(near, w_near)
    reg.add_basic(far, w_far)


def _add_chain_derived(reg: CurveRegistry, N: int) -> None:
    s = reg.surface
    T = lambda i, sign=1: TwistLetter(f"c{i}", sign)  # noqa: E731
    for j in range(4, N + 1):
        reg.add_derived(f"d{j}", f"c{j}", MappingClassWord(s, (T(j - 3, -1), T(j - 2, -1), T(j - 1, -1))))
        reg.add_derived(f"e{j}", f"c{j}", MappingClassWord(s, (T(j - 3), T(j - 2), T(j - 1))))
    for h in range(6, min(9, N) + 1):
        reg.add_derived(f"f{h}", f"c{h}", MappingClassWord(s, tuple(T(i) for i in range(h - 5, h))))
