"""Named relations, their instantiation, and product-preserving rewriting."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from . import blocks as B
from .blocks import W, c
from .surface import standard_registry
from .twist import PositiveFactorization, engine_for, verify_equal
from .words import MappingClassWord, SurfaceSpec, TwistLetter


class RelationParameterError(ValueError):
    """Parameters outside a relation's validity range."""


class UnknownRelationError(KeyError):
    pass


class RewriteError(ValueError):
    pass


@dataclass
class Relation:
    name: str
    params: dict
    lhs: MappingClassWord
    rhs: MappingClassWord
    surface: SurfaceSpec

    def __post_init__(self):
        if self.lhs.surface != self.surface or self.rhs.surface != self.surface:
            raise ValueError("relation sides live on a different surface")

    def reversed(self) -> "Relation":
        return Relation(self.name, dict(self.params), self.rhs, self.lhs, self.surface)

    def verify(self, level: str = "exact"):
        return verify(self, level)

    def to_json(self) -> dict:
        from .dsl import format_word
        return {
            "name": self.name,
            "surface": self.surface.to_json(),
            "params": dict(self.params),
            "lhs": format_word(self.lhs),
            "rhs": format_word(self.rhs),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: dict | str) -> "Relation":
        from .dsl import parse_word
        if isinstance(data, str):
            data = json.loads(data)
        s = SurfaceSpec.from_json(data["surface"])
        return cls(data.get("name", "relation"), dict(data.get("params", {})),
                   parse_word(data["lhs"], s), parse_word(data["rhs"], s), s)


# ---------------------------------------------------------------- catalog

def _g(s: SurfaceSpec, need: int, what: str) -> None:
    if s.g < need:
        raise RelationParameterError(f"{what} needs genus >= {need}, surface is {s}")


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise RelationParameterError(msg)


def _braid1(s, i: int, l: int, m: int):
    _need(1 <= l and l + 1 <= i <= m - 1, f"need 1 <= l, l+1 <= i <= m-1 (got i={i}, l={l}, m={m})")
    _need(m <= 2 * s.g + 1, f"chain too short on {s} for m={m}")
    desc = B.chain_product(s, m, l)
    return W(s, i - 1) * desc, desc * W(s, i)


def _braid2(s, i: int, l: int, m: int):
    _need(1 <= l and l + 1 <= i <= m - 1, f"need 1 <= l, l+1 <= i <= m-1 (got i={i}, l={l}, m={m})")
    _need(m <= 2 * s.g + 1, f"chain too short on {s} for m={m}")
    asc = B.chain_product(s, l, m)
    return asc * W(s, i - 1), W(s, i) * asc


def _chain_names(s: SurfaceSpec, start: int, h: int) -> tuple[str, str]:
    last = start + 2 * h
    N = 2 * s.g + 1 if s.n >= 2 else 2 * s.g
    if start == 1 and last == N and s.n >= 2:
        return "delta", "delta'"
    if start == 1 and h == 1 and s.g >= 2:
        return "d", "e"
    if start == 1 and h == 2 and s.g >= 2:
        return "a", "b"
    if start == 5 and last == N and s.g >= 3:
        return "d'", "e'"
    raise RelationParameterError(f"no registered boundary curves for the chain c{start}..c{last} on {s}")


def _chain(s, h: int, boundaries: int = 2, start: int = 1):
    _need(h >= 1, "chain needs h >= 1")
    if boundaries == 1:
        _need(s.n == 1 and s.g == h and start == 1, f"one-boundary chain relation needs Sigma_{h}^1")
        return W(s, "delta1"), B.chain_product(s, 1, 2 * h) ** (4 * h + 2)
    _need(boundaries == 2, "boundaries must be 1 or 2")
    b1, b2 = _chain_names(s, start, h)
    return W(s, b1, b2), B.chain_product(s, start, start + 2 * h) ** (2 * h + 2)


def _daisy(s, p: int):
    _need(p >= 1, "daisy needs p >= 1")
    _need(s.g == 0 and s.n == p + 2, f"daisy with p={p} lives on Sigma_0^{p + 2}")
    centre = f"delta{p + 2}"
    lhs = W(s, *[centre] * (p - 1), *[f"delta{i}" for i in range(1, p + 2)])
    return lhs, W(s, *[f"x{i}" for i in range(1, p + 2)])


def _m(m: int) -> None:
    _need(m >= 0, f"m must be >= 0, got {m}")


def _bkm(s, m: int):
    # C_m = [phi12, t_c3^-m t_e^m] with [x, y] = x^-1 y^-1 x y
    _m(m)
    _g(s, 2, "bkm")
    phi = B.phi12(s)
    b = W(s, *[c(3, -1)] * m, *["e"] * m)
    lhs = (phi.inverse() * b.inverse() * phi * b).free_reduced()
    return lhs, B.T10m(s, m)


def _bkm_split(s, m: int):
    _m(m)
    _g(s, 2, "bkm_split")
    return B.phi12(s), B.phi12m(s, m) * B.T10m(s, m)


def _dkp(s, m: int):
    _m(m)
    _g(s, 2, "dkp")
    return W(s, "a", "b", 4), B.D9(s) * B.phi12m(s, m) * B.T10m(s, m)


def _eq_a(s, g: int, k: int):
    _need(s.g == g and s.n >= 2, f"eq_a lives on Sigma_{g}^n with n >= 2")
    _need(1 <= k <= 2 * g - 2, f"eq_a needs 1 <= k <= 2g-2, got k={k}")
    lhs = W(s, *[(i + 3, i + 2, i + 1, i) for i in range(k, 2 * g - 1)])
    rhs = W(s, (k + 2, k + 1, k)) ** (2 * g - 1 - k) * W(s, *[f"d{j}" for j in range(k + 3, 2 * g + 2)])
    return lhs, rhs


def _eq_b(s, g: int, k: int):
    _need(s.g == g and s.n >= 2, f"eq_b lives on Sigma_{g}^n with n >= 2")
    _need(1 <= k <= 2 * g - 2, f"eq_b needs 1 <= k <= 2g-2, got k={k}")
    lhs = W(s, *[(i, i + 1, i + 2, i + 3) for i in range(2 * g - 2, k - 1, -1)])
    rhs = W(s, *[f"e{j}" for j in range(2 * g + 1, k + 2, -1)]) * W(s, (k, k + 1, k + 2)) ** (2 * g - 1 - k)
    return lhs, rhs


def _g4(s, g: int, what: str) -> None:
    _need(g >= 4, f"{what} needs g >= 4, got g={g}")
    _need(s.g == g and s.n >= 2, f"{what} lives on Sigma_{g}^n with n >= 2")


def _eq_c(s, g: int):
    _g4(s, g, "eq_c")
    lhs = W(s, *[tuple(range(i, i + 6)) for i in range(4, 0, -1)])
    return lhs, B.K4(s) * B.H(s, 5) ** 4


def _lem1(s, g: int):
    _g4(s, g, "lem1")
    C = B.chain_product(s, 1, 2 * g + 1)
    return C ** 4, B.H(s, 3) ** 4 * B.Hbar(s, 3) ** (2 * g - 8) * B.K4(s) * B.H(s, 5) ** 4 * B.I_block(s, g)


def _lem2(s, g: int):
    _g4(s, g, "lem2")
    C = B.chain_product(s, 1, 2 * g + 1)
    return C ** (2 * g - 2), B.J_block(s, g) * B.L16(s) * B.H(s, 3) ** (2 * g - 6) * W(s, "d'", "e'")


def prop1_prefix(s: SurfaceSpec, g: int) -> MappingClassWord:
    h3 = B.H(s, 3) if g % 2 == 0 else B.Hbar(s, 3)
    return B.K4(s) * B.H(s, 5) ** 4 * B.I_block(s, g) * B.J_block(s, g) * B.L16(s) * h3 ** 2


def _prop1(s, g: int):
    _g4(s, g, "prop1")
    tail = W(s, *["d"] * (g - 3), "d'", *["e"] * (g - 3), "e'")
    return W(s, "delta", "delta'"), prop1_prefix(s, g) * tail


def _long1(s, g: int, m: int):
    _g4(s, g, "long1")
    _m(m)
    return B.L16(s) * B.H(s, 5) ** 4, B.phi12m(s, m) * B.T10m(s, m) * B.M9(s) * W(s, 5, 3, 4, 2, 3)


def _h_pre(n: int, m: int) -> None:
    _need(n >= 2, f"n must be >= 2, got {n}")
    _need(2 * m > 4 * (n - 2) + 2, f"need 2m > 4(n-2)+2, got m={m}, n={n}")


def _eq_H(s, n: int, m: int):
    _h_pre(n, m)
    _g(s, 2, "eq_H")
    return B.T10m(s, m), B.O_block(s, m, n) * W(s, 1, 1, *["d"] * (n - 2), *["e"] * (n - 2))


def g2_core(s: SurfaceSpec, n: int, m: int) -> MappingClassWord:
    """``D_8 phi'_12,m O' t_c1^2 t_e^(n-2)`` with primes meaning conjugation by ``t_c5``."""
    t5 = (c(5),)
    return (B.D8(s) * B.conj_word(B.phi12m(s, m), t5) * B.conj_word(B.O_block(s, m, n), t5)
            * W(s, 1, 1, *["e"] * (n - 2)))


def _eq_g2(s, n: int, m: int):
    _h_pre(n, m)
    _need(s.g == 2 and s.n == n and s.split == 0, f"eq_g2 lives on Sigma_2^{n}")
    lhs = W(s, *[f"delta{i}" for i in range(1, n + 1)], 4)
    return lhs, g2_core(s, n, m) * W(s, *[f"x{i}" for i in range(1, n)])


def r3_core(s: SurfaceSpec, g: int, n: int, m: int) -> MappingClassWord:
    """``D_9 phi_12,m O t_c1^2 t_e^(n-2) P'`` with ``P' = t_d^(n-2) P t_d^-(n-2)``."""
    p = B.conj_word(B.P_block(s, g), (B.T("d"),) * (n - 2))
    return B.D9(s) * B.phi12m(s, m) * B.O_block(s, m, n) * W(s, 1, 1, *["e"] * (n - 2)) * p


def _r_pre(s, g: int, n: int, m: int, what: str) -> None:
    _h_pre(n, m)
    _need(g >= 3, f"{what} needs g >= 3")
    _need(s.g == g and s.n == n and s.split == 0, f"{what} lives on Sigma_{g}^{n}")


def _eq_r3(s, g: int, n: int, m: int):
    _r_pre(s, g, n, m, "eq_r3")
    return W(s, "delta", f"delta{n}"), r3_core(s, g, n, m) * W(s, *["d"] * (n - 2))


def _eq_r4(s, g: int, n: int, m: int):
    _r_pre(s, g, n, m, "eq_r4")
    lhs = W(s, *[f"delta{i}" for i in range(1, n + 1)], "d'")
    return lhs, r3_core(s, g, n, m) * W(s, *[f"x{i}" for i in range(1, n)])


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    build: Callable
    params: tuple[str, ...]
    default_surface: Callable[[dict], SurfaceSpec]
    grid: Callable[[], Iterator[dict]]
    description: str
    optional: dict = field(default_factory=dict)


def _gn(p: dict) -> SurfaceSpec:
    return SurfaceSpec(p["g"], 2)


def _braid_grid() -> Iterator[dict]:
    for m in range(3, 10):
        for l in range(1, m - 1):
            for i in range(l + 1, m):
                yield {"i": i, "l": l, "m": m}


def _chain_surface(p: dict) -> SurfaceSpec:
    if p.get("boundaries", 2) == 1:
        return SurfaceSpec(p["h"], 1)
    if "g" in p:
        return SurfaceSpec(p["g"], 2)
    return SurfaceSpec(max(2, p["h"]) if p.get("start", 1) == 1 else p["h"] + 2, 2)


def _chain_grid() -> Iterator[dict]:
    for g in (2, 3):
        for h in (1, 2):
            yield {"h": h, "g": g}
    for g in range(1, 5):
        yield {"h": g, "g": g}
    for g in range(3, 6):
        yield {"h": g - 2, "start": 5, "g": g}
    for h in (1, 2):
        yield {"h": h, "boundaries": 1}


def _m_grid() -> Iterator[dict]:
    for m in range(1, 6):
        yield {"m": m}


def _hn_grid() -> Iterator[dict]:
    for n in (2, 3, 4):
        for m in range(1, 6):
            if 2 * m > 4 * (n - 2) + 2:
                yield {"n": n, "m": m}


def _r_grid() -> Iterator[dict]:
    for g in range(3, 7):
        for n in (2, 3):
            for m in range(1, 6):
                if 2 * m > 4 * (n - 2) + 2:
                    yield {"g": g, "n": n, "m": m}


CATALOG: dict[str, CatalogEntry] = {e.name: e for e in [
    CatalogEntry("braid1", _braid1, ("i", "l", "m"),
                 lambda p: SurfaceSpec(max(1, (p["m"]) // 2), 2), _braid_grid,
                 "t_c(i-1) . t_cm ... t_cl = t_cm ... t_cl . t_ci"),
    CatalogEntry("braid2", _braid2, ("i", "l", "m"),
                 lambda p: SurfaceSpec(max(1, (p["m"]) // 2), 2), _braid_grid,
                 "t_cl ... t_cm . t_c(i-1) = t_ci . t_cl ... t_cm"),
    CatalogEntry("chain", _chain, ("h",), _chain_surface, _chain_grid,
                 "boundary twists of a chain neighbourhood = power of the chain product",
                 {"boundaries": 2, "start": 1}),
    CatalogEntry("daisy", _daisy, ("p",), lambda p: SurfaceSpec(0, p["p"] + 2),
                 lambda: ({"p": p} for p in range(1, 7)),
                 "t_d0^(p-1) t_d1 ... t_d(p+1) = t_x1 ... t_x(p+1)"),
    CatalogEntry("bkm", _bkm, ("m",), lambda p: SurfaceSpec(2, 2),
                 lambda: ({"m": m} for m in range(0, 6)),
                 "[phi12, t_c3^-m t_e^m] = T_10m with [x, y] = x^-1 y^-1 x y"),
    CatalogEntry("bkm_split", _bkm_split, ("m",), lambda p: SurfaceSpec(2, 2),
                 lambda: ({"m": m} for m in range(0, 6)), "phi12 = phi12,m T_10m"),
    CatalogEntry("dkp", _dkp, ("m",), lambda p: SurfaceSpec(2, 2), _m_grid,
                 "t_a t_b t_c4 = D_9 phi12,m T_10m"),
    CatalogEntry("eq_a", _eq_a, ("g", "k"), _gn,
                 lambda: ({"g": g, "k": k} for g in range(2, 5) for k in range(1, 2 * g - 1)),
                 "prod_{i=k}^{2g-2} t_c(i+3) t_c(i+2) t_c(i+1) t_ci = (t_c(k+2) t_c(k+1) t_ck)^(2g-1-k) t_d(k+3) ... t_d(2g+1)"),
    CatalogEntry("eq_b", _eq_b, ("g", "k"), _gn,
                 lambda: ({"g": g, "k": k} for g in range(2, 5) for k in range(1, 2 * g - 1)),
                 "prod_{i=2g-2}^{k} t_ci ... t_c(i+3) = t_e(2g+1) ... t_e(k+3) (t_ck t_c(k+1) t_c(k+2))^(2g-1-k)"),
    CatalogEntry("eq_c", _eq_c, ("g",), _gn, lambda: ({"g": g} for g in range(4, 7)),
                 "prod_{i=4}^{1} t_ci ... t_c(i+5) = K_4 (t_c1 ... t_c5)^4"),
    CatalogEntry("lem1", _lem1, ("g",), _gn, lambda: ({"g": g} for g in range(4, 7)),
                 "(t_c1 ... t_c(2g+1))^4 = H_3^4 Hbar_3^(2g-8) K_4 H_5^4 I"),
    CatalogEntry("lem2", _lem2, ("g",), _gn, lambda: ({"g": g} for g in range(4, 7)),
                 "(t_c1 ... t_c(2g+1))^(2g-2) = J L_16 H_3^(2g-6) t_d' t_e'"),
    CatalogEntry("prop1", _prop1, ("g",), _gn, lambda: ({"g": g} for g in range(4, 7)),
                 "t_delta t_delta' = K_4 H_5^4 I J L_16 H_3^2 t_d^(g-3) t_d' t_e^(g-3) t_e'"),
    CatalogEntry("long1", _long1, ("g", "m"), _gn,
                 lambda: ({"g": g, "m": m} for g in range(4, 7) for m in range(1, 6)),
                 "L_16 H_5^4 = phi12,m T_10m M_9 t_c5 t_c3 t_c4 t_c2 t_c3"),
    CatalogEntry("eq_H", _eq_H, ("n", "m"), lambda p: SurfaceSpec(2, 2), _hn_grid,
                 "T_10m = O t_c1^2 t_d^(n-2) t_e^(n-2)"),
    CatalogEntry("eq_g2", _eq_g2, ("n", "m"), lambda p: SurfaceSpec(2, p["n"]), _hn_grid,
                 "t_delta1 ... t_deltan t_c4 = D_8 phi'12,m O' t_c1^2 t_e^(n-2) x_1 ... x_(n-1)"),
    CatalogEntry("eq_r3", _eq_r3, ("g", "n", "m"), lambda p: SurfaceSpec(p["g"], p["n"]), _r_grid,
                 "t_delta t_deltan = D_9 phi12,m O t_c1^2 t_e^(n-2) P' t_d^(n-2)"),
    CatalogEntry("eq_r4", _eq_r4, ("g", "n", "m"), lambda p: SurfaceSpec(p["g"], p["n"]), _r_grid,
                 "t_delta1 ... t_deltan t_d' = D_9 phi12,m O t_c1^2 t_e^(n-2) P' x_1 ... x_(n-1)"),
]}


def catalog() -> list[CatalogEntry]:
    return list(CATALOG.values())


def catalog_grid() -> Iterator[tuple[str, dict]]:
    """Every (name, params) pair of the verification grid."""
    for e in CATALOG.values():
        for p in e.grid():
            yield e.name, p


def instantiate(name: str, params: dict | None = None, s: SurfaceSpec | None = None) -> Relation:
    try:
        e = CATALOG[name]
    except KeyError:
        raise UnknownRelationError(f"unknown relation {name!r}; known: {', '.join(CATALOG)}") from None
    params = dict(params or {})
    missing = [k for k in e.params if k not in params]
    if s is not None and "g" in missing:
        params["g"] = s.g
        missing.remove("g")
    if missing:
        raise RelationParameterError(f"{name} needs parameters {', '.join(missing)}")
    if s is None:
        s = e.default_surface(params)
    args = {k: int(params[k]) for k in e.params}
    for k, default in e.optional.items():
        if k in params:
            args[k] = int(params[k])
    lhs, rhs = e.build(s, **args)
    return Relation(name, params, lhs, rhs, s)


def verify(r: Relation, level: str = "exact"):
    return verify_equal(r.lhs, r.rhs, level)


# --------------------------------------------------------------- rewriting

@dataclass(frozen=True)
class RewriteStep:
    kind: str
    position: int
    relation: Relation | None = field(default=None, compare=False)
    direction: str | None = None
    target: int | None = None

    KINDS = ("HurwitzLeft", "HurwitzRight", "Substitute", "ConjugatePush")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown rewrite kind {self.kind!r}")

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind, "position": self.position}
        if self.direction is not None:
            d["direction"] = self.direction
        if self.target is not None:
            d["target"] = self.target
        if self.relation is not None:
            d["relation"] = self.relation.to_json()
        return d

    @classmethod
    def from_json(cls, d: dict) -> "RewriteStep":
        rel = Relation.from_json(d["relation"]) if "relation" in d else None
        return cls(d["kind"], int(d["position"]), rel, d.get("direction"), d.get("target"))


def _commute(s: SurfaceSpec, x: TwistLetter, y: TwistLetter) -> bool:
    reg = standard_registry(s)
    # curves with nonzero algebraic intersection never have commuting twists
    if reg.model.pairing(reg.letter_homology(x), reg.letter_homology(y)):
        return False
    e = engine_for(reg)
    a, b = e.letter(x), e.letter(y)
    from .freegroup import compose
    return compose(a, b) == compose(b, a)


def tidy_letter(s: SurfaceSpec, x: TwistLetter) -> TwistLetter:
    """Drop conjugator letters adjacent to the base curve whose twists fix it."""
    conj = list(x.conj)
    base = TwistLetter(x.curve)
    while conj and _commute(s, conj[-1], base):
        conj.pop()
    return TwistLetter(x.curve, x.sign, tuple(conj))


def _conjugate(s: SurfaceSpec, x: TwistLetter, by: TwistLetter) -> TwistLetter:
    if _commute(s, x.__class__(x.curve, 1, x.conj), by):
        return x
    # flat conjugators keep repeated moves from nesting letters inside letters
    return tidy_letter(s, x.conjugated(by.expand()))


def push_letter(w: MappingClassWord, i: int, target: int) -> MappingClassWord:
    """Move letter ``i`` to index ``target``; the letters it passes are conjugated so the product is kept."""
    L = list(w.letters)
    if not (0 <= i < len(L) and 0 <= target < len(L)):
        raise IndexError(f"index out of range for a word of length {len(L)}")
    s = w.surface
    x = L[i]
    if target > i:
        # x Z = (x Z x^-1) x
        mid = [_conjugate(s, y, x) for y in L[i + 1:target + 1]]
        L[i:target + 1] = mid + [x]
    elif target < i:
        # Z x = x (x^-1 Z x)
        mid = [_conjugate(s, y, x.inverse()) for y in L[target:i]]
        L[target:i + 1] = [x] + mid
    return MappingClassWord(s, tuple(L))


class LetterTable:
    """Shortest known letter for each curve met so far.

    Curves are identified by the unoriented conjugacy class of their
    ``pi_1`` word, so two letters with different conjugators but the same
    twist share one entry.
    """

    def __init__(self, surface: SurfaceSpec):
        self.surface = surface
        self.registry = standard_registry(surface)
        self._best: dict[tuple[int, ...], TwistLetter] = {}

    def curve_key(self, x: TwistLetter) -> tuple[int, ...]:
        from .freegroup import FreeWord, conjugacy_key, invert
        base, conj = self.registry.resolve(x.curve)
        w = FreeWord(self.registry.model.rank, self.registry[base].word)
        conj = x.conj + conj
        if conj:
            w = engine_for(self.registry).product(conj)(w)
        return min(conjugacy_key(w), conjugacy_key(invert(w)))

    def shortest(self, x: TwistLetter) -> TwistLetter:
        key = self.curve_key(x)
        plain = TwistLetter(x.curve, 1, x.conj)
        best = self._best.get(key)
        if best is None or len(plain.expand()) < len(best.expand()):
            self._best[key] = best = plain
        return TwistLetter(best.curve, x.sign, best.conj)


def _find(hay: Sequence, needle: Sequence, at: int) -> bool:
    return tuple(hay[at:at + len(needle)]) == tuple(needle)


def apply_step(w: MappingClassWord, step: RewriteStep) -> MappingClassWord:
    if step.kind == "HurwitzLeft":
        return push_letter(w, step.position + 1, step.position)
    if step.kind == "HurwitzRight":
        return push_letter(w, step.position, step.position + 1)
    if step.kind == "ConjugatePush":
        if step.target is None:
            raise RewriteError("ConjugatePush needs a target index")
        return push_letter(w, step.position, step.target)
    r = step.relation
    if r is None:
        raise RewriteError("Substitute needs a relation")
    if r.surface != w.surface:
        raise RewriteError(f"relation on {r.surface}, word on {w.surface}")
    src, dst = (r.lhs, r.rhs) if step.direction in (None, "LtoR") else (r.rhs, r.lhs)
    if not 0 <= step.position <= len(w) or not _find(w.letters, src.letters, step.position):
        raise RewriteError(f"{r.name}: source side does not occur at index {step.position}")
    L = w.letters
    return MappingClassWord(w.surface, L[:step.position] + dst.letters + L[step.position + len(src):])


def _positive(f, w: MappingClassWord):
    if isinstance(f, PositiveFactorization):
        return PositiveFactorization(w, f.nonseparating_only)
    return w


def hurwitz_move(f, i: int, dir: str = "left"):
    """``(t_a, t_b) -> (t_b, t_{t_b^-1(a)})`` at ``i, i+1`` (``left``) or its inverse (``right``)."""
    w = f.word if isinstance(f, PositiveFactorization) else f
    if not 0 <= i < len(w) - 1:
        raise IndexError(f"Hurwitz move at {i} needs indices {i}, {i + 1} in 0..{len(w) - 1}")
    kind = {"left": "HurwitzLeft", "right": "HurwitzRight"}[dir]
    return _positive(f, apply_step(w, RewriteStep(kind, i)))


def substitute(f, at: int, r: Relation, dir: str = "LtoR"):
    w = f.word if isinstance(f, PositiveFactorization) else f
    return _positive(f, apply_step(w, RewriteStep("Substitute", at, r, dir)))


def cancel_relation(s: SurfaceSpec, x: TwistLetter) -> Relation:
    """``x x^-1 = 1``; read right to left it inserts a cancelling pair."""
    return Relation("cancel", {}, MappingClassWord(s, (x, x.inverse())), MappingClassWord(s, ()), s)


class Derivation:
    """A word built by recorded rewrite steps, each checked against the relations it uses."""

    def __init__(self, start: MappingClassWord, check: bool = True):
        self.start = start
        self.word = start
        self.steps: list[RewriteStep] = []
        self.check = check
        self._verified: set[int] = set()

    def apply(self, step: RewriteStep) -> "Derivation":
        if step.kind == "Substitute" and self.check and id(step.relation) not in self._verified:
            rep = verify(step.relation)
            if rep.exact is not True:
                raise RewriteError(f"relation {step.relation.name} does not verify")
            self._verified.add(id(step.relation))
        self.word = apply_step(self.word, step)
        self.steps.append(step)
        return self

    def substitute(self, r: Relation, at: int | None = None, direction: str = "LtoR") -> "Derivation":
        if at is None:
            at = self.find((r.lhs if direction == "LtoR" else r.rhs).letters)
        return self.apply(RewriteStep("Substitute", at, r, direction))

    def push(self, i: int, target: int) -> "Derivation":
        if i != target:
            self.apply(RewriteStep("ConjugatePush", i, target=target))
        return self

    def find(self, needle: Sequence[TwistLetter], start: int = 0) -> int:
        L = self.word.letters
        for k in range(start, len(L) - len(needle) + 1):
            if _find(L, needle, k):
                return k
        raise RewriteError("subword not found")

    def to_json(self) -> dict:
        from .dsl import format_word
        return {"start": format_word(self.start), "steps": [s.to_json() for s in self.steps]}


def replay(start: MappingClassWord, steps: Sequence[RewriteStep]) -> MappingClassWord:
    w = start
    for st in steps:
        w = apply_step(w, st)
    return w


def replay_trace(trace: dict, surface: SurfaceSpec) -> MappingClassWord:
    from .dsl import parse_word
    start = parse_word(trace["start"], surface)
    return replay(start, [RewriteStep.from_json(d) for d in trace["steps"]])


def verify_catalog(level: str = "exact", names: Sequence[str] | None = None) -> list[tuple[str, dict, object]]:
    out = []
    for name, p in catalog_grid():
        if names and name not in names:
            continue
        t0 = time.perf_counter()
        rep = verify(instantiate(name, p), level)
        rep.seconds = time.perf_counter() - t0
        out.append((name, p, rep))
    return out
