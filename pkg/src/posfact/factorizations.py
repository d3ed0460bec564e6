"""Long positive factorizations of boundary multitwists, built as replayable derivations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import blocks as B
from .blocks import W
from .relations import (Derivation, Relation, RelationParameterError, RewriteError, cancel_relation,
                        instantiate, prop1_prefix, verify)
from .surface import standard_registry
from .twist import PositiveFactorization, verify_equal
from .words import MappingClassWord, SurfaceSpec, TwistLetter


class HypothesisError(RewriteError):
    """The hypothesis of the boundary inflation does not hold."""


class ConstructionError(RuntimeError):
    """A generated word failed verification; this is a bug, not bad input."""


@dataclass
class GeneratedFactorization:
    construction: str
    params: dict
    factorization: PositiveFactorization
    target: MappingClassWord
    trace: dict | None = None
    notes: dict = field(default_factory=dict)

    @property
    def word(self) -> MappingClassWord:
        return self.factorization.word

    @property
    def surface(self) -> SurfaceSpec:
        return self.word.surface

    def __len__(self) -> int:
        return len(self.word)

    def to_json(self) -> dict:
        from .dsl import format_word
        letters = []
        for x in self.word.letters:
            d = {"curve": x.curve}
            if x.conj:
                d["conjugator"] = format_word(MappingClassWord(self.surface, x.conj))
            letters.append(d)
        out = {
            "construction": self.construction,
            "params": dict(self.params),
            "surface": self.surface.to_json(),
            "target": format_word(self.target),
            "length": len(self.word),
            "letters": letters,
        }
        if self.notes:
            out["notes"] = dict(self.notes)
        if self.trace is not None:
            out["trace"] = self.trace
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, ensure_ascii=False)


def letters_from_json(data: dict) -> MappingClassWord:
    from .dsl import parse_word
    s = SurfaceSpec.from_json(data["surface"])
    out = []
    for d in data["letters"]:
        conj = parse_word(d["conjugator"], s).letters if d.get("conjugator") else ()
        out.append(TwistLetter(d["curve"], int(d.get("sign", 1)), tuple(conj)))
    return MappingClassWord(s, tuple(out))


def load_factorization(data: dict | str) -> tuple[MappingClassWord, MappingClassWord | None]:
    """``(word, target)`` from a factorization file."""
    from .dsl import parse_word
    if isinstance(data, str):
        data = json.loads(data)
    w = letters_from_json(data)
    target = parse_word(data["target"], w.surface) if data.get("target") else None
    return w, target


def _finish(name: str, params: dict, word: MappingClassWord, target: MappingClassWord,
            trace: Derivation | None, **notes) -> GeneratedFactorization:
    rep = verify_equal(target, word, "exact")
    if rep.exact is not True:
        raise ConstructionError(f"{name}{params}: generated word does not realize the target")
    f = PositiveFactorization(word)
    return GeneratedFactorization(name, params, f, target, trace.to_json() if trace else None, notes)


def _boundary(s: SurfaceSpec, idx) -> MappingClassWord:
    return W(s, *[f"delta{i}" for i in idx])


# --------------------------------------------------------- boundary inflation

def daisy_side(s: SurfaceSpec, side: str = "delta") -> dict:
    reg = standard_registry(s)
    try:
        return reg.daisy[side]
    except KeyError:
        raise RelationParameterError(f"no daisy curves on the {side} side of {s}") from None


def boundary_inflate(U: MappingClassWord, T: MappingClassWord, l: int, s: SurfaceSpec,
                     side: str = "delta", hypothesis: Relation | None = None) -> Relation:
    """From ``U t_beta = T t_alpha^(l-1) t_alpha'`` conclude ``U t_delta_1..t_delta_l = T t_x_1..t_x_l``.

    The returned relation carries the replayable proof: insert ``t_beta t_beta^-1``,
    substitute the hypothesis, slide the central petals next to ``t_alpha^(l-1)``,
    substitute the daisy relation and cancel ``t_beta``.
    """
    info = daisy_side(s, side)
    if len(info["petals"]) != l:
        raise RelationParameterError(f"the {side} side of {s} has {len(info['petals'])} petals, not {l}")
    alpha, alpha2, beta = info["alpha"], info["alpha'"], info["beta"]
    petals = W(s, *info["petals"])
    xs = W(s, *info["x"])
    if hypothesis is None:
        hypothesis = Relation("sections1_hypothesis", {"l": l}, U * W(s, beta),
                              T * W(s, *[alpha] * (l - 1), alpha2), s)
    rep = verify(hypothesis)
    if rep.exact is not True:
        raise HypothesisError(f"hypothesis U t_{beta} = T t_{alpha}^{l - 1} t_{alpha2} fails on {s}")
    daisy = Relation("daisy", {"p": l - 1, "side": side}, W(s, *[alpha] * (l - 1)) * petals * W(s, alpha2),
                     xs * W(s, beta), s)
    bt = TwistLetter(beta)
    d = Derivation(U * petals)
    u = len(U)
    d.substitute(cancel_relation(s, bt), u, "RtoL")
    d.substitute(hypothesis, 0)
    t = len(T)
    for j in range(l):
        d.push(t + l - 1 + 2 + j, t + l - 1 + j)
    d.substitute(daisy, t)
    d.substitute(cancel_relation(s, bt), len(d.word) - 2)
    rel = Relation("sections1", {"l": l, "side": side}, U * petals, d.word, s)
    if rel.rhs.letters != (T * xs).letters:
        raise ConstructionError("boundary inflation replay disagrees with T x_1..x_l")
    rel.trace = d.to_json()  # type: ignore[attr-defined]
    return rel


# ------------------------------------------------------------- theorem 2

def _thm2_pre(g: int, n: int, m: int) -> None:
    if g < 2 or n < 2:
        raise RelationParameterError(f"theorem 2 needs g >= 2 and n >= 2, got g={g}, n={n}")
    if not m > 2 * (n - 2) + 2:
        raise RelationParameterError(f"theorem 2 needs m > 2(n-2)+2, got m={m}, n={n}")


def thm2_hypothesis(g: int, n: int, m: int) -> tuple[Relation, MappingClassWord, MappingClassWord]:
    """``(U t_delta = T t_d^(n-2) t_alpha', U, T)`` derived from the chain, DKP and (H) relations."""
    s = SurfaceSpec(g, n)
    dn = f"delta{n}"
    eq_h = instantiate("eq_H", {"n": n, "m": m}, s)
    if g == 2:
        a2 = "c5"
        d = Derivation(W(s, dn, 4, "delta"))
        d.push(2, 0)
        dkp = Relation("dkp", {"m": m}, W(s, "delta", dn, 4), B.D9(s) * B.phi12m(s, m) * B.T10m(s, m), s)
        d.substitute(dkp, 0)
        d.substitute(eq_h, 21)
        d.push(8, len(d.word) - 1)        # t_c5 to the end, priming what it passes
    else:
        a2 = "d'"
        C = B.chain_product(s, 1, 2 * g + 1)
        d = Derivation(W(s, dn, "d'", "delta"))
        d.push(2, 0)
        chain = Relation("chain", {"h": g}, W(s, "delta", dn), C ** (2 * g + 2), s)
        split = Relation("chain_split", {"g": g}, C ** (2 * g + 2), B.H(s, 5) ** 6 * W(s, 4) * B.P_block(s, g), s)
        ab = instantiate("chain", {"h": 2}, s)
        d.substitute(chain, 0).substitute(split, 0).substitute(ab, 0, "RtoL")
        d.substitute(instantiate("dkp", {"m": m}, s), 0)
        d.substitute(eq_h, 21)
        # t_d^(n-2) t_e^(n-2) P t_d'  ->  t_e^(n-2) P' t_d^(n-2) t_d'
        o = 21 + len(eq_h.rhs) - 2 * (n - 2)
        p_len = 4 * g * g + 6 * g - 29
        for j in range(n - 2):
            d.push(o + (n - 2) + j, o + j)
        for j in range(n - 2):
            d.push(o + 2 * (n - 2) - 1 - j, o + 2 * (n - 2) - 1 - j + p_len)
    # t_d^(n-2) t_e^(n-2) -> t_e^(n-2) t_d^(n-2) (g = 2 branch)
    if g == 2:
        o = len(d.word) - 1 - 2 * (n - 2)
        for j in range(n - 2):
            d.push(o + (n - 2) + j, o + j)
    L = d.word.letters
    k = len(L) - (n - 2) - 1
    T = MappingClassWord(s, L[:k])
    U = W(s, dn, 4 if g == 2 else "d'")
    rel = Relation("thm2_hypothesis", {"g": g, "n": n, "m": m}, U * W(s, "delta"), d.word, s)
    if d.word.letters[k:] != W(s, *["d"] * (n - 2), a2).letters:
        raise ConstructionError("hypothesis derivation did not end in t_d^(n-2) t_alpha'")
    rel.trace = d.to_json()  # type: ignore[attr-defined]
    return rel, U, T


def gen_theorem2(g: int, n: int, m: int) -> GeneratedFactorization:
    """Positive factorization of ``t_delta_1..t_delta_n t_a`` (``a = c4`` for g = 2, ``d'`` otherwise)."""
    _thm2_pre(g, n, m)
    s = SurfaceSpec(g, n)
    hyp, U, T = thm2_hypothesis(g, n, m)
    conclusion = boundary_inflate(U, T, n - 1, s, "delta", hypothesis=hyp)
    a = "c4" if g == 2 else "d'"
    target = _boundary(s, range(1, n + 1)) * W(s, a)
    d = Derivation(target)
    d.push(n - 1, 0).push(n, 1)
    d.substitute(conclusion, 0)
    expected = 10 * m - 10 * n + 41 if g == 2 else 4 * g * g + 6 * g + 13 + 10 * m - 10 * n
    if len(d.word) != expected:
        raise ConstructionError(f"theorem 2 length {len(d.word)} != {expected}")
    return _finish("thm2", {"g": g, "n": n, "m": m}, d.word, target, d,
                   hypothesis_trace=hyp.trace, inflation_trace=conclusion.trace)  # type: ignore[attr-defined]


# ------------------------------------------------------------- theorem 3

def swap_map(s: SurfaceSpec) -> MappingClassWord:
    """Psi_1 (g = 2, swaps c1 and c4) or Psi_2 (g >= 3, swaps c1 and d')."""
    return B.Psi1(s) if s.g == 2 else B.Psi2(s)


def _split_k(k: int) -> tuple[int, int]:
    """``k = 2q + 3 eps`` with ``eps`` in {0, 1}."""
    return (k // 2, 0) if k % 2 == 0 else ((k - 3) // 2, 1)


def _cancel_all(d: Derivation) -> None:
    s = d.word.surface
    while True:
        L = d.word.letters
        neg = [i for i, x in enumerate(L) if x.sign < 0]
        if not neg:
            return
        i = neg[0]
        if i == 0 or L[i - 1] != L[i].inverse():
            raise ConstructionError("cancelling pair not adjacent")
        d.substitute(cancel_relation(s, L[i - 1]), i - 1)


def _thm3_small(g: int, n: int, k: int, m: int) -> Derivation:
    """k = 2, 3: ``Delta^k t_a^(k-1) t_c1 = (Q t_c1^2 R)^(k-1) (Q' t_a^2 R')``, then cancel."""
    s = SurfaceSpec(g, n)
    w = gen_theorem2(g, n, m).word
    a = TwistLetter("c4" if g == 2 else "d'")
    t1 = TwistLetter("c1")
    q = (8 if g == 2 else 9) + 12 + (10 * m - 12 * n + 22)
    if w.letters[q:q + 2] != (t1, t1):
        raise ConstructionError("t_c1^2 not where theorem 2 puts it")
    delta = _boundary(s, range(1, n + 1))
    nd = len(delta)
    rel_a = Relation("thm2", {"g": g, "n": n, "m": m}, delta * W(s, a), w, s)
    psi = swap_map(s).letters
    swapped = (B.conj_word(MappingClassWord(s, w.letters[:q]), psi) * W(s, a, a)
               * B.conj_word(MappingClassWord(s, w.letters[q + 2:]), psi))
    rel_1 = Relation("thm2_swapped", {"g": g, "n": n, "m": m}, delta * W(s, t1), swapped, s)

    d = Derivation(delta ** k)
    for j in range(k - 1):
        d.substitute(cancel_relation(s, a), (j + 1) * nd + 2 * j, "RtoL")
    d.substitute(cancel_relation(s, t1), len(d.word), "RtoL")
    # inverse letters to the far right: a^-1 .. a^-1 c1^-1
    for _ in range(k):
        i = next(i for i, x in enumerate(d.word.letters) if x.sign < 0)
        d.push(i, len(d.word) - 1)
    # (Delta a)^(k-1) (Delta c1) -> blocks
    off = 0
    for _ in range(k - 1):
        d.substitute(rel_a, off)
        off += len(w)
    d.substitute(rel_1, off)
    end = off + len(swapped)
    # one t_c1 from the first block, then t_a^(k-1) from the last, up against the inverses
    d.push(q + 1, end - 1)
    last = off - 1
    for j in range(k - 1):
        d.push(last + q + 1 - j, end - 1)
    _cancel_all(d)
    return d


def gen_theorem3(g: int, n: int, k: int, m: int) -> GeneratedFactorization:
    """Positive factorization of ``(t_delta_1..t_delta_n)^k``; k >= 4 concatenates k = 2 and k = 3 words."""
    _thm2_pre(g, n, m)
    if k < 2:
        raise RelationParameterError(f"theorem 3 needs k >= 2, got k={k}")
    s = SurfaceSpec(g, n)
    delta = _boundary(s, range(1, n + 1))
    params = {"g": g, "n": n, "k": k, "m": m}
    if k in (2, 3):
        d = _thm3_small(g, n, k, m)
        return _finish("thm3", params, d.word, delta ** k, d)
    q, eps = _split_k(k)
    two = _thm3_small(g, n, 2, m).word
    d = Derivation(delta ** k)
    r2 = Relation("thm3", {"g": g, "n": n, "k": 2, "m": m}, delta ** 2, two, s)
    for j in range(q):
        d.substitute(r2, j * len(two))
    if eps:
        three = _thm3_small(g, n, 3, m).word
        r3 = Relation("thm3", {"g": g, "n": n, "k": 3, "m": m}, delta ** 3, three, s)
        d.substitute(r3, q * len(two))
    return _finish("thm3", params, d.word, delta ** k, d)


# ------------------------------------------------------------- theorem 1

def _push_block_right(d: Derivation, start: int, size: int, end: int) -> None:
    """Move ``size`` letters at ``start`` so they end at ``end`` (inclusive), keeping their order."""
    for j in range(size):
        d.push(start + size - 1 - j, end - j)


def gen_theorem1(g: int, m: int) -> GeneratedFactorization:
    """Positive factorization of ``t_delta_1 .. t_delta_(2g-4)`` in Gamma_g^(2g-4)."""
    if g < 4:
        raise RelationParameterError(f"theorem 1 is constructed for g >= 4 (g = 3 is not spelled out), got g={g}")
    if m < 1:
        raise RelationParameterError(f"theorem 1 needs m >= 1, got m={m}")
    n = 2 * g - 4
    s = SurfaceSpec(g, n, g - 3)
    X = prop1_prefix(s, g)
    x = len(X)
    l = g - 2
    # prop1 with the e-side twists moved in front of the d-side ones
    d1 = Derivation(W(s, "delta'", "delta"))
    d1.push(1, 0)
    d1.substitute(instantiate("prop1", {"g": g}, s), 0)
    for j in range(l):
        d1.push(x + l + j, x + j)
    h1 = Relation("prop1_reordered", {"g": g}, W(s, "delta'", "delta"), d1.word, s)
    T1 = MappingClassWord(s, d1.word.letters[:x + l])
    c1 = boundary_inflate(W(s, "delta'"), T1, l, s, "delta", hypothesis=h1)
    # second side
    petals1 = _boundary(s, range(1, l + 1))
    d2 = Derivation(petals1 * W(s, "delta'"))
    d2.push(l, 0)
    d2.substitute(c1, 0)
    _push_block_right(d2, x, l, x + 2 * l - 1)
    h2 = Relation("sections1_second", {"g": g}, petals1 * W(s, "delta'"), d2.word, s)
    T2 = MappingClassWord(s, d2.word.letters[:x + l])
    c2 = boundary_inflate(petals1, T2, l, s, "delta'", hypothesis=h2)
    # main derivation: Delta -> K4 H5^4 I J L16 h3^2 Z W -> K4' (L16 H5^4) I J h3'^2 Z' W'
    target = _boundary(s, range(1, n + 1))
    d = Derivation(target)
    d.substitute(c2, 0)
    p = 4 + 20 + (2 * g - 8) + (2 * g - 6)
    _push_block_right(d, p, 16, len(d.word) - 1)
    A = MappingClassWord(s, d.word.letters[:-16])
    L16 = MappingClassWord(s, d.word.letters[-16:])
    rot = Relation("central_rotation", {"g": g}, A * L16, L16 * A, s)
    d.substitute(rot, 0)
    _push_block_right(d, 0, 16, 19)
    d.substitute(instantiate("long1", {"g": g, "m": m}, s), 4)
    audited = 6 * g + 18
    if len(d.word) != audited + 10 * m:
        raise ConstructionError(f"theorem 1 length {len(d.word)} != {audited + 10 * m}")
    return _finish("thm1", {"g": g, "m": m}, d.word, target, d,
                   audited_constant=audited, paper_constant=6 * g + 2,
                   discrepancy="displayed blocks total 6g+18+10m; the stated count is 6g+2+10m")


# ------------------------------------------------------------ baselines

def gen_chain_pencil(g: int) -> GeneratedFactorization:
    """``t_delta_1 t_delta_2 = (t_c1 .. t_c(2g+1))^(2g+2)`` in Gamma_g^2."""
    if g < 1:
        raise RelationParameterError(f"chain pencil needs g >= 1, got g={g}")
    s = SurfaceSpec(g, 2)
    target = W(s, "delta1", "delta2")
    rel = Relation("chain", {"h": g}, target, B.chain_product(s, 1, 2 * g + 1) ** (2 * g + 2), s)
    d = Derivation(target).substitute(rel, 0)
    return _finish("chain", {"g": g}, d.word, target, d)


def gen_elliptic(k: int) -> GeneratedFactorization:
    """``t_delta^k = ((t_a t_b)^6)^k`` in Gamma_1^1."""
    if k < 1:
        raise RelationParameterError(f"elliptic needs k >= 1, got k={k}")
    s = SurfaceSpec(1, 1)
    target = W(s, *["delta1"] * k)
    rel = instantiate("chain", {"h": 1, "boundaries": 1}, s)
    d = Derivation(target)
    for j in range(k):
        d.substitute(rel, 12 * j)
    return _finish("elliptic", {"k": k}, d.word, target, d)


CONSTRUCTIONS = {
    "thm1": (gen_theorem1, ("g", "m")),
    "thm2": (gen_theorem2, ("g", "n", "m")),
    "thm3": (gen_theorem3, ("g", "n", "k", "m")),
    "chain": (gen_chain_pencil, ("g",)),
    "elliptic": (gen_elliptic, ("k",)),
}


def generate(construction: str, **params) -> GeneratedFactorization:
    try:
        fn, names = CONSTRUCTIONS[construction]
    except KeyError:
        raise RelationParameterError(f"unknown construction {construction!r}") from None
    missing = [k for k in names if params.get(k) is None]
    if missing:
        raise RelationParameterError(f"{construction} needs {', '.join('--' + k for k in missing)}")
    return fn(**{k: int(params[k]) for k in names})
