import math
import random

import pytest
from hypothesis import given, strategies as st

from posfact.blocks import W
from posfact.factorizations import gen_chain_pencil, gen_elliptic, gen_theorem1, gen_theorem2, gen_theorem3
from posfact.invariants import (MINUS_INF, PLUS_INF, UNSPECIFIED, BoundNotAvailableError, LengthValue,
                                NotBoundaryMultitwistError, OracleDomainError, abelianized_bound,
                                fibration_invariants, image_descriptor, length_oracle, multitwist_witness,
                                power_oracle)
from posfact.relations import hurwitz_move
from posfact.twist import PositiveFactorization, equal
from posfact.words import MappingClassWord, SurfaceSpec, TwistLetter


def theorem_a(g, n):
    """The piecewise length formula, branch by branch."""
    finite = {1: 12, 2: 40}.get(g, 6 * g + 18 if g <= 6 else 8 * g + 4)
    if g == 1:
        return -math.inf if n > 9 else finite
    if n > 4 * g + 4:
        return -math.inf
    return math.inf if n <= 2 * g - 4 else finite


@pytest.mark.parametrize("g", range(1, 11))
def test_length_oracle_matches_formula(g):
    for n in range(1, 51):
        assert length_oracle(g, n).as_number() == theorem_a(g, n), (g, n)


@pytest.mark.parametrize("g,n,expected", [
    (2, 1, LengthValue.finite(40)), (5, 3, PLUS_INF), (1, 10, MINUS_INF), (1, 9, LengthValue.finite(12)),
    (3, 16, LengthValue.finite(36)), (3, 17, MINUS_INF), (7, 11, LengthValue.finite(60)), (0, 4, MINUS_INF),
])
def test_length_oracle_values(g, n, expected):
    assert length_oracle(g, n) == expected


def test_length_oracle_domain():
    with pytest.raises(OracleDomainError):
        length_oracle(2, 0)


@pytest.mark.parametrize("g,n,k,expected", [
    (1, 9, 3, LengthValue.finite(36)), (3, 1, 2, PLUS_INF), (2, 1, -1, MINUS_INF), (2, 1, 0, LengthValue.finite(0)),
    (1, 10, 2, UNSPECIFIED), (1, 10, 1, MINUS_INF),
])
def test_power_oracle(g, n, k, expected):
    assert power_oracle(g, n, k) == expected


@given(st.integers(1, 10), st.integers(1, 50))
def test_power_one_is_the_length_oracle(g, n):
    assert power_oracle(g, n, 1) == length_oracle(g, n)


def test_length_value_rendering():
    assert str(PLUS_INF) == "+inf" and str(UNSPECIFIED) == "unspecified-by-paper"
    assert LengthValue.finite(7).to_json() == 7
    with pytest.raises(ValueError):
        LengthValue.finite(-1)


@pytest.mark.parametrize("g,n,text", [(1, 3, "N u {-inf}"), (2, 1, "N u {-inf} u {+inf}"), (0, 2, "N u {-inf}"),
                                      (0, 1, "{0}")])
def test_image_descriptor(g, n, text):
    assert str(image_descriptor(g, n)) == text


@pytest.mark.parametrize("s", [SurfaceSpec(1, 3), SurfaceSpec(2, 1)], ids=str)
@pytest.mark.parametrize("k", [0, 1, 5])
def test_multitwist_witnesses(s, k):
    f = multitwist_witness(s, k)
    assert len(f) == k and image_descriptor(s.g, s.n).contains(LengthValue.finite(k))


def test_elliptic_surface_invariants():
    inv = fibration_invariants(gen_elliptic(1))
    assert (inv.euler, inv.h1_rank, inv.h1_torsion, inv.length) == (12, 0, (), 12)


def test_empty_factorization_of_the_identity():
    s = SurfaceSpec(3, 2)
    inv = fibration_invariants(PositiveFactorization(MappingClassWord(s, ())), MappingClassWord(s, ()))
    assert inv.euler == 4 - 12 and inv.h1_rank == 6


def test_homologically_nontrivial_product_rejected():
    s = SurfaceSpec(1, 1)
    with pytest.raises(NotBoundaryMultitwistError):
        fibration_invariants(PositiveFactorization(W(s, 1, 1)))


def test_doubled_classes_give_torsion():
    from posfact.invariants import capped_classes
    from posfact import intlinalg
    s = SurfaceSpec(1, 1)
    M = capped_classes(W(s, 1, 2))
    assert intlinalg.cokernel(M) == (0, [])
    assert intlinalg.cokernel(2 * M) == (0, [2, 2])


@pytest.mark.parametrize("gen", [lambda: gen_theorem1(4, 1), lambda: gen_theorem3(2, 2, 2, 3),
                                 lambda: gen_chain_pencil(2)])
def test_euler_count(gen):
    f = gen()
    inv = fibration_invariants(f)
    assert inv.euler == 4 - 4 * f.surface.g + len(f)


def test_theorem1_euler_from_the_generated_word():
    inv = fibration_invariants(gen_theorem1(4, 1))
    assert inv.euler == 4 - 16 + 52


def test_non_multitwist_target_rejected():
    with pytest.raises(NotBoundaryMultitwistError):
        fibration_invariants(gen_theorem2(2, 2, 3))


def test_wrong_target_rejected():
    s = SurfaceSpec(1, 1)
    with pytest.raises(NotBoundaryMultitwistError):
        fibration_invariants(PositiveFactorization(W(s, *[1, 2] * 6)), W(s, "delta1", "delta1"))


@pytest.mark.parametrize("seed", range(3))
def test_invariants_constant_on_hurwitz_orbit(seed):
    rnd = random.Random(seed)
    f = gen_chain_pencil(1)
    base = fibration_invariants(f)
    pf = f.factorization
    for _ in range(20):
        pf = hurwitz_move(pf, rnd.randrange(len(pf) - 1), rnd.choice(["left", "right"]))
    assert fibration_invariants(pf, f.target) == base


@pytest.mark.parametrize("s,letters,expected", [
    (SurfaceSpec(1, 1), ["delta1"], 12),
    (SurfaceSpec(1, 1), [], 0),
    (SurfaceSpec(1, 2), ["c1", "c2"] * 6, 12),
    (SurfaceSpec(1, 2), ["delta_ab"], 12),
    (SurfaceSpec(1, 2), ["delta1", "delta2"], 12),
    (SurfaceSpec(1, 5), [f"delta{i}" for i in range(1, 6)], 12),
    (SurfaceSpec(0, 4), ["delta1", "delta2", "delta3", "delta4"], 6),
    (SurfaceSpec(0, 4), ["x1", "x2", "x3"], 6),
])
def test_abelianized_bound(s, letters, expected):
    assert abelianized_bound(W(s, *letters)) == expected


@given(st.lists(st.tuples(st.sampled_from(["c1", "c2", "c3", "delta1", "delta_ab"]), st.sampled_from([1, -1])),
                max_size=10),
       st.lists(st.tuples(st.sampled_from(["c1", "c2", "c3", "delta2"]), st.sampled_from([1, -1])), max_size=10))
def test_torus_bound_is_a_homomorphism(u, v):
    s = SurfaceSpec(1, 2)
    wu = MappingClassWord(s, tuple(TwistLetter(c, e) for c, e in u))
    wv = MappingClassWord(s, tuple(TwistLetter(c, e) for c, e in v))
    assert abelianized_bound(wu * wv) == abelianized_bound(wu) + abelianized_bound(wv)
    if equal(wu, wv):
        assert abelianized_bound(wu) == abelianized_bound(wv)


def test_bound_refused_in_higher_genus():
    with pytest.raises(BoundNotAvailableError):
        abelianized_bound(W(SurfaceSpec(2, 1), 1))
