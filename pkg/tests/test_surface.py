import numpy as np
import pytest

from posfact.freegroup import FreeWord, abelianize
from posfact.surface import (MissingCurveError, cap_boundary, load_registry, standard_registry)
from posfact.words import SurfaceSpec, TwistLetter

SURFACES = [SurfaceSpec(*x) for x in [(0, 3), (0, 5), (1, 1), (1, 2), (1, 4), (2, 1), (2, 2), (2, 3),
                                       (3, 2), (3, 4), (4, 4)]] + [SurfaceSpec(4, 4, 1)]


@pytest.mark.parametrize("s", SURFACES, ids=str)
def test_rank_is_euler_characteristic_count(s):
    reg = standard_registry(s)
    assert reg.model.rank == 2 * s.g + s.n - 1
    assert len(reg.model.boundary_words) == s.n


@pytest.mark.parametrize("s", SURFACES, ids=str)
def test_pairing_is_alternating_with_radical_of_boundary_rank(s):
    om = standard_registry(s).model.pairing_matrix
    assert np.array_equal(om, -om.T)
    assert np.linalg.matrix_rank(om) == 2 * s.g


@pytest.mark.parametrize("s", SURFACES, ids=str)
def test_boundary_classes_lie_in_the_radical(s):
    reg = standard_registry(s)
    om = reg.model.pairing_matrix
    for i in range(1, s.n + 1):
        assert not np.any(om @ reg[f"delta{i}"].homology)


@pytest.mark.parametrize("s", SURFACES, ids=str)
def test_basic_homology_is_abelianized_word(s):
    reg = standard_registry(s)
    for c in reg.curves():
        if c.is_basic:
            assert np.array_equal(abelianize(FreeWord(reg.model.rank, c.word)), c.homology), c.name


@pytest.mark.parametrize("s", SURFACES, ids=str)
def test_crossing_sums_match_pairing(s):
    reg = standard_registry(s)
    om = reg.model.pairing_matrix
    for c in reg.curves():
        if c.is_basic and c.crossings is not None:
            h = np.array(c.homology)
            sums = [c.crossings.algebraic(i) for i in range(reg.model.rank)]
            pair = [int(np.eye(reg.model.rank, dtype=int)[i] @ om @ h) for i in range(reg.model.rank)]
            assert sums == pair or sums == [-p for p in pair], c.name


@pytest.mark.parametrize("s", SURFACES, ids=str)
def test_derived_entries_resolve_to_basic_curves(s):
    reg = standard_registry(s)
    for name in reg.names():
        base, _ = reg.resolve(name)
        assert reg[base].is_basic


def test_chain_curves_meet_consecutively():
    reg = standard_registry(SurfaceSpec(3, 2))
    h = {i: reg[f"c{i}"].homology for i in range(1, 8)}
    for i in range(1, 8):
        for j in range(1, 8):
            p = abs(reg.model.pairing(h[i], h[j]))
            assert p == (1 if abs(i - j) == 1 else 0)


@pytest.mark.parametrize("g,n,names", [
    (1, 2, {"c1", "c2", "c3", "delta1", "delta2", "a", "b", "delta_ab"}),
    (2, 2, {"d", "e", "a", "b", "x1"}),
    (3, 2, {"d'", "e'", "f6", "f7", "d7", "e7"}),
    (4, 4, {"f9", "x3", "d9", "e9"}),
])
def test_registry_contents(g, n, names):
    assert names <= set(standard_registry(SurfaceSpec(g, n)).names())


def test_missing_curve_raises():
    with pytest.raises(MissingCurveError):
        standard_registry(SurfaceSpec(1, 1))["c5"]


@pytest.mark.parametrize("s,curve,expected", [
    (SurfaceSpec(2, 2), "c1", True),
    (SurfaceSpec(2, 2), "d", True),
    (SurfaceSpec(2, 2), "a", False),
    (SurfaceSpec(2, 2), "b", False),
    (SurfaceSpec(2, 2), "delta1", False),
    (SurfaceSpec(1, 2), "delta_ab", False),
    (SurfaceSpec(0, 4), "x1", False),
    (SurfaceSpec(3, 2), "f6", True),
])
def test_nonseparating_certification(s, curve, expected):
    assert standard_registry(s).is_nonseparating(TwistLetter(curve)) is expected


def test_conjugated_nonseparating_curve_stays_certified():
    reg = standard_registry(SurfaceSpec(2, 2))
    x = TwistLetter("c1").conjugated((TwistLetter("c2"), TwistLetter("a", -1)))
    assert reg.is_nonseparating(x)


@pytest.mark.parametrize("s", [SurfaceSpec(1, 3), SurfaceSpec(2, 2), SurfaceSpec(3, 4)], ids=str)
def test_capping_kills_boundaries_and_preserves_the_closed_pairing(s):
    reg = standard_registry(s)
    cap = cap_boundary(reg)
    assert cap.shape == (2 * s.g, reg.model.rank)
    for i in range(1, s.n + 1):
        assert not np.any(cap.dot(np.asarray(reg[f"delta{i}"].homology, dtype=object)))
    assert np.array_equal(cap, cap_boundary(reg, keep=1))


def test_cap_needs_two_boundaries():
    with pytest.raises(ValueError):
        cap_boundary(SurfaceSpec(2, 1))


@pytest.mark.parametrize("s", [SurfaceSpec(1, 2), SurfaceSpec(2, 3)], ids=str)
def test_registry_json_round_trip(s):
    reg = standard_registry(s)
    back = load_registry(reg.dumps())
    assert back.names() == reg.names()
    for name in reg.names():
        assert back[name].homology == reg[name].homology


def test_invalid_surfaces_rejected():
    with pytest.raises(ValueError):
        SurfaceSpec(1, 0)
    with pytest.raises(ValueError):
        SurfaceSpec(0, 3, split=1)
