import pytest
from hypothesis import given, strategies as st

from posfact.blocks import W
from posfact.relations import (CATALOG, Derivation, Relation, RelationParameterError, RewriteError, RewriteStep,
                               UnknownRelationError, apply_step, cancel_relation, catalog_grid, hurwitz_move,
                               instantiate, push_letter, replay, replay_trace, substitute, verify)
from posfact.twist import PositiveFactorization, equal
from posfact.words import MappingClassWord, SurfaceSpec, TwistLetter

S22 = SurfaceSpec(2, 2)


@pytest.mark.parametrize("name,params", [
    ("braid1", {"i": 3, "l": 1, "m": 5}),
    ("braid2", {"i": 4, "l": 2, "m": 6}),
    ("chain", {"h": 2, "g": 2}),
    ("chain", {"h": 1, "boundaries": 1}),
    ("daisy", {"p": 3}),
    ("bkm", {"m": 2}),
    ("dkp", {"m": 1}),
    ("eq_a", {"g": 3, "k": 2}),
    ("eq_H", {"n": 3, "m": 4}),
    ("eq_g2", {"n": 2, "m": 2}),
])
def test_sample_instances_verify_exactly(name, params):
    assert verify(instantiate(name, params)).exact is True


def test_grid_covers_every_catalog_entry():
    assert {name for name, _ in catalog_grid()} == set(CATALOG)


def test_bkm_degenerate_instance_is_empty():
    r = instantiate("bkm", {"m": 0})
    assert len(r.lhs) == 0 and len(r.rhs) == 0


def test_lantern_is_the_p2_daisy():
    r = instantiate("daisy", {"p": 2})
    assert [x.curve for x in r.lhs.letters] == ["delta4", "delta1", "delta2", "delta3"]
    assert len(r.rhs) == 3


@pytest.mark.parametrize("name,params,err", [
    ("bkm", {"m": -1}, RelationParameterError),
    ("daisy", {"p": 0}, RelationParameterError),
    ("braid1", {"i": 1, "l": 1, "m": 4}, RelationParameterError),
    ("bkm", {}, RelationParameterError),
    ("nope", {}, UnknownRelationError),
])
def test_bad_parameters(name, params, err):
    with pytest.raises(err):
        instantiate(name, params)


def test_relation_json_round_trip():
    r = instantiate("dkp", {"m": 2})
    back = Relation.from_json(r.dumps())
    assert back.lhs == r.lhs and back.rhs == r.rhs and back.params == r.params and back.surface == r.surface


def test_reversed_swaps_sides():
    r = instantiate("chain", {"h": 1, "g": 2})
    assert r.reversed().lhs == r.rhs and r.reversed().rhs == r.lhs


def test_hurwitz_move_formula():
    f = W(S22, 1, 2)
    moved = hurwitz_move(f, 0, "left")
    a, b = TwistLetter("c1"), TwistLetter("c2")
    assert moved.letters[0] == b
    assert equal(MappingClassWord(S22, moved.letters[1:]), W(S22, b.inverse(), a, b))


positive_words = st.lists(st.sampled_from(["c1", "c2", "c3", "c4", "c5", "d", "e"]), min_size=2, max_size=8)


@given(positive_words, st.data())
def test_hurwitz_moves_preserve_the_product_and_invert(curves, data):
    f = PositiveFactorization(W(S22, *curves))
    i = data.draw(st.integers(0, len(curves) - 2))
    left = hurwitz_move(f, i, "left")
    assert isinstance(left, PositiveFactorization)
    assert equal(left.word, f.word)
    assert equal(hurwitz_move(left, i, "right").word, f.word)


@given(positive_words, st.data())
def test_conjugation_push_preserves_the_product(curves, data):
    w = W(S22, *curves)
    i = data.draw(st.integers(0, len(w) - 1))
    j = data.draw(st.integers(0, len(w) - 1))
    assert equal(push_letter(w, i, j), w)


def test_substitute_replaces_a_matching_subword():
    r = instantiate("chain", {"h": 1, "g": 2})
    w = W(S22, "c5") * r.lhs
    out = substitute(w, 1, r)
    assert out.letters[1:] == r.rhs.letters and equal(out, w)


def test_substitute_checks_the_source_side():
    r = instantiate("chain", {"h": 1, "g": 2})
    with pytest.raises(RewriteError):
        substitute(W(S22, 1, 2, 3), 0, r)


def test_derivation_rejects_false_relations():
    bogus = Relation("bogus", {}, W(S22, 1, 2), W(S22, 2, 1), S22)
    with pytest.raises(RewriteError):
        Derivation(W(S22, 1, 2)).substitute(bogus, 0)


def test_derivation_replays_from_its_trace():
    start = W(S22, "c5", "d", "e")
    r = instantiate("chain", {"h": 1, "g": 2})
    d = Derivation(start).substitute(r).push(0, 5).apply(RewriteStep("HurwitzLeft", 2))
    d.substitute(cancel_relation(S22, TwistLetter("c1")), 0, "RtoL")
    assert replay(start, d.steps) == d.word
    assert replay_trace(d.to_json(), S22) == d.word
    assert equal(d.word, start)


def test_step_json_round_trip():
    st_ = RewriteStep("Substitute", 3, instantiate("bkm", {"m": 1}), "RtoL")
    back = RewriteStep.from_json(st_.to_json())
    assert (back.kind, back.position, back.direction) == ("Substitute", 3, "RtoL")
    assert back.relation.lhs == st_.relation.lhs


def test_conjugate_push_needs_a_target():
    with pytest.raises(RewriteError):
        apply_step(W(S22, 1, 2), RewriteStep("ConjugatePush", 0))
