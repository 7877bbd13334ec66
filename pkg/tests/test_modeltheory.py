import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedmt.algebra import make_godel_chain, make_lukasiewicz_chain
from gradedmt.errors import NotAChain, SignatureMismatch
from gradedmt.generate import add_twin, random_structure
from gradedmt.grid import Grid, enumeration_values
from gradedmt.modeltheory import (
    _first_disagreement,
    _first_disagreement_layers,
    ModelChain,
    attained_values,
    check_elementary,
    check_substructure,
    check_union_preservation,
    eldiag,
    is_elementary_substructure,
    is_exhaustive,
    is_substructure,
    theory_of,
    union_of_chain,
)
from gradedmt.semantics import Structure, eval_formula
from gradedmt.syntax import Quant, Signature, enumerate_layers, enumerate_sentences, parse_formula, to_text

f = parse_formula
UNARY = Signature((("P", 1), ("Q", 1)))


class TestSubstructure:
    def test_restriction(self, two_point):
        assert is_substructure(two_point.restrict(["a"]), two_point)

    def test_atomic_disagreement(self, G3, two_point):
        S1 = Structure(G3, ("a",), {"P": {("a",): 0}})
        r = check_substructure(S1, two_point)
        assert not r.ok and not r.atoms_agree

    def test_reflexive(self, two_point):
        assert is_substructure(two_point, two_point)

    def test_signature_mismatch(self, G3, two_point):
        with pytest.raises(SignatureMismatch):
            is_substructure(Structure(G3, ("a",), {"Q": {("a",): 0}}), two_point)

    def test_subalgebra(self):
        G2, G3 = make_godel_chain(2), make_godel_chain(3)
        small = Structure(G2, ("a",), {"P": {("a",): 1}})
        big = Structure(G3, ("a", "b"), {"P": {("a",): 2, ("b",): 1}})
        r = check_substructure(small, big)
        assert r.ok and r.embedding == (0, 2)
        wide = Structure(G3, ("a",), {"P": {("a",): 1}})
        narrow = Structure(G2, ("a",), {"P": {("a",): 1}})
        assert not check_substructure(wide, narrow).subalgebra

    def test_functions(self, G3):
        big = Structure(G3, ("a", "b"), {"P": {("a",): 0, ("b",): 1}}, {"f": {("a",): "a", ("b",): "a"}})
        assert is_substructure(big.restrict(["a"]), big)
        bad = Structure(G3, ("a",), {"P": {("a",): 0}}, {"f": {("a",): "a"}})
        other = Structure(G3, ("a", "b"), {"P": {("a",): 0, ("b",): 1}}, {"f": {("a",): "b", ("b",): "a"}})
        assert not check_substructure(bad, other).functions_agree

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10**9))
    def test_transitive(self, seed):
        rng = random.Random(seed)
        S = random_structure(rng, make_lukasiewicz_chain(3), UNARY, ("a", "b", "c"))
        assert is_substructure(S.restrict(["a"]), S.restrict(["a", "b"]))
        assert is_substructure(S.restrict(["a", "b"]), S)
        assert is_substructure(S.restrict(["a"]), S)


class TestElementary:
    def test_restriction_not_elementary(self, two_point):
        r = check_elementary(two_point.restrict(["a"]), two_point, 1)
        assert not r.ok
        assert r.counterexample.formula == f("exists x. P(x)")
        assert (r.counterexample.small_value, r.counterexample.big_value) == (1, 2)

    def test_reflexive(self, two_point):
        assert is_elementary_substructure(two_point, two_point, 2)

    def test_twins(self, G3):
        big = Structure(G3, ("a", "b"), {"P": {("a",): 1, ("b",): 1}})
        assert is_elementary_substructure(big.restrict(["a"]), big, 2)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10**9))
    def test_twin_extension_is_elementary(self, seed):
        rng = random.Random(seed)
        S = random_structure(rng, make_lukasiewicz_chain(4), Signature((("P", 1), ("R", 2))), ("a", "b"))
        big = add_twin(S, rng.choice(S.domain), "t")
        assert is_elementary_substructure(S, big, 1)


class TestUnion:
    def test_identical_links(self, two_point):
        assert union_of_chain(ModelChain((two_point, two_point))) == two_point

    def test_nested(self, two_point):
        assert union_of_chain(ModelChain((two_point.restrict(["a"]), two_point))) == two_point

    def test_growing_algebra(self):
        G2, G3 = make_godel_chain(2), make_godel_chain(3)
        small = Structure(G2, ("a",), {"P": {("a",): 1}})
        big = Structure(G3, ("a", "b"), {"P": {("a",): 2, ("b",): 1}})
        U = union_of_chain(ModelChain((small, big)))
        assert U.chain == G3 and U.preds["P"] == {("a",): 2, ("b",): 1}

    def test_not_a_chain(self, G3, two_point):
        other = Structure(G3, ("a",), {"P": {("a",): 0}})
        with pytest.raises(NotAChain):
            union_of_chain(ModelChain((other, two_point)))
        with pytest.raises(NotAChain):
            ModelChain(())

    def test_preservation_identical(self, two_point):
        r = check_union_preservation(ModelChain((two_point,) * 3), 2)
        assert r.ok and r.precondition

    def test_preservation_twins(self, G3):
        S0 = Structure(G3, ("a", "b"), {"P": {("a",): 1, ("b",): 2}})
        S1 = add_twin(S0, "a", "c")
        S2 = add_twin(S1, "b", "d")
        r = check_union_preservation(ModelChain((S0, S1, S2)), 2)
        assert r.precondition and r.ok

    def test_preservation_counterexample(self, two_point):
        r = check_union_preservation(ModelChain((two_point.restrict(["a"]), two_point)), 2)
        assert not r.precondition and not r.ok
        assert isinstance(r.counterexample.formula, Quant)
        assert r.counterexample.formula == f("exists x. P(x)")


class TestTheory:
    def test_single_element(self, G3):
        S = Structure(G3, ("a",), {"P": {("a",): 2}})
        th, co = theory_of(S, ["a"], 1)
        for s in ("P(@a)", "exists x. P(x)", "forall x. P(x)"):
            assert f(s) in th
        assert f("bot") in co and f("0") in co

    def test_no_parameters(self, two_point):
        th, co = theory_of(two_point, [], 0)
        assert th == [f("1"), f("top")]
        assert co == [f("0"), f("bot")]

    def test_eldiag(self, two_point):
        assert eldiag(two_point, 1) == theory_of(two_point, two_point.domain, 1)

    def test_partition(self, two_point):
        th, co = theory_of(two_point, ["a"], 1)
        everything = enumerate_sentences(two_point.signature, 1, ["@a"])
        assert set(th).isdisjoint(co) and set(th) | set(co) == set(everything)
        assert len(th) + len(co) == len(everything)
        for phi in th:
            assert eval_formula(two_point, {}, phi) >= 2
        for phi in co:
            assert eval_formula(two_point, {}, phi) < 2

    def test_unknown_parameter(self, two_point):
        with pytest.raises(ValueError):
            theory_of(two_point, ["z"], 0)


class TestExhaustive:
    def test_godel(self, G3):
        assert is_exhaustive(Structure(G3, ("a",), {"P": {("a",): 1}}), 0)

    def test_boolean_values_in_lukasiewicz(self):
        L5 = make_lukasiewicz_chain(5)
        S = Structure(L5, ("a", "b"), {"P": {("a",): 0, ("b",): 4}})
        for d in range(3):
            assert attained_values(S, d) <= {0, 4}
            assert not is_exhaustive(S, d)

    def test_two_element_chain(self):
        B = make_lukasiewicz_chain(2)
        assert is_exhaustive(Structure(B, ("a",), {"P": {("a",): 0}}), 0)

    def test_lukasiewicz_generator(self):
        L5 = make_lukasiewicz_chain(5)
        S = Structure(L5, ("a",), {"P": {("a",): 1}})
        assert not is_exhaustive(S, 0)
        assert is_exhaustive(S, 2)


def test_counterexample_text(two_point):
    r = check_elementary(two_point.restrict(["a"]), two_point, 1)
    assert str(r.counterexample) == "exists x. P(x): 1 vs 2"
    assert to_text(r.counterexample.formula) == "exists x. P(x)"


class TestLayerEvaluator:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_enumeration_values_match_grid(self, seed):
        rng = random.Random(seed)
        chain = rng.choice([make_godel_chain(3), make_lukasiewicz_chain(4)])
        S = random_structure(rng, chain, UNARY, ("a", "b"))
        vars = ("x", "y")
        enum = enumerate_layers(UNARY, 2, vars)
        layers = enumeration_values(S, enum, vars)
        g = Grid.for_structure(S, vars)
        sample = rng.sample(range(len(enum)), 200)
        flat = [f for layer in enum.layers for f in layer]
        stacked = np.concatenate(layers)
        for i in sample:
            want = np.broadcast_to(g.values(flat[i])[0][0], (2, 2)).ravel()
            assert (stacked[i] == want).all(), to_text(flat[i])

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_layer_disagreement_matches_per_formula(self, seed):
        rng = random.Random(seed)
        G3 = make_godel_chain(3)
        big = random_structure(rng, G3, UNARY, ("a", "b", "c"))
        small = big.restrict(["a", "b"])
        vars = ("x", "y")
        enum = enumerate_layers(UNARY, 2, vars)
        fast = _first_disagreement_layers(small, big, enum, vars, (0, 1, 2))
        slow = _first_disagreement(small, big, list(enum), vars, (0, 1, 2))
        assert fast == slow
