import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedmt.errors import BoundsExhausted, NotAType
from gradedmt.generate import random_structure
from gradedmt.modeltheory import eldiag, is_substructure, theory_of
from gradedmt.structure import SearchSpace, Structure, eval_formula
from gradedmt.syntax import Signature, free_variables, parse_formula, to_text
from gradedmt.tableaux import Tableau
from gradedmt.types import (
    TypePair,
    find_realizer,
    is_saturated,
    is_type_of_tableau,
    jointly_satisfies,
    realize_by_reduction,
    realized_type,
    realizes,
    saturate_step,
)

f = parse_formula
UNARY_P = Signature((("P", 1),))


def TP(p=(), p_prime=(), params=()):
    return TypePair(tuple(f(x) for x in p), tuple(f(x) for x in p_prime), "x", params)


def brute_models(chain, sig, max_domain, params=()):
    """Every structure on e0..e{m-1} with each ``@param`` interpreted in every way."""
    for m in range(1, max_domain + 1):
        dom = tuple(f"e{i}" for i in range(m))
        cells = [(p, k) for p, ar in sig.predicates for k in itertools.product(dom, repeat=ar)]
        for values in itertools.product(range(chain.size), repeat=len(cells)):
            preds = {p: {} for p, _ in sig.predicates}
            for (p, k), v in zip(cells, values):
                preds[p][k] = v
            for consts in itertools.product(dom, repeat=len(params)):
                funcs = {"@" + c: {(): e} for c, e in zip(params, consts)}
                yield Structure(chain, dom, preds, funcs)


def brute_type_check(chain, sig, max_domain, left, right, params=()):
    for S in brute_models(chain, sig, max_domain, params):
        one = S.chain.one
        for e in S.domain:
            v = {"x": e}
            if all(eval_formula(S, v, g) >= one for g in left) and all(eval_formula(S, v, g) < one for g in right):
                return True
    return False


class TestTypePair:
    def test_dedup_and_size(self):
        t = TP(["P(x)", "P(x)"], ["Q(x)"])
        assert t.size == 2 and t.p == (f("P(x)"),)

    def test_rejects_other_free_variables(self):
        with pytest.raises(ValueError):
            TP(["P(y)"])

    def test_as_tableau(self):
        t = TP(["P(x)"], ["Q(x)"])
        assert t.as_tableau() == Tableau((f("P(x)"),), (f("Q(x)"),))


class TestIsType:
    def test_examples(self, G3):
        space = SearchSpace((G3,), 1)
        assert is_type_of_tableau(space, Tableau(), TP(["P(x)"]))
        assert not is_type_of_tableau(space, Tableau(), TP(["P(x)"], ["P(x)"]))
        assert not is_type_of_tableau(space, Tableau((f("forall x. P(x)"),)), TP([], ["P(x)"]))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_brute_force(self, seed):
        from gradedmt.algebra import make_godel_chain
        from gradedmt.generate import random_formula

        G3 = make_godel_chain(3)
        rng = random.Random(seed)
        sig = Signature((("P", 1), ("Q", 1)))
        left = [random_formula(rng, sig, 2, ("x",)) for _ in range(rng.randint(0, 2))]
        right = [random_formula(rng, sig, 2, ("x",)) for _ in range(rng.randint(0, 2))]
        t = TypePair(tuple(left), tuple(right))
        space = SearchSpace((G3,), 2)
        want = brute_type_check(G3, sig, 2, left, right)
        assert is_type_of_tableau(space, Tableau(), t, sig=sig) == want


class TestRealizedType:
    def test_example(self, G3):
        S = Structure(G3, ("a",), {"P": {("a",): 2}})
        t = realized_type(S, (), "a", 0)
        assert {f("P(x)"), f("1"), f("top")} <= set(t.p)
        assert {f("0"), f("bot")} <= set(t.p_prime)

    def test_bottom_row_has_no_atoms(self, G3):
        S = Structure(G3, ("a", "b"), {"P": {("a",): 0, ("b",): 2}, "Q": {("a",): 0, ("b",): 1}})
        t = realized_type(S, (), "a", 0)
        assert not any(phi.__class__.__name__ == "Atom" for phi in t.p)

    @pytest.mark.parametrize("depth", [0, 1, 2])
    def test_identical_rows_identical_types(self, G3, depth):
        S = Structure(G3, ("a", "b", "c"), {"P": {("a",): 1, ("b",): 1, ("c",): 2}})
        assert realized_type(S, (), "a", depth) == realized_type(S, (), "b", depth)

    def test_partition_by_direct_evaluation(self, G3, two_point):
        t = realized_type(two_point, ("b",), "a", 1)
        assert realizes(two_point, "a", t)
        for phi in t.p:
            assert eval_formula(two_point, {"x": "a"}, phi) >= G3.one
        for phi in t.p_prime:
            assert eval_formula(two_point, {"x": "a"}, phi) < G3.one

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10**6))
    def test_realized_type_is_a_type(self, seed):
        from gradedmt.algebra import make_godel_chain

        G3 = make_godel_chain(3)
        rng = random.Random(seed)
        S = random_structure(rng, G3, UNARY_P, ("a", "b"))
        D = tuple(rng.sample(S.domain, rng.randint(0, 1)))
        m = rng.choice(S.domain)
        t = realized_type(S, D, m, 1)
        th, co = theory_of(S, D, 1)
        space = SearchSpace((G3,), 2)
        assert is_type_of_tableau(space, Tableau(tuple(th), tuple(co)), t)


class TestRealizer:
    @pytest.fixture
    def S(self, G3):
        return Structure(G3, ("a", "b"), {"P": {("a",): 2, ("b",): 2}, "Q": {("a",): 2, ("b",): 0}})

    def test_examples(self, S):
        assert find_realizer(S, TP(["P(x)"], ["Q(x)"])) == "b"
        assert find_realizer(S, TP()) == "a"
        assert find_realizer(S, TP(["bot"])) is None

    def test_parameters(self, S):
        assert find_realizer(S, TP(["Q(x) -> Q(@b)"], [], ("b",))) == "b"

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_direct_evaluation(self, seed):
        from gradedmt.algebra import make_lukasiewicz_chain
        from gradedmt.generate import random_formula

        rng = random.Random(seed)
        L4 = make_lukasiewicz_chain(4)
        sig = Signature((("P", 1), ("Q", 1)))
        S = random_structure(rng, L4, sig, ("a", "b", "c"))
        p = [random_formula(rng, sig, 2, ("x",)) for _ in range(rng.randint(0, 2))]
        q = [random_formula(rng, sig, 2, ("x",)) for _ in range(rng.randint(0, 2))]
        t = TypePair(tuple(p), tuple(q))
        direct = next((m for m in S.domain if realizes(S, m, t)), None)
        assert find_realizer(S, t) == direct


class TestSaturation:
    def test_unsaturated_example(self, G3):
        S = Structure(G3, ("a",), {"P": {("a",): 0}})
        r = is_saturated(S, 1, 1, SearchSpace((G3,), 2))
        assert not r.saturated
        assert r.parameters == ()
        assert r.witness.p == () and r.witness.p_prime == (f("P(x) -> 0"),)
        assert r.depth == 1 and r.type_size_cap == 4

    def test_depth_zero_top(self, G3):
        # depth-0 sentences say nothing about P, so a non-designated P-row is a type
        S = Structure(G3, ("a",), {"P": {("a",): 2}})
        r = is_saturated(S, 1, 0, SearchSpace((G3,), 2))
        assert not r.saturated and r.witness == TP([], ["P(x)"])
        assert r.candidates_checked == 1

    def test_rich_structure_saturated(self, G3):
        S = Structure(G3, ("a", "b", "c"), {"P": {("a",): 0, ("b",): 1, ("c",): 2}})
        r = is_saturated(S, 5, 1, SearchSpace((G3,), 2), type_size_cap=2)
        assert r.saturated and r.witness is None and r.candidates_checked > 0

    def test_kappa_positive(self, G3, two_point):
        with pytest.raises(ValueError):
            is_saturated(two_point, 0, 1, SearchSpace((G3,), 1))

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10**6))
    def test_witness_is_unrealized_type(self, seed):
        from gradedmt.algebra import make_godel_chain

        G3 = make_godel_chain(3)
        rng = random.Random(seed)
        S = random_structure(rng, G3, UNARY_P, rng.choice([("a",), ("a", "b")]))
        space = SearchSpace((G3,), 2)
        r = is_saturated(S, 1, 1, space, type_size_cap=2)
        if not r.saturated:
            assert find_realizer(S, r.witness) is None
            th, co = theory_of(S, r.parameters, 1)
            assert is_type_of_tableau(space, Tableau(tuple(th), tuple(co)), r.witness)


def diagram_kept(S, N, depth):
    th, co = eldiag(S, depth)
    one = N.chain.one
    return all(eval_formula(N, {}, phi) >= one for phi in th) and all(eval_formula(N, {}, phi) < one for phi in co)


class TestSaturateStep:
    def test_already_realized(self, G3, two_point):
        t = TP(["P(x)"])
        assert saturate_step(two_point, t, SearchSpace((G3,), 2), 1) is two_point

    def test_example(self, G3):
        S = Structure(G3, ("a",), {"P": {("a",): 0}}, name="S")
        t = TP([], ["P(x) -> 0"])
        N = saturate_step(S, t, SearchSpace((G3,), 2), 1)
        assert N.domain == ("a", "c") and N.preds["P"] == {("a",): 0, ("c",): 1}
        assert N.name == "S+"
        assert find_realizer(N, t) == "c"
        assert is_substructure(S, N) and diagram_kept(S, N, 1)

    def test_example_matches_exhaustive_search(self, G3):
        S = Structure(G3, ("a",), {"P": {("a",): 0}})
        t = TP([], ["P(x) -> 0"])
        th, co = eldiag(S, 1)
        hits = []
        for v in range(G3.size):
            N = Structure(G3, ("a", "c"), {"P": {("a",): 0, ("c",): v}})
            if diagram_kept(S, N, 1) and any(realizes(N, m, t) for m in N.domain):
                hits.append(v)
        assert hits == [1]
        assert saturate_step(S, t, SearchSpace((G3,), 2), 1).preds["P"][("c",)] == 1

    def test_not_a_type(self, G3):
        S = Structure(G3, ("a",), {"P": {("a",): 0}})
        with pytest.raises(NotAType):
            saturate_step(S, TP(["P(x)"]), SearchSpace((G3,), 2), 1)

    def test_bounds_exhausted(self, G3):
        # x needs row (1,1) and some y needs row (0, >0): together with a=(0,0) that is
        # three rows, while the designation-level diagram lets a type model reuse @a.
        S = Structure(G3, ("a",), {"P": {("a",): 0}, "Q": {("a",): 0}})
        t = TP(["exists y. ((P(y) -> 0) /\\ ((Q(y) -> 0) -> 0))"], ["P(x) -> 0", "Q(x) -> 0"])
        with pytest.raises(BoundsExhausted):
            saturate_step(S, t, SearchSpace((G3,), 2), 0)
        N = saturate_step(S, t, SearchSpace((G3,), 3), 0)
        assert len(N.domain) == 3 and find_realizer(N, t) is not None
        assert is_substructure(S, N) and diagram_kept(S, N, 0)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10**6))
    def test_output_invariant(self, seed):
        from gradedmt.algebra import make_godel_chain

        G3 = make_godel_chain(3)
        rng = random.Random(seed)
        S = random_structure(rng, G3, UNARY_P, ("a",))
        other = random_structure(rng, G3, UNARY_P, ("a", "b"))
        t = realized_type(other, (), "b", 1)
        space = SearchSpace((G3,), 2)
        try:
            N = saturate_step(S, t, space, 1)
        except (NotAType, BoundsExhausted):
            return
        assert find_realizer(N, t) is not None
        if N is not S:
            assert is_substructure(S, N) and diagram_kept(S, N, 1)


class TestReduction:
    def test_two_variable_instance(self, G3):
        S = Structure(G3, ("a",), {"P": {("a",): 0}, "Q": {("a",): 0}})
        p = [f("Q(x) -> 0"), f("P(y) -> 0")]
        q = [f("P(x) -> 0"), f("Q(y) -> 0")]
        r = realize_by_reduction(S, p, q, SearchSpace((G3,), 3), 0)
        a0, a1 = r.elements
        assert jointly_satisfies(r.structure, {"x": a0, "y": a1}, p, q)
        assert is_substructure(S, r.structure) and diagram_kept(S, r.structure, 0)
        e0, e1 = r.direct_elements
        assert jointly_satisfies(r.direct, {"x": e0, "y": e1}, p, q)
        assert len(r.structure.domain) == len(r.direct.domain) == 3

    @pytest.mark.parametrize(
        "p, q, depth",
        [
            (["P(x)", "P(y) -> 0"], [], 0),
            (["Q(x) /\\ Q(y)"], ["P(x) -> 0", "P(y)"], 0),
            (["P(y) -> P(x)"], ["P(x) -> P(y)"], 1),
        ],
    )
    def test_agrees_with_direct_search(self, G3, p, q, depth):
        S = Structure(G3, ("a",), {"P": {("a",): 1}, "Q": {("a",): 1}})
        p, q = [f(x) for x in p], [f(x) for x in q]
        r = realize_by_reduction(S, p, q, SearchSpace((G3,), 3), depth)
        assert jointly_satisfies(r.direct, dict(zip("xy", r.direct_elements)), p, q)
        assert jointly_satisfies(r.structure, dict(zip("xy", r.elements)), p, q)
        assert is_substructure(S, r.structure) and diagram_kept(S, r.structure, depth)

    def test_direct_search_fails_too(self, G3):
        S = Structure(G3, ("a",), {"P": {("a",): 0}, "Q": {("a",): 0}})
        p = [f("Q(x) -> 0"), f("P(y) -> 0")]
        q = [f("P(x) -> 0"), f("Q(y) -> 0")]
        with pytest.raises(BoundsExhausted):
            realize_by_reduction(S, p, q, SearchSpace((G3,), 2), 0)


def test_type_formulas_are_unary():
    t = TP(["exists y. P(y) /\\ P(x)"])
    assert all(free_variables(phi) <= {"x"} for phi in t.formulas)
    assert to_text(t.p[0])
