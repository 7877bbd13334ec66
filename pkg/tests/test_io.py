import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradedmt import io
from gradedmt.algebra import make_godel_chain
from gradedmt.errors import FileFormatError
from gradedmt.generate import MONADIC, random_structure, random_tableau
from gradedmt.structure import Structure
from gradedmt.syntax import Signature, parse_formula
from gradedmt.tableaux import Tableau
from gradedmt.types import TypePair

from conftest import builtin_chains

DATA = Path(__file__).resolve().parent.parent / "data"


class TestChains:
    @pytest.mark.parametrize("chain", builtin_chains(), ids=lambda c: c.name)
    def test_round_trip(self, chain):
        assert io.parse_chain(io.format_chain(chain)) == chain

    def test_data_files_match_builtins(self):
        for name in ("L5", "G3", "Z2"):
            assert io.load_chain(DATA / "chains" / f"{name}.chain") == io.load_chain(name)

    def test_unknown_name(self):
        with pytest.raises(FileFormatError):
            io.load_chain("no-such-chain")

    @pytest.mark.parametrize(
        "text",
        [
            "chain X\nsize 2\none 1\nconj:\n0 0\n0 1\n",
            "chain X\nsize 2\none 1\nzero 0\nconj:\n0 0\n",
            "chain X\nsize two\n",
            "chain X\nsize 2\none 1\nzero 0\nbogus\n",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(FileFormatError):
            io.parse_chain(text)

    def test_error_has_position(self):
        with pytest.raises(FileFormatError) as e:
            io.parse_chain("chain X\nsize two\n", "x.chain")
        assert "x.chain" in str(e.value) and "2" in str(e.value)


class TestModels:
    def test_two_point_file(self, two_point):
        assert io.load_model(DATA / "models" / "two.model") == two_point

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10**6))
    def test_round_trip(self, seed):
        rng = random.Random(seed)
        sig = Signature((("P", 1), ("R", 2), ("p", 0)), (("f", 1), ("c", 0)))
        chain = rng.choice(builtin_chains())
        names = rng.choice([("a", "b", "c"), ("0", "1", "2")])
        S = random_structure(rng, chain, sig, names[: rng.randint(1, 3)], "M")
        back = io.parse_model(io.format_model(S), io.ChainRegistry([chain]))
        assert back == S and back.name == "M"

    def test_function_versus_predicate(self, G3):
        text = "model m\nalgebra G3\ndomain 0 1\nP 0 = 1\nP 1 = 0\nf 0 = 1\nf 1 = 0\n"
        S = io.parse_model(text.replace("domain 0 1", "domain 0 1\nfunctions f"))
        assert S.preds["P"] == {("0",): 1, ("1",): 0}
        assert S.funcs["f"] == {("0",): "1", ("1",): "0"}
        assert io.parse_model(io.format_model(S)) == S
        guessed = io.parse_model("model m\nalgebra G3\ndomain a b\nP a = 1\nP b = 0\nf a = b\nf b = a\n")
        assert set(guessed.preds) == {"P"} and set(guessed.funcs) == {"f"}

    @pytest.mark.parametrize(
        "text",
        [
            "model m\nalgebra G3\nP a = 1\n",
            "model m\nalgebra XX9\ndomain a\n",
            "model m\nalgebra G3\ndomain a\nP b = 1\n",
            "model m\nalgebra G3\ndomain a\nP a = 1\nP a = 2\n",
            "model m\nalgebra G3\ndomain a\nP a = 7\n",
            "model m\nalgebra G3\ndomain a b\nP a = 1\n",
            "model m\ndomain a\n",
            "model m\nalgebra G3\ndomain a\nP a\n",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(FileFormatError):
            io.parse_model(text)

    def test_registry_prefers_known_chains(self):
        custom = make_godel_chain(4)
        reg = io.ChainRegistry([custom])
        assert reg("G4") is custom and reg("L3").size == 3


class TestTableauxAndTypes:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10**6))
    def test_tableau_round_trip(self, seed):
        tau = random_tableau(random.Random(seed), MONADIC, 3, vars=("x", "y"))
        assert io.parse_tableau(io.format_tableau(tau)) == tau

    def test_tableau_files(self):
        tau = io.load_tableau(DATA / "tableaux" / "transitivity.tab")
        assert tau == Tableau(
            (parse_formula("p -> q"), parse_formula("q -> r")),
            (parse_formula("p -> r"),),
        )
        assert io.load_tableau(DATA / "tableaux" / "contradiction.tab").right == (parse_formula("p"),)

    def test_formula_before_header(self):
        with pytest.raises(FileFormatError):
            io.parse_tableau("p\nT:\nq\n")

    def test_bad_formula_position(self):
        with pytest.raises(FileFormatError) as e:
            io.parse_tableau("T:\np ->\n", "t.tab")
        assert "t.tab" in str(e.value)

    def test_type_round_trip(self):
        t = TypePair((parse_formula("P(x) -> P(@a)"),), (parse_formula("P(x) -> 0"),), "x", ("a",))
        back = io.parse_type(io.format_type(t))
        assert back == t

    def test_type_file(self):
        t = io.load_type(DATA / "types" / "positive.type")
        assert t.p == () and t.p_prime == (parse_formula("P(x) -> 0"),)

    def test_type_rejects_second_variable(self):
        with pytest.raises(FileFormatError):
            io.parse_type("p:\nP(y)\n")


class TestModelChains:
    def test_load(self):
        c = io.load_model_chain(DATA / "models" / "twins.chain")
        assert [len(link.domain) for link in c.links] == [1, 2, 3]

    def test_missing_file(self, tmp_path):
        (tmp_path / "c.chain").write_text("nope.model\n")
        with pytest.raises(FileFormatError):
            io.load_model_chain(tmp_path / "c.chain")

    def test_empty(self):
        with pytest.raises(FileFormatError):
            io.parse_model_chain("# nothing\n")


def test_format_assignment():
    assert io.format_assignment({"y": "b", "x": "a"}) == "x=a, y=b"


def test_structure_equality_ignores_name(G3):
    a = Structure(G3, ("a",), {"P": {("a",): 1}}, name="one")
    assert a == a.renamed("other")
