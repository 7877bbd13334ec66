import pytest

from gradedmt.algebra import make_godel_chain, make_lukasiewicz_chain, make_truncated_group_chain
from gradedmt.structure import Structure


@pytest.fixture(scope="session")
def L5():
    return make_lukasiewicz_chain(5)


@pytest.fixture(scope="session")
def G3():
    return make_godel_chain(3)


@pytest.fixture(scope="session")
def Z2():
    return make_truncated_group_chain(2)


@pytest.fixture
def two_point(G3):
    """G3, domain {a, b}, P(a)=1, P(b)=2."""
    return Structure(G3, ("a", "b"), {"P": {("a",): 1, ("b",): 2}}, name="two")


def builtin_chains():
    return (
        [make_lukasiewicz_chain(n) for n in range(2, 10)]
        + [make_godel_chain(n) for n in range(2, 10)]
        + [make_truncated_group_chain(k) for k in range(1, 4)]
    )


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
