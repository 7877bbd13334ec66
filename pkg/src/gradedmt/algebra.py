"""Finite UL-chains: totally ordered, bounded, commutative residuated monoids.

A chain of size ``n`` has carrier ``0..n-1`` ordered as integers, so the
lattice operations are ``min``/``max``, ``bot`` is ``0`` and ``top`` is
``n - 1``. The monoid operation is an explicit table; the residuum is always
derived from that table by exhaustive maximisation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import InvalidElement, InvalidSize


@dataclass(frozen=True)
class UlChain:
    name: str
    size: int
    conj_table: tuple[tuple[int, ...], ...]
    one: int
    zero: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InvalidSize(f"chain size must be positive, got {self.size}")
        table = tuple(tuple(int(x) for x in row) for row in self.conj_table)
        if len(table) != self.size or any(len(row) != self.size for row in table):
            raise InvalidSize(f"conj table of {self.name!r} is not {self.size}x{self.size}")
        for row in table:
            for x in row:
                if not 0 <= x < self.size:
                    raise InvalidElement(f"conj table of {self.name!r} has out-of-range entry {x}")
        object.__setattr__(self, "conj_table", table)
        self._check(self.one)
        self._check(self.zero)

    @property
    def bot(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.size - 1

    @property
    def carrier(self) -> range:
        return range(self.size)

    def _check(self, a: int) -> None:
        if not (isinstance(a, (int, np.integer)) and 0 <= a < self.size):
            raise InvalidElement(f"{a!r} is not an element of chain {self.name!r} (size {self.size})")

    def conj(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        return self.conj_table[a][b]

    @cached_property
    def residuum_table(self) -> tuple[tuple[int, ...], ...]:
        # max{c : a*c <= b}; None marks a pair with no such c (table not residuated)
        rows = []
        for a in self.carrier:
            row = []
            for b in self.carrier:
                best = None
                for c in self.carrier:
                    if self.conj_table[a][c] <= b:
                        best = c
                row.append(best)
            rows.append(tuple(row))
        return tuple(rows)

    def residuum(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        r = self.residuum_table[a][b]
        if r is None:
            raise InvalidElement(f"no residuum for ({a}, {b}) in {self.name!r}")
        return r

    def meet(self, a: int, b: int) -> int:
        return min(a, b)

    def join(self, a: int, b: int) -> int:
        return max(a, b)

    def designated(self, a: int) -> bool:
        return a >= self.one

    @property
    def filter(self) -> frozenset[int]:
        return frozenset(range(self.one, self.size))

    def power(self, a: int, n: int) -> int:
        """``(a ∧ one)`` multiplied with itself ``n`` times; ``one`` for ``n == 0``."""
        self._check(a)
        if n < 0:
            raise ValueError("power exponent must be non-negative")
        base = min(a, self.one)
        acc = self.one
        for _ in range(n):
            nxt = self.conj_table[acc][base]
            if nxt == acc:
                break
            acc = nxt
        return acc

    @cached_property
    def conj_array(self) -> np.ndarray:
        return np.array(self.conj_table, dtype=np.int16)

    @cached_property
    def residuum_array(self) -> np.ndarray:
        table = [[-1 if r is None else r for r in row] for row in self.residuum_table]
        return np.array(table, dtype=np.int16)

    def with_zero(self, zero: int) -> "UlChain":
        return UlChain(self.name, self.size, self.conj_table, self.one, zero)

    def __str__(self) -> str:
        return self.name


def residuum(chain: UlChain, a: int, b: int) -> int:
    return chain.residuum(a, b)


def power(chain: UlChain, a: int, n: int) -> int:
    return chain.power(a, n)


def make_lukasiewicz_chain(n: int, name: Optional[str] = None) -> UlChain:
    if n < 2:
        raise InvalidSize(f"Lukasiewicz chain needs n >= 2, got {n}")
    table = tuple(tuple(max(0, a + b - (n - 1)) for b in range(n)) for a in range(n))
    return UlChain(name or f"L{n}", n, table, one=n - 1, zero=0)


def make_godel_chain(n: int, name: Optional[str] = None) -> UlChain:
    if n < 2:
        raise InvalidSize(f"Godel chain needs n >= 2, got {n}")
    table = tuple(tuple(min(a, b) for b in range(n)) for a in range(n))
    return UlChain(name or f"G{n}", n, table, one=n - 1, zero=0)


def make_truncated_group_chain(k: int, zero: Optional[int] = -1, name: Optional[str] = None) -> UlChain:
    """Chain on ``{-k, ..., k}`` with neutral element ``0`` in the middle.

    Same-sign arguments are added and clamped to ``[-k, k]``; arguments of
    strictly opposite sign multiply to their minimum. Plain clamped addition
    is neither associative nor residuated, this variant is both. ``zero``
    is given as a signed value (default ``-1``) and stored as an index.
    """
    if k < 1:
        raise InvalidSize(f"truncated group chain needs k >= 1, got {k}")

    def op(a: int, b: int) -> int:
        if (a >= 0 and b >= 0) or (a <= 0 and b <= 0):
            return max(-k, min(k, a + b))
        return min(a, b)

    values = range(-k, k + 1)
    table = tuple(tuple(op(a, b) + k for b in values) for a in values)
    if zero is None:
        zero = -k
    if not -k <= zero <= k:
        raise InvalidElement(f"zero {zero} outside [-{k}, {k}]")
    return UlChain(name or f"Z{k}", 2 * k + 1, table, one=k, zero=zero + k)


def builtin_chain(name: str) -> UlChain:
    """Resolve ``L<n>``, ``G<n>`` and ``Z<k>`` names."""
    prefix, digits = name[:1], name[1:]
    if not digits.isdigit():
        raise KeyError(name)
    makers = {"L": make_lukasiewicz_chain, "G": make_godel_chain, "Z": make_truncated_group_chain}
    if prefix not in makers:
        raise KeyError(name)
    return makers[prefix](int(digits))


# --- axiom verification -----------------------------------------------------


@dataclass(frozen=True)
class AxiomCheck:
    group: str
    passed: bool
    witness: Optional[tuple[int, ...]] = None
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    chain: str
    checks: tuple[AxiomCheck, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]


def _first(triples, predicate):
    for t in triples:
        if not predicate(*t):
            return t
    return None


def verify_ul_axioms(chain: UlChain) -> AxiomReport:
    n = chain.size
    t = chain.conj_table
    pairs = list(itertools.product(range(n), repeat=2))
    triples = list(itertools.product(range(n), repeat=3))
    checks = []

    w = None
    if chain.bot != 0 or chain.top != n - 1:
        w = (chain.bot, chain.top)
    else:
        w = _first(pairs, lambda a, b: min(a, max(a, b)) == a and max(a, min(a, b)) == a)
    checks.append(AxiomCheck("bounded lattice", w is None, w))

    w = _first(pairs, lambda a, b: t[a][b] == t[b][a])
    if w is not None:
        checks.append(AxiomCheck("commutative monoid", False, w, "commutativity"))
    else:
        w = _first(triples, lambda a, b, c: t[t[a][b]][c] == t[a][t[b][c]])
        if w is not None:
            checks.append(AxiomCheck("commutative monoid", False, w, "associativity"))
        else:
            w = _first([(a,) for a in range(n)], lambda a: t[a][chain.one] == a)
            checks.append(AxiomCheck("commutative monoid", w is None, w, "" if w is None else "neutral element"))

    w = _first(triples, lambda a, b, c: not (b <= c) or (t[a][b] <= t[a][c] and t[b][a] <= t[c][a]))
    checks.append(AxiomCheck("monotonicity", w is None, w))

    # (res) against the stored residuum; a missing residuum fails at the first triple touching it
    res = chain.residuum_table

    def res_ok(a, b, c):
        r = res[a][c]
        if r is None:
            return False
        return (t[a][b] <= c) == (b <= r)

    w = _first(triples, res_ok)
    checks.append(AxiomCheck("residuation", w is None, w))

    def lin_ok(a, b):
        r1, r2 = res[a][b], res[b][a]
        if r1 is None or r2 is None:
            return False
        return max(min(r1, chain.one), min(r2, chain.one)) == chain.one

    w = _first(pairs, lin_ok)
    checks.append(AxiomCheck("prelinearity", w is None, w))
    return AxiomReport(chain.name, tuple(checks))


def chain_embeddings(small: UlChain, big: UlChain):
    """Yield order embeddings ``small -> big`` preserving every operation and constant.

    Candidates are order-preserving injections with ``bot``/``top`` fixed;
    each yield is a tuple mapping small indices to big indices.
    """
    if small.size > big.size:
        return
    if small.size == 1:
        return
    inner = range(1, big.size - 1)
    for mid in itertools.combinations(inner, small.size - 2):
        g = (0, *mid, big.size - 1)
        if g[small.one] != big.one or g[small.zero] != big.zero:
            continue
        ok = True
        for a in small.carrier:
            for b in small.carrier:
                if g[small.conj_table[a][b]] != big.conj_table[g[a]][g[b]]:
                    ok = False
                    break
                if g[small.residuum_table[a][b]] != big.residuum_table[g[a]][g[b]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield g


def find_embedding(small: UlChain, big: UlChain) -> Optional[tuple[int, ...]]:
    if small == big:
        return tuple(small.carrier)
    return next(chain_embeddings(small, big), None)
