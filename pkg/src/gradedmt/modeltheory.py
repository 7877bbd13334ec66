"""Substructures, depth-bounded elementarity, chains of models and their unions.

Elementarity is only ever checked up to a formula depth and over a fixed
tuple of variables; the free variables play the role of parameters and
range over the smaller structure. Every verdict carries the depth it was
computed at.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import find_embedding, verify_ul_axioms
from .errors import NotAChain, SignatureMismatch
from .grid import Grid, enumeration_values
from .structure import Structure
from .syntax import (
    Binary,
    Formula,
    FormulaEnumeration,
    Quant,
    Signature,
    enumerate_formulas,
    enumerate_layers,
    enumerate_sentences,
    free_variables,
    param,
    to_text,
)

DEFAULT_VARS = ("x", "y")


def is_quantifier_free(phi: Formula) -> bool:
    if isinstance(phi, Quant):
        return False
    if isinstance(phi, Binary):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return True


def _same_signature(S1: Structure, S2: Structure) -> Signature:
    a, b = S1.signature, S2.signature
    if set(a.predicates) != set(b.predicates) or set(a.functions) != set(b.functions):
        raise SignatureMismatch(f"{S1.name} and {S2.name} have different signatures")
    return b


# --- value comparison ------------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    formula: Formula
    assignment: dict[str, str]
    small_value: int
    big_value: int

    def __str__(self) -> str:
        env = ", ".join(f"{k}={v}" for k, v in self.assignment.items())
        where = f" [{env}]" if env else ""
        return f"{to_text(self.formula)}{where}: {self.small_value} vs {self.big_value}"


def _first_disagreement(
    small: Structure,
    big: Structure,
    formulas: Sequence[Formula],
    vars: Sequence[str],
    embedding: Sequence[int],
) -> Optional[Counterexample]:
    """First formula (then assignment) whose value differs between ``small`` and ``big``.

    Values of ``small`` are compared through ``embedding``; assignments range
    over ``small``'s domain.
    """
    g1 = Grid.for_structure(small, vars)
    g2 = Grid.for_structure(big, vars)
    k = len(vars)
    positions = np.array([big.index(e) for e in small.domain])
    emb = np.asarray(embedding, dtype=np.int16)
    shape1 = g1.shape(0)
    for phi in formulas:
        v1 = np.broadcast_to(g1.values(phi)[0], shape1)
        v2 = np.broadcast_to(g2.values(phi)[0], g2.shape(0))
        for axis in range(1, k + 1):
            v2 = np.take(v2, positions, axis=axis)
        diff = emb[v1] != v2
        if np.any(diff):
            coords = np.unravel_index(int(np.flatnonzero(diff)[0]), shape1)
            free = free_variables(phi)
            assignment = {v: small.domain[int(c)] for v, c in zip(vars, coords[1:]) if v in free}
            return Counterexample(phi, assignment, int(v1[coords]), int(v2[coords]))
    return None


def _first_disagreement_layers(
    small: Structure,
    big: Structure,
    enum: FormulaEnumeration,
    vars: Sequence[str],
    embedding: Sequence[int],
    big_values: Optional[list[np.ndarray]] = None,
) -> Optional[Counterexample]:
    """Same verdict and witness as :func:`_first_disagreement` over ``enum``, one layer at a time.

    ``big_values`` may be passed in when the same large structure is
    compared against several small ones.
    """
    k = len(vars)
    m1, m2 = len(small.domain), len(big.domain)
    small_values = enumeration_values(small, enum, vars)
    if big_values is None:
        big_values = enumeration_values(big, enum, vars)
    positions = np.array([big.index(e) for e in small.domain])
    emb = np.asarray(embedding, dtype=np.int16)
    for d, (v1, v2) in enumerate(zip(small_values, big_values)):
        v2 = v2.reshape((-1,) + (m2,) * k)
        for axis in range(1, k + 1):
            v2 = np.take(v2, positions, axis=axis)
        v2 = v2.reshape(len(v1), -1)
        diff = emb[v1] != v2
        rows = np.flatnonzero(diff.any(axis=1))
        if rows.size:
            row = int(rows[0])
            cell = int(np.flatnonzero(diff[row])[0])
            coords = np.unravel_index(cell, (m1,) * k)
            phi = enum.layers[d][row]
            free = free_variables(phi)
            assignment = {v: small.domain[int(c)] for v, c in zip(vars, coords) if v in free}
            return Counterexample(phi, assignment, int(v1[row, cell]), int(v2[row, cell]))
    return None


# --- substructures ------------------------------------------------------------


@dataclass(frozen=True)
class SubstructureReport:
    domain_inclusion: bool
    functions_agree: bool
    subalgebra: bool
    atoms_agree: bool
    qf_check: Optional[bool]
    embedding: Optional[tuple[int, ...]] = None
    witness: str = ""

    @property
    def ok(self) -> bool:
        return self.domain_inclusion and self.functions_agree and self.subalgebra and self.atoms_agree and self.qf_check is not False


def check_substructure(S1: Structure, S2: Structure, qf_depth: int = 1, vars: Sequence[str] = ("x",)) -> SubstructureReport:
    _same_signature(S1, S2)
    dom2 = set(S2.domain)
    missing = [e for e in S1.domain if e not in dom2]
    if missing:
        return SubstructureReport(False, False, False, False, None, witness=f"element {missing[0]} not in {S2.name}")
    for f, table in S1.funcs.items():
        for key, val in table.items():
            if S2.funcs[f][key] != val:
                return SubstructureReport(True, False, False, False, None, witness=f"{f}{key}: {val} vs {S2.funcs[f][key]}")
    g = find_embedding(S1.chain, S2.chain)
    if g is None:
        return SubstructureReport(True, True, False, False, None, witness=f"{S1.chain.name} is not a subalgebra of {S2.chain.name}")
    for p, table in S1.preds.items():
        for key, val in table.items():
            if g[val] != S2.preds[p][key]:
                return SubstructureReport(True, True, True, False, None, g, f"{p}{key}: {val} vs {S2.preds[p][key]}")
    qf = None
    if qf_depth >= 0:
        formulas = [f for f in enumerate_formulas(S2.signature, qf_depth, vars) if is_quantifier_free(f)]
        bad = _first_disagreement(S1, S2, formulas, vars, g)
        qf = bad is None
        if bad is not None:
            return SubstructureReport(True, True, True, True, False, g, str(bad))
    return SubstructureReport(True, True, True, True, qf, g)


def is_substructure(S1: Structure, S2: Structure, qf_depth: int = 1) -> bool:
    return check_substructure(S1, S2, qf_depth).ok


@dataclass(frozen=True)
class ElementarityReport:
    depth: int
    vars: tuple[str, ...]
    substructure: bool
    counterexample: Optional[Counterexample] = None

    @property
    def ok(self) -> bool:
        return self.substructure and self.counterexample is None


def check_elementary(
    S1: Structure, S2: Structure, depth: int, vars: Sequence[str] = DEFAULT_VARS, ceiling: Optional[int] = None
) -> ElementarityReport:
    sub = check_substructure(S1, S2, qf_depth=-1)
    if not sub.ok:
        return ElementarityReport(depth, tuple(vars), False)
    kw = {} if ceiling is None else {"ceiling": ceiling}
    enum = enumerate_layers(S2.signature, depth, vars, **kw)
    bad = _first_disagreement_layers(S1, S2, enum, vars, sub.embedding)
    return ElementarityReport(depth, tuple(vars), True, bad)


def is_elementary_substructure(S1: Structure, S2: Structure, depth: int, vars: Sequence[str] = DEFAULT_VARS) -> bool:
    return check_elementary(S1, S2, depth, vars).ok


# --- chains and unions --------------------------------------------------------------


@dataclass(frozen=True)
class ModelChain:
    links: tuple[Structure, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "links", tuple(self.links))
        if not self.links:
            raise NotAChain("a chain of models needs at least one link")

    def verify(self) -> Optional[str]:
        """``None`` when every earlier link is a substructure of every later one."""
        for i, j in itertools.combinations(range(len(self.links)), 2):
            rep = check_substructure(self.links[i], self.links[j], qf_depth=-1)
            if not rep.ok:
                return f"link {i} is not a substructure of link {j}: {rep.witness}"
        return None


def union_of_chain(c: ModelChain, name: str = "U") -> Structure:
    problem = c.verify()
    if problem is not None:
        raise NotAChain(problem)
    last = c.links[-1]
    chain = last.chain
    if not verify_ul_axioms(chain).ok:
        raise NotAChain(f"union algebra {chain.name} fails the UL-chain axioms")
    embeddings = [find_embedding(link.chain, chain) for link in c.links]
    domain = []
    for link in c.links:
        domain += [e for e in link.domain if e not in domain]
    preds: dict = {}
    funcs: dict = {}
    for link, g in zip(c.links, embeddings):
        for p, table in link.preds.items():
            target = preds.setdefault(p, {})
            for key, val in table.items():
                target.setdefault(key, g[val])
        for f, table in link.funcs.items():
            target = funcs.setdefault(f, {})
            for key, val in table.items():
                target.setdefault(key, val)
    return Structure(chain, tuple(domain), preds, funcs, name)


@dataclass(frozen=True)
class UnionPreservationReport:
    depth: int
    vars: tuple[str, ...]
    adjacent_elementary: tuple[bool, ...]
    counterexample: Optional[Counterexample] = None
    link: Optional[int] = None

    @property
    def precondition(self) -> bool:
        return all(self.adjacent_elementary)

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def check_union_preservation(c: ModelChain, depth: int, vars: Sequence[str] = DEFAULT_VARS) -> UnionPreservationReport:
    union = union_of_chain(c)
    links = c.links
    adjacent = tuple(check_elementary(links[i], links[i + 1], depth, vars).ok for i in range(len(links) - 1))
    enum = enumerate_layers(union.signature, depth, vars)
    union_values = enumeration_values(union, enum, vars)
    for i, link in enumerate(links):
        g = find_embedding(link.chain, union.chain)
        bad = _first_disagreement_layers(link, union, enum, vars, g, union_values)
        if bad is not None:
            return UnionPreservationReport(depth, tuple(vars), adjacent, bad, i)
    return UnionPreservationReport(depth, tuple(vars), adjacent)


# --- theories and exhaustiveness -------------------------------------------------------


def theory_of(
    S: Structure, D: Sequence[str], depth: int, bound_vars: Sequence[str] = ("x",)
) -> tuple[list[Formula], list[Formula]]:
    """Sentences of depth at most ``depth`` with parameters ``@d`` for ``d`` in ``D``.

    Returns ``(Th, coTh)``: the designated sentences and the rest.
    """
    unknown = [d for d in D if d not in S.domain]
    if unknown:
        raise ValueError(f"{unknown} not in the domain of {S.name}")
    params = [param(d).fn for d in D]
    sig = S.signature.without_params()
    sentences = enumerate_sentences(sig, depth, params, bound_vars)
    grid = Grid.for_structure(S, bound_vars)
    th, co = [], []
    for phi in sentences:
        (th if bool(grid.designated(phi)[0]) else co).append(phi)
    return th, co


def eldiag(S: Structure, depth: int, bound_vars: Sequence[str] = ("x",)) -> tuple[list[Formula], list[Formula]]:
    return theory_of(S, S.domain, depth, bound_vars)


def attained_values(S: Structure, depth: int, vars: Sequence[str] = ("x",)) -> set[int]:
    grid = Grid.for_structure(S, vars)
    seen: set[int] = set()
    sig = S.signature.without_params()
    for phi in enumerate_formulas(sig, depth, vars):
        seen.update(int(x) for x in np.unique(grid.values(phi)[0]))
        if len(seen) == S.chain.size:
            break
    return seen


def is_exhaustive(S: Structure, depth: int, vars: Sequence[str] = ("x",)) -> bool:
    return len(attained_values(S, depth, vars)) == S.chain.size
