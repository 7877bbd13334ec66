"""Structures over finite UL-chains and the direct (recursive) evaluator."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Optional, Sequence

from .algebra import UlChain, verify_ul_axioms
from .errors import AxiomViolation, GradedError, InvalidElement, InvalidSize, NotASentence, SearchSpaceTooLarge, UncoveredVariable
from .syntax import AND, CONJ, FORALL, IMP, OR, Atom, Binary, Const, Formula, Quant, Signature, Term, Var, free_variables, is_param

Evaluation = Mapping[str, str]


@dataclass(frozen=True, eq=True)
class Structure:
    chain: UlChain
    domain: tuple[str, ...]
    preds: Mapping[str, Mapping[tuple[str, ...], int]] = field(default_factory=dict)
    funcs: Mapping[str, Mapping[tuple[str, ...], str]] = field(default_factory=dict)
    name: str = field(default="M", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "domain", tuple(self.domain))
        if not self.domain:
            raise InvalidSize("structure domain must be non-empty")
        if len(set(self.domain)) != len(self.domain):
            raise InvalidElement(f"duplicate element names in {self.domain}")
        dom = set(self.domain)
        for kind, tables in (("predicate", self.preds), ("function", self.funcs)):
            for sym, table in tables.items():
                if not table:
                    raise GradedError(f"{kind} {sym} has an empty table")
                ar = len(next(iter(table)))
                expected = set(itertools.product(self.domain, repeat=ar))
                if set(table) != expected:
                    missing = sorted(expected - set(table))
                    raise GradedError(f"{kind} {sym} is not total over the domain; missing {missing[:3]}")
                for key, val in table.items():
                    if kind == "predicate" and not 0 <= val < self.chain.size:
                        raise InvalidElement(f"{sym}{key} = {val} outside chain {self.chain.name}")
                    if kind == "function" and val not in dom:
                        raise InvalidElement(f"{sym}{key} = {val!r} outside the domain")

    @property
    def signature(self) -> Signature:
        preds = tuple((p, len(next(iter(t)))) for p, t in self.preds.items())
        funcs = tuple((f, len(next(iter(t)))) for f, t in self.funcs.items())
        return Signature(preds, funcs)

    def index(self, element: str) -> int:
        return self.domain.index(element)

    def pred_value(self, pred: str, args: Sequence[str]) -> int:
        return self.preds[pred][tuple(args)]

    def restrict(self, elements: Sequence[str], name: Optional[str] = None) -> "Structure":
        """Substructure on ``elements``; functions must be closed on it."""
        keep = [e for e in self.domain if e in set(elements)]
        preds = {p: {k: v for k, v in t.items() if all(x in keep for x in k)} for p, t in self.preds.items()}
        funcs = {f: {k: v for k, v in t.items() if all(x in keep for x in k)} for f, t in self.funcs.items()}
        return Structure(self.chain, tuple(keep), preds, funcs, name or self.name)

    def renamed(self, name: str) -> "Structure":
        return Structure(self.chain, self.domain, self.preds, self.funcs, name)


def eval_term(S: Structure, v: Evaluation, t: Term) -> str:
    if isinstance(t, Var):
        if t.name not in v:
            raise UncoveredVariable(t.name)
        return v[t.name]
    args = tuple(eval_term(S, v, a) for a in t.args)
    if t.fn in S.funcs:
        return S.funcs[t.fn][args]
    if not t.args and is_param(t.fn) and t.fn[1:] in S.domain:
        return t.fn[1:]
    raise GradedError(f"structure {S.name} does not interpret {t.fn!r}")


def eval_formula(S: Structure, v: Evaluation, phi: Formula) -> int:
    A = S.chain
    if isinstance(phi, Const):
        return {"0": A.zero, "1": A.one, "bot": A.bot, "top": A.top}[phi.kind]
    if isinstance(phi, Atom):
        if phi.pred not in S.preds:
            raise GradedError(f"structure {S.name} does not interpret {phi.pred!r}")
        return S.preds[phi.pred][tuple(eval_term(S, v, t) for t in phi.args)]
    if isinstance(phi, Binary):
        a = eval_formula(S, v, phi.left)
        b = eval_formula(S, v, phi.right)
        if phi.op == AND:
            return min(a, b)
        if phi.op == OR:
            return max(a, b)
        if phi.op == CONJ:
            return A.conj(a, b)
        if phi.op == IMP:
            return A.residuum(a, b)
        raise ValueError(phi.op)
    if isinstance(phi, Quant):
        values = (eval_formula(S, {**v, phi.var: m}, phi.body) for m in S.domain)
        return min(values) if phi.q == FORALL else max(values)
    raise TypeError(f"not a formula: {phi!r}")


def sentence_value(S: Structure, phi: Formula) -> int:
    if free_variables(phi):
        raise NotASentence(f"{phi} has free variables {sorted(free_variables(phi))}")
    return eval_formula(S, {}, phi)


def is_model_of(S: Structure, theory) -> bool:
    for phi in theory:
        if sentence_value(S, phi) < S.chain.one:
            return False
    return True


# --- search spaces -------------------------------------------------------------


@lru_cache(maxsize=None)
def _checked(chain: UlChain) -> UlChain:
    report = verify_ul_axioms(chain)
    if not report.ok:
        raise AxiomViolation(chain.name, report.failures)
    return chain


DEFAULT_MAX_CANDIDATES = 100_000


@dataclass(frozen=True)
class SearchSpace:
    """Finite set of chains plus bounds; consequence is decided relative to it."""

    chains: tuple[UlChain, ...]
    max_domain: int = 1
    max_candidates: int = DEFAULT_MAX_CANDIDATES

    def __post_init__(self) -> None:
        object.__setattr__(self, "chains", tuple(self.chains))
        if not self.chains:
            raise InvalidSize("search space needs at least one chain")
        if self.max_domain < 1:
            raise InvalidSize("max_domain must be at least 1")
        for c in self.chains:
            _checked(c)

    def describe(self) -> str:
        names = ",".join(c.name for c in self.chains)
        return f"chains={names} max_domain={self.max_domain} max_candidates={self.max_candidates}"


def block_count(chain_size: int, m: int, sig: Signature, fixed_cells: int = 0, fixed_func_cells: int = 0) -> int:
    pred_cells = sum(m**ar for _, ar in sig.predicates) - fixed_cells
    func_cells = sum(m**ar for _, ar in sig.functions) - fixed_func_cells
    return chain_size**pred_cells * m**func_cells


def count_structures(space: SearchSpace, sig: Signature) -> int:
    return sum(block_count(c.size, m, sig) for c in space.chains for m in range(1, space.max_domain + 1))


def element_names(m: int) -> tuple[str, ...]:
    return tuple(f"e{i}" for i in range(m))


def enumerate_structures(space: SearchSpace, sig: Signature) -> Iterator[Structure]:
    """Every structure of the space, chains in order, domains by size, tables lexicographically.

    The first table cell is the most significant digit; predicates come
    before functions, each in signature order, tuples in lexicographic order.
    """
    total = count_structures(space, sig)
    if total > space.max_candidates:
        raise SearchSpaceTooLarge(total, space.max_candidates)
    serial = 0
    for chain in space.chains:
        for m in range(1, space.max_domain + 1):
            dom = element_names(m)
            cells = []
            for p, ar in sig.predicates:
                cells += [("P", p, k, range(chain.size)) for k in itertools.product(dom, repeat=ar)]
            for f, ar in sig.functions:
                cells += [("F", f, k, dom) for k in itertools.product(dom, repeat=ar)]
            for values in itertools.product(*(c[3] for c in cells)):
                preds: dict = {p: {} for p, _ in sig.predicates}
                funcs: dict = {f: {} for f, _ in sig.functions}
                for (kind, sym, key, _), val in zip(cells, values):
                    (preds if kind == "P" else funcs)[sym][key] = val
                yield Structure(chain, dom, preds, funcs, name=f"S{serial}")
                serial += 1
