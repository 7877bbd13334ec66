"""Seeded random formulas, tableaux and structures for test corpora."""

from __future__ import annotations

import itertools
import random
from typing import Optional, Sequence

from .algebra import UlChain
from .structure import Structure
from .syntax import (
    AND,
    BOT,
    CONJ,
    EXISTS,
    FORALL,
    IMP,
    ONE,
    OR,
    TOP,
    ZERO,
    App,
    Atom,
    Binary,
    Formula,
    Quant,
    Signature,
    Term,
    Var,
)
from .tableaux import Tableau

CONSTANTS = (ZERO, ONE, BOT, TOP)
CONNECTIVES = (AND, OR, CONJ, IMP)
PROPOSITIONAL = Signature((("p", 0), ("q", 0), ("r", 0)))
MONADIC = Signature((("P", 1), ("Q", 1), ("R", 1)), (("c", 0), ("d", 0)))


def _term(rng: random.Random, sig: Signature, vars: Sequence[str]) -> Term:
    consts = sig.constants
    pool = [Var(v) for v in vars] + [App(c) for c in consts]
    if not pool:
        raise ValueError("no variables or constants to build terms from")
    return rng.choice(pool)


def random_atom(rng: random.Random, sig: Signature, vars: Sequence[str] = ()) -> Atom:
    pred, ar = rng.choice(sig.predicates)
    return Atom(pred, tuple(_term(rng, sig, vars) for _ in range(ar)))


def random_formula(
    rng: random.Random,
    sig: Signature,
    max_depth: int,
    vars: Sequence[str] = (),
    quantifiers: bool = True,
    const_weight: float = 0.15,
) -> Formula:
    """A formula with at most ``max_depth`` connective and quantifier nodes.

    Leaves are atoms or truth constants; a binary node splits its remaining
    budget randomly between the operands.
    """
    if max_depth <= 0 or rng.random() < 0.25:
        if rng.random() < const_weight:
            return rng.choice(CONSTANTS)
        return random_atom(rng, sig, vars)
    budget = max_depth - 1
    if quantifiers and vars and rng.random() < 0.2:
        v = rng.choice(vars)
        return Quant(rng.choice((FORALL, EXISTS)), v, random_formula(rng, sig, budget, vars, quantifiers, const_weight))
    op = rng.choice(CONNECTIVES)
    k = rng.randint(0, budget)
    left = random_formula(rng, sig, k, vars, quantifiers, const_weight)
    right = random_formula(rng, sig, budget - k, vars, quantifiers, const_weight)
    return Binary(op, left, right)


def random_tableau(
    rng: random.Random,
    sig: Signature,
    max_depth: int,
    max_left: int = 3,
    max_right: int = 3,
    vars: Sequence[str] = (),
) -> Tableau:
    left = [random_formula(rng, sig, max_depth, vars) for _ in range(rng.randint(0, max_left))]
    right = [random_formula(rng, sig, max_depth, vars) for _ in range(rng.randint(0, max_right))]
    return Tableau(tuple(left), tuple(right))


def random_structure(
    rng: random.Random, chain: UlChain, sig: Signature, domain: Sequence[str], name: Optional[str] = None
) -> Structure:
    preds = {p: {k: rng.randrange(chain.size) for k in itertools.product(domain, repeat=ar)} for p, ar in sig.predicates}
    funcs = {f: {k: rng.choice(domain) for k in itertools.product(domain, repeat=ar)} for f, ar in sig.functions}
    return Structure(chain, tuple(domain), preds, funcs, name or "R")


def add_twin(S: Structure, original: str, twin: str, name: Optional[str] = None) -> Structure:
    """Extend ``S`` by ``twin``, a copy of ``original`` in every table.

    Mapping ``twin`` back to ``original`` is a strong homomorphism onto
    ``S``, so ``S`` is an elementary substructure of the result. Function
    values are copied from the original row and stay inside ``S``.
    """
    if twin in S.domain:
        raise ValueError(f"{twin} already in the domain")
    domain = S.domain + (twin,)

    def back(e: str) -> str:
        return original if e == twin else e

    preds = {
        p: {k: table[tuple(back(e) for e in k)] for k in itertools.product(domain, repeat=len(next(iter(table))))}
        for p, table in S.preds.items()
    }
    funcs = {
        f: {k: table[tuple(back(e) for e in k)] for k in itertools.product(domain, repeat=len(next(iter(table))))}
        for f, table in S.funcs.items()
    }
    return Structure(S.chain, domain, preds, funcs, name or f"{S.name}+{twin}")
