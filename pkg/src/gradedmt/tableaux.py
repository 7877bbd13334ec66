"""Tableaux: pairs of formula sets to be designated (left) and non-designated (right).

Satisfiability, consistency and entailment are all relative to a
:class:`SearchSpace`; a tableau consistent here may still be inconsistent
for unrestricted consequence when its only countermodels lie outside the
space, and every report carries the space it was computed in.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import ConstantsExhausted, InconsistentInput
from .grid import Grid
from .semantics import search_grid
from .structure import Evaluation, SearchSpace, Structure, eval_formula
from .syntax import (
    EXISTS,
    FORALL,
    App,
    Formula,
    Quant,
    Signature,
    big_or,
    constants_of,
    free_variables,
    imp,
    join,
    substitute,
    to_text,
)

DEFAULT_SUBSET_CAP = 12


def _ordered(formulas: Iterable[Formula]) -> tuple[Formula, ...]:
    return tuple(dict.fromkeys(formulas))


@dataclass(frozen=True)
class Tableau:
    left: tuple[Formula, ...] = ()
    right: tuple[Formula, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", _ordered(self.left))
        object.__setattr__(self, "right", _ordered(self.right))

    @property
    def formulas(self) -> tuple[Formula, ...]:
        return self.left + self.right

    def add_left(self, *phis: Formula) -> "Tableau":
        return Tableau(self.left + phis, self.right)

    def add_right(self, *phis: Formula) -> "Tableau":
        return Tableau(self.left, self.right + phis)

    def union(self, left: Iterable[Formula] = (), right: Iterable[Formula] = ()) -> "Tableau":
        return Tableau(self.left + tuple(left), self.right + tuple(right))

    def free_variables(self) -> frozenset[str]:
        return frozenset().union(*(free_variables(f) for f in self.formulas))

    def constants(self) -> set[str]:
        return set().union(*(constants_of(f) for f in self.formulas))

    def is_subtableau_of(self, other: "Tableau") -> bool:
        return set(self.left) <= set(other.left) and set(self.right) <= set(other.right)

    def subtableaux(self) -> Iterator["Tableau"]:
        """Every subtableau, by increasing total size."""
        items = [("L", f) for f in self.left] + [("R", f) for f in self.right]
        for r in range(len(items) + 1):
            for combo in itertools.combinations(items, r):
                yield Tableau(tuple(f for s, f in combo if s == "L"), tuple(f for s, f in combo if s == "R"))

    def __str__(self) -> str:
        lines = ["T:"] + [to_text(f) for f in self.left] + ["U:"] + [to_text(f) for f in self.right]
        return "\n".join(lines)


def satisfies_tableau(S: Structure, v: Evaluation, tau: Tableau) -> bool:
    one = S.chain.one
    return all(eval_formula(S, v, f) >= one for f in tau.left) and all(eval_formula(S, v, f) < one for f in tau.right)


def tableau_grid(space: SearchSpace, tau: Tableau, extra: Sequence[Formula] = (), sig: Optional[Signature] = None) -> Grid:
    return search_grid(space, list(tau.formulas) + list(extra), sig)


def _satisfying_mask(grid: Grid, tau: Tableau) -> np.ndarray:
    return grid.all_designated(tau.left) & grid.none_designated(tau.right)


def find_satisfying_model(
    space: SearchSpace, tau: Tableau, sig: Optional[Signature] = None
) -> Optional[tuple[Structure, dict[str, str]]]:
    grid = tableau_grid(space, tau, sig=sig)
    return grid.witness(_satisfying_mask(grid, tau), tau.free_variables())


def is_satisfiable(space: SearchSpace, tau: Tableau, sig: Optional[Signature] = None) -> bool:
    grid = tableau_grid(space, tau, sig=sig)
    return bool(np.any(_satisfying_mask(grid, tau)))


def _check_cap(tau: Tableau, cap: int) -> None:
    if len(tau.right) > cap:
        raise ValueError(f"right side has {len(tau.right)} formulas, subset cap is {cap}")


def _subsets(items: Sequence[Formula]) -> Iterator[tuple[Formula, ...]]:
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def inconsistency_witness(grid: Grid, left: Sequence[Formula], right: Sequence[Formula]) -> Optional[tuple[Formula, ...]]:
    """First ``U0`` (by size, then order) with ``left |= \\/U0``, or ``None``."""
    premises = grid.all_designated(left)
    for u0 in _subsets(right):
        if not np.any(premises & ~grid.designated(big_or(u0))):
            return u0
    return None


def find_inconsistency(
    space: SearchSpace, tau: Tableau, subset_cap: int = DEFAULT_SUBSET_CAP, sig: Optional[Signature] = None
) -> Optional[tuple[Formula, ...]]:
    """The first ``U0`` whose disjunction follows from the left side, if any."""
    _check_cap(tau, subset_cap)
    disjunctions = [big_or(u0) for u0 in _subsets(tau.right)]
    grid = tableau_grid(space, tau, extra=disjunctions, sig=sig)
    return inconsistency_witness(grid, tau.left, tau.right)


def is_consistent(space: SearchSpace, tau: Tableau, subset_cap: int = DEFAULT_SUBSET_CAP, sig: Optional[Signature] = None) -> bool:
    return find_inconsistency(space, tau, subset_cap, sig) is None


# --- finite character -----------------------------------------------------------


@dataclass(frozen=True)
class FiniteCharacterReport:
    space: str
    all_subtableaux_satisfiable: bool
    satisfiable: bool
    consistent: bool
    unsatisfiable_subtableau: Optional[Tableau] = None
    inconsistency: Optional[tuple[Formula, ...]] = None

    @property
    def implication_holds(self) -> bool:
        """(every subtableau satisfiable) implies (satisfiable)."""
        return (not self.all_subtableaux_satisfiable) or self.satisfiable

    @property
    def equivalence_holds(self) -> bool:
        """satisfiable iff consistent."""
        return self.satisfiable == self.consistent


def check_finite_character(space: SearchSpace, tau: Tableau, subset_cap: int = DEFAULT_SUBSET_CAP) -> FiniteCharacterReport:
    _check_cap(tau, subset_cap)
    disjunctions = [big_or(u0) for u0 in _subsets(tau.right)]
    grid = tableau_grid(space, tau, extra=disjunctions)
    first_bad = None
    for sub in tau.subtableaux():
        if not np.any(_satisfying_mask(grid, sub)):
            first_bad = sub
            break
    satisfiable = bool(np.any(_satisfying_mask(grid, tau)))
    witness = inconsistency_witness(grid, tau.left, tau.right)
    return FiniteCharacterReport(
        space=space.describe(),
        all_subtableaux_satisfiable=first_bad is None,
        satisfiable=satisfiable,
        consistent=witness is None,
        unsatisfiable_subtableau=first_bad,
        inconsistency=witness,
    )


# --- Henkin completion -------------------------------------------------------------


@dataclass(frozen=True)
class HenkinStage:
    number: int
    kind: str  # "forall", "exists" or "linear"
    case: str  # "skip", "i", "ii", "theta->psi", "psi->theta"
    added: Optional[Formula]
    tableau: Tableau
    consistent: bool


@dataclass
class _ConstantPool:
    names: list[str]
    used: set[str] = field(default_factory=set)

    def take(self, tau: Tableau) -> str:
        taken = tau.constants() | self.used
        for c in self.names:
            if c not in taken:
                self.used.add(c)
                return c
        raise ConstantsExhausted(f"all fresh constants {self.names} are used")


def _henkin_grid(space: SearchSpace, tau: Tableau, extra: Sequence[Formula], sig: Optional[Signature]) -> Grid:
    disjunctions = [big_or(u0) for u0 in _subsets(tau.right)]
    with_extra = [join(d, e) for d in disjunctions for e in extra]
    return tableau_grid(space, tau, extra=disjunctions + list(extra) + with_extra, sig=sig)


def _consistent(space: SearchSpace, tau: Tableau, sig: Optional[Signature], subset_cap: int) -> bool:
    _check_cap(tau, subset_cap)
    grid = _henkin_grid(space, tau, (), sig)
    return inconsistency_witness(grid, tau.left, tau.right) is None


def henkin_stages(
    space: SearchSpace,
    tau: Tableau,
    fresh_constants: Sequence[str],
    formulas: Sequence[Formula],
    pairs: Sequence[tuple[Formula, Formula]],
    *,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    sig: Optional[Signature] = None,
) -> Iterator[HenkinStage]:
    """Run the interleaved stages and yield the tableau after each one.

    Stage ``3i+1`` handles ``formulas[i]`` when it is universal, stage
    ``3i+2`` handles it when it is existential, stage ``3i+3`` adds an
    implication for ``pairs[i]``. Case splits are decided by the entailment
    oracle of ``space``.
    """
    if not _consistent(space, tau, sig, subset_cap):
        raise InconsistentInput("henkin_complete needs a consistent tableau")
    pool = _ConstantPool(list(fresh_constants))
    current = tau
    rounds = max(len(formulas), len(pairs))
    number = 0
    for i in range(rounds):
        phi = formulas[i] if i < len(formulas) else None

        number += 1
        if isinstance(phi, Quant) and phi.q == FORALL:
            grid = _henkin_grid(space, current, [phi], sig)
            premises = grid.all_designated(current.left)
            case_i = any(
                not np.any(premises & ~grid.designated(join(big_or(u0), phi))) for u0 in _subsets(current.right)
            )
            if case_i:
                current, case, added = current.add_left(phi), "i", phi
            else:
                c = pool.take(current)
                added = substitute(phi.body, phi.var, App(c))
                current, case = current.add_right(added), "ii"
        else:
            case, added = "skip", None
        yield HenkinStage(number, "forall", case, added, current, _consistent(space, current, sig, subset_cap))

        number += 1
        if isinstance(phi, Quant) and phi.q == EXISTS:
            extended = current.add_left(phi)
            grid = _henkin_grid(space, extended, [], sig)
            if inconsistency_witness(grid, extended.left, current.right) is not None:
                case, added = "i", None
            else:
                c = pool.take(current)
                added = substitute(phi.body, phi.var, App(c))
                current, case = current.add_left(added), "ii"
        else:
            case, added = "skip", None
        yield HenkinStage(number, "exists", case, added, current, _consistent(space, current, sig, subset_cap))

        number += 1
        if i < len(pairs):
            theta, psi = pairs[i]
            first = current.add_left(imp(theta, psi))
            if _consistent(space, first, sig, subset_cap):
                current, case, added = first, "theta->psi", imp(theta, psi)
            else:
                current, case, added = current.add_left(imp(psi, theta)), "psi->theta", imp(psi, theta)
        else:
            case, added = "skip", None
        yield HenkinStage(number, "linear", case, added, current, _consistent(space, current, sig, subset_cap))


def henkin_complete(
    space: SearchSpace,
    tau: Tableau,
    fresh_constants: Sequence[str],
    formulas: Sequence[Formula],
    pairs: Sequence[tuple[Formula, Formula]],
    *,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    sig: Optional[Signature] = None,
) -> Tableau:
    result = tau
    for stage in henkin_stages(space, tau, fresh_constants, formulas, pairs, subset_cap=subset_cap, sig=sig):
        result = stage.tableau
    return result
