"""Models of theories and semantic consequence relative to a search space.

``entails`` quantifies over every structure of the space and every
evaluation of the variables involved. It is decided on the vectorised grid;
:func:`entails_direct` walks the same candidates one by one with the
recursive evaluator and serves as the independent check.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Optional, Sequence

from .grid import Grid, variables_of
from .structure import (
    DEFAULT_MAX_CANDIDATES,
    Evaluation,
    SearchSpace,
    Structure,
    count_structures,
    enumerate_structures,
    eval_formula,
    eval_term,
    is_model_of,
    sentence_value,
)
from .syntax import Formula, Signature, free_variables, signature_of

__all__ = [
    "DEFAULT_MAX_CANDIDATES",
    "Evaluation",
    "SearchSpace",
    "Structure",
    "count_structures",
    "entails",
    "entails_direct",
    "enumerate_structures",
    "eval_formula",
    "eval_term",
    "find_countermodel",
    "is_model_of",
    "search_grid",
    "sentence_value",
]


def search_grid(space: SearchSpace, formulas: Sequence[Formula], sig: Optional[Signature] = None) -> Grid:
    """Grid over the space covering the symbols and variables of ``formulas``."""
    full = signature_of(formulas)
    if sig is not None:
        full = sig.merge(full)
    return Grid.for_space(space, full, variables_of(formulas))


def entails(space: SearchSpace, gamma: Iterable[Formula], phi: Formula, sig: Optional[Signature] = None) -> bool:
    gamma = list(gamma)
    grid = search_grid(space, gamma + [phi], sig)
    return grid.entails(gamma, phi)


def find_countermodel(
    space: SearchSpace, gamma: Iterable[Formula], phi: Formula, sig: Optional[Signature] = None
) -> Optional[tuple[Structure, dict[str, str]]]:
    """First candidate designating all of ``gamma`` but not ``phi``."""
    gamma = list(gamma)
    grid = search_grid(space, gamma + [phi], sig)
    mask = grid.all_designated(gamma) & ~grid.designated(phi)
    free = set().union(*(free_variables(f) for f in gamma + [phi]))
    return grid.witness(mask, free)


def evaluations(S: Structure, variables: Sequence[str]):
    for combo in itertools.product(S.domain, repeat=len(variables)):
        yield dict(zip(variables, combo))


def entails_direct(space: SearchSpace, gamma: Iterable[Formula], phi: Formula, sig: Optional[Signature] = None) -> bool:
    gamma = list(gamma)
    full = signature_of(gamma + [phi])
    if sig is not None:
        full = sig.merge(full)
    free = sorted(set().union(*(free_variables(f) for f in gamma + [phi])))
    for S in enumerate_structures(space, full):
        one = S.chain.one
        for v in evaluations(S, free):
            if all(eval_formula(S, v, g) >= one for g in gamma) and eval_formula(S, v, phi) < one:
                return False
    return True
