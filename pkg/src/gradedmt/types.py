"""Types of tableaux and models, realization, saturation and single extension steps.

A type is a pair ``<p, p'>`` of formulas in the free variable ``x`` (plus
``@d`` parameters). Saturation is checked against depth-bounded theories
and a capped candidate set; extensions keep the designation of every
diagram sentence up to the given depth, not necessarily its value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import BoundsExhausted, NotAType
from .grid import Grid, extension_blocks, variables_of
from .modeltheory import eldiag, theory_of
from .structure import SearchSpace, Structure, eval_formula
from .syntax import (
    Formula,
    Signature,
    Var,
    depth as formula_depth,
    enumerate_formulas,
    free_variables,
    is_sentence,
    param,
    rename_constant,
    signature_of,
    substitute,
)
from .tableaux import Tableau, find_satisfying_model, tableau_grid

DEFAULT_TYPE_SIZE_CAP = 4


@dataclass(frozen=True)
class TypePair:
    p: tuple[Formula, ...] = ()
    p_prime: tuple[Formula, ...] = ()
    free_var: str = "x"
    params: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", tuple(dict.fromkeys(self.p)))
        object.__setattr__(self, "p_prime", tuple(dict.fromkeys(self.p_prime)))
        object.__setattr__(self, "params", tuple(self.params))
        for phi in self.p + self.p_prime:
            extra = free_variables(phi) - {self.free_var}
            if extra:
                raise ValueError(f"type formula has free variables {sorted(extra)} besides {self.free_var}")

    @property
    def formulas(self) -> tuple[Formula, ...]:
        return self.p + self.p_prime

    @property
    def size(self) -> int:
        return len(self.p) + len(self.p_prime)

    def as_tableau(self) -> Tableau:
        return Tableau(self.p, self.p_prime)


def is_type_of_tableau(space: SearchSpace, tau: Tableau, t: TypePair, sig: Optional[Signature] = None) -> bool:
    return find_satisfying_model(space, tau.union(t.p, t.p_prime), sig=sig) is not None


def realized_type(S: Structure, D: Sequence[str], m: str, depth: int, var: str = "x") -> TypePair:
    if m not in S.domain:
        raise ValueError(f"{m} not in the domain of {S.name}")
    unknown = [d for d in D if d not in S.domain]
    if unknown:
        raise ValueError(f"{unknown} not in the domain of {S.name}")
    consts = [param(d).fn for d in D]
    formulas = enumerate_formulas(S.signature.without_params(), depth, (var,), consts)
    grid = Grid.for_structure(S, (var,))
    col = S.index(m)
    p, co = [], []
    for phi in formulas:
        vals = np.broadcast_to(grid.values(phi)[0], grid.shape(0))
        (p if vals[0, col] >= S.chain.one else co).append(phi)
    return TypePair(tuple(p), tuple(co), var, tuple(D))


def _realizer_mask(S: Structure, t: TypePair) -> np.ndarray:
    """Boolean vector over ``S``'s domain: element realizes ``t``."""
    vars = variables_of(t.formulas, extra=[t.free_var])
    grid = Grid.for_structure(S, vars)
    axis = vars.index(t.free_var) + 1
    one = S.chain.one
    ok = np.ones(len(S.domain), dtype=bool)
    for phi, want in [(f, True) for f in t.p] + [(f, False) for f in t.p_prime]:
        vals = np.broadcast_to(grid.values(phi)[0], grid.shape(0))
        # remaining axes only hold bound variables, so index 0 is representative
        index = [0] * vals.ndim
        index[axis] = slice(None)
        row = vals[tuple(index)] >= one
        ok &= row if want else ~row
    return ok


def find_realizer(S: Structure, t: TypePair) -> Optional[str]:
    hits = np.flatnonzero(_realizer_mask(S, t))
    return S.domain[int(hits[0])] if hits.size else None


def realizes(S: Structure, m: str, t: TypePair) -> bool:
    """Direct check with the recursive evaluator."""
    v = {t.free_var: m}
    one = S.chain.one
    return all(eval_formula(S, v, f) >= one for f in t.p) and all(eval_formula(S, v, f) < one for f in t.p_prime)


# --- saturation ---------------------------------------------------------------------


@dataclass(frozen=True)
class SaturationReport:
    saturated: bool
    kappa: int
    depth: int
    type_size_cap: int
    space: str
    parameters: Optional[tuple[str, ...]] = None
    witness: Optional[TypePair] = None
    candidates_checked: int = 0
    types_found: int = 0


def _bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def _candidate_pairs(n: int, cap: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Disjoint index pairs ``(p, p')`` by total size, then by size of ``p``."""
    for k in range(1, cap + 1):
        for kp in range(0, k + 1):
            for chosen in itertools.combinations(range(n), k):
                for ps in itertools.combinations(chosen, kp):
                    rest = tuple(i for i in chosen if i not in ps)
                    yield ps, rest


def type_pool(S: Structure, D: Sequence[str], depth: int, var: str = "x") -> list[Formula]:
    """Formulas of depth at most ``depth`` in ``var`` with ``D``-parameters, sentences excluded."""
    consts = [param(d).fn for d in D]
    formulas = enumerate_formulas(S.signature.without_params(), depth, (var,), consts)
    return [f for f in formulas if not is_sentence(f)]


def is_saturated(
    S: Structure,
    kappa: int,
    depth: int,
    space: SearchSpace,
    type_size_cap: int = DEFAULT_TYPE_SIZE_CAP,
    var: str = "x",
) -> SaturationReport:
    """Look for a type over some ``D`` with ``|D| < kappa`` that ``S`` fails to realize.

    Sentences are left out of the candidate formulas since ``Th_D`` and
    ``coTh_D`` already fix their designation; formulas with identical
    designation behaviour (in the space and in ``S``) are merged, keeping
    the first in enumeration order.
    """
    if kappa < 1:
        raise ValueError("kappa must be positive")
    checked = found = 0
    for size in range(0, min(kappa - 1, len(S.domain)) + 1):
        for D in itertools.combinations(S.domain, size):
            th, co = theory_of(S, D, depth, (var,))
            pool = type_pool(S, D, depth, var)
            sig = S.signature.without_params().merge(signature_of(th + co + pool))
            grid = tableau_grid(space, Tableau(tuple(th), tuple(co)), extra=pool, sig=sig)
            base = _bits(grid.all_designated(th) & grid.none_designated(co))
            local = Grid.for_structure(S, (var,))
            classes: dict[tuple[int, int], int] = {}
            reps: list[Formula] = []
            space_bits: list[int] = []
            s_bits: list[int] = []
            for phi in pool:
                sb = _bits(grid.designated(phi))
                lb = _bits(local.designated(phi))
                if (sb, lb) not in classes:
                    classes[(sb, lb)] = len(reps)
                    reps.append(phi)
                    space_bits.append(sb)
                    s_bits.append(lb)
            all_space = (1 << grid.size) - 1
            all_s = (1 << len(S.domain)) - 1
            for ps, qs in _candidate_pairs(len(reps), type_size_cap):
                checked += 1
                realized = all_s
                for i in ps:
                    realized &= s_bits[i]
                for i in qs:
                    realized &= ~s_bits[i]
                if realized:
                    continue
                models = base
                for i in ps:
                    models &= space_bits[i]
                for i in qs:
                    models &= all_space & ~space_bits[i]
                if models:
                    found += 1
                    t = TypePair(tuple(reps[i] for i in ps), tuple(reps[i] for i in qs), var, D)
                    return SaturationReport(False, kappa, depth, type_size_cap, space.describe(), D, t, checked, found)
    return SaturationReport(True, kappa, depth, type_size_cap, space.describe(), None, None, checked, found)


# --- extension steps --------------------------------------------------------------


def _extension_grid(S: Structure, space: SearchSpace, formulas: Sequence[Formula], vars: Sequence[str]) -> Grid:
    sig = S.signature.without_params().merge(signature_of(formulas).without_params())
    return Grid(extension_blocks(S, space, sig), vars)


def saturate_step(S: Structure, t: TypePair, space: SearchSpace, depth: int) -> Structure:
    """A proper extension of ``S`` in the space keeping the depth-bounded diagram and realizing ``t``.

    Returns ``S`` itself when ``t`` is already realized there. Raises
    :class:`NotAType` when ``t`` is not a type of the diagram tableau and
    :class:`BoundsExhausted` when it is but no extension fits the space.
    """
    if find_realizer(S, t) is not None:
        return S
    th, co = eldiag(S, depth, (t.free_var,))
    diagram = Tableau(tuple(th), tuple(co))
    if not is_type_of_tableau(space, diagram, t):
        raise NotAType(f"pair is not a type of the depth-{depth} diagram of {S.name} in {space.describe()}")
    formulas = th + co + list(t.formulas)
    grid = _extension_grid(S, space, formulas, variables_of(formulas, extra=[t.free_var]))
    mask = grid.all_designated(th) & grid.none_designated(co) & grid.all_designated(t.p) & grid.none_designated(t.p_prime)
    hit = grid.witness(mask, {t.free_var})
    if hit is None:
        raise BoundsExhausted(f"a type of the diagram, but no extension of {S.name} within {space.describe()} realizes it")
    N, _ = hit
    return N.renamed(f"{S.name}+")


# --- two-variable reduction ----------------------------------------------------------


@dataclass(frozen=True)
class ReductionResult:
    structure: Structure
    elements: tuple[str, str]
    direct: Structure
    direct_elements: tuple[str, str]


def _swap_in_param(phi: Formula, xvar: str, yvar: str, element: str) -> Formula:
    """``phi(x, y)`` becomes ``phi(@element, x)``."""
    tmp = "_t"
    phi = substitute(phi, yvar, Var(tmp))
    phi = substitute(phi, xvar, param(element))
    return substitute(phi, tmp, Var(xvar))


def realize_by_reduction(
    S: Structure,
    p: Sequence[Formula],
    p_prime: Sequence[Formula],
    space: SearchSpace,
    depth: int,
    vars: tuple[str, str] = ("x", "y"),
) -> ReductionResult:
    """Realize a two-variable pair by two one-variable extension steps.

    A direct two-variable extension supplies the types handed to each step;
    the second step sees the first new element as a parameter. The first
    element's type is taken at least at the depth of the pair and includes
    the pair's formulas in ``x`` alone, so a shallow ``depth`` cannot let an
    old element stand in for it.
    """
    xv, yv = vars
    th, co = eldiag(S, depth, (xv,))
    formulas = th + co + list(p) + list(p_prime)
    grid = _extension_grid(S, space, formulas, variables_of(formulas, extra=vars))
    mask = grid.all_designated(th) & grid.none_designated(co) & grid.all_designated(p) & grid.none_designated(p_prime)
    hit = grid.witness(mask, set(vars))
    if hit is None:
        raise BoundsExhausted(f"no two-variable extension of {S.name} within {space.describe()}")
    direct, env = hit
    e0, e1 = env[xv], env[yv]

    pair_depth = max((formula_depth(phi) for phi in list(p) + list(p_prime)), default=0)
    full0 = realized_type(direct, S.domain, e0, max(depth, pair_depth), xv)
    only_x = [phi for phi in list(p) + list(p_prime) if free_variables(phi) <= {xv}]
    type0 = TypePair(
        full0.p + tuple(phi for phi in only_x if phi in p),
        full0.p_prime + tuple(phi for phi in only_x if phi in p_prime),
        xv,
        full0.params,
    )
    N1 = saturate_step(S, type0, space, depth)
    a0 = find_realizer(N1, type0)

    base1 = realized_type(direct, tuple(S.domain) + (e0,), e1, depth, xv)
    rename = param(e0).fn

    def moved(phi: Formula) -> Formula:
        return rename_constant(phi, rename, param(a0))

    t1 = TypePair(
        tuple(moved(f) for f in base1.p) + tuple(_swap_in_param(f, xv, yv, a0) for f in p),
        tuple(moved(f) for f in base1.p_prime) + tuple(_swap_in_param(f, xv, yv, a0) for f in p_prime),
        xv,
        tuple(N1.domain),
    )
    N2 = saturate_step(N1, t1, space, depth)
    a1 = find_realizer(N2, t1)
    return ReductionResult(N2, (a0, a1), direct, (e0, e1))


def jointly_satisfies(S: Structure, env: dict[str, str], p: Iterable[Formula], p_prime: Iterable[Formula]) -> bool:
    one = S.chain.one
    return all(eval_formula(S, env, f) >= one for f in p) and all(eval_formula(S, env, f) < one for f in p_prime)
