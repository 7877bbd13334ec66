"""Vectorised evaluation of formulas over many structures and assignments at once.

A :class:`Block` packs every structure of one (chain, domain) pair into
numpy arrays indexed by structure number. A :class:`Grid` evaluates a
formula on all blocks simultaneously for every assignment of a fixed
variable tuple; a formula value is an array of shape
``(count, m, ..., m)`` (one domain axis per grid variable), possibly
broadcast. Subformula results are memoised, so checking a long enumeration
costs about one numpy operation per formula.

The flat candidate order (blocks in order, structure number, then the
assignment in lexicographic order of the grid variables) is the
enumeration order reported for witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import UlChain, find_embedding
from .errors import GradedError, SearchSpaceTooLarge, UncoveredVariable
from .structure import SearchSpace, Structure, block_count, element_names
from .syntax import (
    AND,
    CONJ,
    CONNECTIVES,
    EXISTS,
    FORALL,
    IMP,
    OR,
    Atom,
    Binary,
    Const,
    Formula,
    FormulaEnumeration,
    Quant,
    Signature,
    Var,
    all_variables,
)


@dataclass
class Block:
    chain: UlChain
    domain: tuple[str, ...]
    count: int
    preds: dict[str, np.ndarray]
    funcs: dict[str, np.ndarray]
    pinned: dict[str, int] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.domain)

    def structure(self, i: int, name: Optional[str] = None) -> Structure:
        dom = self.domain
        preds = {}
        for p, arr in self.preds.items():
            row = arr[i]
            preds[p] = {k: int(row[tuple(dom.index(x) for x in k)]) for k in itertools.product(dom, repeat=row.ndim)}
        funcs = {}
        for f, arr in self.funcs.items():
            row = arr[i]
            funcs[f] = {k: dom[int(row[tuple(dom.index(x) for x in k)])] for k in itertools.product(dom, repeat=row.ndim)}
        return Structure(self.chain, dom, preds, funcs, name=name or "N")

    @classmethod
    def of_structure(cls, S: Structure) -> "Block":
        dom = S.domain
        idx = {e: i for i, e in enumerate(dom)}
        m = len(dom)
        preds = {}
        for p, table in S.preds.items():
            ar = len(next(iter(table)))
            arr = np.zeros((1,) + (m,) * ar, dtype=np.int16)
            for k, v in table.items():
                arr[(0,) + tuple(idx[x] for x in k)] = v
            preds[p] = arr
        funcs = {}
        for f, table in S.funcs.items():
            ar = len(next(iter(table)))
            arr = np.zeros((1,) + (m,) * ar, dtype=np.int16)
            for k, v in table.items():
                arr[(0,) + tuple(idx[x] for x in k)] = idx[v]
            funcs[f] = arr
        pinned = {"@" + e: i for i, e in enumerate(dom)}
        return cls(S.chain, dom, 1, preds, funcs, pinned)

    @classmethod
    def enumerate(
        cls,
        chain: UlChain,
        domain: Sequence[str],
        sig: Signature,
        base: Optional[Structure] = None,
        embedding: Optional[Sequence[int]] = None,
    ) -> "Block":
        """All structures on ``domain`` over ``chain``; cells inside ``base`` are fixed.

        When ``base`` is given its elements must be a prefix-free subset of
        ``domain``; its predicate values are mapped into ``chain`` through
        ``embedding`` and its elements are pinned as ``@name`` parameters.
        """
        domain = tuple(domain)
        m = len(domain)
        idx = {e: i for i, e in enumerate(domain)}
        cells = []  # (kind, symbol, position, radix, fixed value or None)
        for p, ar in sig.predicates:
            for k in itertools.product(range(m), repeat=ar):
                fixed = None
                if base is not None and p in base.preds and all(domain[i] in base.domain for i in k):
                    fixed = embedding[base.preds[p][tuple(domain[i] for i in k)]]
                cells.append(("P", p, k, chain.size, fixed))
        for f, ar in sig.functions:
            for k in itertools.product(range(m), repeat=ar):
                fixed = None
                if base is not None and f in base.funcs and all(domain[i] in base.domain for i in k):
                    fixed = idx[base.funcs[f][tuple(domain[i] for i in k)]]
                cells.append(("F", f, k, m, fixed))
        free = [c for c in cells if c[4] is None]
        radices = [c[3] for c in free]
        count = 1
        for r in radices:
            count *= r
        preds = {p: np.zeros((count,) + (m,) * ar, dtype=np.int16) for p, ar in sig.predicates}
        funcs = {f: np.zeros((count,) + (m,) * ar, dtype=np.int16) for f, ar in sig.functions}
        digits = np.unravel_index(np.arange(count), radices) if radices else ()
        free_pos = 0
        for kind, sym, k, _, fixed in cells:
            target = (preds if kind == "P" else funcs)[sym]
            if fixed is None:
                target[(slice(None),) + k] = digits[free_pos]
                free_pos += 1
            else:
                target[(slice(None),) + k] = fixed
        pinned = {}
        if base is not None:
            pinned = {"@" + e: idx[e] for e in base.domain}
        return cls(chain, domain, count, preds, funcs, pinned)


def space_blocks(space: SearchSpace, sig: Signature) -> list[Block]:
    total = sum(block_count(c.size, m, sig) for c in space.chains for m in range(1, space.max_domain + 1))
    if total > space.max_candidates:
        raise SearchSpaceTooLarge(total, space.max_candidates)
    return [Block.enumerate(c, element_names(m), sig) for c in space.chains for m in range(1, space.max_domain + 1)]


def fresh_element_names(existing: Sequence[str], n: int) -> list[str]:
    out, i = [], 0
    taken = set(existing)
    while len(out) < n:
        name = "c" if i == 0 else f"c{i}"
        if name not in taken:
            out.append(name)
            taken.add(name)
        i += 1
    return out


def extension_blocks(S: Structure, space: SearchSpace, sig: Signature, min_new: int = 1) -> list[Block]:
    """Structures over the space's chains extending ``S`` by at least ``min_new`` fresh elements.

    Only chains into which ``S``'s chain embeds are used (first embedding
    found); the old cells are fixed, the new ones range freely.
    """
    plan = []
    for chain in space.chains:
        g = find_embedding(S.chain, chain)
        if g is None:
            continue
        for m in range(len(S.domain) + min_new, space.max_domain + 1):
            dom = tuple(S.domain) + tuple(fresh_element_names(S.domain, m - len(S.domain)))
            fixed_p = sum(len(S.domain) ** ar for p, ar in sig.predicates if p in S.preds)
            fixed_f = sum(len(S.domain) ** ar for f, ar in sig.functions if f in S.funcs)
            plan.append((chain, g, dom, block_count(chain.size, m, sig, fixed_p, fixed_f)))
    total = sum(p[3] for p in plan)
    if total > space.max_candidates:
        raise SearchSpaceTooLarge(total, space.max_candidates)
    return [Block.enumerate(chain, dom, sig, base=S, embedding=g) for chain, g, dom, _ in plan]


def variables_of(formulas: Iterable[Formula], extra: Iterable[str] = ()) -> tuple[str, ...]:
    names = set(extra)
    for f in formulas:
        names |= all_variables(f)
    return tuple(sorted(names))


class Grid:
    def __init__(self, blocks: Sequence[Block], vars: Sequence[str]) -> None:
        self.blocks = list(blocks)
        self.vars = tuple(vars)
        self.k = len(self.vars)
        self._values: dict[Formula, list[np.ndarray]] = {}
        self._designated: dict[Formula, np.ndarray] = {}
        self._nidx = [np.arange(b.count).reshape((b.count,) + (1,) * self.k) for b in self.blocks]
        self.sizes = [b.count * b.m**self.k for b in self.blocks]
        self.offsets = np.cumsum([0] + self.sizes)

    @classmethod
    def for_space(cls, space: SearchSpace, sig: Signature, vars: Sequence[str]) -> "Grid":
        return cls(space_blocks(space, sig), vars)

    @classmethod
    def for_structure(cls, S: Structure, vars: Sequence[str]) -> "Grid":
        return cls([Block.of_structure(S)], vars)

    @property
    def size(self) -> int:
        return int(self.offsets[-1])

    def shape(self, b: int) -> tuple[int, ...]:
        blk = self.blocks[b]
        return (blk.count,) + (blk.m,) * self.k

    # -- terms ---------------------------------------------------------------

    def _term(self, b: int, t) -> np.ndarray:
        blk = self.blocks[b]
        if isinstance(t, Var):
            if t.name not in self.vars:
                raise UncoveredVariable(t.name)
            j = self.vars.index(t.name)
            shape = [1] * (self.k + 1)
            shape[j + 1] = blk.m
            return np.arange(blk.m, dtype=np.int16).reshape(shape)
        if not t.args and t.fn in blk.pinned:
            return np.full((1,) * (self.k + 1), blk.pinned[t.fn], dtype=np.int16)
        if t.fn not in blk.funcs:
            raise GradedError(f"no interpretation for function {t.fn!r}")
        arr = blk.funcs[t.fn]
        if not t.args:
            return arr.reshape((blk.count,) + (1,) * self.k)
        args = tuple(self._term(b, a) for a in t.args)
        return arr[(self._nidx[b],) + args]

    # -- formulas ------------------------------------------------------------

    def values(self, phi: Formula) -> list[np.ndarray]:
        hit = self._values.get(phi)
        if hit is not None:
            return hit
        out = [self._eval(b, phi) for b in range(len(self.blocks))]
        self._values[phi] = out
        return out

    def _eval(self, b: int, phi: Formula) -> np.ndarray:
        blk = self.blocks[b]
        A = blk.chain
        unit = (1,) * (self.k + 1)
        if isinstance(phi, Const):
            v = {"0": A.zero, "1": A.one, "bot": A.bot, "top": A.top}[phi.kind]
            return np.full(unit, v, dtype=np.int16)
        if isinstance(phi, Atom):
            if phi.pred not in blk.preds:
                raise GradedError(f"no interpretation for predicate {phi.pred!r}")
            arr = blk.preds[phi.pred]
            if not phi.args:
                return arr.reshape((blk.count,) + (1,) * self.k)
            args = tuple(self._term(b, t) for t in phi.args)
            return arr[(self._nidx[b],) + args]
        if isinstance(phi, Binary):
            left = self.values(phi.left)[b]
            right = self.values(phi.right)[b]
            if phi.op == AND:
                return np.minimum(left, right)
            if phi.op == OR:
                return np.maximum(left, right)
            if phi.op == CONJ:
                return A.conj_array[left, right]
            if phi.op == IMP:
                return A.residuum_array[left, right]
            raise ValueError(phi.op)
        if isinstance(phi, Quant):
            if phi.var not in self.vars:
                raise UncoveredVariable(phi.var)
            body = self.values(phi.body)[b]
            axis = self.vars.index(phi.var) + 1
            if body.shape[axis] == 1:
                return body
            reduce = np.min if phi.q == FORALL else np.max
            return reduce(body, axis=axis, keepdims=True)
        raise TypeError(f"not a formula: {phi!r}")

    def designated(self, phi: Formula) -> np.ndarray:
        """Flat boolean mask over all candidates: value of ``phi`` is at least ``one``."""
        hit = self._designated.get(phi)
        if hit is not None:
            return hit
        parts = []
        for b, vals in enumerate(self.values(phi)):
            full = np.broadcast_to(vals, self.shape(b))
            parts.append((full >= self.blocks[b].chain.one).ravel())
        mask = np.concatenate(parts) if parts else np.zeros(0, dtype=bool)
        self._designated[phi] = mask
        return mask

    def all_designated(self, formulas: Iterable[Formula]) -> np.ndarray:
        mask = np.ones(self.size, dtype=bool)
        for f in formulas:
            mask &= self.designated(f)
        return mask

    def none_designated(self, formulas: Iterable[Formula]) -> np.ndarray:
        mask = np.ones(self.size, dtype=bool)
        for f in formulas:
            mask &= ~self.designated(f)
        return mask

    def entails(self, premises: Iterable[Formula], phi: Formula) -> bool:
        return not np.any(self.all_designated(premises) & ~self.designated(phi))

    def locate(self, flat: int) -> tuple[Block, int, dict[str, str]]:
        b = int(np.searchsorted(self.offsets, flat, side="right")) - 1
        blk = self.blocks[b]
        local = flat - int(self.offsets[b])
        coords = np.unravel_index(local, self.shape(b))
        assignment = {v: blk.domain[int(c)] for v, c in zip(self.vars, coords[1:])}
        return blk, int(coords[0]), assignment

    def witness(self, mask: np.ndarray, free: Iterable[str] = ()) -> Optional[tuple[Structure, dict[str, str]]]:
        hits = np.flatnonzero(mask)
        if hits.size == 0:
            return None
        blk, i, assignment = self.locate(int(hits[0]))
        keep = set(free)
        return blk.structure(i), {v: e for v, e in assignment.items() if v in keep}

    def value_at(self, phi: Formula, b: int, i: int, assignment: dict[str, int]) -> int:
        """Value for structure ``i`` of block ``b`` with variables given as element indices."""
        vals = np.broadcast_to(self.values(phi)[b], self.shape(b))
        coords = (i,) + tuple(assignment.get(v, 0) for v in self.vars)
        return int(vals[coords])


def enumeration_values(S: Structure, enum: FormulaEnumeration, vars: Sequence[str]) -> list[np.ndarray]:
    """Values of a whole layered enumeration on one structure.

    ``result[d]`` has shape ``(len(enum.layers[d]), m ** k)``: one row per
    formula in enumeration order, one column per assignment of ``vars`` in
    lexicographic order. Each layer is built from the earlier ones with a
    handful of broadcast operations, so this mirrors the construction order
    of :func:`~gradedmt.syntax.enumerate_layers` exactly.
    """
    vars = tuple(vars)
    k, m = len(vars), len(S.domain)
    shape = (m,) * k
    cells = m**k
    if not enum.layers:
        return []
    g = Grid.for_structure(S, vars)
    base = np.stack([np.broadcast_to(g.values(f)[0][0], shape).reshape(cells) for f in enum.layers[0]])
    A = S.chain
    ops = {
        AND: np.minimum,
        OR: np.maximum,
        CONJ: lambda a, b: A.conj_array[a, b],
        IMP: lambda a, b: A.residuum_array[a, b],
    }
    layers = [base.astype(np.int16)]
    for d in range(1, len(enum.layers)):
        parts = []
        for op in CONNECTIVES:
            for i in range(d):
                a, b = layers[i], layers[d - 1 - i]
                parts.append(ops[op](a[:, None, :], b[None, :, :]).reshape(-1, cells))
        prev = layers[d - 1].reshape((-1,) + shape)
        for q in (FORALL, EXISTS):
            reduce = np.min if q == FORALL else np.max
            for j in range(k):
                red = reduce(prev, axis=j + 1, keepdims=True)
                parts.append(np.broadcast_to(red, prev.shape).reshape(-1, cells))
        layer = np.concatenate(parts).astype(np.int16, copy=False)
        if len(layer) != len(enum.layers[d]):
            raise ValueError("enumeration does not follow the standard layer construction")
        layers.append(layer)
    return layers
