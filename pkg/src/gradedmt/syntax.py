"""Terms, formulas, signatures, the concrete grammar and formula enumeration.

Grammar, loosest binding first::

    formula := quant | imp
    quant   := ('forall' | 'exists') VAR '.' formula
    imp     := disj ('->' imp)?              # right associative
    disj    := meet ('\\/' meet)*
    meet    := conj ('/\\' conj)*
    conj    := unit ('&' unit)*
    unit    := '0' | '1' | 'bot' | 'top' | atom | '(' formula ')' | quant
    atom    := NAME ('(' term (',' term)* ')')?
    term    := NAME ('(' term (',' term)* ')')? | '@' NAME

A quantifier body extends as far to the right as possible. There is no
negation; write ``phi -> 0``.
"""

from __future__ import annotations

import itertools
from functools import cached_property
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Union

from .errors import ArityMismatch, EnumerationTooLarge, FormulaSyntaxError, SignatureMismatch, UnknownSymbol

AND, OR, CONJ, IMP = "/\\", "\\/", "&", "->"
CONNECTIVES = (AND, OR, CONJ, IMP)
FORALL, EXISTS = "forall", "exists"
CONSTANTS = ("0", "1", "bot", "top")

DEFAULT_ENUMERATION_CEILING = 200_000

# --- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.fn
        return f"{self.fn}({','.join(map(str, self.args))})"


Term = Union[Var, App]


def param(element: str) -> App:
    """The parameter constant ``@element`` naming a domain element."""
    return App("@" + element)


def is_param(name: str) -> bool:
    return name.startswith("@")


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    out: frozenset[str] = frozenset()
    for a in t.args:
        out |= term_vars(a)
    return out


# --- formulas ----------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    kind: str  # one of CONSTANTS

    def __str__(self) -> str:
        return self.kind


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(map(str, self.args))})"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return to_text(self)

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.op, self.left, self.right))


@dataclass(frozen=True)
class Quant:
    q: str
    var: str
    body: "Formula"

    def __str__(self) -> str:
        return to_text(self)

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.q, self.var, self.body))


Formula = Union[Const, Atom, Binary, Quant]

ZERO, ONE, BOT, TOP = Const("0"), Const("1"), Const("bot"), Const("top")


def meet(a: Formula, b: Formula) -> Binary:
    return Binary(AND, a, b)


def join(a: Formula, b: Formula) -> Binary:
    return Binary(OR, a, b)


def conj(a: Formula, b: Formula) -> Binary:
    return Binary(CONJ, a, b)


def imp(a: Formula, b: Formula) -> Binary:
    return Binary(IMP, a, b)


def forall(var: str, body: Formula) -> Quant:
    return Quant(FORALL, var, body)


def exists(var: str, body: Formula) -> Quant:
    return Quant(EXISTS, var, body)


def depth(phi: Formula) -> int:
    """Number of connective and quantifier nodes."""
    if isinstance(phi, Binary):
        return 1 + depth(phi.left) + depth(phi.right)
    if isinstance(phi, Quant):
        return 1 + depth(phi.body)
    return 0


def canonical_key(phi: Formula) -> tuple[int, str]:
    return depth(phi), to_text(phi)


def big_or(formulas: Iterable[Formula]) -> Formula:
    """Left fold of ``\\/`` over the canonical order; the empty join is ``bot``."""
    items = sorted(set(formulas), key=canonical_key)
    if not items:
        return BOT
    acc = items[0]
    for f in items[1:]:
        acc = join(acc, f)
    return acc


def power_formula(phi: Formula, n: int) -> Formula:
    """``phi^0 = 1`` and ``phi^(k+1) = phi^k & phi``."""
    acc: Formula = ONE
    for _ in range(n):
        acc = conj(acc, phi)
    return acc


def free_variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Atom):
        out: frozenset[str] = frozenset()
        for t in phi.args:
            out |= term_vars(t)
        return out
    if isinstance(phi, Binary):
        return free_variables(phi.left) | free_variables(phi.right)
    if isinstance(phi, Quant):
        return free_variables(phi.body) - {phi.var}
    return frozenset()


def all_variables(phi: Formula) -> frozenset[str]:
    """Free and bound variables."""
    if isinstance(phi, Quant):
        return all_variables(phi.body) | {phi.var}
    if isinstance(phi, Binary):
        return all_variables(phi.left) | all_variables(phi.right)
    return free_variables(phi)


def is_sentence(phi: Formula) -> bool:
    return not free_variables(phi)


def subterms(phi: Formula) -> Iterator[Term]:
    if isinstance(phi, Atom):
        stack = list(phi.args)
        while stack:
            t = stack.pop()
            yield t
            if isinstance(t, App):
                stack.extend(t.args)
    elif isinstance(phi, Binary):
        yield from subterms(phi.left)
        yield from subterms(phi.right)
    elif isinstance(phi, Quant):
        yield from subterms(phi.body)


def constants_of(phi: Formula) -> set[str]:
    return {t.fn for t in subterms(phi) if isinstance(t, App) and not t.args}


# --- substitution ------------------------------------------------------------


def substitute_term(t: Term, x: str, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.name == x else t
    if not t.args:
        return t
    return App(t.fn, tuple(substitute_term(a, x, s) for a in t.args))


def _fresh_name(base: str, avoid: set[str]) -> str:
    name = base + "'"
    while name in avoid:
        name += "'"
    return name


def substitute(phi: Formula, x: str, t: Term) -> Formula:
    """Capture-avoiding substitution of ``t`` for the free occurrences of ``x``."""
    if isinstance(phi, Const):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(substitute_term(a, x, t) for a in phi.args))
    if isinstance(phi, Binary):
        return Binary(phi.op, substitute(phi.left, x, t), substitute(phi.right, x, t))
    if phi.var == x or x not in free_variables(phi.body):
        return phi
    tv = term_vars(t)
    if phi.var in tv:
        avoid = set(tv) | all_variables(phi.body) | {x}
        fresh = _fresh_name(phi.var, avoid)
        body = substitute(phi.body, phi.var, Var(fresh))
        return Quant(phi.q, fresh, substitute(body, x, t))
    return Quant(phi.q, phi.var, substitute(phi.body, x, t))


def rename_constant(phi: Formula, old: str, new: Term) -> Formula:
    """Replace every occurrence of the constant ``old`` by ``new`` (a closed term)."""

    def on_term(t: Term) -> Term:
        if isinstance(t, Var):
            return t
        if not t.args:
            return new if t.fn == old else t
        return App(t.fn, tuple(on_term(a) for a in t.args))

    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(on_term(a) for a in phi.args))
    if isinstance(phi, Binary):
        return Binary(phi.op, rename_constant(phi.left, old, new), rename_constant(phi.right, old, new))
    if isinstance(phi, Quant):
        return Quant(phi.q, phi.var, rename_constant(phi.body, old, new))
    return phi


# --- signatures --------------------------------------------------------------


@dataclass(frozen=True)
class Signature:
    """Predicate and function symbols with their arities, in declaration order."""

    predicates: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        for kind, symbols in (("predicate", self.predicates), ("function", self.functions)):
            names = [n for n, _ in symbols]
            if len(names) != len(set(names)):
                raise SignatureMismatch(f"duplicate {kind} symbol in {names}")
            for n, ar in symbols:
                if ar < 0:
                    raise SignatureMismatch(f"negative arity for {n}")

    @property
    def pred_arity(self) -> dict[str, int]:
        return dict(self.predicates)

    @property
    def func_arity(self) -> dict[str, int]:
        return dict(self.functions)

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(n for n, ar in self.functions if ar == 0)

    def merge(self, other: "Signature") -> "Signature":
        preds = dict(self.predicates)
        funcs = dict(self.functions)
        for n, ar in other.predicates:
            if preds.setdefault(n, ar) != ar:
                raise SignatureMismatch(f"predicate {n} used with arities {preds[n]} and {ar}")
        for n, ar in other.functions:
            if funcs.setdefault(n, ar) != ar:
                raise SignatureMismatch(f"function {n} used with arities {funcs[n]} and {ar}")
        return Signature(tuple(preds.items()), tuple(funcs.items()))

    def with_constants(self, names: Iterable[str]) -> "Signature":
        return self.merge(Signature((), tuple((n, 0) for n in names)))

    def without_params(self) -> "Signature":
        return Signature(self.predicates, tuple((n, a) for n, a in self.functions if not is_param(n)))


def signature_of(formulas: Iterable[Formula]) -> Signature:
    """Smallest signature covering the symbols used in ``formulas``."""
    preds: dict[str, int] = {}
    funcs: dict[str, int] = {}

    def note(table, name, ar):
        if table.setdefault(name, ar) != ar:
            raise SignatureMismatch(f"{name} used with arities {table[name]} and {ar}")

    def walk(phi):
        if isinstance(phi, Atom):
            note(preds, phi.pred, len(phi.args))
            for t in subterms(phi):
                if isinstance(t, App):
                    note(funcs, t.fn, len(t.args))
        elif isinstance(phi, Binary):
            walk(phi.left)
            walk(phi.right)
        elif isinstance(phi, Quant):
            walk(phi.body)

    for f in formulas:
        walk(f)
    return Signature(tuple(preds.items()), tuple(funcs.items()))


# --- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<op>->|\\/|/\\|&|\(|\)|,|\.)|(?P<param>@[A-Za-z0-9_']+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<num>[0-9]+))"
)
_VARIABLE_INITIALS = "uvwxyz"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        value = m.group(kind)
        start = m.start(kind)
        if kind == "num" and value not in ("0", "1"):
            raise FormulaSyntaxError(f"numeral {value} is not a truth constant", start, text)
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Optional[Signature]) -> None:
        self.text = text
        self.sig = sig
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message: str, cls=FormulaSyntaxError):
        raise cls(message, self.tok[2], self.text)

    def accept(self, value: str) -> bool:
        if self.tok[0] in ("op", "name") and self.tok[1] == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            found = self.tok[1] or "end of input"
            self.error(f"expected {value!r}, found {found!r}")

    def parse(self) -> Formula:
        phi = self.formula()
        if self.tok[0] != "eof":
            self.error(f"unexpected {self.tok[1]!r}")
        return phi

    def formula(self) -> Formula:
        if self.tok[0] == "name" and self.tok[1] in (FORALL, EXISTS):
            return self.quant()
        return self.imp()

    def quant(self) -> Formula:
        q = self.tok[1]
        self.i += 1
        if self.tok[0] != "name" or self.tok[1] in (FORALL, EXISTS, "bot", "top"):
            self.error("expected a variable after quantifier")
        var = self.tok[1]
        self.i += 1
        self.expect(".")
        return Quant(q, var, self.formula())

    def imp(self) -> Formula:
        left = self.binary_level(0)
        if self.accept(IMP):
            return Binary(IMP, left, self.formula())
        return left

    _LEVELS = (OR, AND, CONJ)

    def binary_level(self, level: int) -> Formula:
        if level == len(self._LEVELS):
            return self.unit()
        op = self._LEVELS[level]
        left = self.binary_level(level + 1)
        while self.accept(op):
            # a quantifier operand swallows everything to its right
            right = self.binary_level(level + 1)
            left = Binary(op, left, right)
        return left

    def unit(self) -> Formula:
        kind, value, pos = self.tok
        if kind == "num":
            self.i += 1
            return ZERO if value == "0" else ONE
        if kind == "op" and value == "(":
            self.i += 1
            phi = self.formula()
            self.expect(")")
            return phi
        if kind == "name":
            if value in (FORALL, EXISTS):
                return self.quant()
            if value == "bot":
                self.i += 1
                return BOT
            if value == "top":
                self.i += 1
                return TOP
            return self.atom()
        found = value or "end of input"
        self.error(f"expected a formula, found {found!r}")

    def args(self) -> tuple[Term, ...]:
        self.expect("(")
        out = [self.term()]
        while self.accept(","):
            out.append(self.term())
        self.expect(")")
        return tuple(out)

    def atom(self) -> Atom:
        name, pos = self.tok[1], self.tok[2]
        self.i += 1
        args = self.args() if self.tok[1] == "(" else ()
        if self.sig is not None:
            arity = self.sig.pred_arity
            if name not in arity:
                raise UnknownSymbol(f"unknown predicate {name!r}", pos, self.text)
            if arity[name] != len(args):
                raise ArityMismatch(f"{name} expects {arity[name]} arguments, got {len(args)}", pos, self.text)
        return Atom(name, args)

    def term(self) -> Term:
        kind, name, pos = self.tok
        if kind == "param":
            self.i += 1
            return App(name)
        if kind != "name" or name in (FORALL, EXISTS, "bot", "top"):
            found = name or "end of input"
            self.error(f"expected a term, found {found!r}")
        self.i += 1
        if self.tok[1] == "(":
            args = self.args()
            if self.sig is not None:
                arity = self.sig.func_arity
                if name not in arity:
                    raise UnknownSymbol(f"unknown function {name!r}", pos, self.text)
                if arity[name] != len(args):
                    raise ArityMismatch(f"{name} expects {arity[name]} arguments, got {len(args)}", pos, self.text)
            return App(name, args)
        if self.sig is not None:
            arity = self.sig.func_arity
            if name in arity:
                if arity[name] != 0:
                    raise ArityMismatch(f"{name} expects {arity[name]} arguments, got 0", pos, self.text)
                return App(name)
            return Var(name)
        return Var(name) if name[0] in _VARIABLE_INITIALS else App(name)


def parse_formula(text: str, sig: Optional[Signature] = None) -> Formula:
    """Parse ``text``.

    With a signature, predicates and functions must be declared, declared
    0-ary functions are constants and every other bare term name is a
    variable. Without one, symbols are accepted as used and a bare term name
    is a variable iff it starts with one of ``u v w x y z``.
    """
    return _Parser(text, sig).parse()


def parse_formula_list(text: str, sig: Optional[Signature] = None) -> list[Formula]:
    """Split on top-level commas and parse each piece."""
    pieces, depth_, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth_ += 1
        elif ch == ")":
            depth_ -= 1
        elif ch == "," and depth_ == 0:
            pieces.append(text[start:i])
            start = i + 1
    pieces.append(text[start:])
    return [parse_formula(p, sig) for p in pieces if p.strip()]


# --- printing ----------------------------------------------------------------

_PREC = {IMP: 0, OR: 1, AND: 2, CONJ: 3}


def to_text(phi: Formula) -> str:
    if isinstance(phi, (Const, Atom)):
        return str(phi)
    if isinstance(phi, Quant):
        return f"{phi.q} {phi.var}. {to_text(phi.body)}"
    prec = _PREC[phi.op]

    def side(child: Formula, is_left: bool) -> str:
        s = to_text(child)
        if isinstance(child, Quant):
            return f"({s})"
        if isinstance(child, Binary):
            cp = _PREC[child.op]
            right_assoc = phi.op == IMP
            if cp < prec or (cp == prec and (is_left == right_assoc)):
                return f"({s})"
        return s

    return f"{side(phi.left, True)} {phi.op} {side(phi.right, False)}"


# --- enumeration -------------------------------------------------------------


def _base_terms(sig: Signature, vars: Sequence[str], consts: Sequence[str]) -> list[Term]:
    terms: list[Term] = [Var(v) for v in vars]
    seen = set()
    for c in list(consts) + list(sig.constants):
        if c not in seen:
            seen.add(c)
            terms.append(App(c))
    return terms


def enumeration_terms(sig: Signature, vars: Sequence[str], consts: Sequence[str], term_depth: int = 1) -> list[Term]:
    """Variables, constants, then one layer of function applications over those."""
    base = _base_terms(sig, vars, consts)
    terms = list(base)
    if term_depth >= 1:
        for fn, ar in sig.functions:
            if ar == 0:
                continue
            for args in itertools.product(base, repeat=ar):
                terms.append(App(fn, args))
    return terms


def atoms_over(sig: Signature, terms: Sequence[Term]) -> list[Atom]:
    out = []
    for pred, ar in sig.predicates:
        for args in itertools.product(terms, repeat=ar):
            out.append(Atom(pred, tuple(args)))
    return out


def count_formulas(n_base: int, n_vars: int, depth_: int) -> int:
    if depth_ < 0:
        return 0
    layers = [n_base]
    for d in range(1, depth_ + 1):
        binary = len(CONNECTIVES) * sum(layers[i] * layers[d - 1 - i] for i in range(d))
        layers.append(binary + 2 * n_vars * layers[d - 1])
    return sum(layers)


@dataclass
class FormulaEnumeration:
    """Layered enumeration; ``layers[d]`` holds the formulas of depth exactly ``d``."""

    layers: list[list[Formula]] = field(default_factory=list)

    def __iter__(self) -> Iterator[Formula]:
        for layer in self.layers:
            yield from layer

    def __len__(self) -> int:
        return sum(len(layer) for layer in self.layers)


def enumerate_layers(
    sig: Signature,
    depth_: int,
    vars: Sequence[str] = (),
    consts: Sequence[str] = (),
    *,
    term_depth: int = 1,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
) -> FormulaEnumeration:
    if depth_ < 0:
        return FormulaEnumeration([])
    terms = enumeration_terms(sig, vars, consts, term_depth)
    base: list[Formula] = [ZERO, ONE, BOT, TOP, *atoms_over(sig, terms)]
    total = count_formulas(len(base), len(vars), depth_)
    if total > ceiling:
        raise EnumerationTooLarge(total, ceiling)
    layers: list[list[Formula]] = [base]
    for d in range(1, depth_ + 1):
        layer: list[Formula] = []
        for op in CONNECTIVES:
            for i in range(d):
                for a in layers[i]:
                    for b in layers[d - 1 - i]:
                        layer.append(Binary(op, a, b))
        for q in (FORALL, EXISTS):
            for v in vars:
                for b in layers[d - 1]:
                    layer.append(Quant(q, v, b))
        layers.append(layer)
    return FormulaEnumeration(layers)


def enumerate_formulas(
    sig: Signature,
    depth_: int,
    vars: Sequence[str] = (),
    consts: Sequence[str] = (),
    *,
    term_depth: int = 1,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
) -> list[Formula]:
    """All formulas of depth at most ``depth_`` over the given variables and constants.

    Quantifiers bind variables drawn from ``vars``. Order: depth layer,
    then connective (``/\\``, ``\\/``, ``&``, ``->``) by split point and
    operand order, then ``forall`` before ``exists`` by variable.
    """
    return list(enumerate_layers(sig, depth_, vars, consts, term_depth=term_depth, ceiling=ceiling))


def enumerate_sentences(
    sig: Signature,
    depth_: int,
    consts: Sequence[str] = (),
    bound_vars: Sequence[str] = ("x",),
    *,
    ceiling: int = DEFAULT_ENUMERATION_CEILING,
) -> list[Formula]:
    return [f for f in enumerate_formulas(sig, depth_, bound_vars, consts, ceiling=ceiling) if is_sentence(f)]
