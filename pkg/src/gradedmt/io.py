"""Text formats for chains, models, tableaux, types and chains of models.

Every ``format_*`` function produces text that the matching ``parse_*``
function reads back. Blank lines and lines starting with ``#`` are ignored
everywhere.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Callable, Iterator, Mapping, Optional, Sequence, Union

from .algebra import UlChain, builtin_chain
from .errors import FileFormatError, FormulaSyntaxError, GradedError
from .modeltheory import ModelChain
from .structure import Structure
from .syntax import Formula, Signature, constants_of, is_param, parse_formula, to_text
from .tableaux import Tableau
from .types import TypePair

PathLike = Union[str, os.PathLike]
ChainResolver = Callable[[str], UlChain]


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield n, line


def _int(word: str, source: str, n: int) -> int:
    try:
        return int(word)
    except ValueError:
        raise FileFormatError(f"expected an integer, found {word!r}", source, n) from None


# --- chains -------------------------------------------------------------------------


def parse_chain(text: str, source: str = "<string>") -> UlChain:
    name = None
    size = one = zero = None
    rows: list[tuple[int, ...]] = []
    in_table = False
    for n, line in _lines(text):
        if in_table:
            row = tuple(_int(w, source, n) for w in line.split())
            rows.append(row)
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "chain":
            name = rest
        elif key == "size":
            size = _int(rest, source, n)
        elif key == "one":
            one = _int(rest, source, n)
        elif key == "zero":
            zero = _int(rest, source, n)
        elif line == "conj:":
            in_table = True
        else:
            raise FileFormatError(f"unexpected line {line!r}", source, n)
    missing = [k for k, v in (("chain", name), ("size", size), ("one", one), ("zero", zero)) if v is None]
    if missing:
        raise FileFormatError(f"missing {', '.join(missing)}", source)
    if len(rows) != size or any(len(r) != size for r in rows):
        raise FileFormatError(f"conj table must be {size}x{size}", source)
    try:
        return UlChain(name, size, tuple(rows), one, zero)
    except GradedError as e:
        raise FileFormatError(str(e), source) from None


def format_chain(chain: UlChain) -> str:
    lines = [f"chain {chain.name}", f"size {chain.size}", f"one {chain.one}", f"zero {chain.zero}", "conj:"]
    lines += [" ".join(str(v) for v in row) for row in chain.conj_table]
    return "\n".join(lines) + "\n"


def load_chain(name_or_path: PathLike) -> UlChain:
    """A chain file, or a built-in name such as ``L5``, ``G3`` or ``Z2``."""
    path = Path(name_or_path)
    if path.exists():
        return parse_chain(path.read_text(), str(path))
    try:
        return builtin_chain(str(name_or_path))
    except (KeyError, ValueError, GradedError):
        raise FileFormatError("neither a chain file nor a built-in chain name", str(name_or_path)) from None


class ChainRegistry:
    """Resolves the ``algebra`` line of model files: known chains first, then built-ins."""

    def __init__(self, chains: Sequence[UlChain] = ()) -> None:
        self.known = {c.name: c for c in chains}

    def add(self, chain: UlChain) -> None:
        self.known[chain.name] = chain

    def __call__(self, name: str) -> UlChain:
        if name in self.known:
            return self.known[name]
        return builtin_chain(name)


# --- models -----------------------------------------------------------------------


def parse_model(text: str, resolve: Optional[ChainResolver] = None, source: str = "<string>") -> Structure:
    """Read a model file.

    A symbol is a function when an optional ``functions f g ...`` line
    names it; otherwise when every value given for it is a domain element.
    All other symbols are predicates.
    """
    resolve = resolve or ChainRegistry()
    name, chain, domain = "M", None, None
    declared: Optional[set[str]] = None
    entries: dict[str, list[tuple[int, tuple[str, ...], str]]] = {}
    for n, line in _lines(text):
        head, _, rest = line.partition(" ")
        if "=" not in line and head in ("model", "algebra", "domain", "functions"):
            if head == "model":
                name = rest.strip()
            elif head == "algebra":
                try:
                    chain = resolve(rest.strip())
                except (KeyError, ValueError, GradedError) as e:
                    raise FileFormatError(f"unknown algebra {rest.strip()!r}: {e}", source, n) from None
            elif head == "functions":
                declared = set(rest.split())
            else:
                domain = tuple(rest.split())
            continue
        if domain is None:
            raise FileFormatError("table line before the domain line", source, n)
        lhs, eq, rhs = line.partition("=")
        words, value = lhs.split(), rhs.strip()
        if not eq or not words or not value:
            raise FileFormatError(f"expected 'symbol args = value', found {line!r}", source, n)
        sym, args = words[0], tuple(words[1:])
        for a in args:
            if a not in domain:
                raise FileFormatError(f"{a!r} is not a domain element", source, n)
        if any(a == args for _, a, _ in entries.get(sym, [])):
            raise FileFormatError(f"{sym}{args} assigned twice", source, n)
        entries.setdefault(sym, []).append((n, args, value))
    if chain is None or domain is None:
        raise FileFormatError("model needs 'algebra' and 'domain' lines", source)
    preds: dict = {}
    funcs: dict = {}
    for sym, rows in entries.items():
        if declared is not None:
            is_func = sym in declared
        else:
            is_func = all(value in domain for _, _, value in rows)
        for n, args, value in rows:
            if is_func:
                if value not in domain:
                    raise FileFormatError(f"{value!r} is not a domain element", source, n)
                funcs.setdefault(sym, {})[args] = value
            else:
                preds.setdefault(sym, {})[args] = _int(value, source, n)
    try:
        return Structure(chain, domain, preds, funcs, name)
    except GradedError as e:
        raise FileFormatError(str(e), source) from None


def _looks_numeric(name: str) -> bool:
    return name.lstrip("-").isdigit()


def format_model(S: Structure) -> str:
    lines = [f"model {S.name}", f"algebra {S.chain.name}", "domain " + " ".join(S.domain)]
    if S.funcs and any(_looks_numeric(e) for e in S.domain):
        lines.append("functions " + " ".join(S.funcs))
    for p, table in S.preds.items():
        for k in sorted(table, key=lambda k: [S.index(x) for x in k]):
            lines.append(" ".join((p,) + k) + f" = {table[k]}")
    for f, table in S.funcs.items():
        for k in sorted(table, key=lambda k: [S.index(x) for x in k]):
            lines.append(" ".join((f,) + k) + f" = {table[k]}")
    return "\n".join(lines) + "\n"


def load_model(path: PathLike, resolve: Optional[ChainResolver] = None) -> Structure:
    path = Path(path)
    return parse_model(path.read_text(), resolve, str(path))


# --- sectioned formula files --------------------------------------------------------------


def _sections(text: str, headers: Sequence[str], source: str, sig: Optional[Signature]) -> dict[str, list[Formula]]:
    out: dict[str, list[Formula]] = {h: [] for h in headers}
    current = None
    for n, line in _lines(text):
        if line in headers:
            current = line
            continue
        if current is None:
            raise FileFormatError(f"formula before a section header ({' / '.join(headers)})", source, n)
        try:
            out[current].append(parse_formula(line, sig))
        except FormulaSyntaxError as e:
            raise FileFormatError(str(e), source, n) from None
    return out


def parse_tableau(text: str, source: str = "<string>", sig: Optional[Signature] = None) -> Tableau:
    s = _sections(text, ("T:", "U:"), source, sig)
    return Tableau(tuple(s["T:"]), tuple(s["U:"]))


def format_tableau(tau: Tableau) -> str:
    return str(tau) + "\n"


def load_tableau(path: PathLike, sig: Optional[Signature] = None) -> Tableau:
    path = Path(path)
    return parse_tableau(path.read_text(), str(path), sig)


def parse_type(text: str, source: str = "<string>", sig: Optional[Signature] = None) -> TypePair:
    s = _sections(text, ("p:", "p':"), source, sig)
    params = sorted({c[1:] for f in s["p:"] + s["p':"] for c in _params_of(f)})
    try:
        return TypePair(tuple(s["p:"]), tuple(s["p':"]), "x", tuple(params))
    except ValueError as e:
        raise FileFormatError(str(e), source) from None


def _params_of(phi: Formula) -> set[str]:
    return {c for c in constants_of(phi) if is_param(c)}


def format_type(t: TypePair) -> str:
    lines = ["p:"] + [to_text(f) for f in t.p] + ["p':"] + [to_text(f) for f in t.p_prime]
    return "\n".join(lines) + "\n"


def load_type(path: PathLike, sig: Optional[Signature] = None) -> TypePair:
    path = Path(path)
    return parse_type(path.read_text(), str(path), sig)


# --- chains of models ----------------------------------------------------------------


def parse_model_chain(text: str, base: PathLike = ".", resolve: Optional[ChainResolver] = None, source: str = "<string>") -> ModelChain:
    """One model-file reference per line, relative to ``base``."""
    links = []
    for n, line in _lines(text):
        path = Path(base) / line
        if not path.exists():
            raise FileFormatError(f"model file {line!r} not found", source, n)
        links.append(load_model(path, resolve))
    if not links:
        raise FileFormatError("chain of models lists no model files", source)
    return ModelChain(tuple(links))


def load_model_chain(path: PathLike, resolve: Optional[ChainResolver] = None) -> ModelChain:
    path = Path(path)
    return parse_model_chain(path.read_text(), path.parent, resolve, str(path))


def format_assignment(env: Mapping[str, str]) -> str:
    return ", ".join(f"{k}={v}" for k, v in sorted(env.items()))
