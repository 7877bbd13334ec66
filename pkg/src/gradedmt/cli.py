"""Command-line front end.

Exit status: 0 for an affirmative verdict or a successful search, 1 for a
negative verdict (a witness is printed), 2 for usage, input or resource
errors. Models, tableaux and types are printed in their file formats so
they can be fed back in.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Callable, Optional, Sequence, TextIO

from . import io
from .algebra import verify_ul_axioms
from .errors import GradedError
from .generate import MONADIC, PROPOSITIONAL, random_formula, random_tableau
from .modeltheory import (
    attained_values,
    check_elementary,
    check_substructure,
    check_union_preservation,
    theory_of,
    union_of_chain,
)
from .semantics import find_countermodel
from .structure import DEFAULT_MAX_CANDIDATES, SearchSpace, Structure, eval_formula, sentence_value
from .syntax import Formula, Signature, big_or, parse_formula, parse_formula_list, to_text
from .tableaux import DEFAULT_SUBSET_CAP, Tableau, check_finite_character, find_inconsistency, find_satisfying_model, henkin_stages
from .types import DEFAULT_TYPE_SIZE_CAP, find_realizer, is_saturated, is_type_of_tableau, saturate_step

OK, NEGATIVE, ERROR = 0, 1, 2


class Reporter:
    """Text output, or one ``key=value`` record per line with ``--format kv``."""

    def __init__(self, mode: str = "text", out: TextIO = sys.stdout) -> None:
        self.mode = mode
        self.out = out

    def line(self, key: str, value) -> None:
        if self.mode == "kv":
            text = value if isinstance(value, str) else json.dumps(value)
            if "\n" in text:
                text = json.dumps(text)
            print(f"{key}={text}", file=self.out)
        else:
            print(f"{key}: {value}", file=self.out)

    def block(self, key: str, text: str) -> None:
        if self.mode == "kv":
            print(f"{key}={json.dumps(text)}", file=self.out)
        else:
            print(text.rstrip("\n"), file=self.out)

    def verdict(self, ok: bool, yes: str, no: str) -> int:
        self.line("verdict", yes if ok else no)
        return OK if ok else NEGATIVE


# --- argument helpers ------------------------------------------------------------


def _chains(specs: Sequence[str]):
    names = []
    for s in specs:
        names += [n for n in s.split(",") if n]
    return [io.load_chain(n) for n in names]


def _space(args) -> SearchSpace:
    if not args.space:
        raise GradedError("--space is required")
    return SearchSpace(tuple(_chains(args.space)), args.max_domain, args.max_candidates)


def _registry(args) -> io.ChainRegistry:
    reg = io.ChainRegistry()
    for c in _chains(getattr(args, "chain", None) or []) + (_chains(args.space) if getattr(args, "space", None) else []):
        reg.add(c)
    return reg


def _model(args, path: str) -> Structure:
    return io.load_model(path, _registry(args))


def _formula(text: str, sig: Optional[Signature] = None) -> Formula:
    return parse_formula(text, sig)


def _assignment(text: Optional[str]) -> dict[str, str]:
    env = {}
    for part in (text or "").split(","):
        if part.strip():
            k, _, v = part.partition("=")
            env[k.strip()] = v.strip()
    return env


# --- commands -------------------------------------------------------------------------


def cmd_verify_algebra(args, rep: Reporter) -> int:
    ok = True
    for chain in _chains(args.chains):
        report = verify_ul_axioms(chain)
        for check in report.checks:
            status = "pass" if check.passed else f"FAIL witness={check.witness} {check.detail}".rstrip()
            rep.line(f"{chain.name}.{check.group}", status)
        ok &= report.ok
    return rep.verdict(ok, "all axioms hold", "axiom violation")


def cmd_eval(args, rep: Reporter) -> int:
    S = _model(args, args.model)
    phi = _formula(args.formula, S.signature)
    env = _assignment(args.assign)
    value = eval_formula(S, env, phi)
    rep.line("value", value)
    rep.line("designated", value >= S.chain.one)
    return OK


def cmd_check_model(args, rep: Reporter) -> int:
    S = _model(args, args.model)
    sentences = list(args.formula or [])
    if args.theory:
        with open(args.theory) as fh:
            sentences += [ln.strip() for ln in fh if ln.strip() and not ln.strip().startswith("#")]
    for text in sentences:
        phi = _formula(text, S.signature)
        value = sentence_value(S, phi)
        if value < S.chain.one:
            rep.line("failing", f"{to_text(phi)} = {value}")
            return rep.verdict(False, "model", "not a model")
    return rep.verdict(True, "model", "not a model")


def cmd_entails(args, rep: Reporter) -> int:
    space = _space(args)
    gamma = parse_formula_list(args.premises or "")
    phi = _formula(args.formula)
    rep.line("space", space.describe())
    hit = find_countermodel(space, gamma, phi)
    if hit is None:
        return rep.verdict(True, "entailed", "not entailed")
    S, env = hit
    rep.verdict(False, "entailed", "not entailed")
    rep.block("countermodel", io.format_model(S))
    if env:
        rep.line("assignment", io.format_assignment(env))
    return NEGATIVE


def cmd_find_model(args, rep: Reporter) -> int:
    space = _space(args)
    tau = io.load_tableau(args.tableau)
    rep.line("space", space.describe())
    hit = find_satisfying_model(space, tau)
    if hit is None:
        return rep.verdict(False, "satisfiable", "unsatisfiable")
    S, env = hit
    rep.verdict(True, "satisfiable", "unsatisfiable")
    rep.block("model", io.format_model(S))
    if env:
        rep.line("assignment", io.format_assignment(env))
    return OK


def cmd_consistent(args, rep: Reporter) -> int:
    space = _space(args)
    tau = io.load_tableau(args.tableau)
    rep.line("space", space.describe())
    witness = find_inconsistency(space, tau, args.subset_cap)
    if witness is None:
        return rep.verdict(True, "consistent", "inconsistent")
    rep.verdict(False, "consistent", "inconsistent")
    rep.line("entailed_disjunction", to_text(big_or(witness)))
    return NEGATIVE


def cmd_finite_character(args, rep: Reporter) -> int:
    space = _space(args)
    tau = io.load_tableau(args.tableau)
    r = check_finite_character(space, tau, args.subset_cap)
    rep.line("space", r.space)
    rep.line("all_subtableaux_satisfiable", r.all_subtableaux_satisfiable)
    rep.line("satisfiable", r.satisfiable)
    rep.line("consistent", r.consistent)
    rep.line("implication_holds", r.implication_holds)
    rep.line("equivalence_holds", r.equivalence_holds)
    if r.unsatisfiable_subtableau is not None:
        rep.block("unsatisfiable_subtableau", io.format_tableau(r.unsatisfiable_subtableau))
    return rep.verdict(r.implication_holds and r.equivalence_holds, "finite character holds", "finite character fails")


def _pair(text: str) -> tuple[Formula, Formula]:
    left, sep, right = text.partition("|")
    if not sep:
        raise GradedError(f"pair {text!r} must be written 'theta | psi'")
    return _formula(left), _formula(right)


def cmd_henkin(args, rep: Reporter) -> int:
    space = _space(args)
    tau = io.load_tableau(args.tableau)
    formulas = [_formula(f) for f in args.formula or []]
    pairs = [_pair(p) for p in args.pair or []]
    constants = [c for c in (args.constants or "").split(",") if c]
    final = tau
    all_ok = True
    for stage in henkin_stages(space, tau, constants, formulas, pairs, subset_cap=args.subset_cap):
        added = to_text(stage.added) if stage.added is not None else "-"
        rep.line(f"stage {stage.number}", f"{stage.kind} case={stage.case} added={added} consistent={stage.consistent}")
        all_ok &= stage.consistent
        final = stage.tableau
    rep.block("tableau", io.format_tableau(final))
    return rep.verdict(all_ok, "every stage consistent", "inconsistent stage")


def cmd_substructure(args, rep: Reporter) -> int:
    S1, S2 = _model(args, args.small), _model(args, args.big)
    r = check_substructure(S1, S2, args.depth)
    for key in ("domain_inclusion", "functions_agree", "subalgebra", "atoms_agree", "qf_check"):
        rep.line(key, getattr(r, key))
    if r.witness:
        rep.line("witness", r.witness)
    return rep.verdict(r.ok, "substructure", "not a substructure")


def cmd_elementary(args, rep: Reporter) -> int:
    S1, S2 = _model(args, args.small), _model(args, args.big)
    r = check_elementary(S1, S2, args.depth)
    rep.line("depth", r.depth)
    rep.line("substructure", r.substructure)
    if r.counterexample is not None:
        rep.line("counterexample", str(r.counterexample))
    return rep.verdict(r.ok, "elementary", "not elementary")


def cmd_union(args, rep: Reporter) -> int:
    c = io.load_model_chain(args.chain_file, _registry(args))
    rep.block("union", io.format_model(union_of_chain(c)))
    return OK


def cmd_tarski_vaught(args, rep: Reporter) -> int:
    c = io.load_model_chain(args.chain_file, _registry(args))
    r = check_union_preservation(c, args.depth)
    rep.line("depth", r.depth)
    for i, ok in enumerate(r.adjacent_elementary):
        rep.line(f"link {i}->{i + 1} elementary", ok)
    if not r.precondition:
        rep.line("note", "precondition unverified: some adjacent pair is not elementary")
    if r.counterexample is not None:
        rep.line("counterexample", f"link {r.link}: {r.counterexample}")
    return rep.verdict(r.ok, "values preserved", "counterexample found")


def cmd_exhaustive(args, rep: Reporter) -> int:
    S = _model(args, args.model)
    seen = attained_values(S, args.depth)
    missing = sorted(set(S.chain.carrier) - seen)
    rep.line("depth", args.depth)
    if missing:
        rep.line("missing", " ".join(map(str, missing)))
    return rep.verdict(not missing, "exhaustive", "not exhaustive")


def cmd_theory(args, rep: Reporter) -> int:
    S = _model(args, args.model)
    D = [d for d in (args.params or "").split(",") if d]
    th, co = theory_of(S, D, args.depth)
    rep.line("depth", args.depth)
    rep.block("theory", io.format_tableau(Tableau(tuple(th), tuple(co))))
    return OK


def cmd_is_type(args, rep: Reporter) -> int:
    space = _space(args)
    tau = io.load_tableau(args.tableau) if args.tableau else Tableau()
    t = io.load_type(args.type)
    rep.line("space", space.describe())
    return rep.verdict(is_type_of_tableau(space, tau, t), "type", "not a type")


def cmd_realize(args, rep: Reporter) -> int:
    S = _model(args, args.model)
    t = io.load_type(args.type)
    m = find_realizer(S, t)
    if m is not None:
        rep.line("realizer", m)
    return rep.verdict(m is not None, "realized", "not realized")


def cmd_saturated(args, rep: Reporter) -> int:
    space = _space(args)
    S = _model(args, args.model)
    r = is_saturated(S, args.kappa, args.depth, space, args.type_size_cap)
    rep.line("space", r.space)
    rep.line("kappa", r.kappa)
    rep.line("depth", r.depth)
    rep.line("type_size_cap", r.type_size_cap)
    rep.line("candidates_checked", r.candidates_checked)
    if r.witness is not None:
        rep.line("parameters", " ".join(r.parameters) or "-")
        rep.block("witness", io.format_type(r.witness))
    return rep.verdict(r.saturated, "saturated", "unsaturated")


def cmd_saturate_step(args, rep: Reporter) -> int:
    space = _space(args)
    S = _model(args, args.model)
    t = io.load_type(args.type)
    N = saturate_step(S, t, space, args.depth)
    rep.line("space", space.describe())
    rep.line("realizer", find_realizer(N, t))
    rep.block("model", io.format_model(N))
    return OK


def cmd_generate(args, rep: Reporter) -> int:
    rng = random.Random(args.seed)
    sig = PROPOSITIONAL if args.signature == "propositional" else MONADIC
    vars = () if args.signature == "propositional" else ("x", "y")
    for i in range(args.count):
        if args.kind == "formulas":
            rep.line(f"formula {i}", to_text(random_formula(rng, sig, args.depth, vars)))
        else:
            rep.block(f"tableau {i}", f"# tableau {i}\n" + io.format_tableau(random_tableau(rng, sig, args.depth, vars=vars)))
    return OK


# --- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gradedmt", description="Graded model theory over finite UL-chains.")
    parser.add_argument("--format", choices=("text", "kv"), default="text", help="output mode")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func: Callable, help: str, space: bool = False, depth: Optional[int] = None):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        p.add_argument("--chain", action="append", help="extra chain file or built-in name for model algebras")
        if space:
            p.add_argument("--space", action="append", help="chain files or built-in names (L5, G3, Z2), comma-separated")
            p.add_argument("--max-domain", type=int, default=1)
            p.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES)
        if depth is not None:
            p.add_argument("--depth", type=int, default=depth)
        return p

    p = command("verify-algebra", cmd_verify_algebra, "check the UL-chain axioms")
    p.add_argument("chains", nargs="+")

    p = command("eval", cmd_eval, "evaluate a formula in a model")
    p.add_argument("--model", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--assign", help="x=a,y=b")

    p = command("check-model", cmd_check_model, "is the model a model of the sentences")
    p.add_argument("--model", required=True)
    p.add_argument("--theory", help="file with one sentence per line")
    p.add_argument("--formula", action="append")

    p = command("entails", cmd_entails, "relativized semantic consequence", space=True)
    p.add_argument("--premises", default="")
    p.add_argument("--formula", required=True)

    p = command("find-model", cmd_find_model, "search for a model satisfying a tableau", space=True)
    p.add_argument("--tableau", required=True)

    for name, func, help in (
        ("consistent", cmd_consistent, "tableau consistency"),
        ("finite-character", cmd_finite_character, "finite character report"),
    ):
        p = command(name, func, help, space=True)
        p.add_argument("--tableau", required=True)
        p.add_argument("--subset-cap", type=int, default=DEFAULT_SUBSET_CAP)

    p = command("henkin", cmd_henkin, "staged Henkin completion", space=True)
    p.add_argument("--tableau", required=True)
    p.add_argument("--constants", default="", help="fresh constants, comma-separated")
    p.add_argument("--formula", action="append", help="enumerated formula (repeatable)")
    p.add_argument("--pair", action="append", help="'theta | psi' (repeatable)")
    p.add_argument("--subset-cap", type=int, default=DEFAULT_SUBSET_CAP)

    p = command("substructure", cmd_substructure, "substructure conditions", depth=1)
    p.add_argument("small")
    p.add_argument("big")

    p = command("elementary", cmd_elementary, "depth-bounded elementary substructure", depth=2)
    p.add_argument("small")
    p.add_argument("big")

    p = command("union", cmd_union, "union of a chain of models")
    p.add_argument("chain_file")

    p = command("tarski-vaught", cmd_tarski_vaught, "value preservation in the union of a chain", depth=2)
    p.add_argument("chain_file")

    p = command("exhaustive", cmd_exhaustive, "is every truth value attained", depth=2)
    p.add_argument("--model", required=True)

    p = command("theory", cmd_theory, "Th_D and coTh_D as a tableau", depth=1)
    p.add_argument("--model", required=True)
    p.add_argument("--params", default="", help="elements of D, comma-separated")

    p = command("is-type", cmd_is_type, "is the pair a type of the tableau", space=True)
    p.add_argument("--tableau")
    p.add_argument("--type", required=True)

    p = command("realize", cmd_realize, "first element realizing a type")
    p.add_argument("--model", required=True)
    p.add_argument("--type", required=True)

    p = command("saturated", cmd_saturated, "depth-bounded saturation check", space=True, depth=1)
    p.add_argument("--model", required=True)
    p.add_argument("--kappa", type=int, default=1)
    p.add_argument("--type-size-cap", type=int, default=DEFAULT_TYPE_SIZE_CAP)

    p = command("saturate-step", cmd_saturate_step, "extend a model to realize a type", space=True, depth=1)
    p.add_argument("--model", required=True)
    p.add_argument("--type", required=True)

    p = command("generate", cmd_generate, "random test corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=("formulas", "tableaux"), default="formulas")
    p.add_argument("--signature", choices=("propositional", "monadic"), default="propositional")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--depth", type=int, default=2)
    return parser


def run_command(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else OK
    for flag in ("max_domain", "max_candidates", "subset_cap", "kappa", "type_size_cap", "count"):
        value = getattr(args, flag, None)
        if value is not None and value < 1:
            print(f"error: --{flag.replace('_', '-')} must be positive", file=err)
            return ERROR
    if getattr(args, "depth", 0) is not None and getattr(args, "depth", 0) < 0:
        print("error: --depth must be non-negative", file=err)
        return ERROR
    rep = Reporter(args.format, out)
    try:
        return args.func(args, rep)
    except (GradedError, OSError, KeyError) as e:
        print(f"error: {e}", file=err)
        return ERROR


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
