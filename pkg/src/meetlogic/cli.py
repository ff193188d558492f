"""Batch command-line front end.

Exit codes: 0 affirmative/accept, 1 negative/reject, 2 inconclusive,
3 and above usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import admissibility, calculus, combination, formats, presets, semantics, treetools
from .syntax import ParseError, SignatureError, parse_formula, print_formula

EXIT_YES = 0
EXIT_NO = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _bundle(name, args):
    return presets.load_preset(name, schema_bound=args.schema_bound,
                               max_worlds=args.max_worlds)


def _meet(args):
    b1 = _bundle(args.l1, args)
    b2 = _bundle(args.l2, args)
    cs = combination.combine_signatures(b1.signature, b2.signature)
    calc = calculus.assemble_meet_calculus(b1.calculus, b2.calculus, cs)
    return b1, b2, cs, calc


def _search_bounds(args):
    return calculus.SearchBounds(depth=args.depth, max_size=args.max_size)


def _read(path):
    with open(path) as fh:
        return fh.read()


def _split_formulas(text, sig):
    return [parse_formula(p.strip(), sig) for p in text.split(";") if p.strip()]


def _oracle(spec, bundle):
    if spec == "auto":
        return admissibility.bundle_oracle(bundle)
    if spec.startswith("stub:"):
        parts = spec.split(":")
        main = bool(int(parts[1]))
        falsum = bool(int(parts[2])) if len(parts) > 2 else False
        return admissibility.stub_oracle(bundle.name, main, falsum)
    if spec.startswith("table:"):
        parts = spec.split(":")
        table, default = formats.parse_oracle_table(_read(parts[1]))
        if len(parts) > 2:
            default = bool(int(parts[2]))
        return admissibility.oracle_from_table(bundle.name, table, default)
    raise FormatErrorish(f"unknown oracle spec {spec!r} (auto, stub:A[:F], table:PATH[:D])")


class FormatErrorish(Exception):
    pass


# ---------------------------------------------------------------------------
# verbs

def cmd_combine(args):
    b1, b2, cs, calc = _meet(args)
    ctors = [c.display for c in cs.all_ctors()]
    rules = [r.name for r in calc.rules]
    text = "\n".join([
        f"combined signature {b1.name}|{b2.name}: {len(ctors)} constructors",
        *(f"  {c}" for c in ctors),
        f"calculus: {len(rules)} inherited rules plus LFT/cLFT/FX",
        *(f"  {r}" for r in rules),
    ])
    _emit(args, {"constructors": ctors, "rules": rules,
                 "schematic": ["LFT", "cLFT", "FX"]}, text)
    return EXIT_YES


def cmd_project(args):
    _, _, cs, _ = _meet(args)
    f = parse_formula(args.formula, cs)
    out = print_formula(combination.project(f, args.k))
    _emit(args, {"projection": out}, out)
    return EXIT_YES


def cmd_embed(args):
    b1, b2, cs, _ = _meet(args)
    comp = b1 if args.k == 1 else b2
    f = parse_formula(args.formula, comp.signature)
    out = print_formula(combination.embed(f, args.k, cs))
    _emit(args, {"embedding": out}, out)
    return EXIT_YES


def cmd_tag(args):
    if args.logic:
        bundle = _bundle(args.logic, args)
        rule = formats.parse_rule_file(_read(args.rule), bundle.signature, name=args.name)
        tagged = list(combination.tag_rule(rule, bundle.signature))
    else:
        b1, b2, cs, _ = _meet(args)
        if args.side == "mc":
            rule = formats.parse_rule_file(_read(args.rule), cs, name=args.name)
            tagged = list(combination.tag_rule(rule, cs))
        else:
            k = int(args.side)
            comp = b1 if k == 1 else b2
            rule = formats.parse_rule_file(_read(args.rule), comp.signature, name=args.name)
            tagged = calculus.inherit_rule(rule, k, cs)
    lines = [formats.rule_line(r) for r in tagged]
    _emit(args, {"rules": lines}, "\n".join(lines))
    return EXIT_YES


def cmd_check_derivation(args):
    if args.logic:
        bundle = _bundle(args.logic, args)
        calc, sig = bundle.calculus, bundle.signature
    else:
        _, _, cs, calc = _meet(args)
        sig = cs
    d = formats.parse_derivation_file(_read(args.derivation), sig)
    hyps = _split_formulas(args.hyps, sig) if args.hyps else []
    extra = ()
    if args.extra:
        extra = tuple(formats.parse_rule_line(l, sig)
                      for l in formats._content_lines(_read(args.extra)))
    verdict = calculus.check_derivation(d, calc, extra, hyps)
    if verdict.ok:
        _emit(args, {"accepted": True}, "accepted")
        return EXIT_YES
    text = f"rejected at line {verdict.line}: {verdict.reason}"
    _emit(args, {"accepted": False, "line": verdict.line, "reason": verdict.reason}, text)
    return EXIT_NO


def cmd_search(args):
    extra = ()
    if args.logic:
        bundle = _bundle(args.logic, args)
        calc, sig = bundle.calculus, bundle.signature
        if args.with_basis and bundle.basis:
            extra = bundle.basis.rules
    else:
        b1, b2, cs, calc = _meet(args)
        sig = cs
        if args.with_basis:
            extra = admissibility.combined_basis(b1.basis, b2.basis, cs).rules
    goal = parse_formula(args.goal, sig)
    hyps = _split_formulas(args.hyps, sig) if args.hyps else []
    d = calculus.bounded_proof_search(calc, extra, hyps, goal, _search_bounds(args))
    if d is None:
        _emit(args, {"found": False}, "not found within bounds")
        return EXIT_INCONCLUSIVE
    text = formats.serialize_derivation(d).rstrip("\n")
    _emit(args, {"found": True, "derivation": text.splitlines()}, text)
    return EXIT_YES


def cmd_decide_admissible(args):
    b1, b2, cs, _ = _meet(args)
    rule = formats.parse_rule_file(_read(args.rule), cs, name=args.name)
    o1 = _oracle(args.oracle1, b1)
    o2 = _oracle(args.oracle2, b2)
    decision = admissibility.decide_admissible_meet(o1, o2, rule.premises, rule.conclusion)
    text = " ".join(decision.trace) + f" -> {int(decision.admissible)}" \
        + ("" if decision.exact else " (inexact oracles)")
    _emit(args, {"admissible": decision.admissible, "exact": decision.exact,
                 "calls": decision.calls, "trace": list(decision.trace)}, text)
    return EXIT_YES if decision.admissible else EXIT_NO


def cmd_basis(args):
    b1, b2, cs, _ = _meet(args)
    combined = admissibility.combined_basis(b1.basis, b2.basis, cs)
    lines = [formats.rule_line(r) for r in combined.rules]
    _emit(args, {"provenance": combined.provenance, "rules": lines}, "\n".join(lines))
    return EXIT_YES


def _matrices(args):
    if args.logic:
        bundle = _bundle(args.logic, args)
        return bundle.signature, list(bundle.matrices)
    b1, b2, cs, _ = _meet(args)
    m1 = b1.characteristic or b1.matrices[0]
    m2 = b2.characteristic or b2.matrices[0]
    return cs, [semantics.product_matrix(m1, m2, cs)]


def cmd_eval(args):
    sig, matrices = _matrices(args)
    f = parse_formula(args.formula, sig)
    ok = all(semantics.holds(m, f) for m in matrices)
    _emit(args, {"holds": ok, "matrices": len(matrices)},
          f"holds on {len(matrices)} matrices: {ok}")
    return EXIT_YES if ok else EXIT_NO


def cmd_entails(args):
    sig, matrices = _matrices(args)
    goal = parse_formula(args.goal, sig)
    hyps = _split_formulas(args.hyps, sig) if args.hyps else []
    ok = semantics.entails(matrices, hyps, goal)
    _emit(args, {"entails": ok}, f"entails: {ok}")
    return EXIT_YES if ok else EXIT_NO


def cmd_trees(args):
    bundle = _bundle(args.logic, args)
    t1 = treetools.decomposition_tree(parse_formula(args.f1, bundle.signature))
    t2 = treetools.decomposition_tree(parse_formula(args.f2, bundle.signature))
    ok = treetools.trees_equiv(t1, t2)
    _emit(args, {"equivalent": ok}, f"trees equivalent: {ok}")
    return EXIT_YES if ok else EXIT_NO


def cmd_complete(args):
    bundle = _bundle(args.logic, args)
    psi = parse_formula(args.formula, bundle.signature)
    delta = treetools.completion_formula(psi, args.target, bundle.completion_profile,
                                         root_head=args.root_head)
    out = print_formula(delta)
    verified = None
    if bundle.theorem is not None:
        law = parse_formula(f"{args.target} iff ({out})", bundle.signature)
        verified = bundle.theorem(law)
    _emit(args, {"completion": out, "verified": verified},
          out + ("" if verified is None else f"  # equivalence verified: {verified}"))
    if verified is False:
        return EXIT_NO
    return EXIT_YES


def cmd_equalize(args):
    b1 = _bundle(args.l1, args)
    b2 = _bundle(args.l2, args)
    f1 = parse_formula(args.f1, b1.signature)
    f2 = parse_formula(args.f2, b2.signature)
    out1, out2 = treetools.equalize_pair(
        f1, f2,
        b1.identity_profiles["and"], b2.identity_profiles["->"],
        b1.signature, b2.signature,
        b1.completion_profile, b2.completion_profile,
    )
    ok = treetools.trees_equiv(treetools.decomposition_tree(out1),
                               treetools.decomposition_tree(out2))
    s1, s2 = print_formula(out1), print_formula(out2)
    _emit(args, {"f1": s1, "f2": s2, "trees_equivalent": ok},
          f"{s1}\n{s2}\ntrees equivalent: {ok}")
    return EXIT_YES if ok else EXIT_NO


def cmd_soundness_audit(args):
    if args.logic:
        bundle = _bundle(args.logic, args)
        rules, matrices = bundle.calculus.rules, bundle.matrices
    else:
        b1, b2, cs, calc = _meet(args)
        m1 = b1.characteristic or b1.matrices[0]
        m2 = b2.characteristic or b2.matrices[0]
        rules, matrices = calc.rules, (semantics.product_matrix(m1, m2, cs),)
    failures = [r.name for r in rules
                if not semantics.check_rule_soundness(matrices, r)]
    ok = not failures
    text = "all rules sound" if ok else "unsound rules: " + ", ".join(failures)
    _emit(args, {"sound": ok, "failures": failures}, text)
    return EXIT_YES if ok else EXIT_NO


# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--schema-bound", type=int, default=presets.DEFAULT_SCHEMA_BOUND)
    p.add_argument("--max-worlds", type=int, default=2)
    p.add_argument("--depth", type=int, default=6)
    p.add_argument("--max-size", type=int, default=30)


def _add_meet(p):
    p.add_argument("--l1", required=True, help="first component preset")
    p.add_argument("--l2", required=True, help="second component preset")


def _add_either(p):
    p.add_argument("--logic", help="single-logic preset")
    p.add_argument("--l1")
    p.add_argument("--l2")


def build_parser() -> _Parser:
    top = _Parser(prog="meetlogic", description=__doc__)
    sub = top.add_subparsers(dest="verb", required=True)

    def verb(name, fn, setup):
        p = sub.add_parser(name)
        setup(p)
        _add_common(p)
        p.set_defaults(fn=fn)
        return p

    verb("combine", cmd_combine, _add_meet)
    verb("project", cmd_project, lambda p: (_add_meet(p), p.add_argument("-k", type=int, choices=(1, 2), required=True), p.add_argument("formula")))
    verb("embed", cmd_embed, lambda p: (_add_meet(p), p.add_argument("-k", type=int, choices=(1, 2), required=True), p.add_argument("formula")))
    verb("tag", cmd_tag, lambda p: (_add_either(p), p.add_argument("--rule", required=True), p.add_argument("--side", choices=("1", "2", "mc"), default="mc"), p.add_argument("--name", default="rule")))
    verb("check-derivation", cmd_check_derivation, lambda p: (_add_either(p), p.add_argument("--derivation", required=True), p.add_argument("--hyps"), p.add_argument("--extra")))
    verb("search", cmd_search, lambda p: (_add_either(p), p.add_argument("--goal", required=True), p.add_argument("--hyps"), p.add_argument("--with-basis", action="store_true")))
    verb("decide-admissible", cmd_decide_admissible, lambda p: (_add_meet(p), p.add_argument("--rule", required=True), p.add_argument("--oracle1", default="auto"), p.add_argument("--oracle2", default="auto"), p.add_argument("--name", default="rule")))
    verb("basis", cmd_basis, _add_meet)
    verb("eval", cmd_eval, lambda p: (_add_either(p), p.add_argument("formula")))
    verb("entails", cmd_entails, lambda p: (_add_either(p), p.add_argument("--hyps"), p.add_argument("--goal", required=True)))
    verb("trees", cmd_trees, lambda p: (p.add_argument("--logic", default="IPL"), p.add_argument("f1"), p.add_argument("f2")))
    verb("complete", cmd_complete, lambda p: (p.add_argument("--logic", default="IPL"), p.add_argument("--target", choices=("top", "bot"), required=True), p.add_argument("--root-head"), p.add_argument("formula")))
    verb("equalize", cmd_equalize, lambda p: (_add_meet(p), p.add_argument("--f1", required=True), p.add_argument("--f2", required=True)))
    verb("soundness-audit", cmd_soundness_audit, _add_either)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    needs_pair = args.verb in ("combine", "project", "embed", "decide-admissible", "basis", "equalize")
    if not needs_pair and hasattr(args, "logic") and args.verb not in ("trees", "complete"):
        if not args.logic and not (args.l1 and args.l2):
            print("error: give --logic NAME or both --l1 and --l2", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.fn(args)
    except (ParseError, SignatureError, formats.FormatError, FormatErrorish,
            presets.PresetError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except calculus.BuilderError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
