"""Hilbert calculi, line-justified derivations, the derivation checker,
meet-calculus assembly, bounded proof search, and derivation-template builders.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .combination import (
    CombinedSignature,
    PairCtor,
    embed,
    proj_embedded,
    project,
    tag_rule,
)
from .syntax import (
    App,
    Formula,
    Var,
    apply_substitution,
    formula_size,
    match_formula,
    max_schema_index,
    print_formula,
    variables_of,
)


class BuilderError(Exception):
    pass


@dataclass(frozen=True)
class Rule:
    name: str
    premises: tuple
    conclusion: Formula

    @property
    def liberal(self) -> bool:
        return isinstance(self.conclusion, Var)

    def __repr__(self):
        ps = "; ".join(print_formula(p) for p in self.premises)
        return f"{self.name}: {ps} / {print_formula(self.conclusion)}"


@dataclass
class Calculus:
    """A named finite rule set, optionally with the schematic LFT/cLFT/FX families.

    The schematic families are checker-native (parameterized by arbitrary
    formulas) and only meaningful over a combined signature.
    """

    name: str
    signature: object
    rules: tuple
    lft: bool = False
    clft: bool = False
    fx: bool = False

    def rule_named(self, name: str) -> Optional[Rule]:
        for r in self.rules:
            if r.name == name:
                return r
        return None


# ---------------------------------------------------------------------------
# derivations

@dataclass(frozen=True)
class Hyp:
    pass


@dataclass(frozen=True)
class RuleApp:
    rule: str
    cites: tuple  # 1-based earlier line indices, one per premise
    subst: tuple  # sorted ((var index, Formula), ...) witness

    def subst_dict(self) -> dict:
        return dict(self.subst)


@dataclass(frozen=True)
class Lft:
    cites: tuple  # (line of phi|1, line of phi|2)


@dataclass(frozen=True)
class Clft:
    cite: int
    side: int


@dataclass(frozen=True)
class Fx:
    cite: int


@dataclass(frozen=True)
class Line:
    formula: Formula
    just: object


@dataclass(frozen=True)
class Derivation:
    lines: tuple

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    def __len__(self):
        return len(self.lines)


def freeze_subst(s: dict) -> tuple:
    return tuple(sorted(s.items()))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    line: Optional[int] = None
    reason: Optional[str] = None

    def __bool__(self):
        return self.ok


def check_derivation(d: Derivation, calc: Calculus, extra: Sequence[Rule] = (),
                     hyps: Iterable[Formula] = ()) -> Verdict:
    """Accept iff every line is justified from hyps and the rules of calc and extra.

    Rejection carries the first failing line and a reason; it is a value,
    not an error.
    """
    hyps = frozenset(hyps)
    rules = {}
    for r in list(calc.rules) + list(extra):
        rules[r.name] = r
    cs = calc.signature if isinstance(calc.signature, CombinedSignature) else None

    def fail(i, reason):
        return Verdict(False, i, reason)

    for i, line in enumerate(d.lines, start=1):
        just = line.just
        cited = []
        if isinstance(just, RuleApp):
            cited = list(just.cites)
        elif isinstance(just, Lft):
            cited = list(just.cites)
        elif isinstance(just, (Clft, Fx)):
            cited = [just.cite]
        for c in cited:
            if not (1 <= c < i):
                return fail(i, f"cited line {c} is not strictly earlier")

        if isinstance(just, Hyp):
            if line.formula not in hyps:
                return fail(i, "HYP line is not among the hypotheses")
        elif isinstance(just, RuleApp):
            rule = rules.get(just.rule)
            if rule is None:
                return fail(i, f"unknown rule {just.rule!r}")
            if len(just.cites) != len(rule.premises):
                return fail(i, f"rule {rule.name} expects {len(rule.premises)} cited lines")
            s = just.subst_dict()
            for c, prem in zip(just.cites, rule.premises):
                if apply_substitution(s, prem) != d.lines[c - 1].formula:
                    return fail(i, f"cited line {c} is not the matching instance of a premise of {rule.name}")
            if apply_substitution(s, rule.conclusion) != line.formula:
                return fail(i, f"line is not the witnessed instance of the conclusion of {rule.name}")
        elif isinstance(just, Lft):
            if cs is None or not calc.lft:
                return fail(i, "LFT is not available in this calculus")
            l1, l2 = just.cites
            if d.lines[l1 - 1].formula != proj_embedded(line.formula, 1, cs):
                return fail(i, "first LFT citation is not the component-1 projection")
            if d.lines[l2 - 1].formula != proj_embedded(line.formula, 2, cs):
                return fail(i, "second LFT citation is not the component-2 projection")
        elif isinstance(just, Clft):
            if cs is None or not calc.clft:
                return fail(i, "cLFT is not available in this calculus")
            if just.side not in (1, 2):
                return fail(i, "cLFT side must be 1 or 2")
            src = d.lines[just.cite - 1].formula
            if line.formula != proj_embedded(src, just.side, cs):
                return fail(i, "cLFT line is not the projection of the cited line")
        elif isinstance(just, Fx):
            if cs is None or not calc.fx:
                return fail(i, "FX is not available in this calculus")
            src = d.lines[just.cite - 1].formula
            matched = False
            for k in (1, 2):
                if src == cs.falsum(k) and line.formula == cs.falsum(3 - k):
                    matched = True
            if not matched:
                return fail(i, "FX line must take one component falsum to the other")
        else:
            return fail(i, f"unknown justification {type(just).__name__}")
    return Verdict(True)


# ---------------------------------------------------------------------------
# meet-calculus assembly

def inherit_rule(rule: Rule, k: int, cs: CombinedSignature) -> list:
    """Embed a component-k rule into the combined language and tag it.

    Liberal rules are tagged over the embedded image of the component's own
    constructors (pairs padded with the other side's verum family), which is
    the tagging of the rule over its component read through the embedding.
    """
    embedded = Rule(
        name=f"{rule.name}@{k}",
        premises=tuple(embed(p, k, cs) for p in rule.premises),
        conclusion=rule.conclusion if isinstance(rule.conclusion, Var) else embed(rule.conclusion, k, cs),
    )
    if not embedded.liberal:
        return [embedded]
    return list(tag_rule(embedded, cs.side_ctors(k)))


def assemble_meet_calculus(l1, l2, cs: Optional[CombinedSignature] = None) -> Calculus:
    """The combined calculus: inherited tagged rules plus the LFT/cLFT/FX families."""
    c1 = getattr(l1, "calculus", l1)
    c2 = getattr(l2, "calculus", l2)
    if cs is None:
        cs = CombinedSignature(c1.signature, c2.signature)
    if c1.signature is not cs.sig1 and c1.signature != cs.sig1:
        raise BuilderError("component-1 calculus does not match the combined signature")
    if c2.signature is not cs.sig2 and c2.signature != cs.sig2:
        raise BuilderError("component-2 calculus does not match the combined signature")
    rules = []
    for k, comp in ((1, c1), (2, c2)):
        for r in comp.rules:
            rules.extend(inherit_rule(r, k, cs))
    return Calculus(
        name=f"meet({c1.name},{c2.name})",
        signature=cs,
        rules=tuple(rules),
        lft=True,
        clft=True,
        fx=True,
    )


def embed_rule_application(rule: Rule, subst: dict, k: int, cs: CombinedSignature):
    """Re-justify a component rule application inside the combined calculus.

    Returns (combined rule name, witness substitution). For a liberal rule the
    applicable tagged variant is selected by the head of the concrete
    conclusion; an application concluding a bare schema variable has no tagged
    counterpart and is a builder error.
    """
    def emb(f):
        return embed(f, k, cs)

    if not rule.liberal:
        return f"{rule.name}@{k}", {v: emb(f) for v, f in subst.items()}
    beta = rule.conclusion.index
    concrete = subst.get(beta)
    if concrete is None or isinstance(concrete, Var):
        raise BuilderError(
            f"application of liberal rule {rule.name} concluding a bare variable cannot be inherited"
        )
    ctor = cs.embed_ctor(concrete.ctor, k)
    j = max_schema_index(rule)
    witness = {j + i: emb(a) for i, a in enumerate(concrete.args, start=1)}
    for v, f in subst.items():
        if v != beta:
            witness[v] = emb(f)
    return f"{rule.name}@{k}#{ctor.display}", witness


# ---------------------------------------------------------------------------
# bounded proof search

@dataclass(frozen=True)
class SearchBounds:
    depth: int = 6
    max_size: int = 30
    max_facts: int = 3000
    max_candidates: int = 14


def _candidate_pool(calc, hyps, goal, bounds):
    pool = set()
    for f in list(hyps) + [goal]:
        for sub in _subformula_list(f):
            pool.add(sub)
    sig = calc.signature
    if isinstance(sig, CombinedSignature):
        pool.update({sig.top, sig.bot, sig.falsum(1), sig.falsum(2)})
    else:
        pool.update({sig.top, sig.bot})
    ordered = sorted(pool, key=lambda f: (formula_size(f), print_formula(f)))
    return ordered[: bounds.max_candidates]


def _subformula_list(f):
    from .syntax import subformulas

    return list(subformulas(f))


def _match_seeded(pattern, target, binding):
    """match_formula extended with an initial binding; facts may themselves
    contain schema variables, so the pattern is never pre-instantiated.
    """
    out = dict(binding)

    def go(p, t):
        if isinstance(p, Var):
            bound = out.get(p.index)
            if bound is None:
                out[p.index] = t
                return True
            return bound == t
        if isinstance(t, Var) or p.ctor != t.ctor:
            return False
        return all(go(pa, ta) for pa, ta in zip(p.args, t.args))

    return out if go(pattern, target) else None


def _match_all_premises(rule, facts_order, by_head, facts_set):
    """Yield (substitution, cited facts per premise) for joint premise matches.

    Candidate facts are narrowed by the premise's head constructor; a premise
    that is an already-bound variable only needs a membership check.
    """
    idxs = sorted(
        range(len(rule.premises)),
        key=lambda i: -formula_size(rule.premises[i]),
    )

    def candidates(premise, subst):
        if isinstance(premise, Var):
            bound = subst.get(premise.index)
            if bound is not None:
                return [bound] if bound in facts_set else []
            return facts_order
        return by_head.get(premise.ctor, ())

    def rec(pos, subst, chosen):
        if pos == len(idxs):
            yield dict(subst), tuple(chosen[i] for i in range(len(rule.premises)))
            return
        i = idxs[pos]
        for fact in candidates(rule.premises[i], subst):
            nxt = _match_seeded(rule.premises[i], fact, subst)
            if nxt is not None:
                chosen[i] = fact
                yield from rec(pos + 1, nxt, chosen)
        chosen.pop(i, None)

    yield from rec(0, {}, {})


def bounded_proof_search(calc: Calculus, extra: Sequence[Rule], hyps: Iterable[Formula],
                         goal: Formula, bounds: SearchBounds = SearchBounds()) -> Optional[Derivation]:
    """Iterative forward search; a returned derivation always passes the checker.

    None is inconclusive (search exhausted), never a non-derivability claim.
    Exploration order is fixed, so results are deterministic for fixed bounds.
    """
    hyps = list(dict.fromkeys(hyps))
    rules = list(calc.rules) + list(extra)
    cs = calc.signature if isinstance(calc.signature, CombinedSignature) else None
    candidates = _candidate_pool(calc, hyps, goal, bounds)

    facts: dict = {}
    order: list = []

    def add(f, record) -> bool:
        if f in facts or formula_size(f) > bounds.max_size or len(facts) >= bounds.max_facts:
            return False
        facts[f] = record
        order.append(f)
        _close(f)
        return True

    def _close(f):
        if cs is None:
            return
        if calc.clft:
            for k in (1, 2):
                add(proj_embedded(f, k, cs), ("clft", f, k))
        if calc.fx:
            for k in (1, 2):
                if f == cs.falsum(k):
                    add(cs.falsum(3 - k), ("fx", f))

    for h in hyps:
        add(h, ("hyp",))

    axioms = [r for r in rules if not r.premises]
    proper = [r for r in rules if r.premises]

    def instances(rule, subst, cited, out):
        unbound = sorted(variables_of(rule.conclusion) - set(subst))
        fillers = (
            itertools.product(candidates, repeat=len(unbound)) if unbound else [()]
        )
        for values in fillers:
            full = dict(subst)
            full.update(zip(unbound, values))
            concl = apply_substitution(full, rule.conclusion)
            if concl not in facts and formula_size(concl) <= bounds.max_size:
                out.append((concl, ("rule", rule, full, cited)))

    for _round in range(bounds.depth):
        if goal in facts:
            break
        snapshot = list(order)
        by_head: dict = {}
        for f in snapshot:
            if isinstance(f, App):
                by_head.setdefault(f.ctor, []).append(f)
        additions: list = []
        if _round == 0:
            for rule in axioms:
                instances(rule, {}, (), additions)
        for rule in proper:
            for subst, cited in _match_all_premises(rule, snapshot, by_head, facts):
                instances(rule, subst, cited, additions)
        if cs is not None and calc.lft:
            for target in [goal] + candidates:
                if target in facts or isinstance(target, Var):
                    continue
                p1 = proj_embedded(target, 1, cs)
                p2 = proj_embedded(target, 2, cs)
                if p1 in facts and p2 in facts:
                    additions.append((target, ("lft", p1, p2)))
        additions.sort(key=lambda item: (formula_size(item[0]), print_formula(item[0])))
        progressed = False
        for f, record in additions:
            if add(f, record):
                progressed = True
        if goal in facts or not progressed:
            break

    if goal not in facts:
        return None
    return _reconstruct(goal, facts)


def _reconstruct(goal, facts) -> Derivation:
    lines: list = []
    index: dict = {}

    def build(f) -> int:
        if f in index:
            return index[f]
        record = facts[f]
        kind = record[0]
        if kind == "hyp":
            just = Hyp()
        elif kind == "rule":
            _, rule, subst, cited = record
            cites = tuple(build(c) for c in cited)
            keep = variables_of(rule.conclusion).union(*(variables_of(p) for p in rule.premises)) \
                if rule.premises else variables_of(rule.conclusion)
            just = RuleApp(rule.name, cites, freeze_subst({v: t for v, t in subst.items() if v in keep}))
        elif kind == "clft":
            _, src, side = record
            just = Clft(build(src), side)
        elif kind == "fx":
            just = Fx(build(record[1]))
        elif kind == "lft":
            _, p1, p2 = record
            just = Lft((build(p1), build(p2)))
        else:  # pragma: no cover
            raise AssertionError(kind)
        lines.append(Line(f, just))
        index[f] = len(lines)
        return index[f]

    build(goal)
    return Derivation(tuple(lines))


# ---------------------------------------------------------------------------
# derivation templates

def _check_component_derivation(d, premises_proj, endpoint, what):
    if d.conclusion != endpoint:
        raise BuilderError(f"{what}: endpoint {print_formula(d.conclusion)} differs from {print_formula(endpoint)}")
    for ln in d.lines:
        if isinstance(ln.just, Hyp) and ln.formula not in premises_proj:
            raise BuilderError(f"{what}: hypothesis {print_formula(ln.formula)} is not a projected premise")
        if not isinstance(ln.just, (Hyp, RuleApp)):
            raise BuilderError(f"{what}: component derivations may use only HYP and rule lines")


def _splice(d, k, cs, component_calc, component_extra, lines, hyp_line_of) -> int:
    """Append the embedded image of a component derivation; returns the endpoint line."""
    rules = {}
    for r in list(component_calc.rules) + list(component_extra):
        rules[r.name] = r
    local: dict = {}
    for j, ln in enumerate(d.lines, start=1):
        if isinstance(ln.just, Hyp):
            local[j] = hyp_line_of[ln.formula]
            continue
        rule = rules.get(ln.just.rule)
        if rule is None:
            raise BuilderError(f"component rule {ln.just.rule!r} unknown while splicing")
        name, witness = embed_rule_application(rule, ln.just.subst_dict(), k, cs)
        cites = tuple(local[c] for c in ln.just.cites)
        lines.append(Line(embed(ln.formula, k, cs), RuleApp(name, cites, freeze_subst(witness))))
        local[j] = len(lines)
    return local[len(d.lines)]


def build_both_admissible_derivation(premises, conclusion, d1, d2, calc: Calculus,
                                     l1=None, l2=None, extra1=(), extra2=()) -> Derivation:
    """Both-sides template: hypotheses, cLFT to each side, spliced component
    derivations of the projected conclusion, final LFT.

    d1 derives conclusion|1 from the projected premises in component 1 (with
    basis rules in extra1 for the basis-mode layout); d2 symmetrically.
    """
    cs = calc.signature
    if not isinstance(cs, CombinedSignature):
        raise BuilderError("template requires a combined calculus")
    premises = tuple(premises)
    comp1 = getattr(l1, "calculus", l1) if l1 is not None else None
    comp2 = getattr(l2, "calculus", l2) if l2 is not None else None
    if comp1 is None or comp2 is None:
        raise BuilderError("component calculi are required to splice derivations")

    proj1 = [project(a, 1) for a in premises]
    proj2 = [project(a, 2) for a in premises]
    _check_component_derivation(d1, set(proj1), project(conclusion, 1), "component-1 derivation")
    _check_component_derivation(d2, set(proj2), project(conclusion, 2), "component-2 derivation")

    lines = [Line(a, Hyp()) for a in premises]
    m = len(premises)
    endpoints = []
    for k, d, proj, comp, extra in ((1, d1, proj1, comp1, extra1), (2, d2, proj2, comp2, extra2)):
        hyp_line_of = {}
        for i, p in enumerate(proj, start=1):
            lines.append(Line(proj_embedded(premises[i - 1], k, cs), Clft(i, k)))
            hyp_line_of.setdefault(p, len(lines))
        endpoints.append(_splice(d, k, cs, comp, extra, lines, hyp_line_of))
    lines.append(Line(conclusion, Lft((endpoints[0], endpoints[1]))))
    return Derivation(tuple(lines))


def build_vacuous_side_derivation(premises, conclusion, falsum_side: int, dfalsum,
                                  dexfalso_same, dexfalso_other, calc: Calculus,
                                  l1=None, l2=None, extra_same=(), extra_other=()) -> Derivation:
    """Vacuous-side template: derive the falsum of one component from its projected
    premises, continue to the projected conclusion, propagate falsum with FX,
    continue on the other side, and lift.
    """
    cs = calc.signature
    if not isinstance(cs, CombinedSignature):
        raise BuilderError("template requires a combined calculus")
    premises = tuple(premises)
    fs = falsum_side
    other = 3 - fs
    comp = {1: getattr(l1, "calculus", l1), 2: getattr(l2, "calculus", l2)}
    if comp[1] is None or comp[2] is None:
        raise BuilderError("component calculi are required to splice derivations")

    bot_same = comp[fs].signature.bot
    bot_other = comp[other].signature.bot
    proj_same = [project(a, fs) for a in premises]
    _check_component_derivation(dfalsum, set(proj_same), bot_same, "falsum derivation")
    _check_component_derivation(dexfalso_same, {bot_same}, project(conclusion, fs), "same-side continuation")
    _check_component_derivation(dexfalso_other, {bot_other}, project(conclusion, other), "other-side continuation")

    lines = [Line(a, Hyp()) for a in premises]
    hyp_line_of = {}
    for i, p in enumerate(proj_same, start=1):
        lines.append(Line(proj_embedded(premises[i - 1], fs, cs), Clft(i, fs)))
        hyp_line_of.setdefault(p, len(lines))
    falsum_line = _splice(dfalsum, fs, cs, comp[fs], extra_same, lines, hyp_line_of)
    end_same = _splice(dexfalso_same, fs, cs, comp[fs], extra_same, lines, {bot_same: falsum_line})
    lines.append(Line(cs.falsum(other), Fx(falsum_line)))
    fx_line = len(lines)
    end_other = _splice(dexfalso_other, other, cs, comp[other], extra_other, lines, {bot_other: fx_line})
    cites = (end_same, end_other) if fs == 1 else (end_other, end_same)
    lines.append(Line(conclusion, Lft(cites)))
    return Derivation(tuple(lines))
