"""Admissibility oracles, the combined two-oracle decision algorithm,
basis-augmented derivability, combined bases, and structural-completeness sampling.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .calculus import Derivation, Rule, SearchBounds, bounded_proof_search, inherit_rule
from .combination import CombinedSignature, project
from .semantics import entails, holds
from .syntax import App, Formula, formula_size, print_formula, variables_of


@dataclass
class AdmissibilityOracle:
    """An injected component decision procedure with declared exactness.

    exact=False marks a bounded/heuristic procedure whose caveat must be
    propagated to any verdict built on top of it. Calls are counted for
    instrumentation.
    """

    logic: str
    exact: bool
    fn: Callable
    calls: int = 0

    def __call__(self, premises: Sequence[Formula], beta: Formula) -> bool:
        self.calls += 1
        return bool(self.fn(tuple(premises), beta))


@dataclass(frozen=True)
class MeetDecision:
    admissible: bool
    exact: bool
    calls: int
    trace: tuple

    def __bool__(self):
        return self.admissible


def decide_admissible_meet(o1: AdmissibilityOracle, o2: AdmissibilityOracle,
                           premises: Sequence[Formula], beta: Formula) -> MeetDecision:
    """Decide admissibility in the combined logic with at most three oracle calls.

    Ask each component about the projected rule; agreement is the answer.
    On disagreement the admitting side is asked whether its projected premises
    already yield falsum (vacuous admissibility).
    """
    premises = tuple(premises)
    start = o1.calls + o2.calls
    proj = {k: [project(a, k) for a in premises] for k in (1, 2)}
    a1 = o1(proj[1], project(beta, 1))
    a2 = o2(proj[2], project(beta, 2))
    trace = [f"a1={int(a1)}", f"a2={int(a2)}"]
    consulted = [o1, o2]
    if a1 and a2:
        result = True
    elif not a1 and not a2:
        result = False
    elif a1:
        result = o1(proj[1], _component_falsum(o1, proj, beta, 1))
        trace.append(f"fallback o1(bot)={int(result)}")
    else:
        result = o2(proj[2], _component_falsum(o2, proj, beta, 2))
        trace.append(f"fallback o2(bot)={int(result)}")
    calls = o1.calls + o2.calls - start
    exact = all(o.exact for o in consulted)
    return MeetDecision(result, exact, calls, tuple(trace))


def _component_falsum(oracle, proj, beta, k):
    from .syntax import Ctor, FALSUM

    return App(Ctor(FALSUM, 0))


@dataclass(frozen=True)
class AdmissibilityVerdict:
    status: str  # "admissible" | "not-admissible" | "inconclusive"
    exact: bool
    witness: Optional[tuple] = None  # frozen substitution for not-admissible

    def __bool__(self):
        return self.status == "admissible"


@dataclass(frozen=True)
class BruteForceBounds:
    depth: int = 2
    max_candidates: int = 8


def _closed_candidates(signature, bounds: BruteForceBounds) -> list:
    """Variable-free formulas of bounded depth, smallest first, deterministic."""
    layers = [sorted(
        (App(c) for c in signature.by_arity.get(0, {}).values()),
        key=print_formula,
    )]
    for _ in range(bounds.depth):
        pool = [f for layer in layers for f in layer]
        new = []
        for n in sorted(signature.arities()):
            if n == 0:
                continue
            for c in sorted(signature.by_arity[n].values(), key=lambda c: c.name):
                for args in itertools.product(pool, repeat=n):
                    g = App(c, args)
                    if all(g not in layer for layer in layers) and g not in new:
                        new.append(g)
                    if len(new) >= bounds.max_candidates:
                        break
                if len(new) >= bounds.max_candidates:
                    break
            if len(new) >= bounds.max_candidates:
                break
        layers.append(new)
    flat = [f for layer in layers for f in layer]
    flat.sort(key=lambda f: (formula_size(f), print_formula(f)))
    return flat[: bounds.max_candidates]


def brute_force_admissible(bundle, premises: Sequence[Formula], beta: Formula,
                           bounds: BruteForceBounds = BruteForceBounds()) -> AdmissibilityVerdict:
    """Decide or bound admissibility of premises/beta in a concrete logic.

    With an exact theoremhood procedure, closed substitutions up to the bound
    are swept for a counterexample. A structurally complete bundle with a
    characteristic matrix additionally gets exact positive answers via
    entailment. Everything else is inconclusive, never an error.
    """
    premises = tuple(premises)
    thm = getattr(bundle, "theorem", None)
    if thm is not None:
        variables = sorted(set().union(variables_of(beta), *(variables_of(p) for p in premises)))
        candidates = _closed_candidates(bundle.signature, bounds)
        for values in itertools.product(candidates, repeat=len(variables)):
            subst = dict(zip(variables, values))
            from .syntax import apply_substitution

            if all(thm(apply_substitution(subst, p)) for p in premises):
                if not thm(apply_substitution(subst, beta)):
                    return AdmissibilityVerdict(
                        "not-admissible", True, tuple(sorted(subst.items()))
                    )
    char = getattr(bundle, "characteristic", None)
    if getattr(bundle, "structurally_complete", False) and char is not None:
        if entails([char], premises, beta):
            return AdmissibilityVerdict("admissible", True)
        # entailment says non-admissible; report it exactly even if the
        # bounded witness sweep missed a concrete substitution
        return AdmissibilityVerdict("not-admissible", True)
    return AdmissibilityVerdict("inconclusive", False)


# ---------------------------------------------------------------------------
# bases

@dataclass(frozen=True)
class Basis:
    provenance: str
    rules: tuple
    schema_bound: Optional[int] = None

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


def derivable_with_basis(premises, goal, basis: Basis, bundle,
                         bounds: SearchBounds = SearchBounds()) -> Optional[Derivation]:
    """Bounded search in the bundle's calculus extended with the basis rules.

    None means not found within bounds, never underivability.
    """
    calc = getattr(bundle, "calculus", bundle)
    return bounded_proof_search(calc, tuple(basis.rules), premises, goal, bounds)


def combined_basis(b1: Basis, b2: Basis, cs: CombinedSignature) -> Basis:
    """Union of the component bases, each embedded and tagged like calculus rules."""
    rules = []
    for k, b in ((1, b1), (2, b2)):
        for r in b.rules:
            rules.extend(inherit_rule(r, k, cs))
    return Basis(
        provenance=f"meet({b1.provenance},{b2.provenance})",
        rules=tuple(rules),
        schema_bound=b1.schema_bound or b2.schema_bound,
    )


# ---------------------------------------------------------------------------
# structural completeness sampling

@dataclass(frozen=True)
class CompletenessReport:
    checked: int
    agreements: int
    not_admissible: int
    inconclusive: int
    flagged: tuple  # rules admissible (per oracle) but not found derivable

    @property
    def confirmed_counterexamples(self) -> int:
        """Always 0 by construction: bounded search cannot confirm underivability."""
        return 0


def check_structural_completeness_sample(bundle, rules: Iterable[Rule],
                                         search_bounds: SearchBounds = SearchBounds(),
                                         oracle: Optional[Callable] = None,
                                         bf_bounds: BruteForceBounds = BruteForceBounds()) -> CompletenessReport:
    """Compare an admissibility verdict with plain derivability, rule by rule.

    A rule admissible per the oracle but not derivable within bounds is only
    flagged (derivability search is incomplete); nothing is ever asserted as a
    counterexample.
    """
    empty = Basis("empty", ())
    checked = agreements = nonadm = inconclusive = 0
    flagged = []
    for rule in rules:
        checked += 1
        if oracle is not None:
            verdict = oracle(rule.premises, rule.conclusion)
            status = "admissible" if verdict else "not-admissible"
        else:
            status = brute_force_admissible(bundle, rule.premises, rule.conclusion, bf_bounds).status
        if status == "inconclusive":
            inconclusive += 1
            continue
        if status == "not-admissible":
            nonadm += 1
            continue
        found = derivable_with_basis(rule.premises, rule.conclusion, empty, bundle, search_bounds)
        if found is not None:
            agreements += 1
        else:
            flagged.append(rule)
    return CompletenessReport(checked, agreements, nonadm, inconclusive, tuple(flagged))


# ---------------------------------------------------------------------------
# oracle constructors

def semantic_oracle(bundle) -> AdmissibilityOracle:
    """Exact oracle for a structurally complete bundle with a characteristic matrix."""
    char = bundle.characteristic
    if char is None or not bundle.structurally_complete:
        raise ValueError(f"{bundle.name}: semantic oracle needs structural completeness and a characteristic matrix")
    return AdmissibilityOracle(
        logic=bundle.name,
        exact=True,
        fn=lambda premises, beta: entails([char], premises, beta),
    )


def stub_oracle(logic: str, main: bool, falsum_answer: bool = False,
                exact: bool = True) -> AdmissibilityOracle:
    """Fixed-answer oracle for case-table exercises: main answer for ordinary
    queries, falsum_answer when the query conclusion is the falsum constant.
    """
    from .syntax import FALSUM

    def fn(premises, beta):
        if isinstance(beta, App) and beta.ctor.arity == 0 and beta.ctor.name == FALSUM:
            return falsum_answer
        return main

    return AdmissibilityOracle(logic=logic, exact=exact, fn=fn)


def rule_key(premises: Sequence[Formula], beta: Formula) -> str:
    ps = " ; ".join(print_formula(p) for p in premises)
    return f"{ps} / {print_formula(beta)}"


def oracle_from_table(logic: str, table: Mapping, default: bool = False,
                      exact: bool = False) -> AdmissibilityOracle:
    """Oracle answering from a rule-key table (see rule_key); unknown keys get
    the default answer.
    """
    def fn(premises, beta):
        return bool(table.get(rule_key(premises, beta), default))

    return AdmissibilityOracle(logic=logic, exact=exact, fn=fn)


def bundle_oracle(bundle, bounds: BruteForceBounds = BruteForceBounds()) -> AdmissibilityOracle:
    """Best available oracle for a preset: exact when the bundle supports it,
    otherwise a bounded procedure marked inexact (inconclusive counts as a
    negative answer, which is why the caveat must travel with the verdict).
    """
    if getattr(bundle, "structurally_complete", False) and getattr(bundle, "characteristic", None) is not None:
        return semantic_oracle(bundle)

    def fn(premises, beta):
        return brute_force_admissible(bundle, premises, beta, bounds).status == "admissible"

    return AdmissibilityOracle(logic=bundle.name, exact=False, fn=fn)
