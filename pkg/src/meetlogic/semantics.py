"""Finite matrix semantics: evaluation, designation, entailment, products, rule soundness."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .combination import CombinedSignature, PairCtor, project
from .syntax import (
    App,
    FALSUM,
    Formula,
    SignatureError,
    VERUM,
    Var,
    variables_of,
    verum_family_name,
)


class SemanticsError(Exception):
    pass


@dataclass
class Matrix:
    """Finite algebra with a nonempty designated subset.

    Operations map argument tuples of carrier elements to a carrier element;
    they are stored as callables taking one tuple argument.
    """

    name: str
    signature: object  # Signature or CombinedSignature
    carrier: tuple
    designated: frozenset
    ops: Mapping  # ctor -> Callable[[tuple], element]

    def __post_init__(self):
        if not self.designated:
            raise SemanticsError(f"matrix {self.name}: empty designated set")
        top = self.constant(VERUM)
        bot = self.constant(FALSUM)
        if top not in self.designated:
            raise SemanticsError(f"matrix {self.name}: top must be designated")
        if bot in self.designated:
            raise SemanticsError(f"matrix {self.name}: bot must not be designated")

    def constant(self, name: str):
        for ctor, op in self.ops.items():
            if ctor.arity == 0 and getattr(ctor, "name", None) == name:
                return op(())
        # combined matrices: the pairing of the two constants
        for ctor, op in self.ops.items():
            if ctor.arity == 0 and isinstance(ctor, PairCtor):
                if ctor.c1.name == name and ctor.c2.name == name:
                    return op(())
        raise SemanticsError(f"matrix {self.name}: no nullary constructor {name}")

    def op_for_name(self, name, arity):
        for ctor, op in self.ops.items():
            if ctor.arity == arity and getattr(ctor, "name", None) == name:
                return op
        raise SemanticsError(f"matrix {self.name}: no operation for {name}/{arity}")

    def op(self, ctor) -> Callable:
        try:
            return self.ops[ctor]
        except KeyError:
            raise SemanticsError(f"matrix {self.name}: no operation for {ctor.display}") from None


def table_matrix(name, signature, carrier, designated, tables) -> Matrix:
    """Build a matrix from explicit tables: ctor -> dict argtuple -> element.

    The verum family is filled in automatically as the constant returning
    top's value.
    """
    ops = {}
    for ctor, table in tables.items():
        ops[ctor] = (lambda t: (lambda args: t[args]))(dict(table))
    top_value = ops[signature.by_arity[0][VERUM]](())
    for n in signature.arities():
        if n == 0:
            continue
        vf = signature.by_arity[n][verum_family_name(n)]
        ops.setdefault(vf, (lambda v: (lambda args: v))(top_value))
    return Matrix(name, signature, tuple(carrier), frozenset(designated), ops)


def eval_formula(m: Matrix, assignment: Mapping, f: Formula):
    """Homomorphic evaluation; the assignment must cover the formula's variables."""
    if isinstance(f, Var):
        try:
            return assignment[f.index]
        except KeyError:
            raise SemanticsError(f"no binding for xi{f.index}") from None
    return m.op(f.ctor)(tuple(eval_formula(m, assignment, a) for a in f.args))


def _assignments(m: Matrix, variables):
    variables = sorted(variables)
    for values in itertools.product(m.carrier, repeat=len(variables)):
        yield dict(zip(variables, values))


def holds(m: Matrix, f: Formula) -> bool:
    """True iff f denotes a designated value under every assignment."""
    return all(
        eval_formula(m, asg, f) in m.designated for asg in _assignments(m, variables_of(f))
    )


def entails(matrices: Iterable[Matrix], gamma: Iterable[Formula], f: Formula) -> bool:
    gamma = tuple(gamma)
    variables = set(variables_of(f)).union(*(variables_of(g) for g in gamma)) if gamma else variables_of(f)
    for m in matrices:
        for asg in _assignments(m, variables):
            if all(eval_formula(m, asg, g) in m.designated for g in gamma):
                if eval_formula(m, asg, f) not in m.designated:
                    return False
    return True


def product_matrix(m1: Matrix, m2: Matrix, cs: CombinedSignature) -> Matrix:
    """Componentwise product over the combined signature."""
    ops = {}
    for ctor in cs.all_ctors():
        op1 = m1.op(ctor.c1)
        op2 = m2.op(ctor.c2)
        ops[ctor] = (lambda o1, o2: (
            lambda args: (o1(tuple(a[0] for a in args)), o2(tuple(a[1] for a in args)))
        ))(op1, op2)
    carrier = tuple(itertools.product(m1.carrier, m2.carrier))
    designated = frozenset(itertools.product(m1.designated, m2.designated))
    return Matrix(f"{m1.name}x{m2.name}", cs, carrier, designated, ops)


def project_assignment(assignment: Mapping, k: int) -> dict:
    """Componentwise projection of a pair-valued assignment."""
    return {v: pair[k - 1] for v, pair in assignment.items()}


def check_rule_soundness(matrices: Iterable[Matrix], rule) -> bool:
    """True iff the rule's premises entail its conclusion over the matrices."""
    return entails(matrices, rule.premises, rule.conclusion)
