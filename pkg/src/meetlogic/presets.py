"""Built-in logic bundles: classical, three-valued Goedel, intuitionistic,
S4.3 and GL — signatures, calculi, matrices, identity/completion profiles,
bases, and an intuitionistic theoremhood procedure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from .admissibility import Basis
from .calculus import Calculus, Rule
from .semantics import Matrix, SemanticsError
from .syntax import (
    App,
    FALSUM,
    Formula,
    Signature,
    VERUM,
    Var,
    make_signature,
    parse_formula,
    verum_family_name,
)
from .treetools import CompletionProfile, IdentityProfile


class PresetError(Exception):
    pass


@dataclass
class LogicBundle:
    """Everything the rest of the library needs to know about one logic."""

    name: str
    signature: Signature
    calculus: Calculus
    matrices: tuple  # finite soundness filters
    characteristic: Optional[Matrix]  # sound & complete finite matrix, if any
    structurally_complete: bool
    theorem: Optional[Callable]  # exact theoremhood, if decidable here
    identity_profiles: dict  # ctor name -> IdentityProfile
    completion_profile: CompletionProfile
    basis: Optional[Basis]
    fixtures: dict = field(default_factory=dict)
    has_equivalence: bool = True

    def refute(self, f: Formula) -> Optional[bool]:
        """False if some finite matrix refutes f; None otherwise (bounded check)."""
        for m in self.matrices:
            from .semantics import holds

            if not holds(m, f):
                return False
        return None


# ---------------------------------------------------------------------------
# signatures

_PROP_CTORS = [("and", 2), ("or", 2), ("->", 2), ("iff", 2), ("neg", 1)]
_MODAL_CTORS = _PROP_CTORS + [("box", 1), ("dia", 1)]


def _fn_matrix(name, sig, carrier, designated, fns) -> Matrix:
    """Matrix from per-name python functions; verum family filled as constant top."""
    ops = {}
    top_value = fns[VERUM]()
    for n in sig.arities():
        for cname, ctor in sig.by_arity[n].items():
            if cname in fns:
                ops[ctor] = (lambda f: (lambda args: f(*args)))(fns[cname])
            elif cname == verum_family_name(n):
                ops[ctor] = (lambda v: (lambda args: v))(top_value)
            else:
                raise PresetError(f"{name}: no operation for {cname}")
    return Matrix(name, sig, tuple(carrier), frozenset(designated), ops)


def godel_chain(sig: Signature, size: int, name: Optional[str] = None) -> Matrix:
    """Linear Heyting algebra on 0..size-1 with top designated."""
    top = size - 1

    def imp(a, b):
        return top if a <= b else b

    fns = {
        VERUM: lambda: top,
        FALSUM: lambda: 0,
        "and": min,
        "or": max,
        "->": imp,
        "neg": lambda a: imp(a, 0),
        "iff": lambda a, b: min(imp(a, b), imp(b, a)),
    }
    return _fn_matrix(name or f"chain{size}", sig, range(size), {top}, fns)


# ---------------------------------------------------------------------------
# Kripke frames and induced matrices

def _transitive(worlds, rel):
    return all((a, c) in rel for a, b in rel for b2, c in rel if b == b2)


def _reflexive(worlds, rel):
    return all((w, w) in rel for w in worlds)


def _irreflexive(worlds, rel):
    return all((w, w) not in rel for w in worlds)


def _weakly_connected(worlds, rel):
    for w in worlds:
        succ = [u for u in worlds if (w, u) in rel]
        for u, v in itertools.product(succ, repeat=2):
            if u != v and (u, v) not in rel and (v, u) not in rel:
                return False
    return True


_FRAME_CONSTRAINTS = {
    "s43": ((_reflexive, "reflexive"), (_transitive, "transitive"), (_weakly_connected, "weakly connected")),
    "gl": ((_transitive, "transitive"), (_irreflexive, "irreflexive")),
}


@dataclass(frozen=True)
class KripkeFrame:
    worlds: tuple
    relation: frozenset  # of (w, u) pairs
    constraint: str  # "s43" | "gl"

    def __post_init__(self):
        checks = _FRAME_CONSTRAINTS.get(self.constraint)
        if checks is None:
            raise PresetError(f"unknown frame constraint {self.constraint!r}")
        for fn, label in checks:
            if not fn(self.worlds, self.relation):
                raise PresetError(f"frame is not {label}")


def kripke_matrix(frame: KripkeFrame, sig: Signature) -> Matrix:
    """Powerset algebra of the frame with only the full set designated."""
    w_all = frozenset(frame.worlds)
    carrier = [frozenset(s) for r in range(len(frame.worlds) + 1)
               for s in itertools.combinations(frame.worlds, r)]

    def box(u):
        return frozenset(w for w in frame.worlds
                         if all(x in u for y, x in frame.relation if y == w))

    def imp(a, b):
        return (w_all - a) | b

    fns = {
        VERUM: lambda: w_all,
        FALSUM: lambda: frozenset(),
        "and": lambda a, b: a & b,
        "or": lambda a, b: a | b,
        "->": imp,
        "neg": lambda a: w_all - a,
        "iff": lambda a, b: imp(a, b) & imp(b, a),
        "box": box,
        "dia": lambda a: w_all - box(w_all - a),
    }
    return _fn_matrix(f"frame{len(frame.worlds)}w", sig, carrier, {w_all}, fns)


def generate_frames(constraint: str, max_worlds: int) -> list:
    """All frames on 1..max_worlds worlds satisfying the constraint, in a fixed order."""
    out = []
    for n in range(1, max_worlds + 1):
        worlds = tuple(range(n))
        pairs = list(itertools.product(worlds, repeat=2))
        for bits in itertools.product((0, 1), repeat=len(pairs)):
            rel = frozenset(p for p, b in zip(pairs, bits) if b)
            try:
                out.append(KripkeFrame(worlds, rel, constraint))
            except PresetError:
                continue
    return out


# ---------------------------------------------------------------------------
# intuitionistic theoremhood (terminating contraction-free sequent search)

_TOP = ("top",)
_BOT = ("bot",)


def _ipl_norm(f: Formula):
    if isinstance(f, Var):
        return ("atom", f.index)
    name, n = f.ctor.name, f.ctor.arity
    if n == 0:
        return _BOT if name == FALSUM else _TOP
    if name == verum_family_name(n):
        return _TOP
    args = tuple(_ipl_norm(a) for a in f.args)
    if name == "neg":
        return ("imp", args[0], _BOT)
    if name == "iff":
        return ("and", ("imp", args[0], args[1]), ("imp", args[1], args[0]))
    if name in ("and", "or"):
        return (name, *args)
    if name == "->":
        return ("imp", *args)
    raise PresetError(f"constructor {name!r} is outside the intuitionistic language")


@lru_cache(maxsize=200000)
def _g4ip(gamma: frozenset, goal) -> bool:
    if goal == _TOP or _BOT in gamma or goal in gamma:
        return True
    for h in gamma:
        rest = gamma - {h}
        tag = h[0]
        if tag == "top":
            return _g4ip(rest, goal)
        if tag == "and":
            return _g4ip(rest | {h[1], h[2]}, goal)
        if tag == "or":
            return _g4ip(rest | {h[1]}, goal) and _g4ip(rest | {h[2]}, goal)
        if tag == "imp":
            a, b = h[1], h[2]
            if a == _TOP:
                return _g4ip(rest | {b}, goal)
            if a == _BOT:
                return _g4ip(rest, goal)
            if a[0] == "atom" and a in gamma:
                return _g4ip(rest | {b}, goal)
            if a[0] == "and":
                return _g4ip(rest | {("imp", a[1], ("imp", a[2], b))}, goal)
            if a[0] == "or":
                return _g4ip(rest | {("imp", a[1], b), ("imp", a[2], b)}, goal)
    if goal[0] == "and":
        return _g4ip(gamma, goal[1]) and _g4ip(gamma, goal[2])
    if goal[0] == "imp":
        return _g4ip(gamma | {goal[1]}, goal[2])
    # non-invertible choices
    if goal[0] == "or" and (_g4ip(gamma, goal[1]) or _g4ip(gamma, goal[2])):
        return True
    for h in gamma:
        if h[0] == "imp" and h[1][0] == "imp":
            rest = gamma - {h}
            c, d, b = h[1][1], h[1][2], h[2]
            if _g4ip(rest | {("imp", d, b)}, ("imp", c, d)) and _g4ip(rest | {b}, goal):
                return True
    return False


def ipl_theorem(f: Formula) -> bool:
    """Exact intuitionistic theoremhood."""
    return _g4ip(frozenset(), _ipl_norm(f))


def ipl_consequence(hyps, f: Formula) -> bool:
    return _g4ip(frozenset(_ipl_norm(h) for h in hyps), _ipl_norm(f))


# ---------------------------------------------------------------------------
# calculi

def _rules(sig, specs) -> tuple:
    P = lambda s: parse_formula(s, sig)
    out = []
    for name, premises, conclusion in specs:
        out.append(Rule(name, tuple(P(p) for p in premises), P(conclusion)))
    return tuple(out)


_INT_CORE = [
    ("mp", ("xi1", "xi1 -> xi2"), "xi2"),
    ("a1", (), "xi1 -> (xi2 -> xi1)"),
    ("a2", (), "(xi1 -> (xi2 -> xi3)) -> ((xi1 -> xi2) -> (xi1 -> xi3))"),
    ("a3", (), "(xi1 and xi2) -> xi1"),
    ("a4", (), "(xi1 and xi2) -> xi2"),
    ("a5", (), "xi1 -> (xi2 -> (xi1 and xi2))"),
    ("a6", (), "xi1 -> (xi1 or xi2)"),
    ("a7", (), "xi2 -> (xi1 or xi2)"),
    ("a8", (), "(xi1 -> xi3) -> ((xi2 -> xi3) -> ((xi1 or xi2) -> xi3))"),
    ("efq", (), "bot -> xi1"),
    ("neg-intro", (), "(xi1 -> xi2) -> ((xi1 -> neg xi2) -> neg xi1)"),
    ("neg-elim", (), "(neg xi1) -> (xi1 -> xi2)"),
    ("iff-elim1", (), "(xi1 iff xi2) -> (xi1 -> xi2)"),
    ("iff-elim2", (), "(xi1 iff xi2) -> (xi2 -> xi1)"),
    ("iff-intro", (), "(xi1 -> xi2) -> ((xi2 -> xi1) -> (xi1 iff xi2))"),
    ("truth", (), "top"),
]

_DNE = [("dne", (), "(neg (neg xi1)) -> xi1")]
_LIN = [("lin", (), "(xi1 -> xi2) or (xi2 -> xi1)")]
_MODAL_S43 = [
    ("k", (), "box (xi1 -> xi2) -> (box xi1 -> box xi2)"),
    ("t", (), "box xi1 -> xi1"),
    ("four", (), "box xi1 -> box (box xi1)"),
    ("conn", (), "box ((box xi1) -> xi2) or box ((box xi2) -> xi1)"),
    ("dia-def", (), "(dia xi1) iff (neg (box (neg xi1)))"),
    ("nec", ("xi1",), "box xi1"),
]
_MODAL_GL = [
    ("k", (), "box (xi1 -> xi2) -> (box xi1 -> box xi2)"),
    ("loeb", (), "box ((box xi1) -> xi1) -> box xi1"),
    ("four", (), "box xi1 -> box (box xi1)"),
    ("dia-def", (), "(dia xi1) iff (neg (box (neg xi1)))"),
    ("nec", ("xi1",), "box xi1"),
]


# ---------------------------------------------------------------------------
# profiles

_PROP_UNARY = {
    "neg": {VERUM: ("neg", FALSUM), FALSUM: ("neg", VERUM)},
}
_PROP_BINARY = {
    "and": {VERUM: ("and", (VERUM, VERUM)), FALSUM: ("and", (VERUM, FALSUM))},
    "or": {VERUM: ("or", (VERUM, VERUM)), FALSUM: ("or", (FALSUM, FALSUM))},
    "->": {VERUM: ("->", (VERUM, VERUM)), FALSUM: ("->", (VERUM, FALSUM))},
    "iff": {VERUM: ("iff", (VERUM, VERUM)), FALSUM: ("iff", (VERUM, FALSUM))},
}

_S43_UNARY = dict(_PROP_UNARY)
_S43_UNARY.update({
    "box": {VERUM: ("box", VERUM), FALSUM: ("box", FALSUM)},
    "dia": {VERUM: ("dia", VERUM), FALSUM: ("dia", FALSUM)},
})
# Provability logic proves neither box-falsum nor its negation, so the falsum
# route for box (and both routes for dia) go through negation instead.
_GL_UNARY = dict(_PROP_UNARY)
_GL_UNARY.update({
    "box": {VERUM: ("box", VERUM), FALSUM: ("neg", VERUM)},
    "dia": {VERUM: ("neg", FALSUM), FALSUM: ("neg", VERUM)},
})


def _identity_profiles():
    return {
        "and": IdentityProfile("and", 2, 1, (VERUM,)),
        "->": IdentityProfile("->", 2, 2, (VERUM,)),
    }


# ---------------------------------------------------------------------------
# bases

def visser_rule(sig: Signature, n: int) -> Rule:
    """The n-th rule of the intuitionistic basis family.

    Variables: xi_1..xi_n and xi_{n+2+i} form the implications, xi_{n+1} and
    xi_{n+2} the disjunctive consequent, xi_{2n+3} the side disjunct.
    """
    P = lambda s: parse_formula(s, sig)
    imps = [f"(xi{i} -> xi{n + 2 + i})" for i in range(1, n + 1)]
    ante = " and ".join(imps) if len(imps) > 1 else imps[0]
    side = f"xi{2 * n + 3}"
    premise = f"(({ante}) -> (xi{n + 1} or xi{n + 2})) or {side}"
    disjuncts = [f"(({ante}) -> xi{j})" for j in range(1, n + 3)]
    conclusion = "(" + " or ".join(disjuncts) + f") or {side}"
    return Rule(f"visser{n}", (P(premise),), P(conclusion))


def gl_basis_rule(sig: Signature, n: int) -> Rule:
    """The n-th rule of the provability-logic basis family.

    Variables: xi_1..xi_n, with xi_{n+1} the boxed pivot and xi_{n+2} the side
    disjunct.
    """
    P = lambda s: parse_formula(s, sig)
    piv = f"xi{n + 1}"
    side = f"xi{n + 2}"
    boxes = " or ".join(f"box xi{i}" for i in range(1, n + 1))
    premise = f"box ((box {piv}) -> ({boxes})) or (box {side})"
    disjuncts = " or ".join(f"box (({piv} and (box {piv})) -> xi{i})" for i in range(1, n + 1))
    conclusion = f"({disjuncts}) or {side}"
    return Rule(f"glb{n}", (P(premise),), P(conclusion))


def harrop_rule(sig: Signature) -> Rule:
    P = lambda s: parse_formula(s, sig)
    return Rule(
        "harrop",
        (P("(neg xi1) -> (xi2 or xi3)"),),
        P("((neg xi1) -> xi2) or ((neg xi1) -> xi3)"),
    )


# ---------------------------------------------------------------------------
# bundle assembly

DEFAULT_SCHEMA_BOUND = 3


def _prop_completion(sig, verify):
    return CompletionProfile(sig, dict(_PROP_UNARY), dict(_PROP_BINARY), verify)


def load_preset(name: str, schema_bound: int = DEFAULT_SCHEMA_BOUND,
                max_worlds: int = 3) -> LogicBundle:
    if name == "CPL":
        sig = make_signature("CPL", _PROP_CTORS)
        calc = Calculus("CPL", sig, _rules(sig, _INT_CORE + _DNE))
        char = godel_chain(sig, 2, "bool2")
        thm = lambda f: _holds(char, f)
        return LogicBundle(
            name="CPL", signature=sig, calculus=calc, matrices=(char,),
            characteristic=char, structurally_complete=True, theorem=thm,
            identity_profiles=_identity_profiles(),
            completion_profile=_prop_completion(sig, thm),
            basis=Basis("CPL", ()),
        )
    if name == "G3":
        sig = make_signature("G3", _PROP_CTORS)
        calc = Calculus("G3", sig, _rules(sig, _INT_CORE + _LIN))
        char = godel_chain(sig, 3, "g3")
        thm = lambda f: _holds(char, f)
        return LogicBundle(
            name="G3", signature=sig, calculus=calc, matrices=(char,),
            characteristic=char, structurally_complete=True, theorem=thm,
            identity_profiles=_identity_profiles(),
            completion_profile=_prop_completion(sig, thm),
            basis=Basis("G3", ()),
        )
    if name == "IPL":
        sig = make_signature("IPL", _PROP_CTORS)
        calc = Calculus("IPL", sig, _rules(sig, _INT_CORE))
        chains = tuple(godel_chain(sig, k) for k in range(2, 6))
        basis = Basis("IPL", tuple(visser_rule(sig, n) for n in range(1, schema_bound + 1)),
                      schema_bound=schema_bound)
        return LogicBundle(
            name="IPL", signature=sig, calculus=calc, matrices=chains,
            characteristic=None, structurally_complete=False, theorem=ipl_theorem,
            identity_profiles=_identity_profiles(),
            completion_profile=_prop_completion(sig, ipl_theorem),
            basis=basis,
            fixtures={"harrop": harrop_rule(sig)},
        )
    if name == "S43":
        sig = make_signature("S43", _MODAL_CTORS)
        calc = Calculus("S43", sig, _rules(sig, _INT_CORE + _DNE + _MODAL_S43))
        frames = generate_frames("s43", max_worlds)
        matrices = tuple(kripke_matrix(fr, sig) for fr in frames)
        P = lambda s: parse_formula(s, sig)
        basis = Basis("S43", (Rule("s43b", (P("(dia xi1) and (dia (neg xi1))"),), P("bot")),))
        return LogicBundle(
            name="S43", signature=sig, calculus=calc, matrices=matrices,
            characteristic=None, structurally_complete=False, theorem=None,
            identity_profiles=_identity_profiles(),
            completion_profile=CompletionProfile(sig, dict(_S43_UNARY), dict(_PROP_BINARY)),
            basis=basis,
            fixtures={"non-admissible": Rule("t-collapse", (P("(box xi1) -> xi1"),), P("xi1"))},
        )
    if name == "GL":
        sig = make_signature("GL", _MODAL_CTORS)
        calc = Calculus("GL", sig, _rules(sig, _INT_CORE + _DNE + _MODAL_GL))
        frames = generate_frames("gl", max_worlds)
        matrices = tuple(kripke_matrix(fr, sig) for fr in frames)
        basis = Basis("GL", tuple(gl_basis_rule(sig, n) for n in range(1, schema_bound + 1)),
                      schema_bound=schema_bound)
        return LogicBundle(
            name="GL", signature=sig, calculus=calc, matrices=matrices,
            characteristic=None, structurally_complete=False, theorem=None,
            identity_profiles=_identity_profiles(),
            completion_profile=CompletionProfile(sig, dict(_GL_UNARY), dict(_PROP_BINARY)),
            basis=basis,
        )
    raise PresetError(f"unknown preset {name!r} (expected CPL, G3, IPL, S43 or GL)")


def _holds(matrix, f):
    from .semantics import holds

    return holds(matrix, f)


PRESET_NAMES = ("CPL", "G3", "IPL", "S43", "GL")
