"""Plain-text file formats: rules, derivations, matrices, oracle stub tables,
and sectioned logic-definition files.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .calculus import (
    Calculus,
    Clft,
    Derivation,
    Fx,
    Hyp,
    Lft,
    Line,
    Rule,
    RuleApp,
    freeze_subst,
)
from .semantics import Matrix, SemanticsError
from .syntax import (
    App,
    FALSUM,
    ParseError,
    Signature,
    VERUM,
    make_signature,
    parse_formula,
    print_formula,
    verum_family_name,
)


class FormatError(Exception):
    pass


def _content_lines(text):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


# ---------------------------------------------------------------------------
# rule files: premises one per line, ---, conclusion

def parse_rule_file(text: str, sig, name: str = "rule") -> Rule:
    lines = list(_content_lines(text))
    if "---" not in lines:
        raise FormatError("rule file needs a --- separator before the conclusion")
    split = lines.index("---")
    tail = lines[split + 1:]
    if len(tail) != 1:
        raise FormatError("rule file needs exactly one conclusion line after ---")
    premises = tuple(parse_formula(s, sig) for s in lines[:split])
    return Rule(name, premises, parse_formula(tail[0], sig))


def serialize_rule_file(rule: Rule) -> str:
    out = [print_formula(p) for p in rule.premises]
    out.append("---")
    out.append(print_formula(rule.conclusion))
    return "\n".join(out) + "\n"


def rule_line(rule: Rule) -> str:
    ps = " ; ".join(print_formula(p) for p in rule.premises)
    return f"{rule.name}: {ps} / {print_formula(rule.conclusion)}"


def parse_rule_line(line: str, sig) -> Rule:
    """`name: premise ; premise / conclusion` with an optionally empty premise list."""
    if ":" not in line:
        raise FormatError(f"rule line needs a name: {line!r}")
    name, body = line.split(":", 1)
    if "/" not in body:
        raise FormatError(f"rule line needs a / before the conclusion: {line!r}")
    front, concl = body.rsplit("/", 1)
    premises = tuple(
        parse_formula(p.strip(), sig) for p in front.split(";") if p.strip()
    )
    return Rule(name.strip(), premises, parse_formula(concl.strip(), sig))


# ---------------------------------------------------------------------------
# derivation files: `index. formula ; JUST[args]`

def serialize_derivation(d: Derivation) -> str:
    out = []
    for i, line in enumerate(d.lines, start=1):
        out.append(f"{i}. {print_formula(line.formula)} ; {_just_text(line.just)}")
    return "\n".join(out) + "\n"


def _just_text(just) -> str:
    if isinstance(just, Hyp):
        return "HYP"
    if isinstance(just, RuleApp):
        entries = "; ".join(f"xi{v}:={print_formula(f)}" for v, f in just.subst)
        lines = ",".join(str(c) for c in just.cites)
        return f"RULE {just.rule} s={{{entries}}} lines={lines}"
    if isinstance(just, Lft):
        return f"LFT lines={just.cites[0]},{just.cites[1]}"
    if isinstance(just, Clft):
        return f"CLFT line={just.cite} k={just.side}"
    if isinstance(just, Fx):
        return f"FX line={just.cite}"
    raise FormatError(f"unknown justification {type(just).__name__}")


def parse_derivation_file(text: str, sig) -> Derivation:
    lines = []
    for n, raw in enumerate(_content_lines(text), start=1):
        head, _, rest = raw.partition(".")
        try:
            idx = int(head.strip())
        except ValueError:
            raise FormatError(f"line {n}: missing index") from None
        if idx != len(lines) + 1:
            raise FormatError(f"line {n}: indices must count up from 1")
        if ";" not in rest:
            raise FormatError(f"line {n}: missing `; JUST` part")
        ftext, jtext = rest.split(";", 1)
        formula = parse_formula(ftext.strip(), sig)
        lines.append(Line(formula, _parse_just(jtext.strip(), sig, n)))
    if not lines:
        raise FormatError("empty derivation file")
    return Derivation(tuple(lines))


def _parse_just(text: str, sig, n: int):
    if text == "HYP":
        return Hyp()
    if text.startswith("RULE "):
        body = text[5:]
        try:
            name, rest = body.split(" s={", 1)
            entries, rest = rest.rsplit("}", 1)
            lines_part = rest.strip()
            if not lines_part.startswith("lines="):
                raise ValueError
            cited = tuple(int(x) for x in lines_part[6:].split(",") if x)
        except ValueError:
            raise FormatError(f"line {n}: malformed RULE justification") from None
        subst = {}
        for entry in entries.split(";"):
            entry = entry.strip()
            if not entry:
                continue
            var, ftext = entry.split(":=", 1)
            if not var.startswith("xi"):
                raise FormatError(f"line {n}: bad substitution variable {var!r}")
            subst[int(var[2:])] = parse_formula(ftext.strip(), sig)
        return RuleApp(name.strip(), cited, freeze_subst(subst))
    if text.startswith("LFT lines="):
        i, j = text[len("LFT lines="):].split(",")
        return Lft((int(i), int(j)))
    if text.startswith("CLFT line="):
        body = text[len("CLFT line="):]
        cite, k = body.split("k=")
        return Clft(int(cite.strip()), int(k))
    if text.startswith("FX line="):
        return Fx(int(text[len("FX line="):]))
    raise FormatError(f"line {n}: unknown justification {text!r}")


# ---------------------------------------------------------------------------
# matrix files

def parse_matrix_file(text: str, sig: Signature, name: str = "matrix") -> Matrix:
    """Header `carrier N` and `designated i j ...`; then one `op <name> v...`
    per constructor, values row-major over carrier indices 0..N-1.
    """
    size = None
    designated = None
    tables = {}
    for raw in _content_lines(text):
        parts = raw.split()
        if parts[0] == "carrier":
            size = int(parts[1])
        elif parts[0] == "designated":
            designated = frozenset(int(x) for x in parts[1:])
        elif parts[0] == "op":
            cname = parts[1]
            tables[cname] = [int(x) for x in parts[2:]]
        else:
            raise FormatError(f"unknown matrix directive {parts[0]!r}")
    if size is None or designated is None:
        raise FormatError("matrix file needs carrier and designated headers")
    carrier = tuple(range(size))
    ops = {}
    for n in sig.arities():
        for cname, ctor in sig.by_arity[n].items():
            if cname in tables:
                values = tables[cname]
                if len(values) != size ** n:
                    raise FormatError(f"op {cname}: expected {size ** n} values")
                table = dict(zip(itertools.product(carrier, repeat=n), values))
                ops[ctor] = (lambda t: (lambda args: t[args]))(table)
            elif cname == verum_family_name(n) and VERUM in tables:
                ops[ctor] = (lambda v: (lambda args: v))(tables[VERUM][0])
            else:
                raise FormatError(f"matrix file lacks a table for {cname}")
    return Matrix(name, sig, carrier, designated, ops)


def serialize_matrix_file(m: Matrix) -> str:
    size = len(m.carrier)
    index = {v: i for i, v in enumerate(m.carrier)}
    out = [f"carrier {size}", "designated " + " ".join(str(index[v]) for v in sorted(m.designated, key=index.get))]
    for ctor, op in m.ops.items():
        name = getattr(ctor, "name", None) or ctor.display
        values = " ".join(
            str(index[op(args)]) for args in itertools.product(m.carrier, repeat=ctor.arity)
        )
        out.append(f"op {name} {values}".rstrip())
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# oracle stub tables: `0|1 <rule key>` lines plus optional `default 0|1`

def parse_oracle_table(text: str):
    table = {}
    default = False
    for raw in _content_lines(text):
        head, _, rest = raw.partition(" ")
        if head == "default":
            default = bool(int(rest.strip()))
            continue
        table[rest.strip()] = bool(int(head))
    return table, default


# ---------------------------------------------------------------------------
# logic-definition files

_SECTIONS = ("signature", "rules", "matrix", "profiles", "basis")


def load_logic_definition(text: str, name: str = "custom"):
    """Sectioned bundle definition; see the README for the section grammars."""
    from .admissibility import Basis
    from .presets import LogicBundle
    from .treetools import CompletionProfile, IdentityProfile

    sections = {s: [] for s in _SECTIONS}
    current = None
    for raw in _content_lines(text):
        if raw.startswith("[") and raw.endswith("]"):
            current = raw[1:-1]
            if current not in sections:
                raise FormatError(f"unknown section [{current}]")
            continue
        if current is None:
            if raw.startswith("name "):
                name = raw[5:].strip()
                continue
            raise FormatError(f"content before any section: {raw!r}")
        sections[current].append(raw)

    ctors = []
    for line in sections["signature"]:
        cname, arity = line.split()
        ctors.append((cname, int(arity)))
    sig = make_signature(name, ctors)

    rules = tuple(parse_rule_line(line, sig) for line in sections["rules"])
    calc = Calculus(name, sig, rules)

    matrices = ()
    characteristic = None
    if sections["matrix"]:
        body = [l for l in sections["matrix"] if l != "characteristic"]
        m = parse_matrix_file("\n".join(body), sig, name=f"{name}-matrix")
        matrices = (m,)
        if "characteristic" in sections["matrix"]:
            characteristic = m

    identity_profiles = {}
    structurally_complete = False
    for line in sections["profiles"]:
        parts = line.split()
        if parts[0] == "identity":
            cname, arity, pos = parts[1], int(parts[2]), int(parts[3])
            fillers = tuple(parts[4:])
            identity_profiles[cname] = IdentityProfile(cname, arity, pos, fillers)
        elif parts[0] == "structurally-complete":
            structurally_complete = True
        else:
            raise FormatError(f"unknown profile directive {parts[0]!r}")

    basis = Basis(name, tuple(parse_rule_line(line, sig) for line in sections["basis"]))

    theorem = None
    if characteristic is not None:
        from .semantics import holds

        theorem = lambda f: holds(characteristic, f)

    completion = CompletionProfile(sig, {}, {}, theorem)
    return LogicBundle(
        name=name, signature=sig, calculus=calc, matrices=matrices,
        characteristic=characteristic, structurally_complete=structurally_complete,
        theorem=theorem, identity_profiles=identity_profiles,
        completion_profile=completion, basis=basis,
    )
