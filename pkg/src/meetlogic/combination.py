"""Meet-combination of signatures: paired constructors, embeddings, projection, tagging."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .syntax import (
    App,
    Ctor,
    Formula,
    Signature,
    SignatureError,
    Var,
    max_schema_index,
    verum_family_name,
)


@dataclass(frozen=True)
class PairCtor:
    """Combined constructor <c1.tag1|c2.tag2>; component identity is the ordered pair."""

    c1: Ctor
    c2: Ctor
    tag1: str
    tag2: str

    def __post_init__(self):
        if self.c1.arity != self.c2.arity:
            raise SignatureError(f"arity mismatch in pair {self.c1.name}/{self.c2.name}")

    @property
    def arity(self) -> int:
        return self.c1.arity

    @property
    def display(self) -> str:
        return f"<{self.c1.name}.{self.tag1}|{self.c2.name}.{self.tag2}>"

    def component(self, k: int) -> Ctor:
        return self.c1 if k == 1 else self.c2


@dataclass
class CombinedSignature:
    """Arity-wise Cartesian product of two component signatures.

    When the component tags coincide (self-combination) they are
    disambiguated by appending the side number.
    """

    sig1: Signature
    sig2: Signature

    def __post_init__(self):
        if self.sig1.tag == self.sig2.tag:
            self.tag1 = f"{self.sig1.tag}1"
            self.tag2 = f"{self.sig2.tag}2"
        else:
            self.tag1, self.tag2 = self.sig1.tag, self.sig2.tag

    def component(self, k: int) -> Signature:
        return self.sig1 if k == 1 else self.sig2

    def tag_of(self, k: int) -> str:
        return self.tag1 if k == 1 else self.tag2

    def side_of(self, tag: str) -> int:
        if tag == self.tag1:
            return 1
        if tag == self.tag2:
            return 2
        raise SignatureError(f"unknown component tag {tag!r} (expected {self.tag1} or {self.tag2})")

    def pair(self, c1: Ctor, c2: Ctor) -> PairCtor:
        return PairCtor(c1, c2, self.tag1, self.tag2)

    def arities(self) -> list:
        return sorted(set(self.sig1.arities()) & set(self.sig2.arities()))

    def ctors_at(self, n: int) -> Iterator[PairCtor]:
        s1 = self.sig1.by_arity.get(n, {})
        s2 = self.sig2.by_arity.get(n, {})
        for n1 in sorted(s1):
            for n2 in sorted(s2):
                yield self.pair(s1[n1], s2[n2])

    def all_ctors(self) -> Iterator[PairCtor]:
        for n in self.arities():
            yield from self.ctors_at(n)

    def side_ctors(self, k: int) -> Iterator[PairCtor]:
        """The embedded image of component k: pairs <c top^n> resp. <top^n c>."""
        for n in self.arities():
            for c in sorted(self.component(k).by_arity.get(n, {})):
                yield self.embed_ctor(self.component(k).by_arity[n][c], k)

    def embed_ctor(self, c: Ctor, k: int) -> PairCtor:
        other = self.component(3 - k)
        pad = other.by_arity[0][verum_family_name(0)] if c.arity == 0 else other.verum_at(c.arity)
        return self.pair(c, pad) if k == 1 else self.pair(pad, c)

    @property
    def top(self) -> Formula:
        return App(self.pair(self.sig1.by_arity[0]["top"], self.sig2.by_arity[0]["top"]))

    @property
    def bot(self) -> Formula:
        return App(self.pair(self.sig1.by_arity[0]["bot"], self.sig2.by_arity[0]["bot"]))

    def falsum(self, k: int) -> Formula:
        """The embedded component falsum: <bot top> or <top bot>."""
        return embed(self.component(k).bot, k, self)

    # parser hooks -----------------------------------------------------------

    def resolve(self, name: str, tag: Optional[str], arity: Optional[int] = None) -> PairCtor:
        if tag is None:
            raise SignatureError(
                f"constructor {name!r} over a combined signature needs a component tag or pair form"
            )
        k = self.side_of(tag)
        return self.embed_ctor(self.component(k).resolve(name, None, arity), k)

    def resolve_pair(self, n1, t1, n2, t2, arity=None) -> PairCtor:
        if self.side_of(t1) != 1 or self.side_of(t2) != 2:
            raise SignatureError(f"component tags <{t1}|{t2}> do not match ({self.tag1}, {self.tag2})")
        c1 = self.sig1.resolve(n1, None, arity)
        c2 = self.sig2.resolve(n2, None, c1.arity if arity is None else arity)
        if c1.arity != c2.arity:
            raise SignatureError(f"arity mismatch in <{n1}.{t1}|{n2}.{t2}>")
        return self.pair(c1, c2)


def combine_signatures(s1: Signature, s2: Signature) -> CombinedSignature:
    return CombinedSignature(s1, s2)


def embed(f: Formula, k: int, cs: CombinedSignature) -> Formula:
    """The embedding of a component-k formula, padding with the verum family."""
    if isinstance(f, Var):
        return f
    return App(cs.embed_ctor(f.ctor, k), tuple(embed(a, k, cs) for a in f.args))


def project(f: Formula, k: int) -> Formula:
    """Replace every combined constructor by its k-th component."""
    if isinstance(f, Var):
        return f
    return App(f.ctor.component(k), tuple(project(a, k) for a in f.args))


def proj_embedded(f: Formula, k: int, cs: CombinedSignature) -> Formula:
    """Projection read back into the combined language via the embedding."""
    return embed(project(f, k), k, cs)


@dataclass
class TaggedRuleSet:
    """Result of tagging one rule: the rules plus provenance by rule name."""

    source: object  # calculus.Rule
    rules: tuple
    ctor_by_name: dict  # rule name -> tagging constructor (None for the untouched rule)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)


def _ctors_of(sig) -> list:
    if hasattr(sig, "all_ctors"):
        return list(sig.all_ctors())
    return list(sig)


def tag_rule(rule, sig) -> TaggedRuleSet:
    """Tag one rule over a signature (or an explicit constructor family).

    A non-liberal rule is kept whole. A liberal rule (conclusion a schema
    variable) yields one rule per constructor c: the conclusion variable is
    replaced, everywhere it occurs, by c applied to fresh variables starting
    just past the rule's maximum index.
    """
    from .calculus import Rule
    from .syntax import apply_substitution

    if not rule.liberal:
        return TaggedRuleSet(rule, (rule,), {rule.name: None})
    j = max_schema_index(rule)
    beta_index = rule.conclusion.index
    out, provenance = [], {}
    for c in _ctors_of(sig):
        fresh = App(c, tuple(Var(j + i) for i in range(1, c.arity + 1)))
        rho = {beta_index: fresh}
        tagged = Rule(
            name=f"{rule.name}#{c.display}",
            premises=tuple(apply_substitution(rho, p) for p in rule.premises),
            conclusion=fresh,
        )
        out.append(tagged)
        provenance[tagged.name] = c
    return TaggedRuleSet(rule, tuple(out), provenance)


def tag_ruleset(rules, sig) -> list:
    """Union of tag_rule over a rule set; returns the TaggedRuleSets in order."""
    return [tag_rule(r, sig) for r in rules]
