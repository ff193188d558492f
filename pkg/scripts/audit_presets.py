#!/usr/bin/env python3
"""Soundness audit over every preset: check each calculus rule against the
preset's finite matrices, and each pairwise meet calculus against the product
of the components' first matrices. Exits nonzero on any unsound rule.
"""
import itertools
import sys

from meetlogic.calculus import assemble_meet_calculus
from meetlogic.combination import combine_signatures
from meetlogic.presets import PRESET_NAMES, load_preset
from meetlogic.semantics import check_rule_soundness, product_matrix


def main():
    failures = []
    bundles = {name: load_preset(name, max_worlds=2) for name in PRESET_NAMES}

    for name, b in bundles.items():
        bad = [r.name for r in b.calculus.rules
               if not check_rule_soundness(list(b.matrices), r)]
        print(f"{name}: {len(b.calculus.rules)} rules on {len(b.matrices)} matrices"
              + ("" if not bad else f"  UNSOUND: {', '.join(bad)}"))
        failures += [(name, r) for r in bad]

    for n1, n2 in itertools.combinations_with_replacement(PRESET_NAMES, 2):
        b1, b2 = bundles[n1], bundles[n2]
        cs = combine_signatures(b1.signature, b2.signature)
        calc = assemble_meet_calculus(b1.calculus, b2.calculus, cs)
        m1 = b1.characteristic or b1.matrices[0]
        m2 = b2.characteristic or b2.matrices[0]
        prod = product_matrix(m1, m2, cs)
        bad = [r.name for r in calc.rules if not check_rule_soundness([prod], r)]
        print(f"meet({n1},{n2}): {len(calc.rules)} rules"
              + ("" if not bad else f"  UNSOUND: {', '.join(bad)}"))
        failures += [(f"meet({n1},{n2})", r) for r in bad]

    if failures:
        print(f"\n{len(failures)} unsound rules", file=sys.stderr)
        return 1
    print("\nall rules sound")
    return 0


if __name__ == "__main__":
    sys.exit(main())
