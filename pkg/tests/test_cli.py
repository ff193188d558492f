import json

import pytest

from meetlogic.cli import EXIT_INCONCLUSIVE, EXIT_NO, EXIT_USAGE, EXIT_YES, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestUsage:
    def test_no_verb(self, capsys):
        code, _, _ = run(capsys, )
        assert code == EXIT_USAGE

    def test_unknown_verb(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == EXIT_USAGE

    def test_unknown_preset(self, capsys):
        code, _, err = run(capsys, "combine", "--l1", "CPL", "--l2", "K4")
        assert code == EXIT_USAGE and "error" in err

    def test_parse_error(self, capsys):
        code, _, err = run(capsys, "eval", "--logic", "CPL", "xi1 and and")
        assert code == EXIT_USAGE and "error" in err

    def test_missing_logic_selection(self, capsys):
        code, _, err = run(capsys, "eval", "xi1")
        assert code == EXIT_USAGE


class TestCombineProjectEmbed:
    def test_combine_text(self, capsys):
        code, out, _ = run(capsys, "combine", "--l1", "CPL", "--l2", "G3")
        assert code == EXIT_YES
        assert "<and.CPL|and.G3>" in out

    def test_combine_json_deterministic(self, capsys):
        code1, out1, _ = run(capsys, "combine", "--l1", "CPL", "--l2", "G3", "--format", "json")
        code2, out2, _ = run(capsys, "combine", "--l1", "CPL", "--l2", "G3", "--format", "json")
        assert code1 == code2 == EXIT_YES and out1 == out2
        payload = json.loads(out1)
        assert payload["schematic"] == ["LFT", "cLFT", "FX"]

    def test_embed_then_project_identity(self, capsys):
        code, out, _ = run(capsys, "embed", "--l1", "CPL", "--l2", "G3", "-k", "1",
                           "neg xi1")
        assert code == EXIT_YES
        embedded = out.strip()
        code, out, _ = run(capsys, "project", "--l1", "CPL", "--l2", "G3", "-k", "1",
                           embedded)
        assert code == EXIT_YES and out.strip() == "neg(xi1)"


class TestTagVerb:
    def test_component_rule_tagged(self, tmp_path, capsys):
        rule = tmp_path / "mp.rule"
        rule.write_text("xi1\nxi1 -> xi2\n---\nxi2\n")
        code, out, _ = run(capsys, "tag", "--l1", "CPL", "--l2", "G3", "--side", "1",
                           "--rule", str(rule), "--name", "mp")
        assert code == EXIT_YES
        lines = out.strip().splitlines()
        # one variant per constructor of the first component signature
        assert all(l.startswith("mp@1#") for l in lines)
        assert any("<and.CPL|" in l for l in lines)

    def test_non_liberal_untouched(self, tmp_path, capsys):
        rule = tmp_path / "ax.rule"
        rule.write_text("---\nxi1 -> (xi2 -> xi1)\n")
        code, out, _ = run(capsys, "tag", "--l1", "CPL", "--l2", "G3", "--side", "2",
                           "--rule", str(rule), "--name", "ax")
        assert code == EXIT_YES
        lines = out.strip().splitlines()
        assert len(lines) == 1 and lines[0].startswith("ax@2:")


class TestSearchAndCheck:
    def test_search_component_theorem(self, capsys):
        code, out, _ = run(capsys, "search", "--logic", "CPL",
                           "--goal", "xi1 -> xi1", "--depth", "4")
        assert code == EXIT_YES and "HYP" not in out

    def test_search_inconclusive(self, capsys):
        code, out, _ = run(capsys, "search", "--logic", "CPL", "--goal", "bot",
                           "--depth", "3")
        assert code == EXIT_INCONCLUSIVE and "not found" in out

    def test_search_output_rechecks(self, tmp_path, capsys):
        code, out, _ = run(capsys, "search", "--logic", "CPL",
                           "--goal", "xi2", "--hyps", "xi1 ; xi1 -> xi2",
                           "--depth", "3")
        assert code == EXIT_YES
        deriv = tmp_path / "d.txt"
        deriv.write_text(out)
        code, out2, _ = run(capsys, "check-derivation", "--logic", "CPL",
                            "--derivation", str(deriv), "--hyps", "xi1 ; xi1 -> xi2")
        assert code == EXIT_YES and out2.strip() == "accepted"

    def test_check_rejects_corrupt_derivation(self, tmp_path, capsys):
        deriv = tmp_path / "bad.txt"
        deriv.write_text("1. xi1 ; HYP\n2. xi2 ; LFT lines=1,1\n")
        code, out, _ = run(capsys, "check-derivation", "--logic", "CPL",
                           "--derivation", str(deriv), "--hyps", "xi1")
        assert code == EXIT_NO and "rejected at line 2" in out

    def test_meet_check_with_clft(self, tmp_path, capsys):
        deriv = tmp_path / "m.txt"
        deriv.write_text(
            "1. <and.CPL1|or.CPL2>(xi1, xi2) ; HYP\n"
            "2. <and.CPL1|topn.2.CPL2>(xi1, xi2) ; CLFT line=1 k=1\n"
        )
        code, out, _ = run(capsys, "check-derivation", "--l1", "CPL", "--l2", "CPL",
                           "--derivation", str(deriv),
                           "--hyps", "<and.CPL1|or.CPL2>(xi1, xi2)")
        assert code == EXIT_YES


class TestDecideAdmissible:
    def write_rule(self, tmp_path, text):
        p = tmp_path / "r.rule"
        p.write_text(text)
        return str(p)

    def test_derivable_rule_affirmative(self, tmp_path, capsys):
        rule = self.write_rule(
            tmp_path,
            "xi1\n<->.CPL1|->.CPL2>(xi1, xi2)\n---\nxi2\n",
        )
        code, out, _ = run(capsys, "decide-admissible", "--l1", "CPL", "--l2", "CPL",
                           "--rule", rule)
        assert code == EXIT_YES
        assert out.strip() == "a1=1 a2=1 -> 1"

    def test_disjunction_projection_negative(self, tmp_path, capsys):
        rule = self.write_rule(tmp_path, "<or.CPL1|or.CPL2>(xi1, xi2)\n---\nxi1\n")
        code, out, _ = run(capsys, "decide-admissible", "--l1", "CPL", "--l2", "CPL",
                           "--rule", rule)
        assert code == EXIT_NO
        assert out.strip() == "a1=0 a2=0 -> 0"

    def test_stub_split_uses_fallback(self, tmp_path, capsys):
        rule = self.write_rule(tmp_path, "xi1\n---\nxi1\n")
        code, out, _ = run(capsys, "decide-admissible", "--l1", "CPL", "--l2", "G3",
                           "--rule", rule, "--oracle1", "stub:1:1", "--oracle2", "stub:0")
        assert code == EXIT_YES
        assert "fallback o1(bot)=1" in out

    def test_table_oracle(self, tmp_path, capsys):
        table = tmp_path / "t.txt"
        table.write_text("default 0\n1 xi1 / xi1\n")
        rule = self.write_rule(tmp_path, "xi1\n---\nxi1\n")
        code, out, _ = run(capsys, "decide-admissible", "--l1", "CPL", "--l2", "CPL",
                           "--rule", rule,
                           "--oracle1", f"table:{table}", "--oracle2", f"table:{table}")
        assert code == EXIT_YES and "(inexact oracles)" in out

    def test_bad_oracle_spec(self, tmp_path, capsys):
        rule = self.write_rule(tmp_path, "xi1\n---\nxi1\n")
        code, _, err = run(capsys, "decide-admissible", "--l1", "CPL", "--l2", "CPL",
                           "--rule", rule, "--oracle1", "magic")
        assert code == EXIT_USAGE and "oracle spec" in err


class TestBasisVerb:
    def test_ipl_s43_combined(self, capsys):
        code, out, _ = run(capsys, "basis", "--l1", "IPL", "--l2", "S43",
                           "--max-worlds", "1")
        assert code == EXIT_YES
        names = [l.split(":")[0] for l in out.strip().splitlines()]
        assert names == ["visser1@1", "visser2@1", "visser3@1", "s43b@2"]


class TestSemanticsVerbs:
    def test_eval_theorem(self, capsys):
        code, _, _ = run(capsys, "eval", "--logic", "CPL", "xi1 or (neg xi1)")
        assert code == EXIT_YES

    def test_eval_non_theorem(self, capsys):
        code, _, _ = run(capsys, "eval", "--logic", "G3", "xi1 or (neg xi1)")
        assert code == EXIT_NO

    def test_eval_product(self, capsys):
        code, _, _ = run(capsys, "eval", "--l1", "CPL", "--l2", "G3",
                         "<->.CPL|->.G3>(xi1, xi1)")
        assert code == EXIT_YES

    def test_entails(self, capsys):
        code, _, _ = run(capsys, "entails", "--logic", "CPL",
                         "--hyps", "xi1 ; xi1 -> xi2", "--goal", "xi2")
        assert code == EXIT_YES
        code, _, _ = run(capsys, "entails", "--logic", "CPL",
                         "--hyps", "xi1 or xi2", "--goal", "xi1")
        assert code == EXIT_NO


class TestTreeVerbs:
    def test_trees_equivalent_pair(self, capsys):
        code, out, _ = run(capsys, "trees", "top or (neg bot)", "xi1 -> (neg xi2)")
        assert code == EXIT_YES and "True" in out

    def test_trees_distinct_pair(self, capsys):
        code, _, _ = run(capsys, "trees", "xi1", "xi1 and xi2")
        assert code == EXIT_NO

    def test_complete_with_root_head(self, capsys):
        code, out, _ = run(capsys, "complete", "--target", "top", "--root-head", "or",
                           "xi1 -> (neg xi2)")
        assert code == EXIT_YES
        assert out.strip().startswith("or(top, neg(bot))")
        assert "verified: True" in out

    def test_equalize(self, capsys):
        code, out, _ = run(capsys, "equalize", "--l1", "CPL", "--l2", "CPL",
                           "--f1", "xi1", "--f2", "xi2 and xi2")
        assert code == EXIT_YES and "trees equivalent: True" in out


class TestSoundnessAudit:
    def test_component(self, capsys):
        code, out, _ = run(capsys, "soundness-audit", "--logic", "CPL")
        assert code == EXIT_YES and "all rules sound" in out

    def test_meet(self, capsys):
        code, out, _ = run(capsys, "soundness-audit", "--l1", "CPL", "--l2", "G3")
        assert code == EXIT_YES and "all rules sound" in out


class TestJsonOutput:
    def test_json_everywhere_sorted(self, capsys):
        code, out, _ = run(capsys, "eval", "--logic", "CPL", "xi1 -> xi1",
                           "--format", "json")
        assert code == EXIT_YES
        payload = json.loads(out)
        assert payload["holds"] is True
