import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from film_accord.fuzzy_inference import (
    FuzzyRule,
    InferenceError,
    LinguisticVariable,
    MamdaniSystem,
    RuleBase,
    TrapezoidMF,
    default_definition,
    load_fis,
    membership,
    system_from_definition,
)


class TestMembership:
    def test_rising_edge_midpoint(self):
        assert membership(TrapezoidMF(0, 2, 4, 6), 1) == pytest.approx(0.5)

    def test_plateau(self):
        assert membership(TrapezoidMF(0, 2, 4, 6), 3) == 1.0

    def test_falling_edge(self):
        # (7 - 6) / (7 - 5)
        assert membership(TrapezoidMF(3, 4, 5, 7), 6) == pytest.approx(0.5)

    def test_outside_support(self):
        mf = TrapezoidMF(2, 3, 4, 5)
        assert membership(mf, 1.9) == 0.0
        assert membership(mf, 5.1) == 0.0

    def test_vertical_left_edge(self):
        mf = TrapezoidMF(3, 3, 5, 6)
        assert membership(mf, 3) == 1.0
        assert membership(mf, 2.999) == 0.0

    def test_vertical_right_edge(self):
        mf = TrapezoidMF(0, 0, 3, 3)
        assert membership(mf, 3) == 1.0
        assert membership(mf, 3.001) == 0.0

    def test_triangle(self):
        mf = TrapezoidMF(0, 5, 5, 10)
        assert membership(mf, 5) == 1.0
        assert membership(mf, 2.5) == pytest.approx(0.5)

    def test_rejects_unordered_parameters(self):
        with pytest.raises(ValueError):
            TrapezoidMF(5, 3, 4, 6)

    @given(
        params=st.lists(st.floats(0, 10), min_size=4, max_size=4).map(sorted),
        x=st.floats(-5, 15),
    )
    def test_range_and_plateau_properties(self, params, x):
        mf = TrapezoidMF(*params)
        value = membership(mf, x)
        assert 0.0 <= value <= 1.0
        if mf.b <= x <= mf.c:
            assert value == 1.0
        if x < mf.a or x > mf.d:
            assert value == 0.0


class TestLinguisticVariable:
    def test_coverage_gap_rejected(self):
        with pytest.raises(ValueError, match="no term covers"):
            LinguisticVariable(
                name="gappy",
                universe=(0, 10),
                terms={
                    "low": TrapezoidMF(0, 0, 2, 3),
                    "high": TrapezoidMF(7, 8, 10, 10),
                },
            )

    def test_support_outside_universe_rejected(self):
        with pytest.raises(ValueError, match="leaves universe"):
            LinguisticVariable(
                name="loose",
                universe=(0, 10),
                terms={"all": TrapezoidMF(-1, 0, 10, 11)},
            )

    def test_default_variables_cover_universe(self, fis):
        for variable in (fis.agreement, fis.confidence, fis.output):
            xs = np.arange(0, 10.001, 0.01)
            for x in xs:
                assert any(membership(mf, float(x)) > 0 for mf in variable.terms.values()), (
                    variable.name, x)


class TestRuleBase:
    def test_default_has_15_rules(self, fis):
        assert len(fis.rules.rules) == 15

    def test_removing_a_rule_fails_validation(self, fis):
        shrunk = RuleBase(fis.rules.rules[:-1])
        dropped = fis.rules.rules[-1]
        with pytest.raises(ValueError) as err:
            shrunk.validate_complete(fis.agreement, fis.confidence, fis.output)
        assert dropped.agreement_term in str(err.value)
        assert dropped.confidence_term in str(err.value)

    def test_duplicate_pair_rejected(self, fis):
        doubled = RuleBase(fis.rules.rules + (fis.rules.rules[0],))
        with pytest.raises(ValueError, match="duplicate"):
            doubled.validate_complete(fis.agreement, fis.confidence, fis.output)

    def test_unknown_term_rejected(self, fis):
        bad = RuleBase(fis.rules.rules[:-1] + (FuzzyRule("Agreeish", "Sure", "Weak"),))
        with pytest.raises(ValueError, match="Agreeish"):
            bad.validate_complete(fis.agreement, fis.confidence, fis.output)

    def test_rule_grid_matches_published_table(self, fis):
        # Row-for-row antecedent-to-consequent map.
        expected = {
            ("Strongly Agree", "Unsure"): "Moderate",
            ("Strongly Agree", "Neutral"): "Strong",
            ("Strongly Agree", "Sure"): "Strong",
            ("Agree", "Unsure"): "Moderate",
            ("Agree", "Neutral"): "Moderate",
            ("Agree", "Sure"): "Strong",
            ("Neutral", "Unsure"): "Moderate",
            ("Neutral", "Neutral"): "Moderate",
            ("Neutral", "Sure"): "Strong",
            ("Disagree", "Unsure"): "Moderate",
            ("Disagree", "Neutral"): "Moderate",
            ("Disagree", "Sure"): "Weak",
            ("Strongly Disagree", "Unsure"): "Moderate",
            ("Strongly Disagree", "Neutral"): "Weak",
            ("Strongly Disagree", "Sure"): "Weak",
        }
        got = {
            (r.agreement_term, r.confidence_term): r.feedback_term
            for r in fis.rules.rules
        }
        assert got == expected


class TestInfer:
    def test_worked_example_six_four(self, fis):
        assert fis.infer(6, 4) == pytest.approx(5.0, abs=0.05)

    def test_table_row_nine_six(self, fis):
        assert fis.infer(9, 6) == pytest.approx(8.44, abs=0.5)

    def test_table_row_five_five(self, fis):
        assert fis.infer(5, 5) == pytest.approx(4.99, abs=0.5)

    def test_table_row_three_seven(self, fis):
        assert fis.infer(3, 7) == pytest.approx(3.75, abs=0.5)

    def test_visualized_example(self, fis):
        assert fis.infer(8.8, 3.4) == pytest.approx(6.94, abs=0.5)

    def test_agreement_six_fuzzifies_half_and_half(self, fis):
        memberships = fis.agreement.fuzzify(6.0)
        assert memberships["Neutral"] == pytest.approx(0.5)
        assert memberships["Agree"] == pytest.approx(0.5)

    def test_out_of_range_inputs_clamped(self, fis):
        assert fis.infer(-3, 15) == pytest.approx(fis.infer(0, 10))

    def test_output_within_universe_grid(self, fis):
        lo, hi = fis.output.universe
        for a in np.linspace(0, 10, 26):
            for c in np.linspace(0, 10, 26):
                assert lo <= fis.infer(float(a), float(c)) <= hi

    def test_monotone_in_agreement_at_fixed_confidence(self, fis):
        for confidence in (0.0, 5.0, 10.0):
            running_max = -np.inf
            for a in np.arange(0, 10.0001, 0.1):
                value = fis.infer(float(a), confidence)
                assert value >= running_max - 0.1, (a, confidence, value, running_max)
                running_max = max(running_max, value)

    def test_symmetric_consequent_lemma(self, fis):
        # Every fired rule at (6,4) and (0,0) concludes Moderate, which is
        # symmetric about 5, so the centroid must sit at 5 up to grid error.
        for pair in ((6, 4), (0, 0)):
            report = fis.describe_activation(*pair)
            fired_terms = {act.rule.feedback_term for act in report.fired()}
            assert fired_terms == {"Moderate"}
            assert report.value == pytest.approx(5.0, abs=1e-6)


class TestDescribeActivation:
    def test_six_four_fires_only_moderate(self, fis):
        report = fis.describe_activation(6, 4)
        assert {act.rule.feedback_term for act in report.fired()} == {"Moderate"}
        assert report.value == fis.infer(6, 4)

    def test_zero_ten_fires_strongly_disagree_sure(self, fis):
        report = fis.describe_activation(0, 10)
        strengths = {
            (act.rule.agreement_term, act.rule.confidence_term): act.strength
            for act in report.fired()
        }
        assert strengths[("Strongly Disagree", "Sure")] == pytest.approx(1.0)

    def test_ten_ten_fires_strongly_agree_sure(self, fis):
        report = fis.describe_activation(10, 10)
        strengths = {
            (act.rule.agreement_term, act.rule.confidence_term): act.strength
            for act in report.fired()
        }
        assert strengths[("Strongly Agree", "Sure")] == pytest.approx(1.0)

    def test_value_matches_infer_exactly(self, fis):
        for a, c in ((2.3, 7.7), (5.5, 5.5), (9.1, 0.4)):
            assert fis.describe_activation(a, c).value == fis.infer(a, c)

    def test_clips_are_max_over_rules(self, fis):
        report = fis.describe_activation(8.8, 3.4)
        for term, clip in report.output_clips.items():
            strengths = [
                act.strength for act in report.rule_activations
                if act.rule.feedback_term == term
            ]
            assert clip == pytest.approx(max(strengths))


class TestDefinitionFiles:
    def test_default_round_trips_through_loader(self, tmp_path, fis):
        path = tmp_path / "fis.json"
        path.write_text(json.dumps(default_definition()), "utf-8")
        loaded = load_fis(path)
        assert loaded.infer(6, 4) == fis.infer(6, 4)
        assert loaded.infer(8.8, 3.4) == fis.infer(8.8, 3.4)

    def test_malformed_file_rejected(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", "utf-8")
        with pytest.raises(ValueError, match="not a valid FIS"):
            load_fis(path)

    def test_missing_section_rejected(self):
        with pytest.raises(ValueError, match="missing section"):
            system_from_definition({"variables": {}})

    def test_incomplete_rule_file_rejected(self):
        definition = default_definition()
        definition["rules"] = definition["rules"][:-1]
        with pytest.raises(ValueError, match="missing antecedent pair"):
            system_from_definition(definition)


class TestNoRuleFired:
    def test_reported_not_defaulted(self):
        # The 0.01 coverage scan cannot see a pinhole between scan points:
        # both agreement terms are zero at exactly 4.996. The engine must
        # report the condition instead of silently returning a default.
        pinholed = LinguisticVariable(
            name="agreement", universe=(0, 10),
            terms={
                "low": TrapezoidMF(0, 0, 4.994, 4.996),
                "high": TrapezoidMF(4.996, 4.998, 10, 10),
            },
        )
        confidence = LinguisticVariable(
            name="confidence", universe=(0, 10),
            terms={"all": TrapezoidMF(0, 0, 10, 10)},
        )
        output = LinguisticVariable(
            name="feedback", universe=(0, 10),
            terms={"mid": TrapezoidMF(0, 0, 10, 10)},
        )
        fis = MamdaniSystem(
            agreement=pinholed,
            confidence=confidence,
            output=output,
            rules=RuleBase((
                FuzzyRule("low", "all", "mid"),
                FuzzyRule("high", "all", "mid"),
            )),
        )
        with pytest.raises(InferenceError, match="no rule fired"):
            fis.infer(4.996, 5)
