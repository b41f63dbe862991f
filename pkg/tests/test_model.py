"""Domain-rule tests: compliance classification, strategies, year logic."""

from collections import Counter
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chefs.kernels import canon_text
from chefs.model import (
    KNOWN_EVALUATION_CODES,
    UNDATED,
    AnalyticalResult,
    ComplianceClass,
    EvaluationCode,
    HazardCategory,
    Sample,
    SamplingStrategy,
    YearOutOfRangeError,
    classify_evaluation,
    effective_year,
    extract_year,
)

EXPECTED_CLASSES = {
    "less than or equal to max permissible quantities": ComplianceClass.COMPLIANT,
    "result not evaluated": ComplianceClass.NOT_EVALUATED,
    "not detected": ComplianceClass.NOT_DETECTED,
    "compliant": ComplianceClass.COMPLIANT,
    "compliant due to measurement uncertainty": ComplianceClass.COMPLIANT,
    "greater than max permissible quantities": ComplianceClass.NON_COMPLIANT,
    "detected": ComplianceClass.NON_COMPLIANT,
    "acceptable": ComplianceClass.OTHER_KNOWN,
    "satisfactory": ComplianceClass.OTHER_KNOWN,
    "non-compliant": ComplianceClass.NON_COMPLIANT,
    "unsatisfactory": ComplianceClass.NON_COMPLIANT,
}


def test_eleven_known_codes():
    assert len(KNOWN_EVALUATION_CODES) == 11
    assert set(KNOWN_EVALUATION_CODES) == set(EXPECTED_CLASSES)


def test_classification_partition_counts():
    counts = Counter(classify_evaluation(code) for code in KNOWN_EVALUATION_CODES)
    assert counts == Counter(
        {
            ComplianceClass.NON_COMPLIANT: 4,
            ComplianceClass.COMPLIANT: 3,
            ComplianceClass.NOT_EVALUATED: 1,
            ComplianceClass.NOT_DETECTED: 1,
            ComplianceClass.OTHER_KNOWN: 2,
        }
    )


@pytest.mark.parametrize("code,expected", sorted(EXPECTED_CLASSES.items()))
def test_classification_table(code, expected):
    assert classify_evaluation(code) is expected


def test_long_maximum_spelling_is_noncompliant():
    assert (
        classify_evaluation("greater than maximum permissible quantities")
        is ComplianceClass.NON_COMPLIANT
    )


def test_unknown_and_empty_codes():
    assert classify_evaluation("") is ComplianceClass.UNKNOWN
    assert classify_evaluation(None) is ComplianceClass.UNKNOWN
    assert classify_evaluation("pending confirmation") is ComplianceClass.UNKNOWN


def test_substring_codes_do_not_leak():
    # Full-string matching: "non-compliant" must not match inside longer text.
    assert classify_evaluation("probably non-compliant") is ComplianceClass.UNKNOWN
    assert classify_evaluation("compliant due to measurement uncertainty") is ComplianceClass.COMPLIANT


@st.composite
def perturbed_code(draw):
    code = draw(st.sampled_from(KNOWN_EVALUATION_CODES))
    pieces = []
    for ch in code:
        ch = draw(st.sampled_from([ch.upper(), ch.lower()]))
        if ch == " ":
            ch = " " * draw(st.integers(1, 3))
        pieces.append(ch)
    lead = " " * draw(st.integers(0, 2))
    tail = "\t" * draw(st.integers(0, 2))
    return code, lead + "".join(pieces) + tail


@given(perturbed_code())
@settings(max_examples=500)
def test_classification_invariant_under_casing_and_whitespace(pair):
    code, noisy = pair
    assert classify_evaluation(canon_text(noisy)) is EXPECTED_CLASSES[code]


@given(perturbed_code())
def test_evaluation_code_canonicalization_idempotent(pair):
    _, noisy = pair
    ec = EvaluationCode.from_raw(noisy)
    assert EvaluationCode.from_raw(ec.text) == ec


def test_known_codes_canonicalize_distinctly():
    assert len({canon_text(c) for c in KNOWN_EVALUATION_CODES}) == 11


class TestExtractYear:
    def test_date_only(self):
        assert extract_year(date(2017, 3, 4), None) == 2017

    def test_reported_year_passthrough(self):
        assert extract_year(None, 2011) == 2011

    def test_reported_year_wins_over_date(self):
        assert extract_year(date(2016, 12, 30), 2017) == 2017

    def test_undated(self):
        assert extract_year(None, None) is UNDATED

    @pytest.mark.parametrize("year", [1899, 2101, 123, 9999])
    def test_out_of_range_rejected(self, year):
        with pytest.raises(YearOutOfRangeError):
            extract_year(None, year)

    def test_out_of_range_date_rejected(self):
        with pytest.raises(YearOutOfRangeError):
            extract_year(date(1812, 1, 1), None)


class TestEffectiveYear:
    def test_prefers_reported(self):
        assert effective_year("2018", "2017-05-01") == 2018

    def test_falls_back_to_date(self):
        assert effective_year(None, "2017-05-01") == 2017
        assert effective_year("garbage", "2017-05-01") == 2017
        assert effective_year("1500", "2017-05-01") == 2017

    def test_undated(self):
        assert effective_year(None, None) is None
        assert effective_year("20x7", "not-a-date") is None


@pytest.mark.parametrize(
    "text,expected",
    [
        ("objective sampling", SamplingStrategy.OBJECTIVE),
        ("objective", SamplingStrategy.OBJECTIVE),
        ("selective sampling", SamplingStrategy.SELECTIVE),
        ("suspect", SamplingStrategy.SUSPECT),
        ("convenient sampling", SamplingStrategy.CONVENIENT),
        ("other", SamplingStrategy.OTHER),
        ("not specified", SamplingStrategy.NOT_SPECIFIED),
        ("census of all farms", SamplingStrategy.NOT_SPECIFIED),
        (None, SamplingStrategy.NOT_SPECIFIED),
    ],
)
def test_strategy_parse(text, expected):
    assert SamplingStrategy.parse(text) is expected


def test_hazard_codes():
    assert {h.value for h in HazardCategory} == {"CC", "PEST", "VMPR"}
    assert HazardCategory.from_code("pest") is HazardCategory.PESTICIDE_RESIDUES


def test_sample_from_cells():
    cells = {
        "product_id": "P0101",
        "product_full_name": "mtx::all lists::food::pome fruits::apples",
        "origin_country": "CN",
        "sampling_country": "DE",
        "sampling_year": "2017",
        "sampling_date": "2017-03-04",
        "strategy": "objective sampling",
        "samp_code": "X1",
    }
    sample = Sample.from_cells("sid", cells, frozenset({HazardCategory.PESTICIDE_RESIDUES}))
    assert sample.sampling_year == 2017
    assert sample.sampling_date == date(2017, 3, 4)
    assert sample.strategy is SamplingStrategy.OBJECTIVE
    assert sample.extra == {"samp_code": "X1"}


def test_result_from_cells_keeps_exact_value_text():
    cells = {
        "contaminant_id": "RF-0010",
        "contaminant_full_name": "chemical elements and derivatives::heavy metal elements::lead (pb)",
        "result_value": "0.0500",
        "loq": "0.0100",
        "eval_code": "detected",
        "analysis_date": "2017-04-01",
    }
    result = AnalyticalResult.from_cells("rid", "sid", cells, HazardCategory.CHEMICAL_CONTAMINANTS)
    assert result.result_value_text == "0.0500"
    assert str(result.result_value) == "0.0500"
    assert result.compliance is ComplianceClass.NON_COMPLIANT
    one_result = classify_evaluation(result.eval_code)
    assert one_result is ComplianceClass.NON_COMPLIANT
