"""
Test consistency case sampling, nearest-value prediction and scoring.

Tests run under pytest or through run_tests(), which accumulates results
and shows a final score.
"""

import sys

from datetime import date

from hypothesis import given, settings, strategies as st
from runner_support import collect_tests, run_test_functions

from sales_size_normalizer.errors import ConfigInvalid, RecordFormatError
from sales_size_normalizer.evaluation import (
    ABSTAIN,
    TestCase,
    evaluate,
    evaluate_by_category,
    evaluate_by_period,
    per_component_spearman,
    predict,
    sample_test_cases,
    score,
)
from sales_size_normalizer.frequency import SaleRecord, category_of
from sales_size_normalizer.solvers import NormalizationMap
from sales_size_normalizer.synth import SynthConfig, generate


def _map(values, components=None):
    """NormalizationMap from {(brand, raw): value} with one size type per brand."""
    result = NormalizationMap()
    for (brand, raw), value in values.items():
        result.set((f"{brand}#0", raw), value, (components or {}).get(brand, 0))
    return result


def _case(size_a="M", available=("6", "8"), actual="8", brand_b="b", user="u1", month="2023-01"):
    return TestCase(user_id=user, month=month, brand_a="a", size_a=size_a, product_a="pa",
                    brand_b=brand_b, product_b="pb", available_sizes=tuple(available), actual_size=actual)


def _sale(user, brand, size, product, day=1, month=1, returned=False):
    return SaleRecord(user, brand, size, product, date(2023, month, day), returned)


def test_predict_nearest_value():
    """A at 3.0 against B sizes {6: 2.7, 8: 3.1} predicts 8."""
    learned = _map({("a", "M"): 3.0, ("b", "6"): 2.7, ("b", "8"): 3.1})
    assert predict(learned, _case()) == "8"


def test_predict_abstains_on_unknown_source():
    """An unknown size for purchase A abstains."""
    learned = _map({("a", "M"): 3.0, ("b", "6"): 2.7})
    assert predict(learned, _case(size_a="XL")) is ABSTAIN


def test_predict_abstains_without_candidates():
    """No valued size of B abstains; valued sizes are the only candidates."""
    learned = _map({("a", "M"): 3.0, ("b", "6"): 2.7})
    assert predict(learned, _case(available=("10", "12"), actual="10")) is ABSTAIN
    assert predict(learned, _case(available=("6", "8"), actual="8")) == "6"


def test_predict_tie_goes_to_smaller_value():
    """Exact ties in distance pick the smaller normalized value."""
    learned = _map({("a", "M"): 1.0, ("b", "6"): 0.5, ("b", "8"): 1.5})
    assert predict(learned, _case()) == "6"


def test_predict_cross_component_abstention():
    """With abstention on, sizes in another component are not candidates."""
    learned = _map({("a", "M"): 3.0, ("b", "6"): 2.7, ("b", "8"): 3.1}, components={"a": 0, "b": 1})
    assert predict(learned, _case()) == "8"
    assert predict(learned, _case(), abstain_cross_component=True) is ABSTAIN


def test_abstention_only_lowers_coverage():
    """Cross-component abstention never turns a correct prediction into a wrong one."""
    learned = _map({("a", "M"): 3.0, ("b", "6"): 2.7, ("b", "8"): 3.1, ("c", "S"): 3.0, ("c", "L"): 5.0},
                   components={"a": 0, "b": 1, "c": 0})
    reference = _map({("b", "6"): 1.0, ("b", "8"): 2.0, ("c", "S"): 1.0, ("c", "L"): 2.0})
    cases = [_case(), _case(brand_b="c", available=("S", "L"), actual="S", user="u2")]
    loose = evaluate(learned, cases, reference)
    strict = evaluate(learned, cases, reference, abstain_cross_component=True)
    assert strict.coverage <= loose.coverage
    assert strict.n_correct <= loose.n_correct
    assert strict.n_predicted - strict.n_correct <= loose.n_predicted - loose.n_correct


def test_reference_equivalent_spellings_are_correct():
    """'12 Regular' is correct for an actual '12' when the reference values them equally."""
    case = _case(available=("10", "12", "12 Regular"), actual="12")
    reference = _map({("b", "10"): 4.0, ("b", "12"): 5.0, ("b", "12 Regular"): 5.0})
    report = score([case], ["12 Regular"], reference)
    assert report.n_correct == 1
    assert report.accuracy == 1.0
    
    # Plain string comparison would have called it wrong
    assert "12 Regular" != case.actual_size


def test_coverage_and_accuracy_arithmetic():
    """Three predictions out of four cases, two correct: coverage 0.75, accuracy 2/3."""
    reference = _map({("b", "6"): 1.0, ("b", "8"): 2.0})
    cases = [_case(user=f"u{i}") for i in range(4)]
    report = score(cases, ["8", "8", "6", ABSTAIN], reference)
    assert report.n_cases == 4
    assert report.coverage == 0.75
    assert abs(report.accuracy - 2 / 3) < 1e-12
    assert report.to_dict()['n_predicted'] == 3


def test_zero_predictions_have_no_accuracy():
    """Without predictions coverage is 0 and accuracy is absent."""
    reference = _map({("b", "6"): 1.0, ("b", "8"): 2.0})
    report = score([_case(), _case(user="u2")], [ABSTAIN, ABSTAIN], reference)
    assert report.coverage == 0.0
    assert report.accuracy is None
    assert report.to_dict()['accuracy'] is None


def test_unreferenced_predictions_are_not_judged():
    """A prediction the reference cannot value counts for coverage, not accuracy."""
    reference = _map({("b", "8"): 2.0})
    report = score([_case(), _case(user="u2")], ["6", "8"], reference)
    assert report.n_unreferenced == 1
    assert report.coverage == 1.0
    assert report.accuracy == 1.0


def test_score_length_mismatch():
    """Predictions must line up with cases."""
    try:
        score([_case()], [], _map({}))
    except ValueError:
        return
    raise AssertionError("ValueError not raised")


def test_evaluate_by_period():
    """Cases are split by month into half-open periods."""
    learned = _map({("a", "M"): 3.0, ("b", "6"): 2.7, ("b", "8"): 3.1})
    reference = _map({("b", "6"): 1.0, ("b", "8"): 2.0})
    cases = [_case(month="2023-01"), _case(month="2023-02", user="u2"), _case(month="2023-03", user="u3")]
    reports = evaluate_by_period(learned, cases, reference, {
        'train': (None, date(2023, 2, 1)),
        'test': (date(2023, 2, 1), None),
    })
    assert reports['train'].n_cases == 1
    assert reports['test'].n_cases == 2
    assert reports['test'].accuracy == 1.0


def test_sampling_skips_single_purchases_and_same_product():
    """Users with one purchase, or two of the same product, give no case."""
    sales = [
        _sale("u1", "a", "M", "pa"),
        _sale("u2", "a", "M", "pa"),
        _sale("u2", "a", "L", "pa", day=9),
        _sale("u3", "a", "M", "pa"),
        _sale("u3", "b", "8", "pb", returned=True),
    ]
    assert sample_test_cases(sales) == []


def test_sampling_one_case_per_user_month():
    """Each user-month with two products yields exactly one case."""
    sales = [
        _sale("u1", "a", "M", "pa"),
        _sale("u1", "b", "8", "pb", day=3),
        _sale("u1", "c", "32", "pc", day=4),
        _sale("u1", "a", "M", "pa", month=2),
        _sale("u1", "b", "6", "pb", month=2),
        _sale("u2", "b", "6", "pb"),
        _sale("u2", "a", "S", "pa"),
    ]
    cases = sample_test_cases(sales, seed=3)
    assert [(case.month, case.user_id) for case in cases] == [
        ("2023-01", "u1"), ("2023-01", "u2"), ("2023-02", "u1")]
    for case in cases:
        assert (case.brand_a, case.product_a) != (case.brand_b, case.product_b)
        assert case.actual_size in case.available_sizes


def test_sampling_uses_product_size_runs():
    """Available sizes are every size the target product was sold in."""
    sales = [
        _sale("u1", "a", "M", "pa"),
        _sale("u1", "b", "8", "pb"),
        _sale("u2", "b", "6", "pb", month=3),
        _sale("u3", "b", "10", "pb", month=3),
    ]
    cases = [case for case in sample_test_cases(sales, seed=1) if case.brand_b == "b"]
    for case in cases:
        assert case.available_sizes == ("10", "6", "8")


def test_sampling_is_deterministic():
    """Same seed, same cases; max_cases keeps a sorted subsample."""
    sales = [_sale(f"u{i}", brand, size, f"p{brand}", month=1 + i % 3)
             for i in range(30) for brand, size in (("a", "M"), ("b", "8"))]
    first = sample_test_cases(sales, max_cases=10, seed=11)
    second = sample_test_cases(sales, max_cases=10, seed=11)
    assert first == second
    assert len(first) == 10
    assert [(c.month, c.user_id) for c in first] == sorted((c.month, c.user_id) for c in first)


def test_sampling_rejects_negative_cap():
    """max_cases below zero is a configuration error."""
    try:
        sample_test_cases([], max_cases=-1)
    except ConfigInvalid:
        return
    raise AssertionError("ConfigInvalid not raised")


def test_case_rows():
    """Rows rebuild the case, and malformed rows raise RecordFormatError."""
    case = _case(available=("6", "8", "10"))
    assert TestCase.from_row(case.to_row()) == case
    try:
        TestCase.from_row(case.to_row()[:-1])
    except RecordFormatError:
        return
    raise AssertionError("RecordFormatError not raised")


def test_per_component_spearman():
    """Rank agreement is computed per component and small components are skipped."""
    learned = _map({("a", "S"): 0.0, ("a", "M"): 0.1, ("a", "L"): 0.3, ("b", "6"): 0.0, ("b", "8"): 0.2},
                   components={"a": 0, "b": 1})
    truth = _map({("a", "S"): -1.0, ("a", "M"): 0.0, ("a", "L"): 1.0, ("b", "6"): 2.0, ("b", "8"): 1.0})
    results = per_component_spearman(learned, truth, min_keys=3)
    assert list(results) == [0]
    assert abs(results[0]['spearman'] - 1.0) < 1e-12
    assert results[0]['n_keys'] == 3


REMOVABLE = _map({("a", "S"): 1.0, ("a", "M"): 2.0, ("a", "L"): 3.0,
                  ("b", "6"): 1.1, ("b", "8"): 1.9, ("b", "10"): 3.2,
                  ("c", "30"): 0.8, ("c", "32"): 2.5})
REMOVABLE_CASES = [
    _case(size_a=size_a, available=available, actual=available[0], brand_b=brand_b, user=f"u{i}")
    for i, (size_a, brand_b, available) in enumerate([
        ("S", "b", ("6", "8", "10")), ("M", "b", ("6", "8")), ("L", "b", ("8", "10")),
        ("M", "c", ("30", "32")), ("L", "c", ("32",)), ("S", "c", ("30", "32", "34")),
    ])
]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(sorted(REMOVABLE.values)), unique=True))
def test_removing_keys_never_raises_coverage(removal_order):
    """Each key dropped from the map leaves coverage equal or lower."""
    current = REMOVABLE
    previous = evaluate(current, REMOVABLE_CASES, REMOVABLE).n_predicted
    for key in removal_order:
        current = current.without([key])
        predicted = evaluate(current, REMOVABLE_CASES, REMOVABLE).n_predicted
        assert predicted <= previous
        previous = predicted


def test_reference_predicts_its_own_consistent_cases():
    """Scored against itself, the reference map gets every consistent case right."""
    sales, truth = generate(SynthConfig(n_users=300, n_brands=4, months=3, seed=5))
    reference = truth.to_normalization_map()
    cases = sample_test_cases(sales, seed=1)
    consistent = [case for case in cases if predict(reference, case) == case.actual_size]
    assert consistent
    report = evaluate(reference, consistent, reference)
    assert report.coverage == 1.0
    assert report.accuracy == 1.0
    
    # On all cases, whatever the reference predicts it can also judge
    assert evaluate(reference, cases, reference).n_unreferenced == 0


def _categorized_sale(user, brand, size, product, category, month=1):
    return SaleRecord(user, brand, size, product, date(2023, month, 1), category=category)


def test_sampling_never_mixes_categories():
    """A user buying shoes and tops gets one case per category, each within it."""
    sales = [
        _categorized_sale("u1", "a", "8", "pas", "shoes"),
        _categorized_sale("u1", "a", "M", "pat", "tops"),
        _categorized_sale("u1", "b", "L", "pbt", "tops"),
    ]
    cases = sample_test_cases(sales, seed=4)
    assert [case.category for case in cases] == ["tops"]
    assert {cases[0].brand_a, cases[0].brand_b} == {"tops::a", "tops::b"}
    
    sales.append(_categorized_sale("u1", "b", "40", "pbs", "shoes"))
    cases = sample_test_cases(sales, seed=4)
    assert sorted(case.category for case in cases) == ["shoes", "tops"]
    for case in cases:
        assert case.category == category_of(case.brand_a) == category_of(case.brand_b)


def test_sampling_cap_applies_per_category():
    """max_cases bounds each category, not the total."""
    sales = []
    for i in range(20):
        sales += [_categorized_sale(f"s{i}", "a", "8", "pas", "shoes"),
                  _categorized_sale(f"s{i}", "b", "40", "pbs", "shoes")]
    for i in range(5):
        sales += [_categorized_sale(f"t{i}", "a", "M", "pat", "tops"),
                  _categorized_sale(f"t{i}", "b", "L", "pbt", "tops")]
    cases = sample_test_cases(sales, max_cases=3, seed=2)
    assert sorted(case.category for case in cases) == ["shoes"] * 3 + ["tops"] * 3
    assert len(sample_test_cases(sales, max_cases=10, seed=2)) == 15


def test_evaluate_by_category():
    """Each category is scored on its own cases."""
    learned = _map({("shoes::a", "8"): 1.0, ("shoes::b", "40"): 1.0, ("shoes::b", "41"): 2.0,
                    ("tops::a", "M"): 1.0})
    shoes = TestCase(user_id="u1", month="2023-01", brand_a="shoes::a", size_a="8", product_a="pa",
                     brand_b="shoes::b", product_b="pb", available_sizes=("40", "41"), actual_size="40")
    tops = TestCase(user_id="u1", month="2023-01", brand_a="tops::a", size_a="M", product_a="pa",
                    brand_b="tops::b", product_b="pb", available_sizes=("L",), actual_size="L")
    reports = evaluate_by_category(learned, [tops, shoes], learned)
    assert list(reports) == ["shoes", "tops"]
    assert reports["shoes"].to_dict()["accuracy"] == 1.0
    assert reports["tops"].coverage == 0.0


def run_tests():
    """Run all evaluation tests and return results."""
    return run_test_functions("Testing Evaluation", collect_tests(globals()))


def main():
    """Main test runner."""
    success, results = run_tests()
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())

# End of file #
