"""
Test size type inference: position weights, distance, clustering,
semantic ordering and the brand-level size type map.

Tests run under pytest or through run_tests(), which accumulates results
and shows a final score.
"""

import sys

from runner_support import collect_tests, run_test_functions

from hypothesis import given, settings, strategies as st

import numpy as np

from sales_size_normalizer.errors import EmptyInput, PartitionDefect
from sales_size_normalizer.parsing import pattern_key, tokenize
from sales_size_normalizer.sizetypes import (
    EQUAL,
    GREATER,
    INCOMPARABLE,
    INFINITE_DISTANCE,
    LESS,
    PatternGroup,
    SizeType,
    SizeTypeInferencer,
    SizeTypeMap,
    cluster_group,
    distance,
    infer_size_types,
    position_weights,
    semantic_compare,
)


KIDS_SHOE_SIZES = [
    "1.5M Youth", "10.5M Toddler", "11.5M Toddler", "11M Toddler", "12.5M Youth",
    "12M Toddler", "13M Youth", "1M Youth", "2.5M Youth", "2M Youth", "3.5M Youth",
    "3.5W Youth", "3M Youth", "4.5W Youth", "4M Youth", "4W Youth", "5.5W Youth",
    "5M Youth", "5W Youth", "6.5W Youth", "6M Youth", "6W Youth", "7W Youth",
]

TODDLER_M = ("10.5M Toddler", "11M Toddler", "11.5M Toddler", "12M Toddler")
YOUTH_M = ("1M Youth", "1.5M Youth", "2M Youth", "2.5M Youth", "3M Youth", "3.5M Youth",
           "4M Youth", "5M Youth", "6M Youth", "12.5M Youth", "13M Youth")
YOUTH_W = ("3.5W Youth", "4W Youth", "4.5W Youth", "5W Youth", "5.5W Youth",
           "6W Youth", "6.5W Youth", "7W Youth")


def _group(brand, sizes):
    members = [tokenize(raw) for raw in sizes]
    return PatternGroup(brand=brand, pattern=pattern_key(members[0]), members=members)


def test_kids_shoe_position_weights():
    """Weights of the kids shoe group are [0.17, 0.91, 0.91] before softmax and ~[0, 0.5, 0.5] after."""
    weights = position_weights(_group("kids", KIDS_SHOE_SIZES))
    np.testing.assert_allclose(weights.q_hat, [0.17, 0.91, 0.91], atol=0.005)
    np.testing.assert_allclose(weights.q, [0.0, 0.5, 0.5], atol=0.01)
    assert abs(weights.q.sum() - 1.0) < 1e-12, "Softmax weights must sum to 1"


@settings(max_examples=50, deadline=None)
@given(st.permutations(KIDS_SHOE_SIZES))
def test_position_weights_ignore_member_order(sizes):
    """Reordering the members of a pattern group leaves q_hat and q unchanged."""
    reference = position_weights(_group("kids", KIDS_SHOE_SIZES))
    shuffled = position_weights(_group("kids", sizes))
    np.testing.assert_allclose(shuffled.q_hat, reference.q_hat, rtol=0, atol=1e-15)
    np.testing.assert_allclose(shuffled.q, reference.q, rtol=0, atol=1e-15)


def test_kids_shoe_partition():
    """The kids shoe sizes split into toddler-M, youth-M and youth-W size types."""
    size_types = infer_size_types(KIDS_SHOE_SIZES, "kids")
    assert len(size_types) == 3, f"Expected 3 size types, got {[st.sizes for st in size_types]}"
    
    by_members = {frozenset(st.sizes): st.sizes for st in size_types}
    for expected in (TODDLER_M, YOUTH_M, YOUTH_W):
        assert frozenset(expected) in by_members, f"Missing size type {expected}"
        assert by_members[frozenset(expected)] == expected, f"Wrong order: {by_members[frozenset(expected)]}"


def test_partition_covers_every_size_once():
    """Every input size lands in exactly one size type."""
    size_types = infer_size_types(KIDS_SHOE_SIZES, "kids")
    flattened = [raw for st in size_types for raw in st.sizes]
    assert sorted(flattened) == sorted(KIDS_SHOE_SIZES)


def test_partition_is_deterministic():
    """Reruns and shuffled input give the same size types."""
    first = infer_size_types(KIDS_SHOE_SIZES, "kids")
    shuffled = list(reversed(KIDS_SHOE_SIZES)) + KIDS_SHOE_SIZES[:3]
    second = infer_size_types(shuffled, "kids")
    assert first == second


def test_size_type_ids_are_sequential_per_brand():
    """Ids are brand#0, brand#1, ..."""
    size_types = infer_size_types(KIDS_SHOE_SIZES, "kids")
    assert [st.id for st in size_types] == ["kids#0", "kids#1", "kids#2"]
    assert all(st.brand == "kids" for st in size_types)


def test_distance_between_patterns_is_infinite():
    """Sizes with different patterns are infinitely far apart."""
    weights = position_weights(_group("b", ["S", "M"]))
    assert distance(tokenize("S"), tokenize("14P"), weights) == INFINITE_DISTANCE


def test_distance_is_symmetric_and_bounded():
    """Distance is symmetric, zero on identical sizes and within [0, 1]."""
    group = _group("kids", KIDS_SHOE_SIZES)
    weights = position_weights(group)
    for a in group.members[:6]:
        assert distance(a, a, weights) == 0.0
        for b in group.members[6:12]:
            d = distance(a, b, weights)
            assert 0.0 <= d <= 1.0
            assert d == distance(b, a, weights)


def test_single_token_group_is_one_cluster():
    """All-distinct single-token sizes have constant distances, so one cluster."""
    group = _group("b", ["0", "2", "4", "6", "8", "10"])
    clusters, trace = cluster_group(group, position_weights(group))
    assert len(clusters) == 1
    assert trace.rule == 'epsilon'


def test_modifier_grids_split():
    """Petite and wide grids sharing a pattern become two size types."""
    sizes = ["2P", "4P", "6P", "8P", "10P", "6W", "8W", "10W", "12W"]
    size_types = infer_size_types(sizes, "b")
    assert sorted(st.sizes for st in size_types) == [
        ("2P", "4P", "6P", "8P", "10P"),
        ("6W", "8W", "10W", "12W"),
    ]


def test_silhouette_trace_records_every_k():
    """The clustering trace holds a silhouette score for every tried k."""
    group = _group("kids", KIDS_SHOE_SIZES)
    clusters, trace = cluster_group(group, position_weights(group), max_clusters=6)
    assert sorted(trace.silhouette_by_k) == [2, 3, 4, 5, 6]
    assert trace.chosen_k == len(clusters) == 3
    assert trace.silhouette_by_k[3] == max(trace.silhouette_by_k.values())


def test_pair_rule():
    """Two-member groups stay together when close and split when far."""
    together = _group("b", ["10W", "12W"])
    clusters, trace = cluster_group(together, position_weights(together))
    assert len(clusters) == 1 and trace.rule == 'pair_together'
    
    apart = _group("b", ["10W", "12N"])
    clusters, trace = cluster_group(apart, position_weights(apart))
    assert len(clusters) == 2 and trace.rule == 'pair_split'


def test_semantic_comparator():
    """Letter sizes, numbers and aliases compare semantically."""
    assert semantic_compare("S", "L") == LESS
    assert semantic_compare("2", "10") == LESS
    assert semantic_compare("14P", "12P") == GREATER
    assert semantic_compare("Small", "S") == EQUAL
    assert semantic_compare("Extra Large", "XXL") == LESS
    assert semantic_compare("3.5W", "3.5N") == INCOMPARABLE
    assert semantic_compare("M", "6") == INCOMPARABLE


def test_alias_collision_splits_cluster():
    """'S' and 'SMALL' in one cluster cannot be ordered, so the cluster is split with a warning."""
    inferencer = SizeTypeInferencer()
    size_types = inferencer.infer_brand("b", ["S", "SMALL", "M"])
    assert len(size_types) == 3, f"Expected singletons, got {[st.sizes for st in size_types]}"
    assert len(inferencer.warnings) == 1


def test_alias_collision_strict_raises():
    """Strict mode raises PartitionDefect instead of splitting."""
    inferencer = SizeTypeInferencer(strict=True)
    try:
        inferencer.infer_brand("b", ["S", "SMALL", "M"])
    except PartitionDefect as e:
        assert e.brand == "b"
        return
    raise AssertionError("PartitionDefect not raised")


def test_empty_brand_raises():
    """A brand without sizes raises EmptyInput."""
    try:
        infer_size_types([], "b")
    except EmptyInput:
        return
    raise AssertionError("EmptyInput not raised")


def test_size_type_map_resolve():
    """The catalog map resolves (brand, size) to (size type id, sorted index)."""
    catalog = SizeTypeInferencer().infer_catalog({
        "a": ["XL", "S", "M", "L"],
        "b": ["6", "2", "4"],
    })
    assert catalog.resolve("a", "M") == ("a#0", 1)
    assert catalog.resolve("b", "6") == ("b#0", 2)
    assert catalog.resolve("b", "M") is None
    assert catalog.brands() == ["a", "b"]
    assert len(catalog) == 2


def test_size_type_map_records():
    """Records rebuild an identical map."""
    catalog = SizeTypeMap([
        SizeType("a#0", "a", ("S", "M", "L")),
        SizeType("a#1", "a", ("2", "4")),
    ])
    rebuilt = SizeTypeMap.from_records(catalog.to_records())
    assert [st for st in rebuilt.ordered()] == catalog.ordered()


def test_size_type_map_rejects_duplicates():
    """A brand size may only belong to one size type."""
    try:
        SizeTypeMap([SizeType("a#0", "a", ("S", "M")), SizeType("a#1", "a", ("M", "L"))])
    except ValueError:
        return
    raise AssertionError("Duplicate brand size accepted")


def run_tests():
    """Run all size type tests and return results."""
    return run_test_functions("Testing Size Type Inference", collect_tests(globals()))


def main():
    """Main test runner."""
    success, results = run_tests()
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())

# End of file #
