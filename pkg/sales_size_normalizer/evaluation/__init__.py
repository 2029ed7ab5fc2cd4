"""
Evaluation package - consistency test cases and coverage / accuracy scoring.
"""

from sales_size_normalizer.evaluation.cases import TestCase, product_size_runs, sample_test_cases
from sales_size_normalizer.evaluation.scoring import (
    ABSTAIN,
    EvalReport,
    evaluate,
    evaluate_by_category,
    evaluate_by_period,
    per_component_spearman,
    predict,
    score,
)

__all__ = [
    'ABSTAIN', 'EvalReport', 'TestCase',
    'evaluate', 'evaluate_by_category', 'evaluate_by_period', 'per_component_spearman', 'predict',
    'product_size_runs', 'sample_test_cases', 'score',
]
