"""
sales_size_normalizer/solvers/agreement.py

How closely two normalizations (usually the QP and GD backends) agree.
"""

from sales_size_normalizer.evaluation.scoring import paired_values, predict, rank_correlation


def spearman_agreement(map_a, map_b):
    """
    Spearman correlation over every brand size both maps know.
    
    Returns:
        float or None: Correlation, None when it is undefined
    """
    _, values_a, values_b = paired_values(map_a, map_b)
    return rank_correlation(values_a, values_b)


def prediction_agreement(map_a, map_b, cases, abstain_cross_component=False):
    """
    Share of test cases on which both maps predict the same size.
    
    Abstaining on both sides counts as agreement.
    
    Returns:
        float or None: Agreement rate, None without cases
    """
    if not cases:
        return None
    same = sum(
        predict(map_a, case, abstain_cross_component) == predict(map_b, case, abstain_cross_component)
        for case in cases
    )
    return same / len(cases)


def agreement_summary(map_a, map_b, cases=(), abstain_cross_component=False):
    """
    Agreement document for two maps.
    
    Returns:
        dict: spearman, prediction_agreement, n_keys, n_cases
    """
    keys, _, _ = paired_values(map_a, map_b)
    return {
        'spearman': spearman_agreement(map_a, map_b),
        'prediction_agreement': prediction_agreement(map_a, map_b, list(cases), abstain_cross_component),
        'n_keys': len(keys),
        'n_cases': len(cases),
    }

# End of file #
