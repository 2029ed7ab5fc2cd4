"""
sales_size_normalizer/evaluation/scoring.py

Nearest-value size prediction and coverage / accuracy scoring against a
reference normalization.
"""

from dataclasses import dataclass, field

import numpy as np

from scipy.stats import spearmanr


ABSTAIN = None
VALUE_TOLERANCE = 1e-9

CORRECT = 'correct'
INCORRECT = 'incorrect'
ABSTAINED = 'abstain'
UNREFERENCED = 'unreferenced'

TRACE_COLUMNS = ['user_id', 'month', 'brand_b', 'actual_size', 'prediction',
                 'status', 'predicted_reference', 'actual_reference']


def predict(normalization, case, abstain_cross_component=False):
    """
    Predict the size of purchase B from the size of purchase A.
    
    Args:
        normalization (NormalizationMap): Learned map
        case (TestCase): Test case
        abstain_cross_component (bool): Abstain when no size of B shares
            a connected component with A's size
            
    Returns:
        str or None: Size of B with the closest value, ABSTAIN (None)
            when A's size or every size of B lacks a value
    """
    value_a = normalization.lookup(case.brand_a, case.size_a)
    if value_a is None:
        return ABSTAIN
    component_a = normalization.component_of(case.brand_a, case.size_a)
    
    candidates = []
    for raw_size in case.available_sizes:
        value = normalization.lookup(case.brand_b, raw_size)
        if value is None:
            continue
        if abstain_cross_component and normalization.component_of(case.brand_b, raw_size) != component_a:
            continue
        candidates.append((abs(value - value_a), value, raw_size))
    
    if not candidates:
        return ABSTAIN
    # Ties go to the smaller value, then the smaller string
    return min(candidates)[2]


@dataclass
class CaseTrace:
    """Outcome of one test case."""
    
    case: object
    prediction: str
    status: str
    predicted_reference: float = None
    actual_reference: float = None
    
    def to_row(self):
        """Row in TRACE_COLUMNS order."""
        return [self.case.user_id, self.case.month, self.case.brand_b, self.case.actual_size,
                '' if self.prediction is None else self.prediction, self.status,
                '' if self.predicted_reference is None else self.predicted_reference,
                '' if self.actual_reference is None else self.actual_reference]


@dataclass
class EvalReport:
    """Coverage and accuracy over a set of test cases."""
    
    n_cases: int = 0
    n_predicted: int = 0
    n_correct: int = 0
    n_unreferenced: int = 0
    traces: list = field(default_factory=list)
    
    @property
    def n_scored(self):
        """Predictions the reference could judge."""
        return self.n_predicted - self.n_unreferenced
    
    @property
    def coverage(self):
        """Share of cases with a prediction."""
        return self.n_predicted / self.n_cases if self.n_cases else 0.0
    
    @property
    def accuracy(self):
        """Share of judged predictions that were correct; None when nothing was judged."""
        return self.n_correct / self.n_scored if self.n_scored else None
    
    def add(self, trace):
        """Count one case."""
        self.traces.append(trace)
        self.n_cases += 1
        if trace.status != ABSTAINED:
            self.n_predicted += 1
        if trace.status == CORRECT:
            self.n_correct += 1
        elif trace.status == UNREFERENCED:
            self.n_unreferenced += 1
    
    def to_dict(self):
        """Summary without per-case traces."""
        return {
            'n_cases': self.n_cases,
            'n_predicted': self.n_predicted,
            'n_correct': self.n_correct,
            'n_unreferenced': self.n_unreferenced,
            'coverage': self.coverage,
            'accuracy': self.accuracy,
        }


def judge(case, prediction, reference):
    """
    Judge one prediction against the reference map.
    
    A prediction is correct when the reference assigns the predicted and the
    actual size the same value, so equivalent spellings of one size count.
    
    Returns:
        CaseTrace: Outcome of the case
    """
    if prediction is ABSTAIN:
        return CaseTrace(case, prediction, ABSTAINED)
    
    predicted_value = reference.lookup(case.brand_b, prediction)
    actual_value = reference.lookup(case.brand_b, case.actual_size)
    if predicted_value is None or actual_value is None:
        return CaseTrace(case, prediction, UNREFERENCED, predicted_value, actual_value)
    
    status = CORRECT if abs(predicted_value - actual_value) <= VALUE_TOLERANCE else INCORRECT
    return CaseTrace(case, prediction, status, predicted_value, actual_value)


def score(cases, predictions, reference):
    """
    Score predictions against a reference normalization.
    
    Args:
        cases (list): TestCase objects
        predictions (list): Predicted sizes (ABSTAIN for none), aligned with cases
        reference (NormalizationMap): Reference map
        
    Returns:
        EvalReport: Counts, coverage, accuracy and per-case traces
    """
    cases = list(cases)
    predictions = list(predictions)
    if len(cases) != len(predictions):
        raise ValueError(f"Got {len(predictions)} predictions for {len(cases)} cases")
    
    report = EvalReport()
    for case, prediction in zip(cases, predictions):
        report.add(judge(case, prediction, reference))
    return report


def evaluate(normalization, cases, reference, abstain_cross_component=False):
    """Predict every case with a map and score it."""
    predictions = [predict(normalization, case, abstain_cross_component) for case in cases]
    return score(cases, predictions, reference)


def month_of(day):
    """'YYYY-MM' of a date."""
    return day.strftime('%Y-%m')


def evaluate_by_period(normalization, cases, reference, periods, abstain_cross_component=False):
    """
    Evaluate separately on the cases of each period.
    
    Args:
        normalization (NormalizationMap): Learned map
        cases (list): TestCase objects
        reference (NormalizationMap): Reference map
        periods (dict): name -> (start, end) dates, start included, end
            excluded, either side None for open
            
    Returns:
        dict: name -> EvalReport
    """
    reports = {}
    for name, (start, end) in periods.items():
        first = month_of(start) if start is not None else None
        stop = month_of(end) if end is not None else None
        selected = [
            case for case in cases
            if (first is None or case.month >= first) and (stop is None or case.month < stop)
        ]
        reports[name] = evaluate(normalization, selected, reference, abstain_cross_component)
    return reports


def evaluate_by_category(normalization, cases, reference, abstain_cross_component=False):
    """Evaluate separately on the cases of each category; name -> EvalReport."""
    grouped = {}
    for case in cases:
        grouped.setdefault(case.category, []).append(case)
    return {
        category: evaluate(normalization, grouped[category], reference, abstain_cross_component)
        for category in sorted(grouped)
    }


def paired_values(map_a, map_b, brand_sizes=None):
    """
    Values of the brand sizes both maps know.
    
    Args:
        map_a (NormalizationMap): First map
        map_b (NormalizationMap): Second map
        brand_sizes (iterable): Optional subset of (brand, raw_size) keys
        
    Returns:
        tuple: (keys, values_a, values_b) in sorted key order
    """
    values_a = map_a.by_brand()
    values_b = map_b.by_brand()
    common = set(values_a) & set(values_b)
    if brand_sizes is not None:
        common &= set(brand_sizes)
    keys = sorted(common)
    return (keys,
            np.array([values_a[key] for key in keys], dtype=float),
            np.array([values_b[key] for key in keys], dtype=float))


def rank_correlation(values_a, values_b):
    """Spearman correlation, None when fewer than two values or a constant side."""
    if len(values_a) < 2 or np.ptp(values_a) == 0 or np.ptp(values_b) == 0:
        return None
    return float(spearmanr(values_a, values_b)[0])


def per_component_spearman(learned, truth, min_keys=3):
    """
    Rank agreement between a learned map and a ground-truth map within
    each connected component of the learned map.
    
    Args:
        learned (NormalizationMap): Learned map
        truth (NormalizationMap): Ground truth on the same brand sizes
        min_keys (int): Components with fewer shared keys are skipped
        
    Returns:
        dict: component label -> {'spearman': float or None, 'n_keys': int}
    """
    members = learned.component_members()
    results = {}
    for label in sorted(members):
        keys, values_learned, values_truth = paired_values(learned, truth, members[label])
        if len(keys) < min_keys:
            continue
        results[label] = {
            'spearman': rank_correlation(values_learned, values_truth),
            'n_keys': len(keys),
        }
    return results

# End of file #
