"""
Solvers package - QP and gradient descent backends for size normalization.
"""

from sales_size_normalizer.solvers.base import (
    DEFAULT_GAP,
    DEFAULT_REG_COEFF,
    NormalizationMap,
    NormalizationSolver,
    Problem,
    SolveInfo,
    objective,
    regularizer,
)
from sales_size_normalizer.solvers.gd_solver import GDSolver, GDState, solve_gd
from sales_size_normalizer.solvers.kkt import KKTReport, kkt_report
from sales_size_normalizer.solvers.qp_solver import QPSolver, solve_qp
from sales_size_normalizer.solvers.agreement import agreement_summary, prediction_agreement, spearman_agreement


BACKENDS = {
    'qp': QPSolver,
    'gd': GDSolver,
}


def create_solver(backend, **kwargs):
    """
    Factory function to create a normalization backend.
    
    Args:
        backend (str): 'qp' or 'gd'
        **kwargs: Passed to the backend constructor
        
    Returns:
        NormalizationSolver: Backend instance
        
    Raises:
        ValueError: If the backend is unknown
    """
    if backend not in BACKENDS:
        raise ValueError(f"Unknown backend: {backend}. Available: {', '.join(BACKENDS)}")
    return BACKENDS[backend](**kwargs)


__all__ = [
    'BACKENDS', 'DEFAULT_GAP', 'DEFAULT_REG_COEFF',
    'GDSolver', 'GDState', 'KKTReport', 'NormalizationMap', 'NormalizationSolver',
    'Problem', 'QPSolver', 'SolveInfo',
    'agreement_summary', 'create_solver', 'kkt_report', 'objective',
    'prediction_agreement', 'regularizer', 'solve_gd', 'solve_qp', 'spearman_agreement',
]
