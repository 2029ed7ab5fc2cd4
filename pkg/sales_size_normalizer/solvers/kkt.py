"""
sales_size_normalizer/solvers/kkt.py

Optimality certificate for a normalization map against the QP it should
solve: feasibility plus KKT residuals under non-negative multipliers
fitted by non-negative least squares.
"""

from dataclasses import dataclass

import numpy as np

from scipy.optimize import nnls

from sales_size_normalizer.solvers.base import FEASIBILITY_TOLERANCE


NEAR_ACTIVE = 1e-6


@dataclass
class KKTReport:
    """KKT residuals of one normalization."""
    
    stationarity_residual: float
    feasibility_violation: float
    complementarity_residual: float
    active_constraints: int
    
    @property
    def feasible(self):
        """True when every constraint holds within the feasibility tolerance."""
        return self.feasibility_violation <= FEASIBILITY_TOLERANCE
    
    def to_dict(self):
        """Convert to dictionary representation."""
        return {
            'stationarity_residual': self.stationarity_residual,
            'feasibility_violation': self.feasibility_violation,
            'complementarity_residual': self.complementarity_residual,
            'active_constraints': self.active_constraints,
        }


def constraint_values(x, layout):
    """
    Constraint values g(x) >= 0 and their gradients.
    
    Constraints are the adjacent gaps x_upper - x_lower - gap followed by
    x_k >= 0 for every key.
    
    Returns:
        tuple: (values as np.ndarray, gradients as rows of np.ndarray)
    """
    n = layout.n
    pairs = layout.adjacent
    values = np.concatenate([layout.gaps(x) - layout.gap, x])
    
    gradients = np.zeros((len(pairs) + n, n))
    for row, (lower, upper) in enumerate(pairs):
        gradients[row, lower] = -1.0
        gradients[row, upper] = 1.0
    gradients[len(pairs):, :] = np.eye(n)
    return values, gradients


def kkt_report(x, problem):
    """
    Certify a normalization map against the QP of a problem.
    
    Args:
        x (NormalizationMap): Map covering every problem key
        problem (Problem): Problem it should solve
        
    Returns:
        KKTReport: Residuals (infinity norms)
        
    Raises:
        MissingKey: If a problem key has no value
    """
    layout = problem.layout()
    values = x.vector(layout.keys)
    grad = layout.gradient(values)
    g, jacobian = constraint_values(values, layout)
    
    feasibility = float(max(0.0, -g.min())) if g.size else 0.0
    
    active = np.flatnonzero(g <= NEAR_ACTIVE)
    multipliers = np.zeros(len(g))
    if active.size:
        multipliers[active], _ = nnls(jacobian[active].T, grad)
    stationarity = grad - jacobian.T @ multipliers
    
    return KKTReport(
        stationarity_residual=float(np.abs(stationarity).max()) if stationarity.size else 0.0,
        feasibility_violation=feasibility,
        complementarity_residual=float(np.abs(multipliers * g).max()) if g.size else 0.0,
        active_constraints=int(active.size),
    )

# End of file #
