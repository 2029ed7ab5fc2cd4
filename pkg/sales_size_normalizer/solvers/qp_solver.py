"""
sales_size_normalizer/solvers/qp_solver.py

Quadratic programming backend.

Every size type is rewritten as a base plus one slack per step,
x_m = base + sum_{k<=m} (gap + slack_k), which turns the gap and
non-negativity constraints into plain bounds z >= 0. The bound-constrained
convex QP is solved with accelerated projected gradient (FISTA with
gradient restart) and an active-set polish step.
"""

import sys

import numpy as np

from scipy import sparse as sp

from sales_size_normalizer.errors import SolverNotConverged
from sales_size_normalizer.solvers.base import (
    STATUS_CONVERGED,
    STATUS_MAX_ITERATIONS,
    NormalizationSolver,
    SolveInfo,
)


DEFAULT_TOLERANCE = 1e-8
DEFAULT_MAX_ITERATIONS = 100000
POLISH_EVERY = 200
ACTIVE_TOLERANCE = 1e-12


def gap_substitution(layout):
    """
    Linear map from bound-constrained variables to normalized values.
    
    Variable k is the base of its size type when it is the first size and
    the slack of the step below it otherwise, so x = A z + c with A
    block lower-triangular ones and c = gap * position.
    
    Args:
        layout (ProblemLayout): Component layout
        
    Returns:
        tuple: (A as scipy.sparse.csr_matrix, c as np.ndarray)
    """
    rows, cols = [], []
    for k in range(layout.n):
        for j in range(layout.type_start[k], k + 1):
            rows.append(k)
            cols.append(j)
    A = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(layout.n, layout.n))
    return A, layout.packed()


def projected_gradient_norm(z, grad):
    """Norm of z - P(z - grad) for the bound z >= 0."""
    return float(np.linalg.norm(z - np.maximum(0.0, z - grad)))


class QPSolver(NormalizationSolver):
    """
    Exact backend for the constrained normalization QP.
    """
    
    def __init__(self, tolerance=DEFAULT_TOLERANCE, max_iterations=DEFAULT_MAX_ITERATIONS,
                 strict_convergence=False, verbose=False):
        """
        Initialize the QP backend.
        
        Args:
            tolerance (float): Stop when the projected-gradient norm falls
                below tolerance times max(1, |h|_inf)
            max_iterations (int): Iteration limit per component
            strict_convergence (bool): Raise SolverNotConverged instead of
                returning a flagged result
            verbose (bool): Print progress to stderr
        """
        super().__init__(verbose=verbose)
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.strict_convergence = strict_convergence
    
    @property
    def name(self):
        return 'qp'
    
    def solve(self, problem):
        result, info = super().solve(problem)
        if not info.converged:
            message = (f"QP stopped at the iteration limit with projected-gradient norm "
                       f"{info.residual:.3e}; result is feasible but not certified optimal")
            info.warnings.append(message)
            print(f"Warning: {message}", file=sys.stderr)
            if self.strict_convergence:
                raise SolverNotConverged(info, result)
        return result, info
    
    def solve_component(self, layout):
        A, c = gap_substitution(layout)
        H = (2.0 * (A.T @ layout.laplacian @ A)).toarray()
        h = 2.0 * (A.T @ (layout.laplacian @ c)) + A.T @ layout.reg
        is_base = layout.position == 0
        
        lipschitz = max(float(np.linalg.eigvalsh(H)[-1]) if layout.n else 0.0, 1e-12)
        threshold = self.tolerance * max(1.0, float(np.abs(h).max()) if layout.n else 0.0)
        
        z = np.zeros(layout.n)
        grad = H @ z + h
        residual = projected_gradient_norm(z, grad)
        y = z.copy()
        t = 1.0
        iterations = 0
        
        while residual > threshold and iterations < self.max_iterations:
            iterations += 1
            z_next = np.maximum(0.0, y - (H @ y + h) / lipschitz)
            grad = H @ z_next + h
            residual = projected_gradient_norm(z_next, grad)
            
            t_next = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
            if (y - z_next) @ (z_next - z) > 0:
                # Momentum is pointing uphill
                t_next = 1.0
                y = z_next.copy()
            else:
                y = z_next + ((t - 1.0) / t_next) * (z_next - z)
            z, t = z_next, t_next
            
            if residual > threshold and (iterations == 1 or iterations % POLISH_EVERY == 0):
                polished = self._polish(H, h, z, grad, is_base)
                if polished is not None:
                    polished_grad = H @ polished + h
                    polished_residual = projected_gradient_norm(polished, polished_grad)
                    if polished_residual < residual:
                        z, grad, residual = polished, polished_grad, polished_residual
                        y = z.copy()
                        t = 1.0
        
        x = A @ z + c
        status = STATUS_CONVERGED if residual <= threshold else STATUS_MAX_ITERATIONS
        info = SolveInfo(backend=self.name, status=status, iterations=iterations,
                         residual=residual, loss=layout.loss(x))
        return x, info
    
    def _polish(self, H, h, z, grad, is_base):
        """
        Solve the equality-constrained QP on the current free set.
        
        Variables at their bound with a non-negative gradient stay at 0;
        the rest are solved for by least squares. Bases are shifted together
        afterwards since the loss does not change under a common translation.
        
        Returns:
            np.ndarray or None: Feasible candidate, None if a slack went negative
        """
        free = (z > ACTIVE_TOLERANCE) | (grad < 0)
        candidate = np.zeros_like(z)
        if free.any():
            solution, *_ = np.linalg.lstsq(H[np.ix_(free, free)], -h[free], rcond=None)
            candidate[free] = solution
        
        if is_base.any():
            lowest = candidate[is_base].min()
            if lowest < 0:
                candidate[is_base] -= lowest
        
        if (candidate < -ACTIVE_TOLERANCE).any():
            return None
        return np.maximum(0.0, candidate)


def solve_qp(problem, tolerance=DEFAULT_TOLERANCE, max_iterations=DEFAULT_MAX_ITERATIONS,
             strict_convergence=False, verbose=False):
    """
    Solve a normalization problem with the QP backend.
    
    Args:
        problem (Problem): Problem to solve
        tolerance (float): Projected-gradient stopping tolerance
        max_iterations (int): Iteration limit per component
        strict_convergence (bool): Raise when a component does not converge
        verbose (bool): Print progress to stderr
        
    Returns:
        tuple: (NormalizationMap, SolveInfo)
    """
    solver = QPSolver(tolerance=tolerance, max_iterations=max_iterations,
                      strict_convergence=strict_convergence, verbose=verbose)
    return solver.solve(problem)

# End of file #
