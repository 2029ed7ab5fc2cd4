"""
sales_size_normalizer/solvers/gd_solver.py

Gradient descent backend.

Within a size type x is the cumulative sum of exp(theta), so the order is
strict by construction; a hinge term pushes every step up to the minimum
gap. The loss is objective + alpha * regularizer + beta * hinge and is
minimized with Adam over a decreasing learning rate schedule.
"""

import sys

from dataclasses import dataclass, field

import numpy as np

from sales_size_normalizer.errors import ConfigInvalid, NonFiniteLoss
from sales_size_normalizer.solvers.base import STATUS_CONVERGED, NormalizationSolver, SolveInfo


DEFAULT_ALPHA = 0.001
DEFAULT_BETA_HINGE = 100.0
DEFAULT_LEARNING_RATES = (0.1, 0.01, 0.001)
DEFAULT_ITERATIONS_PER_RATE = 40000
DEFAULT_INIT_NOISE = 0.01
SIGNIFICANT_REPAIR = 1e-3


@dataclass
class GDState:
    """Hyperparameters and final parameters of the gradient descent backend."""
    
    alpha: float = DEFAULT_ALPHA
    beta_hinge: float = DEFAULT_BETA_HINGE
    learning_rates: tuple = DEFAULT_LEARNING_RATES
    iterations_per_rate: int = DEFAULT_ITERATIONS_PER_RATE
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    init_noise: float = DEFAULT_INIT_NOISE
    seed: int = 0
    theta: dict = field(default_factory=dict)
    
    def __post_init__(self):
        self.learning_rates = tuple(self.learning_rates)
        if not self.learning_rates or any(rate <= 0 for rate in self.learning_rates):
            raise ConfigInvalid(f"Learning rates must be a non-empty list of positive values, got {self.learning_rates}")
        if self.iterations_per_rate < 1:
            raise ConfigInvalid(f"Iterations per learning rate must be at least 1, got {self.iterations_per_rate}")
        if self.alpha < 0 or self.beta_hinge < 0:
            raise ConfigInvalid("GD loss weights must be non-negative")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ConfigInvalid("Adam decay rates must lie in [0, 1)")
        if self.init_noise < 0:
            raise ConfigInvalid(f"Initialization noise must be non-negative, got {self.init_noise}")


class Adam:
    """Adam on a single parameter vector; moments persist across learning rates."""
    
    def __init__(self, size, lr, beta1=0.9, beta2=0.999, epsilon=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.m = np.zeros(size)
        self.v = np.zeros(size)
        self.t = 0
    
    def step(self, params, grad):
        """Update params in place."""
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t
        
        self.m *= self.beta1
        self.m += (1.0 - self.beta1) * grad
        self.v *= self.beta2
        self.v += (1.0 - self.beta2) * (grad * grad)
        
        params -= (self.lr / bc1) * self.m / (np.sqrt(self.v / bc2) + self.epsilon)


def values_from_theta(theta, layout):
    """
    Normalized values of a parameter vector.
    
    Returns:
        np.ndarray: Per-type cumulative sums of exp(theta)
    """
    steps = np.exp(theta)
    cumulative = np.cumsum(steps)
    offset = np.concatenate([[0.0], cumulative])[layout.type_start]
    return cumulative - offset


def loss_and_gradient(theta, layout, alpha=DEFAULT_ALPHA, beta_hinge=DEFAULT_BETA_HINGE):
    """
    Total loss and its analytic gradient with respect to theta.
    
    Args:
        theta (np.ndarray): Log step sizes in layout order
        layout (ProblemLayout): Component layout
        alpha (float): Regularizer weight
        beta_hinge (float): Hinge weight
        
    Returns:
        tuple: (loss, gradient as np.ndarray)
    """
    steps = np.exp(theta)
    cumulative = np.cumsum(steps)
    x = cumulative - np.concatenate([[0.0], cumulative])[layout.type_start]
    
    laplacian_x = layout.laplacian @ x
    shortfall = layout.gap - steps
    violated = (layout.position > 0) & (shortfall > 0)
    
    loss = float(x @ laplacian_x) + alpha * float(layout.reg @ x) + beta_hinge * float(shortfall[violated].sum())
    
    # Step m of a size type moves every later size of the same type
    grad_x = 2.0 * laplacian_x + alpha * layout.reg
    tail = np.concatenate([np.cumsum(grad_x[::-1])[::-1], [0.0]])
    grad_steps = tail[:layout.n] - tail[layout.type_stop]
    grad = grad_steps * steps - beta_hinge * violated * steps
    return loss, grad


def repair_gaps(x, layout):
    """
    Raise every step below the minimum gap with one forward sweep.
    
    Returns:
        tuple: (repaired copy of x, largest single raise)
    """
    repaired = x.copy()
    largest = 0.0
    for lower, upper in layout.adjacent:
        shortfall = repaired[lower] + layout.gap - repaired[upper]
        if shortfall > 0:
            largest = max(largest, float(shortfall))
            repaired[upper] = repaired[lower] + layout.gap
    return repaired, largest


class GDSolver(NormalizationSolver):
    """
    Gradient descent backend with exp reparameterization and hinge margin.
    """
    
    def __init__(self, state=None, verbose=False, debug=False):
        super().__init__(verbose=verbose)
        self.state = state if state is not None else GDState()
        self.debug = debug
        self._rng = None
    
    @property
    def name(self):
        return 'gd'
    
    def solve(self, problem):
        self._rng = np.random.default_rng(self.state.seed)
        return super().solve(problem)
    
    def initial_theta(self, layout):
        """log(gap) everywhere plus uniform noise."""
        if self._rng is None:
            self._rng = np.random.default_rng(self.state.seed)
        noise = self._rng.uniform(-self.state.init_noise, self.state.init_noise, layout.n)
        return np.full(layout.n, np.log(layout.gap)) + noise
    
    def solve_component(self, layout):
        state = self.state
        theta = self.initial_theta(layout)
        iterations = 0
        
        if layout.weights.size:
            adam = Adam(layout.n, state.learning_rates[0], state.beta1, state.beta2, state.adam_epsilon)
            for stage, rate in enumerate(state.learning_rates):
                adam.lr = rate
                for iteration in range(state.iterations_per_rate):
                    loss, grad = loss_and_gradient(theta, layout, state.alpha, state.beta_hinge)
                    if not (np.isfinite(loss) and np.isfinite(grad).all()):
                        raise NonFiniteLoss(stage, iteration, rate, loss)
                    adam.step(theta, grad)
                    iterations += 1
                
                if self.debug:
                    print(f"DEBUG: gd stage {stage} (lr {rate}) loss {loss:.6g}", file=sys.stderr)
            x = values_from_theta(theta, layout)
        else:
            # Without co-purchases the loss is minimized by the tightest packing
            x = layout.packed()
            theta = np.full(layout.n, np.log(layout.gap))
        
        final_loss, final_grad = loss_and_gradient(theta, layout, state.alpha, state.beta_hinge)
        if not np.isfinite(final_loss):
            raise NonFiniteLoss(len(state.learning_rates) - 1, state.iterations_per_rate, state.learning_rates[-1], final_loss)
        
        x, largest_repair = repair_gaps(x, layout)
        info = SolveInfo(backend=self.name, status=STATUS_CONVERGED, iterations=iterations,
                         residual=float(np.abs(final_grad).max()) if layout.n else 0.0,
                         loss=final_loss, max_gap_repair=largest_repair)
        if largest_repair > SIGNIFICANT_REPAIR:
            message = f"GD left a step {largest_repair:.4f} below the minimum gap; raised by repair sweep"
            info.warnings.append(message)
            print(f"Warning: {message}", file=sys.stderr)
        
        state.theta.update(zip(layout.keys, theta.tolist()))
        return x, info


def solve_gd(problem, state=None, verbose=False):
    """
    Solve a normalization problem with the GD backend.
    
    Args:
        problem (Problem): Problem to solve
        state (GDState): Hyperparameters (defaults when None); final theta
            values are written back into it
        verbose (bool): Print progress to stderr
        
    Returns:
        tuple: (NormalizationMap, SolveInfo)
    """
    return GDSolver(state=state, verbose=verbose).solve(problem)

# End of file #
