"""
sales_size_normalizer/solvers/base.py

Shared pieces of the normalization backends: the problem definition, the
normalization map they produce, run diagnostics and the abstract solver
every backend implements.
"""

import sys
import time

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from scipy import sparse as sp
from scipy.sparse import csgraph

from sales_size_normalizer.errors import ConfigInvalid, EmptyInput, MissingKey, UnknownSizeType
from sales_size_normalizer.sizetypes.inference import brand_of_size_type


DEFAULT_GAP = 0.1
DEFAULT_REG_COEFF = 0.1
FEASIBILITY_TOLERANCE = 1e-6

STATUS_CONVERGED = 'converged'
STATUS_MAX_ITERATIONS = 'max_iterations'
STATUS_EMPTY = 'empty'


@dataclass
class Problem:
    """
    One normalization problem: co-purchase masses plus the size types
    whose sorted order the solution must respect.
    """
    
    matrix: object
    size_types: list
    gap: float = DEFAULT_GAP
    reg_coeff: float = DEFAULT_REG_COEFF
    include_same_type: bool = False
    
    def __post_init__(self):
        if not self.gap > 0:
            raise ConfigInvalid(f"Minimum gap must be positive, got {self.gap}")
        if self.reg_coeff < 0:
            raise ConfigInvalid(f"Regularizer coefficient must be non-negative, got {self.reg_coeff}")
        
        self.size_types = sorted(self.size_types, key=lambda size_type: size_type.id)
        by_id = {size_type.id: size_type for size_type in self.size_types}
        for size_type_id, raw_size in self.matrix.keys:
            if size_type_id not in by_id:
                raise UnknownSizeType(size_type_id)
            if raw_size not in by_id[size_type_id].sizes:
                raise MissingKey((size_type_id, raw_size))
        self._by_id = by_id
    
    @property
    def keys(self):
        """Every (size_type_id, raw_size) key in size-type then sorted order."""
        return [(size_type.id, raw_size) for size_type in self.size_types for raw_size in size_type.sizes]
    
    def pair_masses(self):
        """
        Masses that enter the objective.
        
        Same-type pairs are skipped unless include_same_type is set.
        
        Yields:
            tuple: (key_a, key_b, mass)
        """
        for (key_a, key_b), mass in self.matrix.items():
            if key_a == key_b:
                continue
            if key_a[0] == key_b[0] and not self.include_same_type:
                continue
            if mass:
                yield key_a, key_b, float(mass)
    
    def components(self):
        """
        Connected components of the size-type co-purchase graph.
        
        Returns:
            list: Lists of size type ids, ordered by their smallest id
        """
        type_index = {size_type.id: i for i, size_type in enumerate(self.size_types)}
        rows, cols = [], []
        for (type_a, _), (type_b, _), _ in self.pair_masses():
            rows.append(type_index[type_a])
            cols.append(type_index[type_b])
        
        n = len(self.size_types)
        graph = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        _, labels = csgraph.connected_components(graph, directed=False)
        
        grouped = {}
        for size_type, label in zip(self.size_types, labels):
            grouped.setdefault(label, []).append(size_type.id)
        return sorted(grouped.values(), key=lambda type_ids: type_ids[0])
    
    def layout(self, type_ids=None):
        """
        Dense index layout of the whole problem or of a subset of size types.
        
        Args:
            type_ids (list): Size type ids to include (default: all)
            
        Returns:
            ProblemLayout: Arrays the backends work on
        """
        if type_ids is None:
            size_types = self.size_types
        else:
            size_types = [self._by_id[size_type_id] for size_type_id in sorted(type_ids)]
        return ProblemLayout(size_types, self.pair_masses(), self.gap, self.reg_coeff)


class ProblemLayout:
    """
    Vector form of a problem over a fixed set of size types.
    
    The objective is x'Lx with L the graph Laplacian of the pair masses;
    the regularizer is r'x with r holding +-reg_coeff/|S| at the ends of
    every size type.
    """
    
    def __init__(self, size_types, pairs, gap, reg_coeff):
        self.size_types = list(size_types)
        self.gap = gap
        self.reg_coeff = reg_coeff
        self.keys = []
        self.index = {}
        
        type_start = []
        type_stop = []
        position = []
        for size_type in self.size_types:
            start = len(self.keys)
            for m, raw_size in enumerate(size_type.sizes):
                self.index[(size_type.id, raw_size)] = len(self.keys)
                self.keys.append((size_type.id, raw_size))
                type_start.append(start)
                type_stop.append(start + len(size_type.sizes))
                position.append(m)
        
        n = len(self.keys)
        self.type_start = np.array(type_start, dtype=int)
        self.type_stop = np.array(type_stop, dtype=int)
        self.position = np.array(position, dtype=int)
        
        # Index pairs (lower, upper) of adjacent sizes within a size type
        upper = np.flatnonzero(self.position > 0)
        self.adjacent = np.column_stack([upper - 1, upper]) if n else np.zeros((0, 2), dtype=int)
        
        rows, cols, weights = [], [], []
        for key_a, key_b, mass in pairs:
            if key_a in self.index and key_b in self.index:
                rows.append(self.index[key_a])
                cols.append(self.index[key_b])
                weights.append(mass)
        self.rows = np.array(rows, dtype=int)
        self.cols = np.array(cols, dtype=int)
        self.weights = np.array(weights, dtype=float)
        
        adjacency = sp.coo_matrix((self.weights, (self.rows, self.cols)), shape=(n, n))
        self.laplacian = sp.csr_matrix(csgraph.laplacian((adjacency + adjacency.T).tocsr()))
        
        self.reg = np.zeros(n)
        for size_type in self.size_types:
            if len(size_type.sizes) > 1:
                first = self.index[(size_type.id, size_type.sizes[0])]
                last = self.index[(size_type.id, size_type.sizes[-1])]
                self.reg[last] += reg_coeff / len(size_type.sizes)
                self.reg[first] -= reg_coeff / len(size_type.sizes)
    
    @property
    def n(self):
        """Number of variables."""
        return len(self.keys)
    
    def objective(self, x):
        """Frequency-weighted squared distance."""
        return float(x @ (self.laplacian @ x))
    
    def regularizer(self, x):
        """Span regularizer."""
        return float(self.reg @ x)
    
    def loss(self, x, alpha=1.0):
        """Objective plus alpha times the regularizer."""
        return self.objective(x) + alpha * self.regularizer(x)
    
    def gradient(self, x, alpha=1.0):
        """Gradient of loss() with respect to x."""
        return 2.0 * (self.laplacian @ x) + alpha * self.reg
    
    def gaps(self, x):
        """Adjacent within-type differences x_upper - x_lower."""
        return x[self.adjacent[:, 1]] - x[self.adjacent[:, 0]]
    
    def packed(self):
        """Tightest feasible packing: every size type starts at 0, gaps exactly gap."""
        return self.gap * self.position.astype(float)


class NormalizationMap:
    """
    Normalized value of every (size_type_id, raw_size) key, plus the
    connected-component label of every size type.
    """
    
    def __init__(self):
        self.values = {}
        self.components = {}
        self._by_brand = {}
    
    def set(self, key, value, component=0):
        """Assign a value to a key."""
        size_type_id, raw_size = key
        self.values[key] = float(value)
        self.components[size_type_id] = component
        self._by_brand[(brand_of_size_type(size_type_id), raw_size)] = key
    
    def value(self, size_type_id, raw_size):
        """
        Value of a key.
        
        Raises:
            MissingKey: If the key has no value
        """
        try:
            return self.values[(size_type_id, raw_size)]
        except KeyError:
            raise MissingKey((size_type_id, raw_size))
    
    def key_of(self, brand, raw_size):
        """Key of a brand size, None when unknown."""
        return self._by_brand.get((brand, raw_size))
    
    def lookup(self, brand, raw_size):
        """Value of a brand size, None when unknown."""
        key = self._by_brand.get((brand, raw_size))
        return None if key is None else self.values[key]
    
    def by_brand(self):
        """Values keyed by (brand, raw_size)."""
        return {brand_size: self.values[key] for brand_size, key in self._by_brand.items()}
    
    def component_members(self):
        """Brand sizes of every component: label -> list of (brand, raw_size)."""
        members = {}
        for brand_size, key in self._by_brand.items():
            members.setdefault(self.components[key[0]], []).append(brand_size)
        return members
    
    def component_of(self, brand, raw_size):
        """Component label of a brand size, None when unknown."""
        key = self._by_brand.get((brand, raw_size))
        return None if key is None else self.components[key[0]]
    
    def size_type_values(self):
        """
        Values grouped by size type, in stored order.
        
        Returns:
            dict: size_type_id -> list of values
        """
        grouped = {}
        for (size_type_id, _), value in self.values.items():
            grouped.setdefault(size_type_id, []).append(value)
        return grouped
    
    def vector(self, keys):
        """Values of the given keys as an array."""
        return np.array([self.value(*key) for key in keys], dtype=float)
    
    def without(self, keys):
        """Copy of this map with some keys removed."""
        dropped = set(keys)
        reduced = NormalizationMap()
        for key, value in self.values.items():
            if key not in dropped:
                reduced.set(key, value, self.components[key[0]])
        return reduced
    
    def to_records(self):
        """
        Flatten to (size_type_id, raw_size, value, component) rows.
        
        Rows are grouped by size type id and keep the stored (sorted) order
        within a size type.
        """
        ordered = sorted(self.values.items(), key=lambda item: item[0][0])
        return [
            [size_type_id, raw_size, value, self.components[size_type_id]]
            for (size_type_id, raw_size), value in ordered
        ]
    
    @classmethod
    def from_records(cls, rows):
        """Rebuild a map from to_records() rows."""
        result = cls()
        for size_type_id, raw_size, value, component in rows:
            result.set((size_type_id, raw_size), float(value), int(component))
        return result
    
    def __len__(self):
        return len(self.values)
    
    def __contains__(self, key):
        return key in self.values


@dataclass
class SolveInfo:
    """Diagnostics of one solve (or of one connected component)."""
    
    backend: str
    status: str = STATUS_CONVERGED
    iterations: int = 0
    residual: float = 0.0
    loss: float = 0.0
    wall_time: float = 0.0
    max_gap_repair: float = 0.0
    variables: int = 0
    components: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    
    @property
    def converged(self):
        """True when every component reached its stopping tolerance."""
        return self.status in (STATUS_CONVERGED, STATUS_EMPTY)
    
    @classmethod
    def aggregate(cls, backend, parts, wall_time):
        """
        Combine per-component diagnostics.
        
        Args:
            backend (str): Backend name
            parts (list): SolveInfo of every component, in label order
            wall_time (float): Total seconds
            
        Returns:
            SolveInfo: Summed iterations and loss, worst residual and status
        """
        status = STATUS_CONVERGED
        if any(not part.converged for part in parts):
            status = STATUS_MAX_ITERATIONS
        
        return cls(
            backend=backend,
            status=status,
            iterations=sum(part.iterations for part in parts),
            residual=max((part.residual for part in parts), default=0.0),
            loss=sum(part.loss for part in parts),
            wall_time=wall_time,
            max_gap_repair=max((part.max_gap_repair for part in parts), default=0.0),
            variables=sum(part.variables for part in parts),
            components=[part.to_dict() for part in parts],
            warnings=[warning for part in parts for warning in part.warnings],
        )
    
    def to_dict(self):
        """Convert to dictionary representation."""
        info = {
            'backend': self.backend,
            'status': self.status,
            'iterations': self.iterations,
            'residual': self.residual,
            'loss': self.loss,
            'wall_time': self.wall_time,
            'max_gap_repair': self.max_gap_repair,
            'variables': self.variables,
        }
        if self.components:
            info['components'] = self.components
        if self.warnings:
            info['warnings'] = self.warnings
        return info


def _values_of(x):
    """Plain key -> value mapping of a NormalizationMap or dict."""
    return x.values if isinstance(x, NormalizationMap) else x


def objective(x, matrix, include_same_type=False):
    """
    Frequency-weighted squared distance of a normalization.
    
    Args:
        x: NormalizationMap or dict keyed by (size_type_id, raw_size)
        matrix (FrequencyMatrix): Co-purchase masses
        include_same_type (bool): Also count pairs within one size type
        
    Returns:
        float: Sum over pairs of mass * (x_p - x_q)^2
        
    Raises:
        MissingKey: If a matrix key has no value
    """
    values = _values_of(x)
    total = 0.0
    for (key_a, key_b), mass in matrix.items():
        if key_a[0] == key_b[0] and not include_same_type:
            continue
        for key in (key_a, key_b):
            if key not in values:
                raise MissingKey(key)
        total += float(mass) * (values[key_a] - values[key_b]) ** 2
    return total


def regularizer(x, size_types, reg_coeff=DEFAULT_REG_COEFF):
    """
    Span regularizer: reg_coeff / |S| times (last - first) per size type.
    
    Args:
        x: NormalizationMap or dict keyed by (size_type_id, raw_size)
        size_types (iterable): SizeType objects
        reg_coeff (float): Coefficient before the 1/|S| scaling
        
    Returns:
        float: Regularizer value
    """
    values = _values_of(x)
    total = 0.0
    for size_type in size_types:
        first = values[(size_type.id, size_type.sizes[0])]
        last = values[(size_type.id, size_type.sizes[-1])]
        total += reg_coeff / len(size_type.sizes) * (last - first)
    return total


def anchor(x):
    """Translate a component so its minimum is exactly 0."""
    if len(x) == 0:
        return x
    return x - x.min()


class NormalizationSolver(ABC):
    """
    Abstract base class for normalization backends.
    
    Backends only solve one connected component at a time; splitting,
    anchoring and aggregation live here.
    """
    
    def __init__(self, verbose=False):
        self.verbose = verbose
    
    @property
    @abstractmethod
    def name(self):
        """Backend name used in reports."""
        pass
    
    @abstractmethod
    def solve_component(self, layout):
        """
        Solve one connected component.
        
        Args:
            layout (ProblemLayout): Component in vector form
            
        Returns:
            tuple: (x as np.ndarray in layout order, SolveInfo)
        """
        pass
    
    def solve(self, problem):
        """
        Solve every connected component and anchor each at 0.
        
        Args:
            problem (Problem): Problem to solve
            
        Returns:
            tuple: (NormalizationMap, SolveInfo)
            
        Raises:
            EmptyInput: If the problem has no size types
        """
        if not problem.size_types:
            raise EmptyInput("Normalization problem has no size types")
        
        start = time.perf_counter()
        result = NormalizationMap()
        parts = []
        
        for label, type_ids in enumerate(problem.components()):
            layout = problem.layout(type_ids)
            x, part = self.solve_component(layout)
            x = anchor(x)
            part.variables = layout.n
            parts.append(part)
            for key, value in zip(layout.keys, x):
                result.set(key, value, label)
            
            if self.verbose and layout.weights.size:
                print(f"{self.name}: component {label} ({len(type_ids)} size types, {layout.n} variables) "
                      f"{part.status} after {part.iterations} iterations", file=sys.stderr)
        
        info = SolveInfo.aggregate(self.name, parts, time.perf_counter() - start)
        if self.verbose:
            print(f"{self.name}: {len(parts)} components, loss {info.loss:.6g}, "
                  f"{info.wall_time:.2f}s", file=sys.stderr)
        return result, info

# End of file #
