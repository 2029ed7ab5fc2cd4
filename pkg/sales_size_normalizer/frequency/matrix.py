"""
sales_size_normalizer/frequency/matrix.py

Sparse co-purchase frequency matrix over (size_type_id, raw_size) keys,
built from kept sales with each user's pairs diluted by 1/|P_u|.
"""

import sys

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from scipy import sparse as sp

from sales_size_normalizer.errors import UnknownSizeType


@dataclass
class BuildStats:
    """Counters collected while building a frequency matrix."""
    
    records_read: int = 0
    returned: int = 0
    unresolved: int = 0
    users: int = 0
    users_with_pairs: int = 0
    
    @property
    def kept(self):
        """Kept (not returned) records."""
        return self.records_read - self.returned
    
    @property
    def skip_fraction(self):
        """Share of kept records that could not be resolved to a size type."""
        return self.unresolved / self.kept if self.kept else 0.0
    
    def to_dict(self):
        """Convert to dictionary representation."""
        return {
            'records_read': self.records_read,
            'returned': self.returned,
            'unresolved': self.unresolved,
            'users': self.users,
            'users_with_pairs': self.users_with_pairs,
            'skip_fraction': self.skip_fraction,
        }


class FrequencyMatrix:
    """
    Symmetric sparse co-purchase mass between size keys.
    
    Keys are (size_type_id, raw_size) pairs with dense ids assigned in
    (size_type_id, sorted index) order. Entries are stored once per
    unordered pair as {(i, j): mass} with i <= j; missing entries are 0.
    """
    
    def __init__(self, size_types, entries=None, exact=False):
        """
        Initialize an empty (or pre-filled) matrix.
        
        Args:
            size_types (iterable): SizeType objects defining the key index
            entries (dict): Optional {(i, j): mass} with i <= j
            exact (bool): Whether masses were accumulated as rationals
        """
        self.keys = []
        self.index = {}
        self.type_ids = {}
        for size_type in sorted(size_types, key=lambda size_type: size_type.id):
            ids = []
            for raw_size in size_type.sizes:
                key = (size_type.id, raw_size)
                self.index[key] = len(self.keys)
                ids.append(len(self.keys))
                self.keys.append(key)
            self.type_ids[size_type.id] = ids
        
        self.entries = dict(entries or {})
        self.exact = exact
        self.stats = BuildStats()
    
    @property
    def size(self):
        """Number of keys."""
        return len(self.keys)
    
    def add(self, key_a, key_b, mass):
        """Add mass to the unordered pair {key_a, key_b}."""
        i, j = sorted((self.index[key_a], self.index[key_b]))
        self.entries[(i, j)] = self.entries.get((i, j), 0) + mass
    
    def get(self, key_a, key_b):
        """Mass of the unordered pair {key_a, key_b} (0 when absent)."""
        i, j = sorted((self.index[key_a], self.index[key_b]))
        return self.entries.get((i, j), 0.0)
    
    def size_type_of(self, dense_id):
        """Size type id of a dense key id."""
        return self.keys[dense_id][0]
    
    def total_mass(self):
        """Sum of all entries (each unordered pair counted once)."""
        return float(sum(self.entries.values()))
    
    def nnz(self):
        """Number of stored unordered pairs."""
        return len(self.entries)
    
    def items(self):
        """Entries as ((key_a, key_b), mass), canonically ordered."""
        for i, j in sorted(self.entries):
            yield (self.keys[i], self.keys[j]), self.entries[(i, j)]
    
    def cross_type_items(self):
        """Entries whose two keys are in different size types."""
        for (key_a, key_b), mass in self.items():
            if key_a[0] != key_b[0]:
                yield (key_a, key_b), mass
    
    def to_sparse(self, include_same_type=True):
        """
        Symmetric scipy sparse matrix of the entries.
        
        Args:
            include_same_type (bool): Keep pairs within one size type
            
        Returns:
            scipy.sparse.csr_matrix: (size, size) matrix
        """
        rows, cols, data = [], [], []
        for (i, j), mass in sorted(self.entries.items()):
            if not include_same_type and self.keys[i][0] == self.keys[j][0]:
                continue
            rows.append(i)
            cols.append(j)
            data.append(float(mass))
            if i != j:
                rows.append(j)
                cols.append(i)
                data.append(float(mass))
        return sp.csr_matrix((data, (rows, cols)), shape=(self.size, self.size))
    
    def marginals(self):
        """
        Marginal mass of every key (row sums of the symmetric matrix).
        
        Returns:
            dict: key -> mass
        """
        sums = np.asarray(self.to_sparse().sum(axis=1)).ravel()
        return {key: float(sums[i]) for i, key in enumerate(self.keys)}
    
    def block(self, size_type_a, size_type_b):
        """
        Dense block between two size types in sorted-size order.
        
        Args:
            size_type_a (str): Row size type id
            size_type_b (str): Column size type id
            
        Returns:
            np.ndarray: |S_a| x |S_b| matrix
            
        Raises:
            UnknownSizeType: If either id is not indexed
        """
        for size_type_id in (size_type_a, size_type_b):
            if size_type_id not in self.type_ids:
                raise UnknownSizeType(size_type_id)
        
        rows = self.type_ids[size_type_a]
        cols = self.type_ids[size_type_b]
        return self.to_sparse()[rows, :][:, cols].toarray()
    
    def merge(self, other):
        """
        Entry-wise sum with a matrix over the same key index.
        
        Args:
            other (FrequencyMatrix): Partial matrix from another shard
            
        Returns:
            FrequencyMatrix: New merged matrix
        """
        if self.keys != other.keys:
            raise ValueError("Cannot merge frequency matrices with different key indexes")
        
        merged = FrequencyMatrix([], exact=self.exact and other.exact)
        merged.keys = list(self.keys)
        merged.index = dict(self.index)
        merged.type_ids = {key: list(ids) for key, ids in self.type_ids.items()}
        merged.entries = dict(self.entries)
        for pair, mass in other.entries.items():
            merged.entries[pair] = merged.entries.get(pair, 0) + mass
        return merged
    
    def to_records(self):
        """
        Flatten to (type_a, size_a, type_b, size_b, mass) rows.
        
        Returns:
            list: Rows in canonical dense-id order
        """
        return [
            [key_a[0], key_a[1], key_b[0], key_b[1], float(mass)]
            for (key_a, key_b), mass in self.items()
        ]
    
    @classmethod
    def from_records(cls, size_types, rows):
        """
        Rebuild a matrix from to_records() rows.
        
        Args:
            size_types (iterable): SizeType objects defining the key index
            rows (iterable): (type_a, size_a, type_b, size_b, mass) rows
            
        Returns:
            FrequencyMatrix: Rebuilt matrix
        """
        matrix = cls(size_types)
        for type_a, size_a, type_b, size_b, mass in rows:
            for size_type_id in (type_a, type_b):
                if size_type_id not in matrix.type_ids:
                    raise UnknownSizeType(size_type_id)
            matrix.add((type_a, size_a), (type_b, size_b), float(mass))
        return matrix


def purchases_by_user(sales, size_type_map, stats):
    """
    Kept, resolvable purchases of each user in each category, deduplicated.
    
    Args:
        sales (iterable): SaleRecord objects
        size_type_map (SizeTypeMap): Resolves (brand, raw_size)
        stats (BuildStats): Counters updated in place
        
    Returns:
        dict: (user_id, category) -> set of (product_id, brand, raw_size)
    """
    purchases = {}
    for sale in sales:
        stats.records_read += 1
        if sale.returned:
            stats.returned += 1
            continue
        if size_type_map.resolve(sale.catalog_brand, sale.raw_size) is None:
            stats.unresolved += 1
            continue
        purchases.setdefault((sale.user_id, sale.category), set()).add(sale.item)
    return purchases


def build_frequency_matrix(sales, size_type_map, exact=False, verbose=False):
    """
    Build the co-purchase frequency matrix.
    
    For each user u with deduplicated kept purchases P_u, every distinct
    unordered pair adds 1/|P_u| to the entry of its two size keys. A user
    shopping in several categories counts as one user per category, so no
    entry ever links two categories.
    
    Args:
        sales (iterable): SaleRecord objects
        size_type_map (SizeTypeMap): Size types of every brand
        exact (bool): Accumulate masses as rationals
        verbose (bool): Print counters to stderr
        
    Returns:
        FrequencyMatrix: Matrix with .stats filled in
    """
    matrix = FrequencyMatrix(size_type_map.ordered(), exact=exact)
    stats = matrix.stats
    purchases = purchases_by_user(sales, size_type_map, stats)
    stats.users = len(purchases)
    
    # Users in sorted order so float accumulation does not depend on input order
    for shopper in sorted(purchases):
        items = sorted(purchases[shopper])
        if len(items) < 2:
            continue
        stats.users_with_pairs += 1
        
        weight = Fraction(1, len(items)) if exact else 1.0 / len(items)
        for item_a, item_b in combinations(items, 2):
            key_a = _key_of(item_a, size_type_map)
            key_b = _key_of(item_b, size_type_map)
            matrix.add(key_a, key_b, weight)
    
    if exact:
        matrix.entries = {pair: float(mass) for pair, mass in matrix.entries.items()}
    
    if verbose:
        print(f"Read {stats.records_read} sales: {stats.returned} returned, "
              f"{stats.unresolved} unresolved, {stats.users_with_pairs}/{stats.users} users with pairs, "
              f"{matrix.nnz()} entries", file=sys.stderr)
    
    return matrix


def _key_of(item, size_type_map):
    """(size_type_id, raw_size) key of a deduplicated purchase."""
    _, brand, raw_size = item
    size_type_id, _ = size_type_map.resolve(brand, raw_size)
    return (size_type_id, raw_size)

# End of file #
