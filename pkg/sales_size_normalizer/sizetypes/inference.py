"""
sales_size_normalizer/sizetypes/inference.py

Size type inference for whole brands: tokenize, group by pattern, cluster
each group, then sort every cluster with the semantic comparator.
"""

import sys

from dataclasses import dataclass

from sales_size_normalizer.errors import EmptyInput, PartitionDefect
from sales_size_normalizer.parsing.tokenizer import pattern_key, tokenize
from sales_size_normalizer.sizetypes.ordering import find_unorderable_pair, sort_tokenized
from sales_size_normalizer.sizetypes.partitioning import (
    DEFAULT_BETA_SOFTMAX,
    DEFAULT_EPSILON_STD,
    DEFAULT_MAX_CLUSTERS,
    PatternGroup,
    cluster_group,
    position_weights,
)


SIZE_TYPE_ID_SEPARATOR = '#'


@dataclass(frozen=True)
class SizeType:
    """An ordered list of sizes belonging to one brand."""
    
    id: str
    brand: str
    sizes: tuple
    
    def index_of(self, raw_size):
        """Sorted index of a size in this size type."""
        return self.sizes.index(raw_size)
    
    def __len__(self):
        return len(self.sizes)


def make_size_type_id(brand, ordinal):
    """Stable size type id: brand plus ordinal."""
    return f"{brand}{SIZE_TYPE_ID_SEPARATOR}{ordinal}"


def brand_of_size_type(size_type_id):
    """Recover the brand from a size type id."""
    return size_type_id.rsplit(SIZE_TYPE_ID_SEPARATOR, 1)[0]


def group_by_pattern(brand, tokenized_sizes):
    """
    Group a brand's tokenized sizes by token-type pattern.
    
    Args:
        brand (str): Brand identifier
        tokenized_sizes (list): TokenizedSize objects
        
    Returns:
        list: PatternGroup objects ordered by pattern key
    """
    by_pattern = {}
    for tokenized in tokenized_sizes:
        by_pattern.setdefault(pattern_key(tokenized), []).append(tokenized)
    
    return [
        PatternGroup(brand=brand, pattern=key, members=by_pattern[key])
        for key in sorted(by_pattern)
    ]


class SizeTypeInferencer:
    """
    Partition brand sizes into size types and order each one.
    
    Warnings (split clusters) and clustering traces accumulate on the
    instance so callers can report them after a run.
    """
    
    def __init__(self,
                 beta_softmax=DEFAULT_BETA_SOFTMAX,
                 epsilon_std=DEFAULT_EPSILON_STD,
                 max_clusters=DEFAULT_MAX_CLUSTERS,
                 strict=False,
                 verbose=False,
                 debug=False):
        """
        Initialize the inferencer.
        
        Args:
            beta_softmax (float): Softmax temperature for position weights
            epsilon_std (float): Off-diagonal std below which a group is one cluster
            max_clusters (int): Largest cluster count tried per group
            strict (bool): Raise PartitionDefect instead of splitting clusters
            verbose (bool): Print warnings to stderr
            debug (bool): Print clustering decisions to stderr
        """
        self.beta_softmax = beta_softmax
        self.epsilon_std = epsilon_std
        self.max_clusters = max_clusters
        self.strict = strict
        self.verbose = verbose
        self.debug = debug
        self.warnings = []
        self.traces = []
    
    def infer_brand(self, brand, brand_sizes):
        """
        Infer the size types of one brand.
        
        Args:
            brand (str): Brand identifier
            brand_sizes (list): Raw size strings (duplicates are ignored)
            
        Returns:
            list: SizeType objects covering every input size exactly once
            
        Raises:
            EmptyInput: If brand_sizes is empty or a size string is blank
            PartitionDefect: In strict mode, if a cluster cannot be ordered
        """
        unique_sizes = sorted(set(brand_sizes))
        if not unique_sizes:
            raise EmptyInput(f"Brand '{brand}' has no sizes")
        
        tokenized_sizes = [tokenize(raw) for raw in unique_sizes]
        
        ordered_clusters = []
        for group in group_by_pattern(brand, tokenized_sizes):
            weights = position_weights(group, self.beta_softmax, self.epsilon_std)
            clusters, trace = cluster_group(group, weights, self.max_clusters, debug=self.debug)
            self.traces.append(trace)
            
            for cluster in clusters:
                ordered_clusters.extend(self._order_cluster(brand, cluster))
        
        return [
            SizeType(id=make_size_type_id(brand, ordinal), brand=brand, sizes=tuple(sizes))
            for ordinal, sizes in enumerate(ordered_clusters)
        ]
    
    def _order_cluster(self, brand, cluster):
        """Sort one cluster, or split it into singletons if it cannot be ordered."""
        bad_pair = find_unorderable_pair(cluster)
        if bad_pair is None:
            return [[member.raw for member in sort_tokenized(cluster)]]
        
        defect = PartitionDefect(brand, [member.raw for member in cluster], bad_pair)
        if self.strict:
            raise defect
        
        self.warnings.append(str(defect))
        if self.verbose:
            print(f"Warning: {defect}; splitting into {len(cluster)} single-size types",
                  file=sys.stderr)
        
        return [[member.raw] for member in sorted(cluster, key=lambda member: member.raw)]
    
    def infer_catalog(self, sizes_by_brand):
        """
        Infer size types for every brand.
        
        Args:
            sizes_by_brand (dict): Brand -> iterable of raw size strings
            
        Returns:
            SizeTypeMap: Size types of all brands
        """
        size_types = []
        for brand in sorted(sizes_by_brand):
            size_types.extend(self.infer_brand(brand, sizes_by_brand[brand]))
        return SizeTypeMap(size_types)


def infer_size_types(brand_sizes, brand, w_params=None):
    """
    Infer the size types of one brand with default settings.
    
    Args:
        brand_sizes (list): Raw size strings
        brand (str): Brand identifier
        w_params (dict): Optional {'beta_softmax', 'epsilon_std'} overrides
        
    Returns:
        list: SizeType objects
    """
    params = dict(w_params or {})
    inferencer = SizeTypeInferencer(
        beta_softmax=params.get('beta_softmax', DEFAULT_BETA_SOFTMAX),
        epsilon_std=params.get('epsilon_std', DEFAULT_EPSILON_STD),
    )
    return inferencer.infer_brand(brand, brand_sizes)


class SizeTypeMap:
    """
    Lookup from (brand, raw_size) to (size_type_id, sorted_index).
    """
    
    def __init__(self, size_types=()):
        """
        Initialize the map.
        
        Args:
            size_types (iterable): SizeType objects
            
        Raises:
            ValueError: If a size type id repeats or a brand size appears twice
        """
        self.size_types = {}
        self._lookup = {}
        for size_type in size_types:
            self.add(size_type)
    
    def add(self, size_type):
        """Register one size type."""
        if size_type.id in self.size_types:
            raise ValueError(f"Duplicate size type id: {size_type.id}")
        
        for index, raw_size in enumerate(size_type.sizes):
            key = (size_type.brand, raw_size)
            if key in self._lookup:
                raise ValueError(f"Size {raw_size!r} of brand '{size_type.brand}' is in two size types")
            self._lookup[key] = (size_type.id, index)
        
        self.size_types[size_type.id] = size_type
    
    def resolve(self, brand, raw_size):
        """
        Resolve a brand size.
        
        Returns:
            tuple or None: (size_type_id, sorted_index), None if unknown
        """
        return self._lookup.get((brand, raw_size))
    
    def get(self, size_type_id):
        """Get a size type by id (None if absent)."""
        return self.size_types.get(size_type_id)
    
    def ordered(self):
        """Size types sorted by id."""
        return [self.size_types[key] for key in sorted(self.size_types)]
    
    def brands(self):
        """Sorted brand identifiers."""
        return sorted({size_type.brand for size_type in self.size_types.values()})
    
    def to_records(self):
        """
        Flatten to (brand, raw_size, size_type_id, sorted_index) rows.
        
        Returns:
            list: Rows sorted by size type id then sorted index
        """
        return [
            [size_type.brand, raw_size, size_type.id, index]
            for size_type in self.ordered()
            for index, raw_size in enumerate(size_type.sizes)
        ]
    
    @classmethod
    def from_records(cls, rows):
        """
        Rebuild a map from (brand, raw_size, size_type_id, sorted_index) rows.
        
        Args:
            rows (iterable): Records as produced by to_records()
            
        Returns:
            SizeTypeMap: Rebuilt map
        """
        members = {}
        brands = {}
        for brand, raw_size, size_type_id, index in rows:
            members.setdefault(size_type_id, []).append((int(index), raw_size))
            brands[size_type_id] = brand
        
        return cls(
            SizeType(id=key, brand=brands[key], sizes=tuple(raw for _, raw in sorted(members[key])))
            for key in sorted(members)
        )
    
    def __len__(self):
        return len(self.size_types)
    
    def __contains__(self, size_type_id):
        return size_type_id in self.size_types

# End of file #
