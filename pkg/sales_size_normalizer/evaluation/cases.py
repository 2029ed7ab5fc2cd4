"""
sales_size_normalizer/evaluation/cases.py

Consistency test cases: two purchases of different products made by the
same user in the same calendar month and the same category.
"""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from sales_size_normalizer.errors import ConfigInvalid, RecordFormatError
from sales_size_normalizer.frequency.sales import category_of


CASE_COLUMNS = ['user_id', 'month', 'brand_a', 'size_a', 'product_a',
                'brand_b', 'product_b', 'available_sizes', 'actual_size']
AVAILABLE_SIZES_SEPARATOR = '|'


@dataclass(frozen=True)
class TestCase:
    """Purchase A is the known size; purchase B is the one to predict."""
    
    __test__ = False
    
    user_id: str
    month: str
    brand_a: str
    size_a: str
    product_a: str
    brand_b: str
    product_b: str
    available_sizes: tuple
    actual_size: str
    
    def __post_init__(self):
        if (self.brand_a, self.product_a) == (self.brand_b, self.product_b):
            raise ValueError(f"Test case for user '{self.user_id}' pairs a product with itself")
        if self.actual_size not in self.available_sizes:
            raise ValueError(f"Actual size {self.actual_size!r} is not among the available sizes")
    
    @property
    def purchase_a(self):
        """(brand, raw_size, product_id) of the known purchase."""
        return (self.brand_a, self.size_a, self.product_a)
    
    @property
    def purchase_b(self):
        """(brand, product_id, available_sizes, actual_size) of the target purchase."""
        return (self.brand_b, self.product_b, self.available_sizes, self.actual_size)
    
    @property
    def category(self):
        """Category shared by both purchases ('' when uncategorized)."""
        return category_of(self.brand_a)
    
    def to_row(self):
        """Row in CASE_COLUMNS order."""
        return [self.user_id, self.month, self.brand_a, self.size_a, self.product_a,
                self.brand_b, self.product_b,
                AVAILABLE_SIZES_SEPARATOR.join(self.available_sizes), self.actual_size]
    
    @classmethod
    def from_row(cls, row):
        """Build a test case from a row in CASE_COLUMNS order."""
        if len(row) != len(CASE_COLUMNS):
            raise RecordFormatError(f"Test case row has {len(row)} fields, expected {len(CASE_COLUMNS)}")
        values = dict(zip(CASE_COLUMNS, row))
        values['available_sizes'] = tuple(values['available_sizes'].split(AVAILABLE_SIZES_SEPARATOR))
        try:
            return cls(**values)
        except ValueError as e:
            raise RecordFormatError(str(e))


def product_size_runs(sales):
    """
    Size run of every product: all sizes it was sold in.
    
    Returns:
        dict: (category-qualified brand, product_id) -> sorted tuple of raw sizes
    """
    runs = {}
    for sale in sales:
        runs.setdefault((sale.catalog_brand, sale.product_id), set()).add(sale.raw_size)
    return {product: tuple(sorted(sizes)) for product, sizes in runs.items()}


def sample_test_cases(sales, max_cases=None, seed=0, size_runs=None):
    """
    Sample at most one test case per user, month and category.
    
    Purchases of the same product never form a case; two different
    products of one brand do. Among the remaining ordered pairs of a
    user-month-category one is drawn uniformly; when max_cases is set,
    at most that many cases per category are then drawn uniformly
    without replacement.
    
    Args:
        sales (list): SaleRecord objects (returned sales are ignored)
        max_cases (int): Optional cap on the number of cases per category
        seed (int): Random seed
        size_runs (dict): Optional (qualified brand, product_id) -> sizes; derived
            from all sales when omitted
        
    Returns:
        list: TestCase objects sorted by (month, user_id, category)
    """
    if max_cases is not None and max_cases < 0:
        raise ConfigInvalid(f"max_cases must be non-negative, got {max_cases}")
    
    sales = list(sales)
    if size_runs is None:
        size_runs = product_size_runs(sales)
    
    baskets = {}
    for sale in sales:
        if not sale.returned:
            baskets.setdefault((sale.month, sale.user_id, sale.category), set()).add(sale.item)
    
    rng = np.random.default_rng(seed)
    cases = []
    for month, user_id, category in sorted(baskets):
        pairs = [
            (a, b) for a, b in permutations(sorted(baskets[(month, user_id, category)]), 2)
            if (a[1], a[0]) != (b[1], b[0])
        ]
        if not pairs:
            continue
        (product_a, brand_a, size_a), (product_b, brand_b, size_b) = pairs[rng.integers(len(pairs))]
        available = size_runs.get((brand_b, product_b), (size_b,))
        if size_b not in available:
            available = tuple(sorted(set(available) | {size_b}))
        cases.append(TestCase(
            user_id=user_id, month=month,
            brand_a=brand_a, size_a=size_a, product_a=product_a,
            brand_b=brand_b, product_b=product_b,
            available_sizes=available, actual_size=size_b,
        ))
    
    if max_cases is None:
        return cases
    
    by_category = {}
    for i, case in enumerate(cases):
        by_category.setdefault(case.category, []).append(i)
    kept = []
    for category in sorted(by_category):
        indices = by_category[category]
        if len(indices) > max_cases:
            indices = [indices[i] for i in np.sort(rng.choice(len(indices), size=max_cases, replace=False))]
        kept.extend(indices)
    return [cases[i] for i in sorted(kept)]

# End of file #
