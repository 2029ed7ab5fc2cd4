"""
Frequency package - sales records and the co-purchase frequency matrix.
"""

from sales_size_normalizer.frequency.matrix import BuildStats, FrequencyMatrix, build_frequency_matrix
from sales_size_normalizer.frequency.sales import (
    SaleRecord,
    category_of,
    filter_sales,
    qualify_brand,
    sizes_by_brand,
)

__all__ = [
    'BuildStats', 'FrequencyMatrix', 'SaleRecord',
    'build_frequency_matrix', 'category_of', 'filter_sales', 'qualify_brand', 'sizes_by_brand',
]
