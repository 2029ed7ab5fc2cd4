"""
Size types package - partition brand sizes into ordered size types.
"""

from sales_size_normalizer.sizetypes.inference import (
    SizeType,
    SizeTypeInferencer,
    SizeTypeMap,
    infer_size_types,
)
from sales_size_normalizer.sizetypes.ordering import (
    EQUAL,
    GREATER,
    INCOMPARABLE,
    LESS,
    semantic_compare,
)
from sales_size_normalizer.sizetypes.partitioning import (
    INFINITE_DISTANCE,
    PatternGroup,
    PositionWeights,
    cluster_group,
    distance,
    position_weights,
)

__all__ = [
    'EQUAL', 'GREATER', 'INCOMPARABLE', 'INFINITE_DISTANCE', 'LESS',
    'PatternGroup', 'PositionWeights', 'SizeType', 'SizeTypeInferencer',
    'SizeTypeMap', 'cluster_group', 'distance', 'infer_size_types',
    'position_weights', 'semantic_compare',
]
