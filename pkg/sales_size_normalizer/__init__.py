"""
Sales Size Normalizer - Map brand size strings onto one normalized scale.

Infers size types per brand, counts co-purchases between sizes, and solves
for a normalized value of every size such that sizes bought by the same
people land close together.
"""

__version__ = "20261019.0"
__author__ = "RedBearAK"
__email__ = "64876997+RedBearAK@users.noreply.github.com"
__description__ = "Sales-based size normalization across brands"


from sales_size_normalizer.frequency.matrix import FrequencyMatrix, build_frequency_matrix
from sales_size_normalizer.parsing.tokenizer import tokenize
from sales_size_normalizer.sizetypes.inference import SizeTypeInferencer, SizeTypeMap, infer_size_types
from sales_size_normalizer.solvers import NormalizationMap, Problem, solve_gd, solve_qp


__all__ = [
    'FrequencyMatrix', 'NormalizationMap', 'Problem', 'SizeTypeInferencer', 'SizeTypeMap',
    'build_frequency_matrix', 'infer_size_types', 'solve_gd', 'solve_qp', 'tokenize',
]
