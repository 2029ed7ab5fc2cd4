"""
Parsing package - size-string tokenization and pattern keys.
"""

from sales_size_normalizer.parsing.size_patterns import ALPHA, NUMER, OTHER
from sales_size_normalizer.parsing.tokenizer import Token, TokenizedSize, pattern_key, tokenize

__all__ = ['ALPHA', 'NUMER', 'OTHER', 'Token', 'TokenizedSize', 'pattern_key', 'tokenize']
