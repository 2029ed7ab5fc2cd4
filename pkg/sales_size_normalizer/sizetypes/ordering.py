"""
sales_size_normalizer/sizetypes/ordering.py

Deterministic semantic comparator for size strings.

Numeric tokens compare numerically, letter sizes compare through a fixed
lexicon, and anything else (OTHER tokens, words like WIDE or YOUTH) is a
non-ordering modifier. The leftmost differing ordering token decides.
"""

from functools import cmp_to_key

from sales_size_normalizer.parsing.size_patterns import ALPHA, NUMER
from sales_size_normalizer.parsing.tokenizer import tokenize


LESS = 'LESS'
GREATER = 'GREATER'
EQUAL = 'EQUAL'
INCOMPARABLE = 'INCOMPARABLE'

# Letter sizes in ascending order; each row lists aliases of one rank
_RANKED_ALIASES = [
    ['XXXS', 'EXTRA EXTRA EXTRA SMALL'],
    ['XXS', 'EXTRA EXTRA SMALL', 'XXSMALL'],
    ['XS', 'EXTRA SMALL', 'XSMALL', 'XSM'],
    ['S', 'SM', 'SML', 'SMALL'],
    ['M', 'MD', 'MED', 'MEDIUM'],
    ['L', 'LG', 'LRG', 'LARGE'],
    ['XL', 'EXTRA LARGE', 'XLARGE', 'XLG'],
    ['XXL', 'EXTRA EXTRA LARGE', 'XXLARGE'],
    ['XXXL', 'EXTRA EXTRA EXTRA LARGE'],
    ['XXXXL'],
    ['XXXXXL'],
]

SIZE_LEXICON = {
    alias: rank
    for rank, aliases in enumerate(_RANKED_ALIASES)
    for alias in aliases
}

# Petite ranks with S, but only as the whole size string
PETITE_WORDS = ('P', 'PETITE')
PETITE_RANK = SIZE_LEXICON['S']


def ordering_keys(tokenized):
    """
    Split a tokenized size into ordering keys and modifiers.
    
    Args:
        tokenized (TokenizedSize): Tokenized size
        
    Returns:
        tuple: (keys, modifiers) where keys is a list of ('num', float) or
               ('rank', int) and modifiers is a tuple of modifier texts
    """
    tokens = tokenized.tokens
    
    if len(tokens) == 1 and tokens[0].text in PETITE_WORDS:
        return [('rank', PETITE_RANK)], ()
    
    keys = []
    modifiers = []
    for token in tokens:
        if token.kind == NUMER:
            keys.append(('num', float(token.text)))
        elif token.kind == ALPHA and token.text in SIZE_LEXICON:
            keys.append(('rank', SIZE_LEXICON[token.text]))
        else:
            modifiers.append(token.text)
    
    return keys, tuple(modifiers)


def compare_tokenized(a, b):
    """
    Compare two tokenized sizes semantically.
    
    Args:
        a (TokenizedSize): First size
        b (TokenizedSize): Second size
        
    Returns:
        str: LESS, GREATER, EQUAL or INCOMPARABLE
    """
    if a.texts == b.texts:
        return EQUAL
    
    keys_a, mods_a = ordering_keys(a)
    keys_b, mods_b = ordering_keys(b)
    
    for (kind_a, value_a), (kind_b, value_b) in zip(keys_a, keys_b):
        if kind_a != kind_b:
            return INCOMPARABLE
        if value_a < value_b:
            return LESS
        if value_a > value_b:
            return GREATER
    
    if len(keys_a) != len(keys_b):
        return INCOMPARABLE
    
    # Same ordering tokens: aliases ("S" vs "SMALL") are equal, a differing
    # modifier ("3.5W" vs "3.5N") cannot be ordered.
    return EQUAL if mods_a == mods_b else INCOMPARABLE


def semantic_compare(a, b):
    """
    Compare two raw size strings semantically.
    
    Examples:
        ("S", "L")     -> LESS
        ("2", "10")    -> LESS (numeric, not lexicographic)
        ("14P", "12P") -> GREATER
    
    Args:
        a (str): First size string
        b (str): Second size string
        
    Returns:
        str: LESS, GREATER, EQUAL or INCOMPARABLE
    """
    return compare_tokenized(tokenize(a), tokenize(b))


def find_unorderable_pair(tokenized_sizes):
    """
    Find the first pair of distinct sizes that cannot be strictly ordered.
    
    Args:
        tokenized_sizes (list): TokenizedSize members of one cluster
        
    Returns:
        tuple or None: (raw_a, raw_b) of the offending pair, or None
    """
    for i, a in enumerate(tokenized_sizes):
        for b in tokenized_sizes[i + 1:]:
            if compare_tokenized(a, b) not in (LESS, GREATER):
                return a.raw, b.raw
    return None


def sort_tokenized(tokenized_sizes):
    """
    Sort tokenized sizes ascending by semantic size.
    
    Callers must check find_unorderable_pair() first; the sort is only a
    total order when every pair is LESS or GREATER.
    
    Args:
        tokenized_sizes (list): TokenizedSize objects
        
    Returns:
        list: Sorted TokenizedSize objects
    """
    def cmp(a, b):
        result = compare_tokenized(a, b)
        if result == LESS:
            return -1
        if result == GREATER:
            return 1
        return 0
    
    return sorted(tokenized_sizes, key=cmp_to_key(cmp))

# End of file #
