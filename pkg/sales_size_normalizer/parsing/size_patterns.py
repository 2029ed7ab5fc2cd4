"""
sales_size_normalizer/parsing/size_patterns.py

Regular expressions and lookup tables for size-string tokenization.
Kept separate from the tokenizer so every rule lives in one place.
"""

import re


# Token kinds
NUMER = 'NUMER'
ALPHA = 'ALPHA'
OTHER = 'OTHER'

TOKEN_KINDS = (NUMER, ALPHA, OTHER)

# Input is already upper-cased basic Latin, so [A-Z] and [0-9] are exact.
token_rgx = re.compile(
    r'(?P<NUMER>[0-9]+(?:\.[0-9]+)?)'
    r'|(?P<ALPHA>[A-Z]+)'
    r'|(?P<OTHER>[^\sA-Z0-9]+)'
)

# Mixed number + fraction, e.g. "7 1/2", "7-1/2", or a bare "1/2".
# The lookbehind/lookahead keep "16/34" (neck/sleeve) and "11/2" untouched.
fraction_rgx = re.compile(
    r'(?:(?P<whole>[0-9]+)[\s-]+)?(?<![0-9/])(?P<frac>1/2|[13]/4|[1357]/8)(?![0-9/])'
)

COMMON_FRACTIONS = {
    '1/2': 0.5,
    '1/4': 0.25,
    '3/4': 0.75,
    '1/8': 0.125,
    '3/8': 0.375,
    '5/8': 0.625,
    '7/8': 0.875,
}

# Vulgar fraction characters are expanded before Unicode folding, otherwise
# NFKD turns "7½" into "71⁄2".
VULGAR_FRACTIONS = {
    '½': ' 1/2',
    '¼': ' 1/4',
    '¾': ' 3/4',
    '⅛': ' 1/8',
    '⅜': ' 3/8',
    '⅝': ' 5/8',
    '⅞': ' 7/8',
}

FRACTION_SLASH = '⁄'

# "EXTRA" followed by an ALPHA token fuses into one token
EXTRA_WORD = 'EXTRA'

# Separator used by pattern_key()
PATTERN_KEY_SEPARATOR = '|'

# End of file #
