"""
sales_size_normalizer/parsing/tokenizer.py

Parse raw size strings into typed tokens (NUMER, ALPHA, OTHER) and
token-type patterns. Pure functions, no shared state.
"""

import unicodedata

from dataclasses import dataclass

from sales_size_normalizer.errors import EmptyInput
from sales_size_normalizer.parsing.size_patterns import (
    ALPHA,
    COMMON_FRACTIONS,
    EXTRA_WORD,
    FRACTION_SLASH,
    PATTERN_KEY_SEPARATOR,
    TOKEN_KINDS,
    VULGAR_FRACTIONS,
    fraction_rgx,
    token_rgx,
)


@dataclass(frozen=True)
class Token:
    """A normalized substring of a size string with its kind."""
    
    text: str
    kind: str
    
    def __post_init__(self):
        if not self.text:
            raise ValueError("Token text cannot be empty")
        if self.kind not in TOKEN_KINDS:
            raise ValueError(f"Unknown token kind: {self.kind}")


@dataclass(frozen=True)
class TokenizedSize:
    """A raw size string with its tokens and token-type pattern."""
    
    raw: str
    tokens: tuple
    pattern: tuple
    
    @property
    def texts(self):
        """Token texts in order."""
        return tuple(token.text for token in self.tokens)
    
    def render(self):
        """Space-joined token texts (tokenizing this reproduces the pattern)."""
        return ' '.join(self.texts)
    
    def __len__(self):
        return len(self.tokens)


def fold_text(raw):
    """
    Fold a raw size string to upper-case basic Latin.
    
    Accents are stripped; characters with no Latin decomposition are kept
    and later become OTHER tokens.
    
    Args:
        raw (str): Raw size string
        
    Returns:
        str: Folded, trimmed text
    """
    text = raw
    for char, replacement in VULGAR_FRACTIONS.items():
        text = text.replace(char, replacement)
    
    text = unicodedata.normalize('NFKD', text)
    text = ''.join(char for char in text if not unicodedata.combining(char))
    text = text.replace(FRACTION_SLASH, '/')
    return text.upper().strip()


def _format_decimal(value):
    """Render a fraction-derived value without trailing zeros."""
    rendered = f"{value:.3f}".rstrip('0').rstrip('.')
    return rendered or '0'


def normalize_fractions(text):
    """
    Replace common fractions with decimals ("7 1/2" -> "7.5").
    
    Args:
        text (str): Folded size text
        
    Returns:
        str: Text with fractions converted
    """
    def replace(match):
        whole = int(match.group('whole')) if match.group('whole') else 0
        return _format_decimal(whole + COMMON_FRACTIONS[match.group('frac')])
    
    return fraction_rgx.sub(replace, text)


def _fuse_extra(tokens):
    """Fuse "EXTRA" with the ALPHA token that follows it (chains allowed)."""
    fused = []
    for token in reversed(tokens):
        if (token.kind == ALPHA and token.text == EXTRA_WORD
                and fused and fused[0].kind == ALPHA):
            fused[0] = Token(f"{EXTRA_WORD} {fused[0].text}", ALPHA)
        else:
            fused.insert(0, token)
    return fused


def tokenize(raw):
    """
    Parse a raw size string into typed tokens.
    
    Examples:
        "14P"              -> ["14", "P"]            [NUMER, ALPHA]
        "12.5"             -> ["12.5"]               [NUMER]
        "EXTRA SMALL WIDE" -> ["EXTRA SMALL", "WIDE"] [ALPHA, ALPHA]
    
    Args:
        raw (str): Raw size string
        
    Returns:
        TokenizedSize: Tokens and pattern
        
    Raises:
        EmptyInput: If raw is empty or whitespace-only
    """
    if raw is None or not str(raw).strip():
        raise EmptyInput(f"Size string is empty: {raw!r}")
    
    text = normalize_fractions(fold_text(str(raw)))
    
    tokens = [Token(match.group(), match.lastgroup) for match in token_rgx.finditer(text)]
    tokens = _fuse_extra(tokens)
    
    if not tokens:
        raise EmptyInput(f"Size string has no tokens: {raw!r}")
    
    return TokenizedSize(
        raw=raw,
        tokens=tuple(tokens),
        pattern=tuple(token.kind for token in tokens),
    )


def pattern_key(tokenized):
    """
    Canonical, order-preserving grouping key for a token pattern.
    
    Args:
        tokenized (TokenizedSize): Tokenized size
        
    Returns:
        str: e.g. "NUMER|ALPHA"
    """
    return PATTERN_KEY_SEPARATOR.join(tokenized.pattern)

# End of file #
