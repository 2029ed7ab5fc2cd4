"""
Test size-string tokenization.

Tests run under pytest or through run_tests(), which accumulates results
and shows a final score.
"""

import sys

from runner_support import collect_tests, run_test_functions

from hypothesis import given, strategies as st

from sales_size_normalizer.errors import EmptyInput
from sales_size_normalizer.parsing import ALPHA, NUMER, OTHER, pattern_key, tokenize


def test_numeric_then_letter():
    """'14P' splits into a number and a letter token."""
    tokenized = tokenize("14P")
    assert tokenized.texts == ("14", "P"), f"Got {tokenized.texts}"
    assert tokenized.pattern == (NUMER, ALPHA), f"Got {tokenized.pattern}"


def test_decimal_is_one_token():
    """'12.5' stays a single NUMER token."""
    tokenized = tokenize("12.5")
    assert tokenized.texts == ("12.5",)
    assert tokenized.pattern == (NUMER,)


def test_extra_fuses_with_next_word():
    """'EXTRA SMALL WIDE' gives ['EXTRA SMALL', 'WIDE']."""
    tokenized = tokenize("EXTRA SMALL WIDE")
    assert tokenized.texts == ("EXTRA SMALL", "WIDE"), f"Got {tokenized.texts}"
    assert tokenized.pattern == (ALPHA, ALPHA)


def test_extra_chain():
    """Repeated EXTRA fuses into one token."""
    assert tokenize("Extra Extra Large").texts == ("EXTRA EXTRA LARGE",)


def test_case_folding_and_whitespace():
    """Lower case and surrounding whitespace do not matter."""
    assert tokenize("  small ").texts == ("SMALL",)
    assert tokenize("m").texts == tokenize("M").texts


def test_mixed_fraction():
    """'7 1/2' and '7½' both become 7.5."""
    assert tokenize("7 1/2").texts == ("7.5",)
    assert tokenize("7½").texts == ("7.5",)
    assert tokenize("10-1/2 W").texts == ("10.5", "W")


def test_neck_sleeve_is_not_a_fraction():
    """'16/34' keeps both numbers with an OTHER separator."""
    tokenized = tokenize("16/34")
    assert tokenized.texts == ("16", "/", "34"), f"Got {tokenized.texts}"
    assert tokenized.pattern == (NUMER, OTHER, NUMER)


def test_toddler_size():
    """'10.5M Toddler' tokenizes as number, letter, word."""
    tokenized = tokenize("10.5M Toddler")
    assert tokenized.texts == ("10.5", "M", "TODDLER")
    assert pattern_key(tokenized) == "NUMER|ALPHA|ALPHA"


def test_accents_are_stripped():
    """Accented letters fold to basic Latin."""
    assert tokenize("Pétite").texts == ("PETITE",)


def test_empty_input_raises():
    """Blank strings raise EmptyInput."""
    for raw in ("", "   ", None):
        try:
            tokenize(raw)
        except EmptyInput:
            continue
        raise AssertionError(f"No EmptyInput for {raw!r}")


def test_raw_is_preserved():
    """The original string is kept on the result."""
    assert tokenize("Small ").raw == "Small "


@given(st.text(alphabet="ABCXYZ0123456789 ./-", min_size=1, max_size=12).filter(lambda s: s.strip()))
def test_render_reproduces_pattern(raw):
    """Tokenizing the rendered tokens gives the same pattern."""
    tokenized = tokenize(raw)
    assert tokenize(tokenized.render()).pattern == tokenized.pattern


@given(st.text(alphabet="abcXYZ0123456789 ", min_size=1, max_size=12).filter(lambda s: s.strip()))
def test_pattern_matches_token_count(raw):
    """Pattern and tokens always have the same length."""
    tokenized = tokenize(raw)
    assert len(tokenized.pattern) == len(tokenized.tokens) == len(tokenized)


def run_tests():
    """Run all tokenizer tests and return results."""
    return run_test_functions("Testing Size Tokenizer", collect_tests(globals()))


def main():
    """Main test runner."""
    success, results = run_tests()
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())

# End of file #
