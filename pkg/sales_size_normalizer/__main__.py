"""
Entry point for running the sales size normalizer as a module.
"""

import sys

from sales_size_normalizer.cli import main


if __name__ == "__main__":
    sys.exit(main())
