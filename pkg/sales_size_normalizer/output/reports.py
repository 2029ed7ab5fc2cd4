"""
sales_size_normalizer/output/reports.py

JSON run reports with sorted keys.
"""

import json
import sys

from datetime import date
from pathlib import Path

import numpy as np

from sales_size_normalizer.output.records import STDIO


def _json_default(value):
    """Serialize numpy scalars, dates and paths."""
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (date, Path)):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def format_report(document):
    """Render a report document as JSON text."""
    return json.dumps(document, sort_keys=True, indent=2, default=_json_default) + '\n'


def write_report(path, document):
    """
    Write a report document.
    
    Args:
        path (str): Output file path, '-' for stdout
        document (dict): Report contents
        
    Raises:
        IOError: If file cannot be written
    """
    text = format_report(document)
    if str(path) == STDIO:
        sys.stdout.write(text)
        return
    
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8')
    except IOError as e:
        raise IOError(f"Cannot write to {path}: {e}")


def read_report(path):
    """Read a report document."""
    with open(path, encoding='utf-8') as file:
        return json.load(file)

# End of file #
