"""
Output package - tagged TSV interchange files and JSON reports.
"""

from sales_size_normalizer.output.records import (
    RecordWriter,
    read_cases,
    read_frequency,
    read_normalization,
    read_sales,
    read_size_types,
    write_block,
    write_cases,
    write_frequency,
    write_normalization,
    write_sales,
    write_silhouettes,
    write_size_types,
    write_traces,
)
from sales_size_normalizer.output.reports import read_report, write_report

__all__ = [
    'RecordWriter',
    'read_cases', 'read_frequency', 'read_normalization', 'read_report', 'read_sales', 'read_size_types',
    'write_block', 'write_cases', 'write_frequency', 'write_normalization', 'write_report',
    'write_sales', 'write_silhouettes', 'write_size_types', 'write_traces',
]
