"""
sales_size_normalizer/output/records.py

Versioned tab-separated interchange files.

Every file starts with one header line whose first cell is the format tag
(for example '#freq.v1') followed by the column names.
"""

import csv
import sys

from pathlib import Path

from sales_size_normalizer.errors import RecordFormatError
from sales_size_normalizer.evaluation.cases import CASE_COLUMNS, TestCase
from sales_size_normalizer.evaluation.scoring import TRACE_COLUMNS
from sales_size_normalizer.frequency.matrix import FrequencyMatrix
from sales_size_normalizer.frequency.sales import OPTIONAL_SALE_COLUMNS, SALE_COLUMNS, sale_from_row
from sales_size_normalizer.sizetypes.inference import SizeTypeMap
from sales_size_normalizer.solvers.base import NormalizationMap


STDIO = '-'

SALES_FORMAT = ('#sales.v1', SALE_COLUMNS)
CATEGORIZED_SALES_FORMAT = ('#sales.v1', SALE_COLUMNS + OPTIONAL_SALE_COLUMNS)
SIZE_TYPES_FORMAT = ('#sizetypes.v1', ['brand', 'raw_size', 'size_type_id', 'sorted_index'])
FREQUENCY_FORMAT = ('#freq.v1', ['size_type_a', 'size_a', 'size_type_b', 'size_b', 'mass'])
NORMALIZATION_FORMAT = ('#normmap.v1', ['size_type_id', 'raw_size', 'normalized_value', 'component'])
CASES_FORMAT = ('#cases.v1', CASE_COLUMNS)
TRACES_FORMAT = ('#traces.v1', TRACE_COLUMNS)
BLOCK_FORMAT = ('#block.v1', ['row_size', 'col_size', 'mass'])
SILHOUETTE_FORMAT = ('#silhouette.v1', ['brand', 'pattern', 'k', 'silhouette', 'chosen'])


class RecordWriter:
    """
    Write and read tagged TSV record files.
    """
    
    def write_records(self, output_path, record_format, rows):
        """
        Write rows under a tagged header.
        
        Args:
            output_path (str): Output file path, '-' for stdout
            record_format (tuple): (tag, column names)
            rows (iterable): Data rows
            
        Raises:
            IOError: If file cannot be written
            RecordFormatError: If a row has the wrong number of columns
        """
        tag, columns = record_format
        if str(output_path) == STDIO:
            self._write(sys.stdout, tag, columns, rows)
            return
        
        output_path = Path(output_path)
        try:
            output_path.parent.mkdir(parents=True, exist_ok=True)
            with open(output_path, 'w', newline='', encoding='utf-8') as file:
                self._write(file, tag, columns, rows)
        except IOError as e:
            raise IOError(f"Cannot write to {output_path}: {e}")
    
    def _write(self, file, tag, columns, rows):
        writer = csv.writer(file, delimiter='\t', quoting=csv.QUOTE_MINIMAL, lineterminator='\n')
        writer.writerow([tag] + list(columns))
        for i, row in enumerate(rows):
            if len(row) != len(columns):
                raise RecordFormatError(f"Row {i+1}: Expected {len(columns)} columns, got {len(row)}")
            writer.writerow([self._clean_cell_value(cell) for cell in row])
    
    def read_records(self, input_path, record_format, optional_columns=()):
        """
        Read the rows of a tagged TSV file.
        
        Args:
            input_path (str): Input file path, '-' for stdin
            record_format (tuple): Expected (tag, column names)
            optional_columns (list): Trailing columns the file may add;
                rows of a file without them keep the base width
            
        Returns:
            list: Rows as lists of strings
            
        Raises:
            FileNotFoundError: If the file doesn't exist
            RecordFormatError: On a wrong tag, wrong columns or a short row
        """
        if str(input_path) == STDIO:
            return self._read(sys.stdin, STDIO, record_format, optional_columns)
        
        input_path = Path(input_path)
        if not input_path.exists():
            raise FileNotFoundError(f"Input file not found: {input_path}")
        with open(input_path, newline='', encoding='utf-8') as file:
            return self._read(file, input_path, record_format, optional_columns)
    
    def _read(self, file, name, record_format, optional_columns=()):
        tag, columns = record_format
        reader = csv.reader(file, delimiter='\t')
        header = next(reader, None)
        if not header:
            raise RecordFormatError(f"{name}: file is empty, expected a '{tag}' header")
        if header[0] != tag:
            raise RecordFormatError(f"{name}: expected format tag '{tag}', found '{header[0]}'")
        if header[1:] == list(columns) + list(optional_columns):
            columns = header[1:]
        elif header[1:] != list(columns):
            raise RecordFormatError(f"{name}: expected columns {columns}, found {header[1:]}")
        
        rows = []
        for line_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(columns):
                raise RecordFormatError(f"{name}:{line_number}: expected {len(columns)} fields, got {len(row)}")
            rows.append(row)
        return rows
    
    def _clean_cell_value(self, value):
        """
        Format a cell value for TSV output.
        
        Floats keep full repr precision so reruns are byte-identical.
        """
        if value is None:
            return ''
        if isinstance(value, bool):
            return 'true' if value else 'false'
        if isinstance(value, float):
            return repr(value)
        
        return str(value).replace('\t', ' ').replace('\n', ' ').replace('\r', '')


_writer = RecordWriter()


def write_sales(path, sales):
    """Write SaleRecord objects; the category column appears only when a sale has one."""
    sales = list(sales)
    categorized = any(sale.category for sale in sales)
    record_format = CATEGORIZED_SALES_FORMAT if categorized else SALES_FORMAT
    _writer.write_records(path, record_format, (sale.to_row(with_category=categorized) for sale in sales))


def read_sales(path):
    """Read SaleRecord objects, with or without the category column."""
    rows = _writer.read_records(path, SALES_FORMAT, optional_columns=OPTIONAL_SALE_COLUMNS)
    return [sale_from_row(row) for row in rows]


def write_size_types(path, size_type_map):
    """Write a SizeTypeMap."""
    _writer.write_records(path, SIZE_TYPES_FORMAT, size_type_map.to_records())


def read_size_types(path):
    """Read a SizeTypeMap."""
    rows = _writer.read_records(path, SIZE_TYPES_FORMAT)
    try:
        return SizeTypeMap.from_records(rows)
    except ValueError as e:
        raise RecordFormatError(f"{path}: {e}")


def write_frequency(path, matrix):
    """Write a FrequencyMatrix."""
    _writer.write_records(path, FREQUENCY_FORMAT, matrix.to_records())


def read_frequency(path, size_type_map):
    """Read a FrequencyMatrix indexed by the size types of a SizeTypeMap."""
    rows = _writer.read_records(path, FREQUENCY_FORMAT)
    try:
        return FrequencyMatrix.from_records(size_type_map.ordered(), rows)
    except (KeyError, ValueError) as e:
        raise RecordFormatError(f"{path}: {e}")


def write_normalization(path, normalization):
    """Write a NormalizationMap."""
    _writer.write_records(path, NORMALIZATION_FORMAT, normalization.to_records())


def read_normalization(path):
    """Read a NormalizationMap."""
    rows = _writer.read_records(path, NORMALIZATION_FORMAT)
    try:
        return NormalizationMap.from_records(rows)
    except ValueError as e:
        raise RecordFormatError(f"{path}: {e}")


def write_cases(path, cases):
    """Write TestCase objects."""
    _writer.write_records(path, CASES_FORMAT, (case.to_row() for case in cases))


def read_cases(path):
    """Read TestCase objects."""
    return [TestCase.from_row(row) for row in _writer.read_records(path, CASES_FORMAT)]


def write_traces(path, report):
    """Write the per-case traces of an EvalReport."""
    _writer.write_records(path, TRACES_FORMAT, (trace.to_row() for trace in report.traces))


def write_block(path, matrix, size_type_a, size_type_b):
    """
    Write the dense block between two size types as (row, column, mass) rows.
    
    Raises:
        UnknownSizeType: If either size type is not in the matrix
    """
    block = matrix.block(size_type_a, size_type_b)
    rows_sizes = [raw_size for type_id, raw_size in matrix.keys if type_id == size_type_a]
    col_sizes = [raw_size for type_id, raw_size in matrix.keys if type_id == size_type_b]
    _writer.write_records(path, BLOCK_FORMAT, (
        [row_size, col_size, float(block[i, j])]
        for i, row_size in enumerate(rows_sizes)
        for j, col_size in enumerate(col_sizes)
    ))


def write_silhouettes(path, traces):
    """Write the silhouette score of every candidate cluster count."""
    _writer.write_records(path, SILHOUETTE_FORMAT, (
        [trace.brand, trace.pattern, k, float(score), k == trace.chosen_k]
        for trace in traces
        for k, score in sorted(trace.silhouette_by_k.items())
    ))

# End of file #
