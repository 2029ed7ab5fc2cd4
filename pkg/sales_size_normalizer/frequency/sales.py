"""
sales_size_normalizer/frequency/sales.py

Sale records and the filters applied before counting co-purchases.

A sale may carry a product category. Brands are qualified by their
category ('womens-shoes::acme'), so size types, co-purchase baskets and
test cases never mix categories.
"""

from dataclasses import dataclass
from datetime import date

from sales_size_normalizer.errors import RecordFormatError


SALE_COLUMNS = ['user_id', 'brand', 'raw_size', 'product_id', 'timestamp', 'returned']
OPTIONAL_SALE_COLUMNS = ['category']
CATEGORY_SEPARATOR = '::'

TRUE_VALUES = ('true', '1', 'yes')
FALSE_VALUES = ('false', '0', 'no')


def qualify_brand(category, brand):
    """Brand qualified by its category; the bare brand when there is none."""
    return f"{category}{CATEGORY_SEPARATOR}{brand}" if category else brand


def category_of(brand):
    """Category part of a qualified brand ('' when unqualified)."""
    if CATEGORY_SEPARATOR not in brand:
        return ''
    return brand.split(CATEGORY_SEPARATOR, 1)[0]


@dataclass(frozen=True)
class SaleRecord:
    """One purchased item."""
    
    user_id: str
    brand: str
    raw_size: str
    product_id: str
    timestamp: date
    returned: bool = False
    category: str = ''
    
    def __post_init__(self):
        for name in ('user_id', 'brand', 'raw_size', 'product_id'):
            if not str(getattr(self, name)).strip():
                raise RecordFormatError(f"Sale field '{name}' is empty")
        if not isinstance(self.timestamp, date):
            raise RecordFormatError(f"Sale timestamp must be a date, got {self.timestamp!r}")
        if CATEGORY_SEPARATOR in self.category:
            raise RecordFormatError(f"Category {self.category!r} contains '{CATEGORY_SEPARATOR}'")
    
    @property
    def month(self):
        """Calendar month as 'YYYY-MM'."""
        return self.timestamp.strftime('%Y-%m')
    
    @property
    def catalog_brand(self):
        """Brand qualified by the sale's category."""
        return qualify_brand(self.category, self.brand)
    
    @property
    def item(self):
        """The (product, brand, size) identity used to deduplicate purchases."""
        return (self.product_id, self.catalog_brand, self.raw_size)
    
    def to_row(self, with_category=False):
        """Row in SALE_COLUMNS order, plus the category when asked for."""
        row = [self.user_id, self.brand, self.raw_size, self.product_id,
               self.timestamp.isoformat(), 'true' if self.returned else 'false']
        if with_category:
            row.append(self.category)
        return row


def parse_date(value):
    """
    Parse an ISO-8601 date (a trailing time part is ignored).
    
    Raises:
        RecordFormatError: If the value is not a date
    """
    try:
        return date.fromisoformat(str(value).strip()[:10])
    except ValueError:
        raise RecordFormatError(f"Timestamp is not an ISO-8601 date: {value!r}")


def parse_bool(value):
    """Parse 'true'/'false' style flags."""
    text = str(value).strip().lower()
    if text in TRUE_VALUES:
        return True
    if text in FALSE_VALUES:
        return False
    raise RecordFormatError(f"Returned flag must be true or false, got {value!r}")


def sale_from_row(row):
    """
    Build a SaleRecord from a row in SALE_COLUMNS order.
    
    Args:
        row (list): Six string cells, or seven with the category
        
    Returns:
        SaleRecord: Parsed sale
        
    Raises:
        RecordFormatError: If the row is malformed
    """
    if len(row) not in (len(SALE_COLUMNS), len(SALE_COLUMNS) + len(OPTIONAL_SALE_COLUMNS)):
        raise RecordFormatError(f"Sale row needs {len(SALE_COLUMNS)} cells, got {len(row)}: {row}")
    
    user_id, brand, raw_size, product_id, timestamp, returned = row[:len(SALE_COLUMNS)]
    category = row[len(SALE_COLUMNS)].strip() if len(row) > len(SALE_COLUMNS) else ''
    return SaleRecord(
        user_id=user_id,
        brand=brand,
        raw_size=raw_size,
        product_id=product_id,
        timestamp=parse_date(timestamp),
        returned=parse_bool(returned),
        category=category,
    )


def filter_sales(sales, start=None, end=None, kept_only=False):
    """
    Select sales inside a date window.
    
    Args:
        sales (iterable): SaleRecord objects
        start (date): First included date (None for unbounded)
        end (date): First excluded date (None for unbounded)
        kept_only (bool): Drop returned sales
        
    Returns:
        list: Matching sales, input order preserved
    """
    selected = []
    for sale in sales:
        if start is not None and sale.timestamp < start:
            continue
        if end is not None and sale.timestamp >= end:
            continue
        if kept_only and sale.returned:
            continue
        selected.append(sale)
    return selected


def sizes_by_brand(sales):
    """
    Collect the distinct raw sizes sold by each brand of each category.
    
    Returns:
        dict: Category-qualified brand -> sorted list of raw sizes
    """
    collected = {}
    for sale in sales:
        collected.setdefault(sale.catalog_brand, set()).add(sale.raw_size)
    return {brand: sorted(sizes) for brand, sizes in collected.items()}

# End of file #
