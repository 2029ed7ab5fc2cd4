"""
sales_size_normalizer/synth/generator.py

Synthetic sales with a known ground-truth normalization.

Users carry a latent size on one universal scale. Every brand places its
size grids on that scale with a random affine map, and a purchase takes
the brand size closest to the user's latent size plus fit noise. Sales
whose size misses the latent size by more than one grid step may be
returned.
"""

import sys

from dataclasses import dataclass, field
from datetime import date

import numpy as np

from sales_size_normalizer.errors import ConfigInvalid
from sales_size_normalizer.frequency.sales import SaleRecord
from sales_size_normalizer.sizetypes.inference import SIZE_TYPE_ID_SEPARATOR, SizeType
from sales_size_normalizer.solvers.base import NormalizationMap


ALPHA_TEMPLATE = 'alpha'
NUMERIC_TEMPLATE = 'numeric'
MODIFIER_TEMPLATE = 'numeric_modifier'
TEMPLATE_KINDS = (ALPHA_TEMPLATE, NUMERIC_TEMPLATE, MODIFIER_TEMPLATE)

# Letter grids in ascending order; brands pick one spelling
ALPHA_SPELLINGS = [
    ('XS', 'S', 'M', 'L', 'XL', 'XXL'),
    ('XS', 'SM', 'MD', 'LG', 'XL', 'XXL'),
    ('Extra Small', 'Small', 'Medium', 'Large', 'Extra Large', 'Extra Extra Large'),
]
NUMERIC_SIZES = ('0', '2', '4', '6', '8', '10', '12', '14')
MODIFIER_GRIDS = {
    'petite': ('2P', '4P', '6P', '8P', '10P', '12P'),
    'wide': ('6W', '8W', '10W', '12W', '14W'),
}

# Canonical placement of each grid on the latent scale before the brand's affine map
CANONICAL_CENTER = {
    ALPHA_TEMPLATE: 0.0,
    NUMERIC_TEMPLATE: 0.0,
    'petite': -0.4,
    'wide': 0.3,
}
CANONICAL_SPAN = 4.0


@dataclass
class SynthConfig:
    """Synthetic generator settings."""
    
    n_users: int = 10000
    n_brands: int = 12
    templates: tuple = TEMPLATE_KINDS
    products_per_size_type: int = 3
    latent_mean: float = 0.0
    latent_std: float = 1.0
    offset_range: tuple = (-0.3, 0.3)
    scale_range: tuple = (0.85, 1.15)
    mean_purchases: float = 4.0
    mean_sessions: float = 2.0
    fit_noise_std: float = 0.2
    return_probability: float = 0.3
    start_date: date = field(default_factory=lambda: date(2022, 1, 1))
    months: int = 24
    seed: int = 0
    
    def validate(self):
        """
        Check value ranges.
        
        Raises:
            ConfigInvalid: If a value is out of range
        """
        for name in ('n_users', 'n_brands', 'products_per_size_type', 'months'):
            if getattr(self, name) < 1:
                raise ConfigInvalid(f"synth.{name} must be at least 1, got {getattr(self, name)}")
        for name in ('mean_purchases', 'mean_sessions'):
            if getattr(self, name) < 1:
                raise ConfigInvalid(f"synth.{name} must be at least 1, got {getattr(self, name)}")
        for name in ('latent_std', 'fit_noise_std'):
            if getattr(self, name) < 0:
                raise ConfigInvalid(f"synth.{name} must be non-negative, got {getattr(self, name)}")
        if not 0.0 <= self.return_probability <= 1.0:
            raise ConfigInvalid(f"synth.return_probability must be in [0, 1], got {self.return_probability}")
        for name in ('offset_range', 'scale_range'):
            low, high = getattr(self, name)
            if low > high:
                raise ConfigInvalid(f"synth.{name} is empty: {low} > {high}")
        if self.scale_range[0] <= 0:
            raise ConfigInvalid(f"synth.scale_range must be positive, got {self.scale_range}")
        unknown = set(self.templates) - set(TEMPLATE_KINDS)
        if not self.templates or unknown:
            raise ConfigInvalid(f"synth.templates must be a non-empty subset of {TEMPLATE_KINDS}, got {self.templates}")
        return self


@dataclass
class BrandGrid:
    """One intended size type of a brand and its placement on the latent scale."""
    
    brand: str
    name: str
    sizes: tuple
    values: tuple
    
    @property
    def step(self):
        """Distance between adjacent sizes."""
        return self.values[1] - self.values[0] if len(self.values) > 1 else 0.0
    
    @property
    def size_type_id(self):
        return f"{self.brand}{SIZE_TYPE_ID_SEPARATOR}{self.name}"
    
    def nearest(self, target):
        """Index of the size whose value is closest to target."""
        return int(np.argmin(np.abs(np.asarray(self.values) - target)))


@dataclass
class GroundTruth:
    """True latent value of every generated brand size."""
    
    grids: list
    user_latent: dict
    
    @property
    def true_value(self):
        """(brand, raw_size) -> latent value."""
        return {
            (grid.brand, raw_size): value
            for grid in self.grids
            for raw_size, value in zip(grid.sizes, grid.values)
        }
    
    def expected_size_types(self):
        """
        Intended size types per brand.
        
        Returns:
            dict: brand -> list of size tuples in intended order
        """
        expected = {}
        for grid in self.grids:
            expected.setdefault(grid.brand, []).append(grid.sizes)
        return expected
    
    def size_types(self):
        """Intended size types as SizeType objects."""
        return [SizeType(id=grid.size_type_id, brand=grid.brand, sizes=grid.sizes) for grid in self.grids]
    
    def to_normalization_map(self):
        """Ground truth as a reference map (one component)."""
        reference = NormalizationMap()
        for grid in self.grids:
            for raw_size, value in zip(grid.sizes, grid.values):
                reference.set((grid.size_type_id, raw_size), value, 0)
        return reference


def _place(rng, cfg, brand, name, center_key, sizes):
    """Affine placement of a grid for one brand."""
    canonical = np.linspace(-CANONICAL_SPAN / 2, CANONICAL_SPAN / 2, len(sizes)) + CANONICAL_CENTER[center_key]
    offset = rng.uniform(*cfg.offset_range)
    scale = rng.uniform(*cfg.scale_range)
    values = tuple(float(value) for value in cfg.latent_mean + offset + scale * canonical)
    return BrandGrid(brand=brand, name=name, sizes=tuple(sizes), values=values)


def brand_grids(rng, cfg, brand_index):
    """
    Size grids of one brand.
    
    Templates rotate with the brand index so every alpha spelling and
    modifier grid appears once the catalog has a few brands.
    """
    brand = f"brand{brand_index:02d}"
    grids = []
    if ALPHA_TEMPLATE in cfg.templates:
        spelling = ALPHA_SPELLINGS[brand_index % len(ALPHA_SPELLINGS)]
        grids.append(_place(rng, cfg, brand, ALPHA_TEMPLATE, ALPHA_TEMPLATE, spelling))
    if NUMERIC_TEMPLATE in cfg.templates:
        grids.append(_place(rng, cfg, brand, NUMERIC_TEMPLATE, NUMERIC_TEMPLATE, NUMERIC_SIZES))
    if MODIFIER_TEMPLATE in cfg.templates:
        choice = brand_index % 4
        names = [[], ['petite'], ['wide'], ['petite', 'wide']][choice]
        for name in names:
            grids.append(_place(rng, cfg, brand, name, name, MODIFIER_GRIDS[name]))
    if not grids:
        grids.append(_place(rng, cfg, brand, NUMERIC_TEMPLATE, NUMERIC_TEMPLATE, NUMERIC_SIZES))
    return grids


def _month_start(start, month_offset):
    """First day of the month month_offset months after start."""
    total = start.year * 12 + (start.month - 1) + month_offset
    return date(total // 12, total % 12 + 1, 1)


def generate(cfg, verbose=False):
    """
    Generate synthetic sales and their ground truth.
    
    Args:
        cfg (SynthConfig): Generator settings
        verbose (bool): Print counts to stderr
        
    Returns:
        tuple: (list of SaleRecord, GroundTruth)
        
    Raises:
        ConfigInvalid: If cfg is out of range
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    
    grids = []
    for brand_index in range(cfg.n_brands):
        grids.extend(brand_grids(rng, cfg, brand_index))
    
    products = [
        (grid, f"{grid.brand}-{grid.name}-{k}")
        for grid in grids
        for k in range(cfg.products_per_size_type)
    ]
    
    latent = rng.normal(cfg.latent_mean, cfg.latent_std, cfg.n_users)
    user_latent = {}
    sales = []
    
    for user_index in range(cfg.n_users):
        user_id = f"u{user_index:05d}"
        user_latent[user_id] = float(latent[user_index])
        
        n_sessions = 1 + rng.poisson(cfg.mean_sessions - 1)
        session_months = rng.integers(0, cfg.months, n_sessions)
        n_purchases = 1 + rng.poisson(cfg.mean_purchases - 1)
        
        for _ in range(n_purchases):
            grid, product_id = products[rng.integers(len(products))]
            target = latent[user_index] + (rng.normal(0.0, cfg.fit_noise_std) if cfg.fit_noise_std > 0 else 0.0)
            chosen = grid.nearest(target)
            
            misfit = abs(grid.values[chosen] - latent[user_index])
            returned = bool(misfit > grid.step and rng.random() < cfg.return_probability)
            
            month = _month_start(cfg.start_date, int(session_months[rng.integers(n_sessions)]))
            timestamp = month.replace(day=int(rng.integers(1, 29)))
            sales.append(SaleRecord(
                user_id=user_id,
                brand=grid.brand,
                raw_size=grid.sizes[chosen],
                product_id=product_id,
                timestamp=timestamp,
                returned=returned,
            ))
    
    if verbose:
        n_returned = sum(sale.returned for sale in sales)
        print(f"Generated {len(sales)} sales ({n_returned} returned) for {cfg.n_users} users "
              f"across {len(grids)} size types", file=sys.stderr)
    
    return sales, GroundTruth(grids=grids, user_latent=user_latent)

# End of file #
