"""
sales_size_normalizer/config.py

Pipeline configuration: defaults, YAML config file and command-line
overrides (flags > file > defaults).
"""

from dataclasses import dataclass, field, fields
from datetime import date
from pathlib import Path

import yaml

from sales_size_normalizer.errors import ConfigInvalid
from sales_size_normalizer.sizetypes.partitioning import (
    DEFAULT_BETA_SOFTMAX,
    DEFAULT_EPSILON_STD,
    DEFAULT_MAX_CLUSTERS,
)
from sales_size_normalizer.solvers.base import DEFAULT_GAP, DEFAULT_REG_COEFF
from sales_size_normalizer.solvers.gd_solver import (
    DEFAULT_ALPHA,
    DEFAULT_BETA_HINGE,
    DEFAULT_INIT_NOISE,
    DEFAULT_ITERATIONS_PER_RATE,
    DEFAULT_LEARNING_RATES,
    GDState,
)
from sales_size_normalizer.solvers.qp_solver import DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE
from sales_size_normalizer.synth.generator import SynthConfig


BACKEND_CHOICES = ('qp', 'gd', 'both')
MASS_MODES = ('float', 'rational')

DEFAULT_FILE_NAMES = {
    'sales': 'sales.tsv',
    'reference': 'reference.tsv',
    'size_types': 'sizetypes.tsv',
    'silhouettes': 'silhouettes.tsv',
    'frequency': 'freq.tsv',
    'normalization': 'normmap.tsv',
    'cases': 'cases.tsv',
    'traces': 'traces.tsv',
    'block': 'block.tsv',
}


@dataclass
class SizeTypeSection:
    beta_softmax: float = DEFAULT_BETA_SOFTMAX
    epsilon_std: float = DEFAULT_EPSILON_STD
    max_clusters: int = DEFAULT_MAX_CLUSTERS
    strict: bool = False


@dataclass
class FrequencySection:
    mass_mode: str = 'float'
    max_skip_fraction: float = 0.5


@dataclass
class OptimizeSection:
    backend: str = 'qp'
    gap: float = DEFAULT_GAP
    reg_coeff: float = DEFAULT_REG_COEFF
    include_same_type: bool = False
    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    strict_convergence: bool = False


@dataclass
class GDSection:
    alpha: float = DEFAULT_ALPHA
    beta_hinge: float = DEFAULT_BETA_HINGE
    learning_rates: tuple = DEFAULT_LEARNING_RATES
    iterations_per_rate: int = DEFAULT_ITERATIONS_PER_RATE
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    init_noise: float = DEFAULT_INIT_NOISE


@dataclass
class EvaluationSection:
    max_cases: int = None
    abstain_cross_component: bool = False
    min_component_keys: int = 3


@dataclass
class PathsSection:
    out_dir: str = 'out'
    sales: str = None
    reference: str = None
    size_types: str = None
    silhouettes: str = None
    frequency: str = None
    normalization: str = None
    cases: str = None
    traces: str = None
    block: str = None


SECTIONS = {
    'sizetype': SizeTypeSection,
    'frequency': FrequencySection,
    'optimize': OptimizeSection,
    'gd': GDSection,
    'evaluation': EvaluationSection,
    'synth': SynthConfig,
    'paths': PathsSection,
}


@dataclass
class PipelineConfig:
    """
    Every setting of every stage.
    
    split_date separates the training period (sales before it feed the
    frequency matrix) from the test period used in evaluation.
    """
    
    seed: int = 0
    split_date: date = None
    verbose: bool = False
    debug: bool = False
    sizetype: SizeTypeSection = field(default_factory=SizeTypeSection)
    frequency: FrequencySection = field(default_factory=FrequencySection)
    optimize: OptimizeSection = field(default_factory=OptimizeSection)
    gd: GDSection = field(default_factory=GDSection)
    evaluation: EvaluationSection = field(default_factory=EvaluationSection)
    synth: SynthConfig = field(default_factory=SynthConfig)
    paths: PathsSection = field(default_factory=PathsSection)
    
    @classmethod
    def from_dict(cls, data):
        """
        Build a config from a (YAML-loaded) dictionary.
        
        Raises:
            ConfigInvalid: On unknown keys or badly typed values
        """
        data = dict(data or {})
        config = cls()
        for key, value in data.items():
            if key in SECTIONS:
                setattr(config, key, _build_section(key, SECTIONS[key], value))
            elif key in ('seed', 'verbose', 'debug'):
                setattr(config, key, value)
            elif key == 'split_date':
                config.split_date = _parse_date(key, value)
            else:
                raise ConfigInvalid(f"Unknown config key: {key}")
        return config
    
    def apply_overrides(self, seed=None, backend=None, out_dir=None, verbose=None, debug=None):
        """Apply command-line flags on top of file values."""
        if seed is not None:
            self.seed = seed
        if backend is not None:
            self.optimize.backend = backend
        if out_dir is not None:
            self.paths.out_dir = out_dir
        if verbose:
            self.verbose = True
        if debug:
            self.debug = True
        return self
    
    def validate(self):
        """
        Check every value against its documented range.
        
        Raises:
            ConfigInvalid: On the first value out of range
        """
        if self.sizetype.beta_softmax < 0:
            raise ConfigInvalid(f"sizetype.beta_softmax must be non-negative, got {self.sizetype.beta_softmax}")
        if self.sizetype.epsilon_std < 0:
            raise ConfigInvalid(f"sizetype.epsilon_std must be non-negative, got {self.sizetype.epsilon_std}")
        if self.sizetype.max_clusters < 2:
            raise ConfigInvalid(f"sizetype.max_clusters must be at least 2, got {self.sizetype.max_clusters}")
        
        if self.frequency.mass_mode not in MASS_MODES:
            raise ConfigInvalid(f"frequency.mass_mode must be one of {MASS_MODES}, got {self.frequency.mass_mode!r}")
        if not 0.0 <= self.frequency.max_skip_fraction <= 1.0:
            raise ConfigInvalid(f"frequency.max_skip_fraction must be in [0, 1], got {self.frequency.max_skip_fraction}")
        
        if self.optimize.backend not in BACKEND_CHOICES:
            raise ConfigInvalid(f"optimize.backend must be one of {BACKEND_CHOICES}, got {self.optimize.backend!r}")
        if not self.optimize.gap > 0:
            raise ConfigInvalid(f"optimize.gap must be positive, got {self.optimize.gap}")
        if self.optimize.reg_coeff < 0:
            raise ConfigInvalid(f"optimize.reg_coeff must be non-negative, got {self.optimize.reg_coeff}")
        if not self.optimize.tolerance > 0 or self.optimize.max_iterations < 1:
            raise ConfigInvalid("optimize.tolerance must be positive and optimize.max_iterations at least 1")
        
        self.gd_state()
        
        if self.evaluation.max_cases is not None and self.evaluation.max_cases < 0:
            raise ConfigInvalid(f"evaluation.max_cases must be non-negative, got {self.evaluation.max_cases}")
        
        self.synth_config().validate()
        return self
    
    def gd_state(self):
        """GD hyperparameters as a fresh GDState."""
        return GDState(
            alpha=self.gd.alpha,
            beta_hinge=self.gd.beta_hinge,
            learning_rates=tuple(self.gd.learning_rates),
            iterations_per_rate=self.gd.iterations_per_rate,
            beta1=self.gd.beta1,
            beta2=self.gd.beta2,
            adam_epsilon=self.gd.adam_epsilon,
            init_noise=self.gd.init_noise,
            seed=self.seed,
        )
    
    def synth_config(self):
        """Synth settings with the global seed."""
        values = {f.name: getattr(self.synth, f.name) for f in fields(SynthConfig)}
        values['seed'] = self.seed
        return SynthConfig(**values)
    
    def path(self, name, suffix=None):
        """
        Path of an interchange file: the explicit path when configured,
        otherwise the default file name inside out_dir.
        
        Args:
            name (str): Key of DEFAULT_FILE_NAMES
            suffix (str): Optional tag inserted before the extension
                (e.g. 'qp' gives normmap.qp.tsv)
        """
        explicit = getattr(self.paths, name)
        if explicit is not None and suffix is None:
            return Path(explicit)
        
        base = Path(explicit) if explicit is not None else Path(self.paths.out_dir) / DEFAULT_FILE_NAMES[name]
        if suffix is None:
            return base
        return base.with_name(f"{base.stem}.{suffix}{base.suffix}")
    
    def report_path(self, stage):
        """Run report of a stage inside out_dir."""
        return Path(self.paths.out_dir) / f"{stage}_report.json"
    
    def to_dict(self):
        """Plain dictionary for run reports."""
        document = {'seed': self.seed, 'split_date': self.split_date}
        for name in SECTIONS:
            section = getattr(self, name)
            document[name] = {f.name: getattr(section, f.name) for f in fields(section)}
        return document


def _parse_date(key, value):
    if value is None or isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except ValueError:
        raise ConfigInvalid(f"{key} must be an ISO-8601 date, got {value!r}")


def _build_section(name, section_class, values):
    """Instantiate one config section, rejecting unknown keys."""
    if values is None:
        return section_class()
    if not isinstance(values, dict):
        raise ConfigInvalid(f"Config section '{name}' must be a mapping")
    
    known = {f.name for f in fields(section_class)}
    unknown = set(values) - known
    if unknown:
        raise ConfigInvalid(f"Unknown keys in config section '{name}': {', '.join(sorted(unknown))}")
    
    values = dict(values)
    for key, value in values.items():
        if isinstance(value, list):
            values[key] = tuple(value)
    if 'start_date' in values:
        values['start_date'] = _parse_date(f"{name}.start_date", values['start_date'])
    try:
        return section_class(**values)
    except (TypeError, ValueError) as e:
        raise ConfigInvalid(f"Config section '{name}': {e}")


def load_config(path=None):
    """
    Load a YAML config file (defaults only when path is None).
    
    Raises:
        ConfigInvalid: If the file is unreadable, not YAML or has unknown keys
    """
    if path is None:
        return PipelineConfig()
    
    path = Path(path)
    try:
        with path.open('r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigInvalid(f"Cannot load config {path}: {e}")
    
    if data is not None and not isinstance(data, dict):
        raise ConfigInvalid(f"Config {path} must contain a mapping")
    return PipelineConfig.from_dict(data)

# End of file #
