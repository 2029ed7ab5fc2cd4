"""
Integration tests for the sales size normalizer command line.

Each test runs cli.main() on a small synthetic catalog inside a temporary
directory and checks exit codes, interchange files and reports.
"""

import random
import sys
import tempfile

from datetime import date
from pathlib import Path

from runner_support import collect_tests, run_test_functions

import yaml

from sales_size_normalizer import cli
from sales_size_normalizer.frequency import SaleRecord, category_of
from sales_size_normalizer.output import read_report
from sales_size_normalizer.output.records import (
    read_cases,
    read_frequency,
    read_normalization,
    read_sales,
    read_size_types,
    write_normalization,
    write_sales,
)
from sales_size_normalizer.solvers import NormalizationMap


SMALL_RUN = {
    'seed': 3,
    'split_date': '2022-05-01',
    'synth': {'n_users': 400, 'n_brands': 4, 'months': 6},
    'gd': {'iterations_per_rate': 300},
}


def _write_config(directory, overrides=None):
    document = {**SMALL_RUN, **(overrides or {})}
    path = Path(directory) / 'config.yaml'
    with path.open('w', encoding='utf-8') as f:
        yaml.safe_dump(document, f)
    return str(path)


def _run_pipeline(directory, *extra):
    out_dir = Path(directory) / 'out'
    status = cli.main(['pipeline', '--synth', '--backend', 'both', '--config', _write_config(directory),
                   '--out-dir', str(out_dir), *extra])
    return status, out_dir


def test_pipeline_end_to_end():
    """synth -> infer-sizetypes -> build-freq -> normalize -> evaluate runs and writes every file."""
    with tempfile.TemporaryDirectory() as tmp:
        status, out_dir = _run_pipeline(tmp)
        assert status == cli.EXIT_OK, f"Exit code {status}"
        
        for name in ('sales.tsv', 'reference.tsv', 'sizetypes.tsv', 'silhouettes.tsv', 'freq.tsv',
                     'normmap.qp.tsv', 'normmap.gd.tsv', 'cases.tsv', 'evaluate_report.json'):
            assert (out_dir / name).exists(), f"Missing {name}"
        
        size_types = read_size_types(out_dir / 'sizetypes.tsv')
        learned = read_normalization(out_dir / 'normmap.qp.tsv')
        assert len(learned) == sum(len(size_type) for size_type in size_types.ordered())
        
        normalize = read_report(out_dir / 'normalize_report.json')
        assert normalize['backends']['qp']['kkt']['feasibility_violation'] <= 1e-6
        assert 'agreement' in normalize
        
        evaluation = read_report(out_dir / 'evaluate_report.json')
        qp = evaluation['maps']['qp']
        assert set(qp['periods']) == {'train', 'test'}
        assert 0.0 <= qp['overall']['coverage'] <= 1.0
        assert qp['mean_component_spearman'] is not None and qp['mean_component_spearman'] >= 0.5
        assert 'reference' in evaluation['maps']


def test_rerun_is_byte_identical():
    """Two runs with the same seed write identical data files."""
    with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
        status_a, out_a = _run_pipeline(first)
        status_b, out_b = _run_pipeline(second)
        assert status_a == status_b == cli.EXIT_OK
        for name in ('sales.tsv', 'sizetypes.tsv', 'freq.tsv', 'normmap.qp.tsv', 'normmap.gd.tsv', 'cases.tsv'):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), f"{name} differs"


def test_shuffled_sales_same_frequency_file():
    """Row order of the sales file does not change the frequency matrix file."""
    with tempfile.TemporaryDirectory() as tmp:
        config = _write_config(tmp)
        out_a = Path(tmp) / 'a'
        out_b = Path(tmp) / 'b'
        assert cli.main(['synth', '--config', config, '--out-dir', str(out_a)]) == cli.EXIT_OK
        
        sales = read_sales(out_a / 'sales.tsv')
        random.Random(5).shuffle(sales)
        shuffled = Path(tmp) / 'shuffled.tsv'
        write_sales(shuffled, sales)
        
        for out_dir, sales_path in ((out_a, out_a / 'sales.tsv'), (out_b, shuffled)):
            for command in ('infer-sizetypes', 'build-freq'):
                status = cli.main([command, '--config', config, '--out-dir', str(out_dir), '--sales', str(sales_path)])
                assert status == cli.EXIT_OK, f"{command} exited {status}"
        
        assert (out_a / 'sizetypes.tsv').read_bytes() == (out_b / 'sizetypes.tsv').read_bytes()
        assert (out_a / 'freq.tsv').read_bytes() == (out_b / 'freq.tsv').read_bytes()


def test_export_block():
    """export-block writes the block of two known size types and rejects unknown ids."""
    with tempfile.TemporaryDirectory() as tmp:
        status, out_dir = _run_pipeline(tmp)
        assert status == cli.EXIT_OK
        ids = [size_type.id for size_type in read_size_types(out_dir / 'sizetypes.tsv').ordered()]
        
        status = cli.main(['export-block', ids[0], ids[-1], '--out-dir', str(out_dir)])
        assert status == cli.EXIT_OK
        assert (out_dir / 'block.tsv').exists()
        
        status = cli.main(['export-block', ids[0], 'nobrand#9', '--out-dir', str(out_dir)])
        assert status == cli.EXIT_DATA


def _run_stages(config, out_dir, sales_path, reference_path):
    """infer-sizetypes, build-freq, normalize (QP) and evaluate on a given sales file."""
    common = ['--config', config, '--out-dir', str(out_dir), '--sales', str(sales_path), '--backend', 'qp']
    for command in ('infer-sizetypes', 'build-freq', 'normalize'):
        status = cli.main([command, *common])
        assert status == cli.EXIT_OK, f"{command} exited {status}"
    status = cli.main(['evaluate', *common, '--reference', str(reference_path)])
    assert status == cli.EXIT_OK, f"evaluate exited {status}"


def test_brand_first_sold_after_split_abstains():
    """A brand with no training sales gets no size type and its test cases abstain."""
    a_sizes, b_sizes, c_sizes = ("S", "M", "L"), ("8", "10", "12"), ("30", "32", "34")
    sales = []
    for i in range(10):
        sales += [SaleRecord(f"u{i}", "a", a_sizes[i % 3], "pa", date(2022, 3, 1)),
                  SaleRecord(f"u{i}", "b", b_sizes[i % 3], "pb", date(2022, 3, 1))]
    for i in range(6):
        sales += [SaleRecord(f"v{i}", "a", a_sizes[i % 3], "pa", date(2023, 3, 1)),
                  SaleRecord(f"v{i}", "c", c_sizes[i % 3], "pc", date(2023, 3, 1))]
    for i in range(4):
        sales += [SaleRecord(f"w{i}", "a", a_sizes[i % 3], "pa", date(2023, 3, 1)),
                  SaleRecord(f"w{i}", "b", b_sizes[i % 3], "pb", date(2023, 3, 1))]
    
    reference = NormalizationMap()
    for brand, sizes in (("a", a_sizes), ("b", b_sizes), ("c", c_sizes)):
        for m, raw in enumerate(sizes):
            reference.set((f"{brand}#0", raw), float(m))
    
    with tempfile.TemporaryDirectory() as tmp:
        sales_path = Path(tmp) / 'input.tsv'
        reference_path = Path(tmp) / 'truth.tsv'
        write_sales(sales_path, sales)
        write_normalization(reference_path, reference)
        out_dir = Path(tmp) / 'out'
        _run_stages(_write_config(tmp, {'split_date': '2023-01-01'}), out_dir, sales_path, reference_path)
        
        assert read_size_types(out_dir / 'sizetypes.tsv').brands() == ["a", "b"]
        learned = read_normalization(out_dir / 'normmap.tsv')
        assert learned.lookup("c", "30") is None
        
        qp = read_report(out_dir / 'evaluate_report.json')['maps']['qp']
        test = qp['periods']['test']
        assert (test['n_cases'], test['n_predicted']) == (10, 4)
        assert abs(test['coverage'] - 0.4) < 1e-12
        assert qp['periods']['train']['coverage'] == 1.0


def test_categories_are_kept_apart():
    """Shoes and tops of the same brands get separate size types, components and case quotas."""
    sizes = {
        ("shoes", "a"): ("7", "8", "9"),
        ("shoes", "b"): ("38", "39", "40"),
        ("tops", "a"): ("S", "M", "L"),
        ("tops", "b"): ("1", "2", "3"),
    }
    sales = [
        SaleRecord(f"u{i}", brand, options[i % 3], f"p-{category}-{brand}", date(2022, 3, 1), category=category)
        for i in range(9)
        for (category, brand), options in sizes.items()
    ]
    
    with tempfile.TemporaryDirectory() as tmp:
        sales_path = Path(tmp) / 'input.tsv'
        write_sales(sales_path, sales)
        out_dir = Path(tmp) / 'out'
        config = _write_config(tmp, {'split_date': None, 'evaluation': {'max_cases': 2}})
        _run_stages(config, out_dir, sales_path, out_dir / 'normmap.tsv')
        
        size_types = read_size_types(out_dir / 'sizetypes.tsv')
        assert size_types.brands() == ["shoes::a", "shoes::b", "tops::a", "tops::b"]
        
        matrix = read_frequency(out_dir / 'freq.tsv', size_types)
        assert matrix.nnz() > 0
        for (key_a, key_b), _ in matrix.items():
            assert category_of(key_a[0]) == category_of(key_b[0])
        
        learned = read_normalization(out_dir / 'normmap.tsv')
        labels = {category: {label for type_id, label in learned.components.items() if category_of(type_id) == category}
                  for category in ("shoes", "tops")}
        assert not labels["shoes"] & labels["tops"]
        
        cases = read_cases(out_dir / 'cases.tsv')
        assert sorted(case.category for case in cases) == ["shoes", "shoes", "tops", "tops"]
        
        evaluation = read_report(out_dir / 'evaluate_report.json')
        assert set(evaluation['maps']['qp']['categories']) == {"shoes", "tops"}


def test_default_synthetic_catalog_is_recovered():
    """On the default synthetic catalog the learned map ranks like the truth and predicts nearly as well."""
    with tempfile.TemporaryDirectory() as tmp:
        config = _write_config(tmp, {'seed': 0, 'split_date': '2023-01-01', 'synth': {}})
        out_dir = Path(tmp) / 'out'
        status = cli.main(['pipeline', '--synth', '--backend', 'qp', '--config', config, '--out-dir', str(out_dir)])
        assert status == cli.EXIT_OK, f"Exit code {status}"
        
        synth = read_report(out_dir / 'synth_report.json')
        assert (synth['n_users'], synth['config']['n_brands']) == (10000, 12)
        
        maps = read_report(out_dir / 'evaluate_report.json')['maps']
        components = maps['qp']['component_spearman']
        assert components
        for label, value in components.items():
            assert value['spearman'] >= 0.95, f"Component {label}: {value}"
        
        learned = maps['qp']['overall']['accuracy']
        truth = maps['reference']['overall']['accuracy']
        assert abs(learned - truth) <= 0.05, f"learned {learned:.3f}, reference {truth:.3f}"


def test_non_positive_gap_is_usage_error():
    """optimize.gap <= 0 fails before any stage runs."""
    with tempfile.TemporaryDirectory() as tmp:
        config = _write_config(tmp, {'optimize': {'gap': 0.0}})
        out_dir = Path(tmp) / 'out'
        assert cli.main(['pipeline', '--synth', '--config', config, '--out-dir', str(out_dir)]) == cli.EXIT_USAGE
        assert not (out_dir / 'sales.tsv').exists()


def test_unknown_config_key_is_usage_error():
    """A misspelled config key is rejected."""
    with tempfile.TemporaryDirectory() as tmp:
        config = _write_config(tmp, {'optimise': {'gap': 0.2}})
        assert cli.main(['normalize', '--config', config, '--out-dir', tmp]) == cli.EXIT_USAGE


def test_bad_arguments_are_usage_errors():
    """Unknown commands and backends exit with the usage code."""
    assert cli.main(['shrink']) == cli.EXIT_USAGE
    assert cli.main(['normalize', '--backend', 'simplex']) == cli.EXIT_USAGE


def test_empty_sales_is_data_error():
    """An empty sales file stops infer-sizetypes with the data error code."""
    with tempfile.TemporaryDirectory() as tmp:
        sales_path = Path(tmp) / 'sales.tsv'
        write_sales(sales_path, [])
        assert cli.main(['infer-sizetypes', '--sales', str(sales_path), '--out-dir', tmp]) == cli.EXIT_DATA


def test_missing_sales_is_data_error():
    """A missing sales file is a data error."""
    with tempfile.TemporaryDirectory() as tmp:
        assert cli.main(['infer-sizetypes', '--sales', str(Path(tmp) / 'nope.tsv'), '--out-dir', tmp]) == cli.EXIT_DATA


def run_tests():
    """Run all integration tests and return results."""
    return run_test_functions("Testing Command Line Pipeline", collect_tests(globals()))


def main():
    """Main test runner."""
    success, results = run_tests()
    return 0 if success else 1


if __name__ == "__main__":
    sys.exit(main())

# End of file #
