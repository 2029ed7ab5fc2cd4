"""
Command line interface for the sales size normalizer.
File: sales_size_normalizer/cli.py

Runs the pipeline stages (synth, infer-sizetypes, build-freq, normalize,
evaluate) one at a time or end to end, exchanging tagged TSV files
through an output directory.
"""

import sys
import argparse

from sales_size_normalizer import debug as debug_views
from sales_size_normalizer.config import BACKEND_CHOICES, load_config
from sales_size_normalizer.errors import (
    ConfigInvalid,
    EmptyInput,
    MissingKey,
    NonFiniteLoss,
    PartitionDefect,
    RecordFormatError,
    SolverNotConverged,
    UnknownSizeType,
)
from sales_size_normalizer.evaluation.cases import product_size_runs, sample_test_cases
from sales_size_normalizer.evaluation.scoring import (
    evaluate,
    evaluate_by_category,
    evaluate_by_period,
    per_component_spearman,
)
from sales_size_normalizer.frequency.matrix import build_frequency_matrix
from sales_size_normalizer.frequency.sales import category_of, filter_sales, sizes_by_brand
from sales_size_normalizer.output.records import (
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
from sales_size_normalizer.output.reports import write_report
from sales_size_normalizer.sizetypes.inference import SizeTypeInferencer
from sales_size_normalizer.solvers import Problem, agreement_summary, create_solver, kkt_report
from sales_size_normalizer.synth.generator import generate


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_SOLVER = 3

DATA_ERRORS = (EmptyInput, PartitionDefect, UnknownSizeType, MissingKey, RecordFormatError,
               FileNotFoundError, IOError)
SOLVER_ERRORS = (NonFiniteLoss, SolverNotConverged)


class PipelineArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with EXIT_USAGE."""
    
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def progress(config, message):
    """Print a progress line to stderr in verbose mode."""
    if config.verbose:
        print(message, file=sys.stderr)


def backends_of(config):
    """Backends selected by the config."""
    return ['qp', 'gd'] if config.optimize.backend == 'both' else [config.optimize.backend]


def normalization_path(config, backend):
    """Map file of one backend (suffixed by backend name when both run)."""
    return config.path('normalization', backend if config.optimize.backend == 'both' else None)


def load_sales(config):
    """Read the sales file and refuse an empty one."""
    path = config.path('sales')
    sales = read_sales(path)
    if not sales:
        raise EmptyInput(f"No sales records in {path}")
    progress(config, f"Read {len(sales)} sales from {path}")
    return sales


def cmd_synth(config, args=None):
    """Generate synthetic sales plus the ground-truth reference map."""
    sales, truth = generate(config.synth_config(), verbose=config.verbose)
    write_sales(config.path('sales'), sales)
    write_normalization(config.path('reference'), truth.to_normalization_map())
    
    write_report(config.report_path('synth'), {
        'stage': 'synth',
        'n_sales': len(sales),
        'n_returned': sum(sale.returned for sale in sales),
        'n_users': len(truth.user_latent),
        'n_size_types': len(truth.grids),
        'config': config.to_dict()['synth'],
        'seed': config.seed,
    })
    progress(config, f"Wrote {len(sales)} sales to {config.path('sales')}")
    return EXIT_OK


def cmd_infer_sizetypes(config, args=None):
    """Infer size types for every brand sold in the training period."""
    sales = load_sales(config)
    training = filter_sales(sales, end=config.split_date)
    if not training:
        raise EmptyInput(f"No sales before {config.split_date} to infer size types from")
    inferencer = SizeTypeInferencer(
        beta_softmax=config.sizetype.beta_softmax,
        epsilon_std=config.sizetype.epsilon_std,
        max_clusters=config.sizetype.max_clusters,
        strict=config.sizetype.strict,
        debug=config.debug,
    )
    size_type_map = inferencer.infer_catalog(sizes_by_brand(training))
    
    for warning in inferencer.warnings:
        print(f"Warning: {warning}; split into single-size types", file=sys.stderr)
    
    write_size_types(config.path('size_types'), size_type_map)
    write_silhouettes(config.path('silhouettes'), inferencer.traces)
    write_report(config.report_path('infer_sizetypes'), {
        'stage': 'infer-sizetypes',
        'n_sales': len(training),
        'split_date': config.split_date,
        'n_brands': len(size_type_map.brands()),
        'n_categories': len({category_of(brand) for brand in size_type_map.brands()}),
        'n_size_types': len(size_type_map),
        'warnings': inferencer.warnings,
    })
    
    if config.debug:
        debug_views.show_clustering(inferencer.traces, out=sys.stderr)
        debug_views.show_size_types(size_type_map, out=sys.stderr)
    progress(config, f"Wrote {len(size_type_map)} size types to {config.path('size_types')}")
    return EXIT_OK


def cmd_build_freq(config, args=None):
    """Build the co-purchase frequency matrix from training-period sales."""
    sales = load_sales(config)
    size_type_map = read_size_types(config.path('size_types'))
    training = filter_sales(sales, end=config.split_date)
    
    matrix = build_frequency_matrix(training, size_type_map,
                                    exact=config.frequency.mass_mode == 'rational',
                                    verbose=config.verbose)
    stats = matrix.stats
    print(f"Skipped {stats.returned + stats.unresolved} of {stats.records_read} sales "
          f"({stats.returned} returned, {stats.unresolved} without a size type)", file=sys.stderr)
    
    if matrix.nnz() == 0:
        print("Warning: frequency matrix is empty; no user has two kept purchases", file=sys.stderr)
    if stats.skip_fraction > config.frequency.max_skip_fraction:
        print(f"Error: {stats.skip_fraction:.1%} of kept sales could not be resolved to a size type "
              f"(limit {config.frequency.max_skip_fraction:.0%})", file=sys.stderr)
        return EXIT_DATA
    
    write_frequency(config.path('frequency'), matrix)
    write_report(config.report_path('build_freq'), {
        'stage': 'build-freq',
        'stats': stats.to_dict(),
        'entries': matrix.nnz(),
        'total_mass': matrix.total_mass(),
        'split_date': config.split_date,
    })
    progress(config, f"Wrote {matrix.nnz()} entries to {config.path('frequency')}")
    return EXIT_OK


def evaluation_cases(config, sales):
    """Sample test cases over all sales (size runs come from all sales too)."""
    return sample_test_cases(sales, max_cases=config.evaluation.max_cases, seed=config.seed,
                             size_runs=product_size_runs(sales))


def cmd_normalize(config, args=None):
    """Solve for normalized values with the selected backend(s)."""
    size_type_map = read_size_types(config.path('size_types'))
    matrix = read_frequency(config.path('frequency'), size_type_map)
    problem = Problem(matrix, size_type_map.ordered(), gap=config.optimize.gap,
                      reg_coeff=config.optimize.reg_coeff,
                      include_same_type=config.optimize.include_same_type)
    
    report = {'stage': 'normalize', 'backends': {}}
    maps = {}
    for backend in backends_of(config):
        if backend == 'qp':
            solver = create_solver('qp', tolerance=config.optimize.tolerance,
                                   max_iterations=config.optimize.max_iterations,
                                   strict_convergence=config.optimize.strict_convergence,
                                   verbose=config.verbose)
        else:
            solver = create_solver('gd', state=config.gd_state(), verbose=config.verbose, debug=config.debug)
        
        result, info = solver.solve(problem)
        maps[backend] = result
        entry = info.to_dict()
        if backend == 'qp':
            entry['kkt'] = kkt_report(result, problem).to_dict()
        report['backends'][backend] = entry
        
        write_normalization(normalization_path(config, backend), result)
        if config.debug:
            debug_views.show_solve_summary(info, out=sys.stderr)
        progress(config, f"Wrote {len(result)} normalized sizes to {normalization_path(config, backend)}")
    
    if len(maps) == 2:
        cases = []
        if config.path('sales').exists():
            cases = evaluation_cases(config, read_sales(config.path('sales')))
            cases = [case for case in cases if config.split_date is None or case.month >= config.split_date.strftime('%Y-%m')]
        summary = agreement_summary(maps['qp'], maps['gd'], cases, config.evaluation.abstain_cross_component)
        report['agreement'] = summary
        print(f"Backend agreement: spearman {summary['spearman']}, "
              f"predictions {summary['prediction_agreement']} over {summary['n_cases']} cases", file=sys.stderr)
    
    write_report(config.report_path('normalize'), report)
    return EXIT_OK


def _mean(values):
    values = [value for value in values if value is not None]
    return sum(values) / len(values) if values else None


def cmd_evaluate(config, args=None):
    """Score learned maps against the reference map on sampled test cases."""
    reference_path = getattr(args, 'reference', None) or config.path('reference')
    sales = load_sales(config)
    reference = read_normalization(reference_path)
    abstain = config.evaluation.abstain_cross_component
    
    cases = evaluation_cases(config, sales)
    write_cases(config.path('cases'), cases)
    
    periods = None
    if config.split_date is not None:
        periods = {'train': (None, config.split_date), 'test': (config.split_date, None)}
    
    report = {'stage': 'evaluate', 'n_cases': len(cases), 'maps': {}}
    candidates = [(backend, read_normalization(normalization_path(config, backend))) for backend in backends_of(config)]
    candidates.append(('reference', reference))
    
    for name, normalization in candidates:
        if periods:
            by_period = evaluate_by_period(normalization, cases, reference, periods, abstain)
            headline = by_period['test']
        else:
            by_period = {}
            headline = evaluate(normalization, cases, reference, abstain)
        
        entry = {
            'overall': headline.to_dict(),
            'periods': {period: period_report.to_dict() for period, period_report in by_period.items()},
        }
        if len({case.category for case in cases}) > 1:
            headline_cases = cases if not periods else [
                case for case in cases if case.month >= config.split_date.strftime('%Y-%m')
            ]
            entry['categories'] = {
                category: category_report.to_dict()
                for category, category_report in evaluate_by_category(
                    normalization, headline_cases, reference, abstain).items()
            }
        if name != 'reference':
            components = per_component_spearman(normalization, reference, config.evaluation.min_component_keys)
            entry['component_spearman'] = {str(label): value for label, value in components.items()}
            entry['mean_component_spearman'] = _mean(value['spearman'] for value in components.values())
            write_traces(config.path('traces', name if len(candidates) > 2 else None), headline)
        report['maps'][name] = entry
        
        accuracy = headline.accuracy
        print(f"{name}: coverage {headline.coverage:.3f}, accuracy "
              f"{'n/a' if accuracy is None else f'{accuracy:.3f}'} on {headline.n_cases} cases", file=sys.stderr)
    
    write_report(config.report_path('evaluate'), report)
    return EXIT_OK


def cmd_export_block(config, args):
    """Write the co-purchase block between two size types."""
    size_type_map = read_size_types(config.path('size_types'))
    matrix = read_frequency(config.path('frequency'), size_type_map)
    write_block(config.path('block'), matrix, args.size_type_a, args.size_type_b)
    if config.debug:
        debug_views.show_block(matrix, args.size_type_a, args.size_type_b, out=sys.stderr)
    progress(config, f"Wrote block {args.size_type_a} x {args.size_type_b} to {config.path('block')}")
    return EXIT_OK


def cmd_pipeline(config, args):
    """Run every stage in order, stopping at the first failure."""
    stages = [cmd_infer_sizetypes, cmd_build_freq, cmd_normalize]
    if getattr(args, 'synth', False):
        stages.insert(0, cmd_synth)
    
    for stage in stages:
        status = stage(config, args)
        if status != EXIT_OK:
            return status
    
    if not config.path('reference').exists():
        print(f"Warning: no reference map at {config.path('reference')}; skipping evaluation", file=sys.stderr)
        return EXIT_OK
    return cmd_evaluate(config, args)


COMMANDS = {
    'synth': cmd_synth,
    'infer-sizetypes': cmd_infer_sizetypes,
    'build-freq': cmd_build_freq,
    'normalize': cmd_normalize,
    'evaluate': cmd_evaluate,
    'export-block': cmd_export_block,
    'pipeline': cmd_pipeline,
}


def create_argument_parser():
    """Create and configure the argument parser."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='YAML config file (flags override its values)')
    common.add_argument('--seed', type=int, help='Global random seed')
    common.add_argument('--backend', choices=BACKEND_CHOICES, help='Normalization backend (default: qp)')
    common.add_argument('--out-dir', help='Directory for interchange files and reports')
    common.add_argument('--sales', help='Sales file (default: <out-dir>/sales.tsv)')
    common.add_argument('--verbose', '-v', action='store_true', help='Show stage progress on stderr')
    common.add_argument('--debug', action='store_true', help='Show clustering and solver diagnostics on stderr')
    
    parser = PipelineArgumentParser(
        prog='sales_size_normalizer',
        description="Map brand size strings onto one normalized size scale from co-purchase data",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Synthetic sales plus ground truth, then the whole pipeline
  python -m sales_size_normalizer pipeline --synth --out-dir run1 -v
  
  # Stage by stage on real sales
  python -m sales_size_normalizer infer-sizetypes --sales sales.tsv --out-dir run2
  python -m sales_size_normalizer build-freq --sales sales.tsv --out-dir run2
  python -m sales_size_normalizer normalize --backend both --out-dir run2
  python -m sales_size_normalizer evaluate --sales sales.tsv --reference human.tsv --out-dir run2
  
  # Co-purchase block between two size types
  python -m sales_size_normalizer export-block "brand01#0" "brand02#1" --out-dir run2

Exit codes: 0 success, 1 usage/config error, 2 data error, 3 solver failure.
        """
    )
    subparsers = parser.add_subparsers(dest='command', required=True, metavar='command')
    
    subparsers.add_parser('synth', parents=[common], help='Generate synthetic sales and ground truth')
    subparsers.add_parser('infer-sizetypes', parents=[common], help='Infer size types per brand')
    subparsers.add_parser('build-freq', parents=[common], help='Build the co-purchase frequency matrix')
    subparsers.add_parser('normalize', parents=[common], help='Solve for normalized sizes')
    
    evaluate_parser = subparsers.add_parser('evaluate', parents=[common], help='Score maps against a reference map')
    evaluate_parser.add_argument('--reference', help='Reference map (default: <out-dir>/reference.tsv)')
    
    block_parser = subparsers.add_parser('export-block', parents=[common], help='Export the block of two size types')
    block_parser.add_argument('size_type_a', help='Row size type id')
    block_parser.add_argument('size_type_b', help='Column size type id')
    
    pipeline_parser = subparsers.add_parser('pipeline', parents=[common], help='Run all stages')
    pipeline_parser.add_argument('--synth', action='store_true', help='Generate synthetic sales first')
    pipeline_parser.add_argument('--reference', help='Reference map (default: <out-dir>/reference.tsv)')
    
    return parser


def build_config(args):
    """
    Config from file plus flag overrides, validated.
    
    Raises:
        ConfigInvalid: If the file or a value is invalid
    """
    config = load_config(args.config)
    config.apply_overrides(seed=args.seed, backend=args.backend, out_dir=args.out_dir,
                           verbose=args.verbose, debug=args.debug)
    if args.sales:
        config.paths.sales = args.sales
    if getattr(args, 'reference', None):
        config.paths.reference = args.reference
    return config.validate()


def main(argv=None):
    """Main entry point for the CLI."""
    parser = create_argument_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    
    try:
        config = build_config(args)
        return COMMANDS[args.command](config, args)
    except ConfigInvalid as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SOLVER_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_SOLVER
    except DATA_ERRORS as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA

# End of file #
