"""
Scalability benchmark command
"""

import sys

import click

from src.cli.utils import OutputWriter, run_config
from src.entity.models.run_config import Command
from src.interactor.business_logic.hypergraph_manager import log_log_slope
from src.presenter.formatters.report_formatter import BENCH_FIELDS
from src.presenter.middleware.validation_middleware import ValidationMiddleware, validate_options


@click.command()
@click.option('--input', '-i', 'inputs', multiple=True, required=True,
              help='Base dataset to upscale')
@click.option('--factors', help='Comma-separated upscaling factors (default from config)')
@click.option('--levels', type=int, help='Number of levels L (default floor(log2 |V|))')
@click.option('--weights', help='Comma-separated level weights w1,...,wL summing to 1')
@click.option('--with-fit', is_flag=True, help='Also time HyperLap+ on every upscaled output')
@click.option('--resolution', '-p', type=float, help='Update resolution for --with-fit')
@click.option('--continue-on-error', is_flag=True,
              help='Keep going when one factor fails')
@click.pass_context
@validate_options(ValidationMiddleware.validate_bench_options)
def bench(ctx, inputs, factors, levels, weights, with_fit, resolution, continue_on_error):
    """Time HyperLap on a ladder of upscaled copies of a dataset

    Reports wall-clock seconds against the sum of hyperedge sizes and the fitted
    log-log slope (near 1 for linear scaling).

    Examples:
        hyperlap bench --input email-Enron.txt --factors 5,25,125,625
        hyperlap bench --input email-Enron.txt --factors 1,5 --with-fit
    """
    config = ctx.obj['config']
    manager = ctx.obj['manager']
    verbose = config['verbose']

    ladder = ValidationMiddleware.parse_number_list(factors, int) or config['app_config'].bench_factors
    parsed_weights = ValidationMiddleware.parse_number_list(weights)

    try:
        base = manager.load(inputs, config['input_format'])
    except Exception as e:
        click.echo(f"Error loading base dataset: {str(e)}", err=True)
        sys.exit(1)

    if verbose:
        click.echo(f"Base dataset: {base.num_nodes} nodes, {base.num_edges} hyperedges")

    rows = []
    failed = []
    with click.progressbar(ladder, label='Upscaling') as bar:
        for factor in bar:
            result = manager.bench_point(base, factor, levels, parsed_weights, config['seed'],
                                         with_fit, resolution)
            if result['success']:
                rows.append(result['row'])
                continue
            failed.append({'factor': factor, 'error': result['error']})
            if not continue_on_error:
                click.echo(f"\nError at factor {factor}: {result['error']}", err=True)
                break

    generation_slope = log_log_slope([r['sum_sizes'] for r in rows], [r['seconds'] for r in rows])
    fit_slope = (log_log_slope([r['sum_sizes'] for r in rows], [r['fit_seconds'] for r in rows])
                 if with_fit else None)

    cfg = run_config(ctx, Command.BENCH, inputs, factors=ladder, levels=levels, weights=weights,
                     with_fit=with_fit or None, resolution=resolution)
    writer = OutputWriter(ctx)
    fields = BENCH_FIELDS + (['fit_seconds'] if with_fit else [])
    writer.csv('bench.csv', rows, fields)
    writer.report('bench.json', cfg, {
        'rows': rows,
        'failed': failed,
        'generation_slope': generation_slope,
        'fit_slope': fit_slope,
    })

    click.echo(f"\nBenchmark completed:")
    click.echo(f"  ✓ Successful: {len(rows)}")
    click.echo(f"  ✗ Failed: {len(failed)}")
    if generation_slope is not None:
        click.echo(f"  Generation log-log slope: {generation_slope:.3f}")
    if fit_slope is not None:
        click.echo(f"  Fitting log-log slope: {fit_slope:.3f}")
    writer.summary()

    if failed:
        ctx.exit(1)
