#!/usr/bin/env python3
"""
HyperLap CLI Tool

A command-line interface for measuring hyperedge overlap, generating realistic
hypergraphs and fitting the multilevel generator to real data, following the VIPER
architecture patterns.
"""

import click
import os
import sys
from dotenv import load_dotenv

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', '..'))

# Load environment variables early
load_dotenv()

from src import __version__
from src.cli.utils import OutputWriter, fail_on_error, format_optional, run_config
from src.entity.models.run_config import Command
from src.interactor.business_logic.hypergraph_manager import DISTRIBUTIONS, HypergraphManager
from src.presenter.formatters.report_formatter import EGONET_FIELDS, ReportFormatter
from src.presenter.middleware.validation_middleware import ValidationMiddleware, validate_options
from src.shared.config.app_config import AppConfig
from src.shared.config.logging_config import configure_logging

input_option = click.option(
    '--input', '-i', 'inputs', multiple=True, required=True,
    help='Dataset path; repeat for the two files of an nverts dataset or pass its prefix')
triples_option = click.option(
    '--triples', 'triples_mode', type=click.Choice(['auto', 'sampled']), default='auto',
    help='Triple degrees: exact when affordable (auto) or always sampled')
budget_option = click.option(
    '--budget', type=int, help='Triple enumeration / sampling budget')


@click.group()
@click.version_option(version=__version__, prog_name='hyperlap')
@click.option('--seed', type=int, help='Random seed (default: HYPERLAP_SEED or 0)')
@click.option('--threads', type=int, help='Worker threads (output is identical for any count)')
@click.option('--out', 'output_dir', type=click.Path(file_okay=False),
              help='Output directory for reports and generated hypergraphs')
@click.option('--format', 'input_format', type=click.Choice(['edgelist', 'nverts']),
              default='edgelist', help='Input dataset format')
@click.option('--dedupe/--keep-dupes', default=True,
              help='Remove duplicated hyperedges (default: remove)')
@click.option('--drop-singletons/--keep-singletons', default=True,
              help='Remove single-node hyperedges (default: remove)')
@click.option('--environment', envvar='ENVIRONMENT', default='development',
              type=click.Choice(['development', 'production']),
              help='Configuration profile to use')
@click.option('--env-file', type=click.Path(exists=True),
              help='Path to .env file to load')
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose output')
@click.pass_context
def cli(ctx, seed, threads, output_dir, input_format, dedupe, drop_singletons, environment,
        env_file, verbose):
    """HyperLap: hypergraph overlap analysis and realistic hypergraph generation

    Examples:
        hyperlap stats --input email-Enron.txt
        hyperlap generate hyperlap --input email-Enron.txt --levels 4 --weights 0.1,0.2,0.3,0.4
        hyperlap fit --input email-Enron.txt --resolution 0.05

    Environment configuration:
        hyperlap --environment production stats --input data.txt
        hyperlap --env-file .env.bench bench --input data.txt
    """
    # Ensure context object exists
    ctx.ensure_object(dict)

    # Load additional .env file if specified
    if env_file:
        load_dotenv(env_file, override=True)
        if verbose:
            click.echo(f"Loaded environment from: {env_file}")

    try:
        app_config = AppConfig(env_file, environment)
        if threads is not None:
            app_config.threads = threads
        if output_dir:
            app_config.output_dir = output_dir
        app_config.validate()
    except Exception as e:
        click.echo(f"Configuration error: {str(e)}", err=True)
        sys.exit(1)

    verbose = verbose or app_config.cli_verbose
    configure_logging('DEBUG' if verbose else app_config.log_level, app_config.structured_logging)

    ctx.obj['config'] = {
        'seed': seed if seed is not None else app_config.default_seed,
        'threads': app_config.threads,
        'output_dir': app_config.output_dir,
        'input_format': input_format,
        'dedupe': dedupe,
        'drop_singletons': drop_singletons,
        'environment': app_config.environment,
        'verbose': verbose,
        'app_config': app_config,
    }
    ctx.obj['manager'] = HypergraphManager(app_config, dedupe=dedupe,
                                           drop_singletons=drop_singletons,
                                           threads=app_config.threads)

    if verbose:
        click.echo(f"Environment: {app_config.environment}")
        click.echo(f"Seed: {ctx.obj['config']['seed']}  Threads: {app_config.threads}")


@cli.command()
@input_option
@triples_option
@budget_option
@click.option('--null-seed', type=int,
              help='Also generate a HyperCL null model with this seed and report significance')
@click.option('--bin-homogeneity', is_flag=True,
              help='Round homogeneity values to the nearest integer in the outputs')
@click.pass_context
@validate_options(ValidationMiddleware.validate_common)
def stats(ctx, inputs, triples_mode, budget, null_seed, bin_homogeneity):
    """Measure egonets, pair/triple degrees and hyperedge homogeneity

    Examples:
        hyperlap stats --input email-Enron.txt
        hyperlap stats --input coauth --triples sampled --budget 100000
        hyperlap --format nverts stats --input data/email-Enron --null-seed 7
    """
    config = ctx.obj['config']
    manager = ctx.obj['manager']

    result = manager.compute_stats(inputs, config['input_format'], triples_mode, budget,
                                   null_seed, bin_homogeneity, config['seed'])
    fail_on_error(result)

    cfg = run_config(ctx, Command.STATS, inputs, triples=triples_mode, budget=budget,
                     null_seed=null_seed, bin_homogeneity=bin_homogeneity)
    writer = OutputWriter(ctx)
    writer.csv('egonets.csv', ReportFormatter.egonet_rows(result['egonets']), EGONET_FIELDS)
    writer.distribution('pair_degrees.csv', result['pair_degrees'])
    writer.distribution('triple_degrees.csv', result['triple_degrees'])
    writer.distribution('homogeneity.csv', result['homogeneity'])
    writer.report('summary.json', cfg, result['summary'])

    summary = result['summary']
    click.echo(f"✓ Measured {summary['num_nodes']} nodes, {summary['num_edges']} hyperedges")
    click.echo(f"  Mean egonet density:     {summary['mean_egonet_density']:.4f}")
    click.echo(f"  Mean egonet overlapness: {summary['mean_egonet_overlapness']:.4f}")
    click.echo(f"  Mean homogeneity:        {summary['mean_homogeneity']:.4f}")
    click.echo(f"  Triple degrees:          {summary['triples']['mode']}")
    if 'null_model' in summary:
        null = summary['null_model']
        click.echo(f"  sig_density:             {format_optional(null['sig_density'])}")
        click.echo(f"  sig_overlapness:         {format_optional(null['sig_overlapness'])}")
    writer.summary()


@cli.command()
@input_option
@click.option('--against', '-a', 'against', multiple=True, required=True,
              help='Second dataset (repeat for nverts files)')
@triples_option
@budget_option
@click.pass_context
@validate_options(ValidationMiddleware.validate_common)
def compare(ctx, inputs, against, triples_mode, budget):
    """Compare two hypergraphs with KS D-statistics and significance scores

    Examples:
        hyperlap compare --input email-Enron.txt --against hypercl.txt
    """
    config = ctx.obj['config']
    manager = ctx.obj['manager']

    result = manager.compare(inputs, against, config['input_format'], triples_mode, budget,
                             config['seed'])
    fail_on_error(result)

    cfg = run_config(ctx, Command.COMPARE, list(inputs) + list(against), triples=triples_mode,
                     budget=budget)
    writer = OutputWriter(ctx)
    writer.report('compare.json', cfg, {k: v for k, v in result.items() if k != 'success'})

    click.echo("\nD-statistics:")
    click.echo("-" * 40)
    for name, value in result['d_statistics'].items():
        click.echo(f"{name:<22} {format_optional(value)}")
    click.echo("-" * 40)
    for name, value in result['significance'].items():
        click.echo(f"sig_{name:<18} {format_optional(value)}")
    writer.summary()


@cli.command()
@input_option
@click.option('--distribution', '-d', type=click.Choice(list(DISTRIBUTIONS)), default='pair',
              help='Distribution whose tail is fitted')
@click.option('--xmin', default='min', help="Tail cutoff: 'min', 'scan' or a number")
@click.option('--integer-bins', is_flag=True,
              help='Round values to the nearest integer and use discrete likelihoods')
@triples_option
@budget_option
@click.pass_context
@validate_options(ValidationMiddleware.validate_tailfit_options)
def tailfit(ctx, inputs, distribution, xmin, integer_bins, triples_mode, budget):
    """Fit heavy-tailed models and report log-likelihood ratios against the exponential

    Examples:
        hyperlap tailfit --input email-Enron.txt --distribution pair
        hyperlap tailfit --input email-Enron.txt -d homogeneity --integer-bins --xmin scan
    """
    config = ctx.obj['config']
    manager = ctx.obj['manager']

    result = manager.tail_fit(inputs, config['input_format'], distribution, xmin, integer_bins,
                              triples_mode, budget, config['seed'])
    fail_on_error(result)

    fit, verdict = result['fit'], result['verdict']
    cfg = run_config(ctx, Command.TAILFIT, inputs, distribution=distribution, xmin=xmin,
                     integer_bins=integer_bins, triples=triples_mode, budget=budget)
    writer = OutputWriter(ctx)
    writer.report(f'tailfit_{distribution}.json', cfg,
                  {'distribution': distribution, 'fit': fit.to_dict(), 'verdict': verdict.to_dict()})

    click.echo(f"\nTail fit of {distribution} (xmin={fit.xmin:g}, n={fit.n_tail}, "
               f"{'discrete' if fit.discrete else 'continuous'}):")
    click.echo("-" * 40)
    for model, ratio in fit.ratios.items():
        click.echo(f"{model.value:<22} {format_optional(ratio)}")
    click.echo("-" * 40)
    click.echo(f"Heavy tail favoured: {'yes' if verdict.any_heavy_tail_positive else 'no'}"
               f" (best: {verdict.best_model.value if verdict.best_model else 'n/a'})")
    writer.summary()


@cli.command()
@input_option
@click.option('--resolution', '-p', type=float, help='Update resolution p (default 0.05)')
@click.option('--repeats', type=int, help='Regenerations per candidate fraction (default 1)')
@click.option('--levels', type=int, help='Cap the number of levels below floor(log2 |V|)')
@click.option('--name', default='fitted.txt', help='File name of the fitted hypergraph')
@click.pass_context
@validate_options(ValidationMiddleware.validate_fit_options)
def fit(ctx, inputs, resolution, repeats, levels, name):
    """Fit HyperLap level weights to a hypergraph (HyperLap+)

    Examples:
        hyperlap fit --input email-Enron.txt
        hyperlap --seed 3 fit --input email-Enron.txt --resolution 0.1 --repeats 3
    """
    config = ctx.obj['config']
    manager = ctx.obj['manager']

    if config['verbose']:
        click.echo("Fitting level weights...")

    result = manager.fit(inputs, config['input_format'], resolution, repeats, levels,
                         config['seed'])
    fail_on_error(result)

    cfg = run_config(ctx, Command.FIT, inputs, resolution=resolution, repeats=repeats,
                     levels=levels)
    writer = OutputWriter(ctx)
    writer.hypergraph(name, result['hypergraph'], write_levels=True)
    writer.report('fit_report.json', cfg, result['report'])

    report = result['report']
    click.echo("✓ Fit completed!")
    click.echo(f"  HHD: {report['initial_hhd']:.4f} -> {report['final_hhd']:.4f}")
    click.echo(f"  Weights: {', '.join(f'{w:.3f}' for w in result['weights'])}")
    writer.summary()


@cli.command()
@click.pass_context
def config(ctx):
    """Show current configuration"""
    config = ctx.obj['config']
    app_config = config['app_config']

    click.echo("Current Configuration:")
    click.echo("-" * 40)
    click.echo(f"Environment:   {config['environment']}")
    click.echo(f"Seed:          {config['seed']}")
    click.echo(f"Threads:       {config['threads']}")
    click.echo(f"Output dir:    {config['output_dir']}")
    click.echo(f"Input format:  {config['input_format']}")
    click.echo(f"Dedupe:        {config['dedupe']}")
    click.echo(f"Singletons:    {'dropped' if config['drop_singletons'] else 'kept'}")
    click.echo(f"Resolution:    {app_config.resolution}")
    click.echo(f"Repeats:       {app_config.repeats}")
    click.echo(f"Bench factors: {', '.join(str(f) for f in app_config.bench_factors)}")
    click.echo(f"Verbose:       {config['verbose']}")


# Register generation commands
from src.cli.commands.generate import register_generate_commands
register_generate_commands(cli)

# Register benchmark command
from src.cli.commands.bench import bench
cli.add_command(bench)


if __name__ == '__main__':
    cli()
