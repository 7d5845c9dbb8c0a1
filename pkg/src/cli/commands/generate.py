"""
Generation commands: HyperCL, HyperLap and upscaling
"""

import click

from src.cli.utils import OutputWriter, fail_on_error, run_config
from src.entity.models.run_config import Command
from src.presenter.middleware.validation_middleware import ValidationMiddleware, validate_options

parse_list = ValidationMiddleware.parse_number_list


def _source_options(f):
    f = click.option('--degrees', help='Comma-separated node degree weights (instead of --input)')(f)
    f = click.option('--sizes', help='Comma-separated hyperedge sizes (instead of --input)')(f)
    f = click.option('--input', '-i', 'inputs', multiple=True,
                     help='Exemplar dataset whose size and degree distributions are reused')(f)
    return f


def _echo_generated(result, writer: OutputWriter) -> None:
    stats = result['stats']
    click.echo("✓ Hypergraph generated successfully!")
    click.echo(f"  Hyperedges: {stats['num_edges']}  Sum of sizes: {stats['sum_sizes']}")
    click.echo(f"  Collision overhead: {stats['epsilon']:.6f}")
    click.echo(f"  Generation time: {stats['seconds']:.3f}s")
    writer.summary()


@click.group()
def generate():
    """Generate a hypergraph with HyperCL or HyperLap

    Examples:
        hyperlap generate hypercl --input email-Enron.txt
        hyperlap generate hyperlap --input email-Enron.txt --levels 3 --weights 0.2,0.3,0.5
        hyperlap generate hypercl --sizes 2,3,2 --degrees 1,2,2,2
    """


@generate.command()
@_source_options
@click.option('--name', default='hypercl.txt', help='File name of the generated hypergraph')
@click.pass_context
@validate_options(ValidationMiddleware.validate_generate_options)
def hypercl(ctx, inputs, sizes, degrees, name):
    """Degree- and size-preserving null model"""
    config = ctx.obj['config']
    manager = ctx.obj['manager']

    result = manager.generate('hypercl', inputs, config['input_format'],
                              parse_list(sizes, int), parse_list(degrees), seed=config['seed'])
    fail_on_error(result)

    cfg = run_config(ctx, Command.GENERATE, inputs, model='hypercl', sizes=sizes, degrees=degrees)
    writer = OutputWriter(ctx)
    writer.hypergraph(name, result['hypergraph'], write_levels=False)
    writer.report(f'{name}.report.json', cfg, {'generator': result['generator'],
                                               'stats': result['stats']})
    _echo_generated(result, writer)


@generate.command()
@_source_options
@click.option('--levels', type=int, help='Number of levels L (default floor(log2 |V|))')
@click.option('--weights', help='Comma-separated level weights w1,...,wL summing to 1')
@click.option('--uniform-weights', is_flag=True, help='Use w = 1/L at every level')
@click.option('--name', default='hyperlap.txt', help='File name of the generated hypergraph')
@click.pass_context
@validate_options(ValidationMiddleware.validate_generate_options)
def hyperlap(ctx, inputs, sizes, degrees, levels, weights, uniform_weights, name):
    """Multilevel generator with per-level weights"""
    config = ctx.obj['config']
    manager = ctx.obj['manager']

    result = manager.generate('hyperlap', inputs, config['input_format'],
                              parse_list(sizes, int), parse_list(degrees), levels,
                              parse_list(weights), seed=config['seed'])
    fail_on_error(result)

    cfg = run_config(ctx, Command.GENERATE, inputs, model='hyperlap', sizes=sizes,
                     degrees=degrees, levels=levels, weights=weights,
                     uniform_weights=uniform_weights or None)
    writer = OutputWriter(ctx)
    writer.hypergraph(name, result['hypergraph'], write_levels=True)
    writer.report(f'{name}.report.json', cfg, {'generator': result['generator'],
                                               'stats': result['stats']})
    _echo_generated(result, writer)


@click.command()
@click.option('--input', '-i', 'inputs', multiple=True, required=True,
              help='Dataset to upscale')
@click.option('--factor', type=int, required=True, help='Scale factor for nodes and edges')
@click.option('--levels', type=int, help='Number of levels L (default floor(log2 |V|))')
@click.option('--weights', help='Comma-separated level weights w1,...,wL summing to 1')
@click.option('--name', help='File name of the generated hypergraph')
@click.pass_context
@validate_options(ValidationMiddleware.validate_generate_options)
def upscale(ctx, inputs, factor, levels, weights, name):
    """Generate a hypergraph FACTOR times larger than the input with HyperLap

    Examples:
        hyperlap upscale --input email-Enron.txt --factor 5
    """
    config = ctx.obj['config']
    manager = ctx.obj['manager']

    result = manager.upscale(inputs, factor, config['input_format'], levels, parse_list(weights),
                             seed=config['seed'])
    fail_on_error(result)

    name = name or f'upscaled_x{factor}.txt'
    cfg = run_config(ctx, Command.UPSCALE, inputs, factor=factor, levels=levels, weights=weights)
    writer = OutputWriter(ctx)
    writer.hypergraph(name, result['hypergraph'], write_levels=True)
    writer.report(f'{name}.report.json', cfg, {'factor': factor, 'stats': result['stats']})
    _echo_generated(result, writer)


def register_generate_commands(cli_group):
    """Register generation commands with the main CLI group"""
    cli_group.add_command(generate)
    cli_group.add_command(upscale)
