"""
CLI helpers for resolving run settings and writing command outputs
"""

import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click

from src.entity.models.hypergraph import Hypergraph
from src.entity.models.run_config import Command, RunConfig
from src.entity.repositories.hypergraph_repository import write_hypergraph
from src.presenter.formatters.report_formatter import ReportFormatter
from src.shared.errors import DatasetIOError


def run_config(ctx: click.Context, command: Command, inputs: Sequence[str] = (),
               **params) -> RunConfig:
    """Resolved settings of this invocation, embedded in every report."""
    config = ctx.obj['config']
    return RunConfig(
        command=command,
        inputs=list(inputs),
        output_dir=str(config['output_dir']),
        seed=config['seed'],
        threads=config['threads'],
        input_format=config['input_format'],
        dedupe=config['dedupe'],
        drop_singletons=config['drop_singletons'],
        params={k: v for k, v in params.items() if v is not None},
        app_config=config['app_config'].to_dict(),
    )


def fail_on_error(result: Dict[str, Any]) -> None:
    """Print the manager's error and exit 1 when ``result`` reports a failure."""
    if not result['success']:
        error = ReportFormatter.format_error(result)['error']
        click.echo(f"Error ({error['type']}): {error['message']}", err=True)
        sys.exit(1)


class OutputWriter:
    """Collects the files a command writes; any write failure ends the run with exit 1."""

    def __init__(self, ctx: click.Context):
        self.output_dir = Path(ctx.obj['config']['output_dir'])
        self.verbose = ctx.obj['config']['verbose']
        self.written: List[str] = []

    def path(self, name: str) -> Path:
        return self.output_dir / name

    def _record(self, path: str) -> str:
        self.written.append(path)
        if self.verbose:
            click.echo(f"  wrote {path}")
        return path

    def report(self, name: str, cfg: RunConfig, data: Any) -> str:
        payload = ReportFormatter.envelope(cfg.command.value, cfg.seed, cfg.to_dict(), data)
        return self._guard(lambda: ReportFormatter.write_json(self.path(name), payload))

    def csv(self, name: str, rows: Sequence[Dict[str, Any]], fieldnames: Sequence[str]) -> str:
        return self._guard(lambda: ReportFormatter.write_csv(self.path(name), rows, fieldnames))

    def distribution(self, name: str, sample) -> Optional[str]:
        if sample is None:
            return None
        return self._guard(lambda: ReportFormatter.write_distribution(self.path(name), sample))

    def hypergraph(self, name: str, g: Hypergraph, write_levels: bool = True) -> str:
        return self._guard(lambda: write_hypergraph(g, self.path(name), write_levels))

    def _guard(self, write) -> str:
        try:
            return self._record(write())
        except (OSError, DatasetIOError) as e:
            click.echo(f"Error writing output: {str(e)}", err=True)
            sys.exit(1)

    def summary(self) -> None:
        click.echo(f"  📁 Output directory: {self.output_dir}")
        click.echo(f"  Files written: {len(self.written)}")


def format_optional(value: Optional[float], digits: int = 4) -> str:
    return "n/a" if value is None else f"{value:.{digits}f}"
