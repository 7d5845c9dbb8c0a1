import csv
import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from src import __version__
from src.entity.models.distribution import DistributionSample
from src.interactor.measures.overlap import EgonetStat

SCHEMA_VERSION = "1.0"

EGONET_FIELDS = ['node', 'num_edges', 'num_distinct_nodes', 'sum_sizes', 'density', 'overlapness']
BENCH_FIELDS = ['factor', 'num_edges', 'sum_sizes', 'seconds']


class ReportFormatter:
    @staticmethod
    def envelope(command: str, seed: Optional[int], config: Dict[str, Any], data: Any) -> Dict[str, Any]:
        """Versioned report body; every report carries the tool version, config and seed."""
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "command": command,
            "seed": seed,
            "config": config,
            "generated_at": datetime.now(timezone.utc).isoformat(),
            "data": data,
        }

    @staticmethod
    def format_error(result: Dict[str, Any]) -> Dict[str, Any]:
        return {
            "success": False,
            "error": {
                "message": result.get('error', 'Unknown error occurred'),
                "type": result.get('error_type', 'Error'),
            },
            "timestamp": datetime.now(timezone.utc).isoformat(),
        }

    @staticmethod
    def histogram_rows(sample: DistributionSample) -> List[Dict[str, Any]]:
        values, counts = sample.histogram()
        return [{'value': _plain(v), 'count': int(c)} for v, c in zip(values, counts)]

    @staticmethod
    def egonet_rows(stats: Iterable[EgonetStat]) -> List[Dict[str, Any]]:
        return [s.to_dict() for s in stats]

    @staticmethod
    def write_json(path: Path, payload: Dict[str, Any]) -> str:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(payload, f, indent=2, default=str)
        return str(path)

    @staticmethod
    def write_csv(path: Path, rows: Sequence[Dict[str, Any]], fieldnames: Sequence[str]) -> str:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            writer = csv.DictWriter(f, fieldnames=list(fieldnames))
            writer.writeheader()
            writer.writerows(rows)
        return str(path)

    @staticmethod
    def write_distribution(path: Path, sample: DistributionSample) -> str:
        return ReportFormatter.write_csv(path, ReportFormatter.histogram_rows(sample),
                                         ['value', 'count'])


def _plain(value: float):
    """Integers as ints so counts read back cleanly from CSV."""
    return int(value) if float(value).is_integer() else float(value)
