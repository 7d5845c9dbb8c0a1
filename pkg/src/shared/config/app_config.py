import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv

CONFIG_DIR = Path(__file__).resolve().parents[3] / "config"


class AppConfig:
    def __init__(self, env_file: Optional[str] = None, environment: Optional[str] = None):
        # Load environment variables from .env file
        if env_file:
            load_dotenv(env_file)
        else:
            # Try to load from default locations
            for env_path in ['.env', '../.env', '../../.env']:
                if os.path.exists(env_path):
                    load_dotenv(env_path)
                    break

        self.environment = environment or os.getenv('ENVIRONMENT', 'development')
        profile = self._load_profile(self.environment)

        # Reproducibility and parallelism
        self.default_seed = int(self._get('HYPERLAP_SEED', profile, 'run', 'seed', 0))
        self.threads = int(self._get('HYPERLAP_THREADS', profile, 'run', 'threads', 1))
        self.output_dir = str(self._get('HYPERLAP_OUTPUT_DIR', profile, 'run', 'output_dir',
                                        './hyperlap-output'))

        # Measure capacities
        self.pair_capacity = int(self._get('HYPERLAP_PAIR_CAPACITY', profile, 'measures',
                                           'pair_capacity', 2 ** 31))
        self.triple_max_enum_size = int(self._get('HYPERLAP_TRIPLE_MAX_ENUM_SIZE', profile,
                                                  'measures', 'triple_max_enum_size', 100))
        self.triple_sample_budget = int(self._get('HYPERLAP_TRIPLE_SAMPLE_BUDGET', profile,
                                                  'measures', 'triple_sample_budget', 10 ** 7))

        # Generator and fitting settings
        self.retry_factor = int(self._get('HYPERLAP_RETRY_FACTOR', profile, 'generator',
                                          'retry_factor', 1000))
        self.resolution = float(self._get('HYPERLAP_RESOLUTION', profile, 'fitting',
                                          'resolution', 0.05))
        self.repeats = int(self._get('HYPERLAP_REPEATS', profile, 'fitting', 'repeats', 1))

        # Benchmark ladder
        factors = self._get('HYPERLAP_BENCH_FACTORS', profile, 'bench', 'factors', '5,25,125,625')
        self.bench_factors = self._parse_int_list(factors)

        # Logging settings
        self.log_level = str(self._get('LOG_LEVEL', profile, 'logging', 'level', 'INFO'))
        self.structured_logging = self._as_bool(
            self._get('STRUCTURED_LOGGING', profile, 'logging', 'structured', False))

        # CLI settings
        self.cli_verbose = self._as_bool(self._get('CLI_VERBOSE', profile, 'cli', 'verbose', False))

    @staticmethod
    def _load_profile(environment: str) -> Dict[str, Any]:
        path = CONFIG_DIR / f"{environment}.yaml"
        if not path.exists():
            return {}
        with open(path, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f) or {}

    @staticmethod
    def _get(env_var: str, profile: Dict[str, Any], section: str, key: str, default: Any) -> Any:
        value = os.getenv(env_var)
        if value is not None and value != '':
            return value
        return (profile.get(section) or {}).get(key, default)

    @staticmethod
    def _as_bool(value: Any) -> bool:
        if isinstance(value, bool):
            return value
        return str(value).lower() in ('1', 'true', 'yes', 'on')

    @staticmethod
    def _parse_int_list(value: Any) -> List[int]:
        if isinstance(value, (list, tuple)):
            return [int(v) for v in value]
        return [int(v) for v in str(value).split(',') if v.strip()]

    def validate(self) -> bool:
        problems = []
        if self.threads < 1:
            problems.append('HYPERLAP_THREADS must be >= 1')
        if not 0 < self.resolution <= 1:
            problems.append('HYPERLAP_RESOLUTION must be in (0, 1]')
        if self.repeats < 1:
            problems.append('HYPERLAP_REPEATS must be >= 1')
        if self.retry_factor < 1:
            problems.append('HYPERLAP_RETRY_FACTOR must be >= 1')
        if any(f < 1 for f in self.bench_factors):
            problems.append('HYPERLAP_BENCH_FACTORS must be positive integers')

        if problems:
            raise ValueError(f"Invalid configuration: {'; '.join(problems)}")

        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'environment': self.environment,
            'seed': self.default_seed,
            'threads': self.threads,
            'output_dir': self.output_dir,
            'pair_capacity': self.pair_capacity,
            'triple_max_enum_size': self.triple_max_enum_size,
            'triple_sample_budget': self.triple_sample_budget,
            'retry_factor': self.retry_factor,
            'resolution': self.resolution,
            'repeats': self.repeats,
            'bench_factors': list(self.bench_factors),
            'log_level': self.log_level,
            'structured_logging': self.structured_logging,
        }
