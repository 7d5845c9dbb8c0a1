import sys
from functools import wraps
from typing import Any, Dict, List, Optional

import click

from src.entity.models.generator_config import WEIGHT_TOLERANCE


class ValidationMiddleware:
    @staticmethod
    def parse_number_list(value: Optional[str], cast=float) -> Optional[List]:
        if value is None or value == '':
            return None
        return [cast(v) for v in value.split(',') if v.strip()]

    @staticmethod
    def validate_common(options: Dict[str, Any]) -> Dict[str, str]:
        errors = {}

        budget = options.get('budget')
        if budget is not None and budget < 1:
            errors['budget'] = 'Triple sample budget must be a positive integer'

        return errors

    @staticmethod
    def validate_generate_options(options: Dict[str, Any]) -> Dict[str, str]:
        errors = ValidationMiddleware.validate_common(options)

        levels = options.get('levels')
        if levels is not None and levels < 1:
            errors['levels'] = 'Levels must be at least 1'

        try:
            weights = ValidationMiddleware.parse_number_list(options.get('weights'))
        except ValueError:
            errors['weights'] = 'Weights must be a comma-separated list of numbers'
            weights = None

        if weights is not None:
            if any(w < 0 for w in weights):
                errors['weights'] = 'Weights must be non-negative'
            elif abs(sum(weights) - 1.0) > WEIGHT_TOLERANCE:
                errors['weights'] = f'Weights must sum to 1 (got {sum(weights):.6g})'
            elif levels is not None and len(weights) != levels:
                errors['weights'] = f'Expected {levels} weights, got {len(weights)}'
            if options.get('uniform_weights'):
                errors['uniform_weights'] = '--uniform-weights cannot be combined with --weights'

        for key, cast in (('sizes', int), ('degrees', float)):
            try:
                ValidationMiddleware.parse_number_list(options.get(key), cast)
            except ValueError:
                errors[key] = f'{key.capitalize()} must be a comma-separated list of numbers'

        factor = options.get('factor')
        if factor is not None and factor < 1:
            errors['factor'] = 'Upscaling factor must be a positive integer'

        return errors

    @staticmethod
    def validate_fit_options(options: Dict[str, Any]) -> Dict[str, str]:
        errors = ValidationMiddleware.validate_common(options)

        resolution = options.get('resolution')
        if resolution is not None and not 0 < resolution <= 1:
            errors['resolution'] = 'Resolution must be in (0, 1]'

        repeats = options.get('repeats')
        if repeats is not None and repeats < 1:
            errors['repeats'] = 'Repeats must be at least 1'

        levels = options.get('levels')
        if levels is not None and levels < 1:
            errors['levels'] = 'Levels must be at least 1'

        return errors

    @staticmethod
    def validate_tailfit_options(options: Dict[str, Any]) -> Dict[str, str]:
        errors = ValidationMiddleware.validate_common(options)

        xmin = options.get('xmin', 'min')
        if xmin not in ('min', 'scan'):
            try:
                if float(xmin) <= 0:
                    errors['xmin'] = 'xmin must be positive'
            except (TypeError, ValueError):
                errors['xmin'] = "xmin must be 'min', 'scan' or a positive number"

        return errors

    @staticmethod
    def validate_bench_options(options: Dict[str, Any]) -> Dict[str, str]:
        errors = ValidationMiddleware.validate_generate_options(options)

        try:
            factors = ValidationMiddleware.parse_number_list(options.get('factors'), int)
        except ValueError:
            errors['factors'] = 'Factors must be a comma-separated list of integers'
            factors = None

        if factors is not None and any(f < 1 for f in factors):
            errors['factors'] = 'Factors must be positive integers'

        return errors


def validate_options(validation_func):
    """Reject a command before it runs when ``validation_func`` reports problems."""
    def decorator(f):
        @wraps(f)
        def decorated_function(*args, **kwargs):
            errors = validation_func(kwargs)

            if errors:
                for field, message in errors.items():
                    click.echo(f"Error: --{field.replace('_', '-')}: {message}", err=True)
                sys.exit(1)

            return f(*args, **kwargs)

        return decorated_function
    return decorator
