from typing import Iterable, Tuple, Union

import numpy as np

from src.shared.errors import EmptyInput

ArrayLike = Union[np.ndarray, Iterable[float]]


class DistributionSample:
    """A non-empty multiset of finite reals kept sorted for ECDF queries."""

    def __init__(self, values: ArrayLike, name: str = ""):
        if not isinstance(values, np.ndarray):
            values = list(values)
        array = np.sort(np.asarray(values, dtype=np.float64).ravel())
        if array.size == 0:
            raise EmptyInput(f"Distribution sample '{name or 'unnamed'}' is empty")
        if not np.all(np.isfinite(array)):
            raise ValueError(f"Distribution sample '{name or 'unnamed'}' has non-finite values")
        array.setflags(write=False)
        self.values = array
        self.name = name

    @property
    def size(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.size

    def ecdf(self, x: ArrayLike) -> np.ndarray:
        """Right-continuous empirical CDF: fraction of values <= x."""
        points = np.asarray(x, dtype=np.float64)
        return np.searchsorted(self.values, points, side='right') / self.values.size

    def histogram(self) -> Tuple[np.ndarray, np.ndarray]:
        """Distinct values (ascending) and their multiplicities."""
        return np.unique(self.values, return_counts=True)

    def binned(self) -> "DistributionSample":
        """Round every value to its nearest integer (halves round up)."""
        return DistributionSample(np.floor(self.values + 0.5), name=self.name)

    def above(self, xmin: float) -> np.ndarray:
        return self.values[np.searchsorted(self.values, xmin, side='left'):]

    def is_integral(self) -> bool:
        return bool(np.all(self.values == np.round(self.values)))

    def summary(self) -> dict:
        return {
            'count': self.size,
            'mean': float(self.values.mean()),
            'max': float(self.values[-1]),
            'min': float(self.values[0]),
        }

    def __repr__(self) -> str:
        return f"DistributionSample(name={self.name!r}, size={self.size})"
