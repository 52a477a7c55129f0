"""
Gaussian Moment Algebra
=======================

Every quantity built from branches, postselected states, windows and
short-time kernels is a product of one-dimensional log-quadratic factors

    g(x) = exp(-a x^2 + b x + c),      Re a > 0 after multiplication

so inner products and first moments are closed form:

    I0 = sqrt(pi / a) exp(b^2 / 4a + c)
    I1 = (b / 2a) I0

Coefficients may be numpy arrays; everything broadcasts.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

Coefficient = Union[complex, np.ndarray]


@dataclass(frozen=True)
class LogQuadratic:
    """exp(-a x^2 + b x + c) with complex (broadcastable) coefficients."""
    a: Coefficient
    b: Coefficient
    c: Coefficient

    def __mul__(self, other: "LogQuadratic") -> "LogQuadratic":
        return LogQuadratic(self.a + other.a, self.b + other.b, self.c + other.c)

    def conj(self) -> "LogQuadratic":
        return LogQuadratic(np.conj(self.a), np.conj(self.b), np.conj(self.c))

    def log_integral(self) -> np.ndarray:
        a = np.asarray(self.a, dtype=complex)
        return 0.5 * np.log(np.pi / a) + self.b ** 2 / (4.0 * a) + self.c

    def integral(self) -> np.ndarray:
        """Integral over the real line."""
        return np.exp(self.log_integral())

    def mean(self) -> np.ndarray:
        """First moment divided by the integral, b / 2a."""
        return self.b / (2.0 * np.asarray(self.a, dtype=complex))

    def first_moment(self) -> np.ndarray:
        return self.mean() * self.integral()

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.exp(-self.a * x ** 2 + self.b * x + self.c)


def gaussian_window(center: Coefficient, width: float) -> LogQuadratic:
    """exp(-(x - center)^2 / width^2) as a log-quadratic factor."""
    center = np.asarray(center, dtype=float)
    inv = 1.0 / width ** 2
    return LogQuadratic(inv + 0j, 2.0 * center * inv + 0j, -(center ** 2) * inv + 0j)
