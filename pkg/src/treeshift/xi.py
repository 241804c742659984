"""The weight-generating function family behind 2-isometric unilateral shifts.

``xi_eval(n, x)`` produces the n-th weight of the unilateral weighted shift
S_[x]; every operator built in this package draws its weights from this
family.  All three functions are self-maps of [1, oo).
"""

from __future__ import annotations

import math

# Inputs this far below 1.0 are treated as float noise and clamped.
_BOUNDARY_SLACK = 1e-12


class DomainError(ValueError):
    """Argument outside [1, oo) (beyond the boundary slack)."""


def check_unit_lower_bound(x: float, name: str = "x") -> float:
    """Validate x >= 1, clamping values within 1e-12 below the boundary."""
    x = float(x)
    if x < 1.0:
        if x >= 1.0 - _BOUNDARY_SLACK:
            return 1.0
        raise DomainError(f"{name} must be >= 1, got {x!r}")
    return x


def xi_eval(n: int, x: float) -> float:
    """n-th weight of the shift with norm x: sqrt((1+(n+1)(x^2-1)) / (1+n(x^2-1))).

    Evaluated from the closed form rather than by iterating ``xi_next``,
    so there is no error accumulation in n.  Result lies in [1, x].
    """
    x = check_unit_lower_bound(x)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    t = x * x - 1.0
    return math.sqrt((1.0 + (n + 1) * t) / (1.0 + n * t))


def xi_next(beta: float) -> float:
    """One step of the defining recurrence: beta -> sqrt((2*beta^2 - 1) / beta^2).

    Iterating from beta_0 = x reproduces ``xi_eval(n, x)``; kept as an
    independent oracle for the closed form.
    """
    beta = check_unit_lower_bound(beta, "beta")
    b2 = beta * beta
    return math.sqrt((2.0 * b2 - 1.0) / b2)


def xi_cumulative(n: int, x: float) -> float:
    """Telescoping product xi_0(x) * ... * xi_{n-1}(x) = sqrt(1 + n(x^2-1)).

    Equals the modulus of the n-th power of S_[x] on its first basis
    vector.  The empty product (n = 0) is 1.
    """
    x = check_unit_lower_bound(x)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    return math.sqrt(1.0 + n * (x * x - 1.0))
