"""Weighted Mellin transforms of radial profiles.

For a radial profile v and order s, the transform evaluated here is

    M[v G_s](zeta) = (1/pi) int_0^inf v(t) exp(-t^2) t^(zeta + 2s - 1) dt,

holomorphic in zeta on the half-plane zeta + 2s > 0 and related to the
unweighted-density transform by the shift M[v G_s](zeta) = M[v G](2s + zeta).
All evaluation points in this package are real (shifted integers), so no
complex continuation is attempted.  The 1/pi normalisation lives here, not in
callers, and every value carries an additive absolute-error estimate that
downstream products propagate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .fock_space import SobolevOrder, order_value
from .special_functions import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    gaussian_weighted_integral_with_estimate,
    log_gamma,
)
from .symbols import RadialProfile

__all__ = [
    "MellinValue",
    "mellin_weighted",
    "mellin_weighted_cached",
    "mellin_monomial_closed_form",
]


@dataclass(frozen=True)
class MellinValue:
    """A transform value at a real argument, with its error estimate."""

    argument: float
    value: complex
    abs_error_estimate: float


def mellin_weighted(
    v: RadialProfile,
    s: "float | SobolevOrder",
    zeta: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> MellinValue:
    """M[v G_s](zeta) by half-line quadrature.

    Raises :class:`DomainError` outside the holomorphy half-plane
    (zeta + 2s <= 0) and propagates :class:`AccuracyError` from the
    quadrature engine on non-convergence.
    """
    sv = order_value(s)
    zeta = float(zeta)
    alpha = zeta + 2.0 * sv
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise DomainError(
            f"Mellin argument outside holomorphy half-plane: zeta + 2s = {alpha:g} <= 0"
        )
    effective = spec.covering(alpha + v.growth_exponent)
    value, estimate = gaussian_weighted_integral_with_estimate(
        v, alpha, effective, growth_exponent=v.growth_exponent
    )
    return MellinValue(zeta, value / math.pi, estimate / math.pi)


@lru_cache(maxsize=65536)
def mellin_weighted_cached(
    v: RadialProfile,
    s: float,
    zeta: float,
    spec: QuadratureSpec,
) -> MellinValue:
    """Memoised :func:`mellin_weighted` for the hot sweep paths.

    Arguments must be hashable (profiles and specs are frozen); results are
    identical to the uncached call.
    """
    return mellin_weighted(v, s, zeta, spec)


def mellin_monomial_closed_form(
    p: float,
    s: "float | SobolevOrder",
    zeta: float,
) -> complex:
    """Closed form M[r^p G_s](zeta) = Gamma((zeta + p + 2s)/2) / (2 pi).

    The oracle against which the quadrature path is checked; valid whenever
    the Gamma argument is positive.
    """
    sv = order_value(s)
    argument = (float(zeta) + float(p) + 2.0 * sv) / 2.0
    if not math.isfinite(argument) or argument <= 0.0:
        raise DomainError(
            f"Gamma argument must be positive, got (zeta + p + 2s)/2 = {argument!r}"
        )
    return complex(math.exp(log_gamma(argument)) / (2.0 * math.pi))
