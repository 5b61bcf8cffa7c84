"""Symbols as finite Fourier-radial expansions.

A symbol u on the plane is handled through its angular modes,
u(r e^{i theta}) = sum_j v_j(r) e^{i j theta}, with each radial profile v_j
carrying declared polynomial-growth metadata (|v(r)| <= C (1+r)^m).  The
module provides evaluation, decomposition of sampled symbols on a polar grid
(FFT in the angle, cubic interpolation in the radius), the weighted sup-norm
functional used for the growth scale, and a growth-ladder classifier.

SymbolSpec and RadialProfile are immutable; everything here is read-only and
concurrent-safe after construction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ClassificationError, DomainError, PreconditionError

__all__ = [
    "RadialProfile",
    "SymbolSpec",
    "evaluate",
    "decompose",
    "dpoly_norm_estimate",
    "fit_growth",
    "sample_polar",
    "polar_l2_norm",
]

# Validation grid for declared growth bounds (open at 0, up to r = 50).
_VALIDATION_RADII = np.linspace(0.05, 50.0, 128)
# Angular-mode magnitudes below this floor count as absent.
DEFAULT_DROP_FLOOR = 1e-12
_GROWTH_LADDER_MAX = 16
_GROWTH_HEADROOM = 1.1


@dataclass(frozen=True)
class RadialProfile:
    """A radial function r -> v(r) on the positive half-line.

    ``kind`` is one of "monomial", "polynomial", "callable", "zero".  The
    growth metadata asserts |v(r)| <= growth_constant * (1+r)^growth_exponent,
    checked on a fixed validation grid at construction.  Calling the profile
    evaluates it; numpy arrays are accepted and returned elementwise.
    """

    kind: str
    growth_exponent: float
    growth_constant: float
    power: float = 0.0
    coefficients: tuple = ()
    evaluator: Callable | None = None

    def __post_init__(self):
        if self.kind not in ("monomial", "polynomial", "callable", "zero"):
            raise DomainError(f"unknown profile kind {self.kind!r}")
        if not (math.isfinite(self.growth_exponent) and self.growth_exponent >= 0.0):
            raise DomainError("growth_exponent must be finite and >= 0")
        if not (math.isfinite(self.growth_constant) and self.growth_constant > 0.0):
            raise DomainError("growth_constant must be finite and positive")

    # -- constructors -------------------------------------------------------

    @classmethod
    def monomial(cls, p: float) -> "RadialProfile":
        """r -> r^p for p >= 0 (p = 0 is the constant 1)."""
        p = float(p)
        if not (math.isfinite(p) and p >= 0.0):
            raise DomainError(f"monomial power must be >= 0, got {p!r}")
        return cls("monomial", growth_exponent=p, growth_constant=1.0, power=p)

    @classmethod
    def polynomial(cls, coefficients: Sequence[complex]) -> "RadialProfile":
        """r -> sum_k c_k r^k with the growth bound fitted on the grid."""
        coeffs = tuple(complex(c) for c in coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            return cls.zero()
        degree = float(len(coeffs) - 1)
        vals = np.abs(_polyval(coeffs, _VALIDATION_RADII))
        constant = float(np.max(vals / (1.0 + _VALIDATION_RADII) ** degree))
        return cls(
            "polynomial",
            growth_exponent=degree,
            growth_constant=max(constant * 1.0000001, 1e-300),
            coefficients=coeffs,
        )

    @classmethod
    def from_callable(
        cls,
        evaluator: Callable,
        growth_exponent: float,
        growth_constant: float,
    ) -> "RadialProfile":
        """Wrap a vectorised evaluator; the declared bound is spot-checked."""
        profile = cls(
            "callable",
            growth_exponent=float(growth_exponent),
            growth_constant=float(growth_constant),
            evaluator=evaluator,
        )
        bound = profile.growth_constant * (1.0 + _VALIDATION_RADII) ** profile.growth_exponent
        vals = np.abs(np.asarray(evaluator(_VALIDATION_RADII)))
        if np.any(vals > bound * (1.0 + 1e-9)):
            worst = int(np.argmax(vals - bound))
            raise DomainError(
                f"declared growth bound violated at r = {_VALIDATION_RADII[worst]:g}: "
                f"|v| = {vals[worst]:g} > {bound[worst]:g}"
            )
        return profile

    @classmethod
    def from_samples(cls, radii: Sequence[float], values: Sequence[complex]) -> "RadialProfile":
        """Cubic interpolant through per-radius samples (continuity at r=0
        comes from the spline's extrapolation)."""
        r = np.asarray(radii, dtype=float)
        y = np.asarray(values)
        if r.ndim != 1 or r.size < 4:
            raise PreconditionError("need at least 4 strictly increasing radii")
        if np.any(np.diff(r) <= 0):
            raise PreconditionError("radii must be strictly increasing")
        spline = CubicSpline(r, y, extrapolate=True)
        magnitudes = np.abs(y)
        exponent = _fit_exponent_on_samples(r, magnitudes)
        if exponent is None:
            raise ClassificationError("sampled profile grows faster than the polynomial ladder")
        constant = float(np.max(magnitudes / (1.0 + r) ** exponent))
        return cls(
            "callable",
            growth_exponent=float(exponent),
            growth_constant=max(constant * _GROWTH_HEADROOM, 1e-300),
            evaluator=spline,
        )

    @classmethod
    def zero(cls) -> "RadialProfile":
        return cls("zero", growth_exponent=0.0, growth_constant=1e-300)

    # -- behaviour ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    def __call__(self, r):
        arr = np.asarray(r, dtype=float)
        if self.kind == "monomial":
            out = arr**self.power
        elif self.kind == "polynomial":
            out = _polyval(self.coefficients, arr)
        elif self.kind == "callable":
            out = np.asarray(self.evaluator(arr))
        else:
            out = np.zeros_like(arr)
        if np.ndim(r) == 0:
            return out[()] if isinstance(out, np.ndarray) else out
        return out

    def conjugate(self) -> "RadialProfile":
        if self.kind in ("monomial", "zero"):
            return self
        if self.kind == "polynomial":
            return RadialProfile(
                "polynomial",
                self.growth_exponent,
                self.growth_constant,
                coefficients=tuple(c.conjugate() for c in self.coefficients),
            )
        inner = self.evaluator
        return RadialProfile(
            "callable",
            self.growth_exponent,
            self.growth_constant,
            evaluator=lambda r, _f=inner: np.conjugate(_f(r)),
        )

    def scaled(self, factor: complex) -> "RadialProfile":
        """factor * v, preserving growth metadata."""
        if factor == 0 or self.is_zero:
            return RadialProfile.zero()
        if self.kind == "monomial" and float(int(self.power)) == self.power:
            return RadialProfile.polynomial([0j] * int(self.power) + [complex(factor)])
        if self.kind == "polynomial":
            return RadialProfile.polynomial([factor * c for c in self.coefficients])
        inner = self
        return RadialProfile(
            "callable",
            self.growth_exponent,
            self.growth_constant * abs(factor),
            evaluator=lambda r, _f=inner, _a=factor: _a * np.asarray(_f(r)),
        )


def _polyval(coefficients: tuple, r: np.ndarray):
    out = np.zeros(np.shape(r), dtype=complex)
    for c in reversed(coefficients):
        out = out * r + c
    return out


def _fit_exponent_on_samples(radii: np.ndarray, magnitudes: np.ndarray):
    """Smallest ladder exponent consistent with the measured growth rate.

    A finite grid cannot distinguish super-polynomial growth from a high
    enough power by pointwise domination alone, so membership is decided by
    the log-log slope d ln|v| / d ln r fitted on the outer half of the grid:
    slopes beyond the ladder top return None (numerically super-polynomial).
    Monomials r^q give the slope q exactly; decaying profiles give m = 0.
    """
    peak = float(np.max(magnitudes))
    if peak <= 0.0:
        return 0
    half = radii.size // 2
    r_out = radii[half:]
    m_out = np.maximum(magnitudes[half:], peak * 1e-12)
    if r_out.size < 2:
        return 0
    slope = float(np.polyfit(np.log(r_out), np.log(m_out), 1)[0])
    exponent = max(0, math.ceil(slope - 0.26))
    if exponent > _GROWTH_LADDER_MAX:
        return None
    return exponent


@dataclass(frozen=True)
class SymbolSpec:
    """Finite Fourier-radial expansion {j -> v_j} with a text label.

    Zero-kind modes are dropped at construction; a symbol is radial exactly
    when its surviving modes are contained in {j = 0}.
    """

    mode_items: tuple
    name: str = "symbol"

    @classmethod
    def from_modes(cls, modes: Mapping[int, RadialProfile], name: str = "symbol") -> "SymbolSpec":
        items = tuple(
            (int(j), profile)
            for j, profile in sorted(modes.items())
            if not profile.is_zero
        )
        return cls(items, name)

    @property
    def modes(self) -> dict[int, RadialProfile]:
        return dict(self.mode_items)

    @property
    def mode_indices(self) -> tuple[int, ...]:
        return tuple(j for j, _ in self.mode_items)

    @property
    def is_radial(self) -> bool:
        return all(j == 0 for j, _ in self.mode_items)

    @property
    def max_mode(self) -> int:
        return max((abs(j) for j, _ in self.mode_items), default=0)

    def mode(self, j: int) -> RadialProfile:
        for jj, profile in self.mode_items:
            if jj == j:
                return profile
        return RadialProfile.zero()

    def conjugate(self) -> "SymbolSpec":
        """Complex conjugate symbol: mode j of conj(u) is conj(v_{-j})."""
        return SymbolSpec.from_modes(
            {-j: profile.conjugate() for j, profile in self.mode_items},
            name=f"conj({self.name})",
        )


def evaluate(spec: SymbolSpec, z: complex) -> complex:
    """Pointwise value sum_j v_j(|z|) e^{i j arg z}.

    At z = 0 the angle is undefined, so modes j != 0 must vanish there;
    otherwise a :class:`DomainError` is raised.
    """
    z = complex(z)
    r = abs(z)
    if r == 0.0:
        total = 0j
        for j, profile in spec.mode_items:
            v0 = complex(profile(0.0))
            if j == 0:
                total += v0
            elif abs(v0) > 1e-12:
                raise DomainError(
                    f"symbol {spec.name!r}: mode j={j} does not vanish at z=0 "
                    "(angular factor undefined there)"
                )
        return total
    theta = cmath.phase(z)
    return sum(
        complex(profile(r)) * cmath.exp(1j * j * theta) for j, profile in spec.mode_items
    )


def sample_polar(spec: SymbolSpec, radii: Sequence[float], n_angles: int) -> np.ndarray:
    """Values of the symbol on the polar grid radii x uniform angles.

    Returns a complex array of shape (len(radii), n_angles) with angles
    theta_m = 2 pi m / n_angles.
    """
    r = np.asarray(radii, dtype=float)
    theta = 2.0 * math.pi * np.arange(n_angles) / n_angles
    out = np.zeros((r.size, n_angles), dtype=complex)
    for j, profile in spec.mode_items:
        out += np.outer(np.asarray(profile(r), dtype=complex), np.exp(1j * j * theta))
    return out


def decompose(
    radii: Sequence[float],
    samples: np.ndarray,
    j_max: int,
    *,
    drop_floor: float = DEFAULT_DROP_FLOOR,
    name: str = "decomposed",
) -> SymbolSpec:
    """Recover angular modes j in [-j_max, j_max] from polar-grid samples.

    ``samples[i, m]`` is the symbol at radius radii[i], angle 2 pi m / M.
    The angular DFT is exact for trigonometric polynomials of degree
    <= j_max provided M >= 2 j_max + 2 (enforced).  Modes whose magnitude
    stays below ``drop_floor`` across all radii are dropped; survivors are
    cubic interpolants in the radius.
    """
    if int(j_max) != j_max or j_max < 1:
        raise DomainError(f"j_max must be a positive integer, got {j_max!r}")
    values = np.asarray(samples)
    r = np.asarray(radii, dtype=float)
    if values.ndim != 2 or values.shape[0] != r.size:
        raise PreconditionError(
            f"samples must have shape (len(radii), M); got {values.shape} for {r.size} radii"
        )
    m_angles = values.shape[1]
    required = 2 * j_max + 2
    if m_angles < required:
        raise PreconditionError(
            f"angular grid too coarse: M = {m_angles} < {required} = 2*j_max + 2 "
            f"needed to resolve modes up to |j| = {j_max}"
        )
    coefficients = np.fft.fft(values, axis=1) / m_angles
    modes: dict[int, RadialProfile] = {}
    for j in range(-j_max, j_max + 1):
        column = coefficients[:, j % m_angles]
        if float(np.max(np.abs(column))) < drop_floor:
            continue
        modes[j] = RadialProfile.from_samples(r, column)
    return SymbolSpec.from_modes(modes, name=name)


def dpoly_norm_estimate(
    spec: SymbolSpec,
    s: float,
    epsilon: float,
    grid: Sequence[float],
    *,
    n_angles: int | None = None,
) -> float:
    """Grid maximum of |u(z)| (1+|z|)^s e^{-epsilon |z|^2}.

    A lower estimate of the weighted sup-norm on the growth scale; the
    angular resolution defaults to enough points for the present modes.
    """
    if epsilon < 0.0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon!r}")
    r = np.asarray(grid, dtype=float)
    if r.size == 0:
        raise DomainError("grid must be nonempty")
    if n_angles is None:
        n_angles = max(16, 4 * spec.max_mode + 4)
    values = sample_polar(spec, r, n_angles)
    weight = (1.0 + r) ** float(s) * np.exp(-float(epsilon) * r**2)
    return float(np.max(np.abs(values) * weight[:, None]))


def fit_growth(spec: SymbolSpec, grid: Sequence[float]) -> tuple[float, float]:
    """Smallest ladder exponent m (and constant C) with |u| <= C (1+r)^m.

    The constant carries 10% headroom over the grid maximum.  Raises
    :class:`ClassificationError` when the samples outgrow every ladder rung,
    i.e. the symbol is numerically outside the polynomial-growth class.
    """
    r = np.asarray(grid, dtype=float)
    if r.size == 0:
        raise DomainError("grid must be nonempty")
    order = np.argsort(r)
    r = r[order]
    n_angles = max(16, 4 * spec.max_mode + 4)
    magnitudes = np.max(np.abs(sample_polar(spec, r, n_angles)), axis=1)
    exponent = _fit_exponent_on_samples(r, magnitudes)
    if exponent is None:
        raise ClassificationError(
            f"symbol {spec.name!r} grows faster than (1+r)^{_GROWTH_LADDER_MAX} on the grid"
        )
    constant = float(np.max(magnitudes / (1.0 + r) ** exponent)) * _GROWTH_HEADROOM
    return max(constant, 1e-300), float(exponent)


def polar_l2_norm(radii: Sequence[float], samples: np.ndarray, s: float) -> float:
    """Discrete L^2(G_s dA) norm of polar-grid samples.

    Trapezoidal in the radius against the density r^(2s+1) e^{-r^2} / pi and
    exact (uniform) in the angle; used for round-trip residuals.
    """
    r = np.asarray(radii, dtype=float)
    values = np.asarray(samples)
    angular_mean = np.mean(np.abs(values) ** 2, axis=1)
    integrand = angular_mean * r ** (2.0 * float(s) + 1.0) * np.exp(-(r**2))
    return math.sqrt(max(2.0 * float(np.trapezoid(integrand, r)), 0.0))
