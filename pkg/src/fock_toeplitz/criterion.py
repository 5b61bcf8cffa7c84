"""Functional-equation residuals and the radiality verdict engine.

For a radial symbol u and a second symbol v with angular modes {j -> v_j},
commutation of the two Toeplitz operators forces, for every k >= 0 and j
with j + k >= 0, the product

    Phi_j(k+s) * Psi_j(k+s) = 0,

where (written through the shifted transforms so that a single quadrature
path is used)

    Phi_j(k+s) = M[u G_s](2k+2) / Gamma(k+s+1)
                 - M[u G_s](2k+2j+2) / Gamma(k+j+s+1),
    Psi_j(k+s) = M[v_j G_s](j+2k+2).

Phi_0 vanishes identically, as does every Phi_j when u is constant; for a
nonconstant radial u the products can only vanish when the nonradial modes
of v do, so commutation forces radiality of v and every surviving nonradial
mode is an obstruction to commutation.  Each commutator matrix entry
doubles as a cross-check:

    C[k+j, k] = -(2 pi)^2 Phi_j(k+s) Psi_j(k+s)
                / sqrt(Gamma(s+k+1) Gamma(s+k+j+1)).

"Vanishing" always means: magnitude below ``verdict_multiplier`` times the
propagated quadrature error estimate.  The probes of the one-sided moment
and periodicity statements are labelled probes; finitely many evaluations
never certify an "almost everywhere" conclusion.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AccuracyError, DomainError, PreconditionError
from .fock_space import SobolevOrder, order_value
from .mellin import mellin_weighted_cached
from .operators import commutator, toeplitz_matrix, window_max_abs
from .special_functions import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    gaussian_weighted_integral_with_estimate,
    log_gamma,
)
from .symbols import RadialProfile, SymbolSpec

__all__ = [
    "Verdict",
    "CriterionReport",
    "MomentProbe",
    "phi",
    "phi_with_error",
    "psi",
    "psi_with_error",
    "functional_equation_residuals",
    "commutator_cross_check",
    "moment_vanishing_probe",
    "periodicity_probe",
    "periodicity_probe_with_error",
]

DEFAULT_VERDICT_MULTIPLIER = 3.0


def phi_with_error(
    j: int,
    k: int,
    s: "float | SobolevOrder",
    u: RadialProfile,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> tuple[complex, float]:
    """Phi_j(k+s) together with its propagated absolute error estimate."""
    if int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if int(j) != j or j + k < 0:
        raise DomainError(f"need integer j with j + k >= 0, got j={j!r}, k={k!r}")
    sv = order_value(s)
    j, k = int(j), int(k)
    if j == 0:
        return 0j, 0.0
    first = mellin_weighted_cached(u, sv, float(2 * k + 2), quad)
    second = mellin_weighted_cached(u, sv, float(2 * k + 2 * j + 2), quad)
    inv_first = math.exp(-log_gamma(k + sv + 1.0))
    inv_second = math.exp(-log_gamma(k + j + sv + 1.0))
    value = first.value * inv_first - second.value * inv_second
    estimate = first.abs_error_estimate * inv_first + second.abs_error_estimate * inv_second
    return value, estimate


def phi(
    j: int,
    k: int,
    s: "float | SobolevOrder",
    u: RadialProfile,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> complex:
    """First factor of the functional equation at z = k + s.

    Identically zero for j = 0 and for constant u; satisfies the index
    symmetry Phi_j(k) = -Phi_{-j}(k+j).
    """
    return phi_with_error(j, k, s, u, quad)[0]


def psi_with_error(
    j: int,
    k: int,
    s: "float | SobolevOrder",
    v_j: RadialProfile,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> tuple[complex, float]:
    """Psi_j(k+s) together with its propagated absolute error estimate."""
    sv = order_value(s)
    transform = mellin_weighted_cached(v_j, sv, float(2 * k + int(j) + 2), quad)
    return transform.value, transform.abs_error_estimate


def psi(
    j: int,
    k: int,
    s: "float | SobolevOrder",
    v_j: RadialProfile,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> complex:
    """Second factor of the functional equation: M[v_j G_s](j + 2k + 2)."""
    return psi_with_error(j, k, s, v_j, quad)[0]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a criterion run.

    ``kind`` is one of "consistent_radial", "nonradial_mode_detected",
    "inconclusive"; ``modes`` lists the detected modes for the second kind
    and ``reason`` explains the third.
    """

    kind: str
    modes: tuple[int, ...] = ()
    reason: str = ""

    def __str__(self) -> str:
        if self.kind == "nonradial_mode_detected":
            return f"nonradial_mode_detected({list(self.modes)})"
        if self.kind == "inconclusive":
            return f"inconclusive({self.reason!r})"
        return self.kind


@dataclass
class CriterionReport:
    """Per-(j, k) functional-equation cells plus the radiality verdict.

    ``products[(j, k)]`` is stored exactly as ``phi[(j, k)] * psi[(j, k)]``.
    ``matrix_residuals`` holds the relative discrepancy between the
    commutator matrix entry and the closed criterion expression wherever the
    exactness window allows the comparison.  ``cell_notes`` annotates cells
    whose quadrature failed instead of aborting the run.
    """

    s: float
    k_max: int
    j_modes: tuple[int, ...]
    phi: dict = field(default_factory=dict)
    phi_err: dict = field(default_factory=dict)
    psi: dict = field(default_factory=dict)
    psi_err: dict = field(default_factory=dict)
    products: dict = field(default_factory=dict)
    product_err: dict = field(default_factory=dict)
    matrix_residuals: dict = field(default_factory=dict)
    cell_notes: dict = field(default_factory=dict)
    verdict: Verdict = field(default_factory=lambda: Verdict("inconclusive", reason="empty"))
    commutation_asserted: bool = True
    matrix_window_residual: float | None = None
    verdict_multiplier: float = DEFAULT_VERDICT_MULTIPLIER
    truncation_size: int | None = None
    quad_abs_tol: float | None = None
    quad_rel_tol: float | None = None

    @property
    def k_range(self) -> tuple[int, int]:
        return (0, self.k_max)

    @property
    def j_range(self) -> tuple[int, int]:
        if not self.j_modes:
            return (0, 0)
        return (min(self.j_modes), max(self.j_modes))

    def cells(self) -> list[tuple[int, int]]:
        return sorted(self.phi.keys())

    def to_json_dict(self) -> dict:
        cells = []
        for (j, k) in self.cells():
            product = self.products[(j, k)]
            cell = {
                "j": j,
                "k": k,
                "phi": {"re": self.phi[(j, k)].real, "im": self.phi[(j, k)].imag},
                "phi_err": self.phi_err[(j, k)],
                "psi": {"re": self.psi[(j, k)].real, "im": self.psi[(j, k)].imag},
                "psi_err": self.psi_err[(j, k)],
                "product": {"re": product.real, "im": product.imag},
                "product_err": self.product_err[(j, k)],
                "matrix_residual": self.matrix_residuals.get((j, k)),
                "note": self.cell_notes.get((j, k)),
            }
            cells.append(cell)
        return {
            "s": self.s,
            "k_range": list(self.k_range),
            "j_range": list(self.j_range),
            "j_modes": list(self.j_modes),
            "verdict": {
                "kind": self.verdict.kind,
                "modes": list(self.verdict.modes),
                "reason": self.verdict.reason,
            },
            "commutation_asserted": self.commutation_asserted,
            "matrix_window_residual": self.matrix_window_residual,
            "tolerances": {
                "quad_abs": self.quad_abs_tol,
                "quad_rel": self.quad_rel_tol,
                "verdict_multiplier": self.verdict_multiplier,
            },
            "truncation_size": self.truncation_size,
            "cells": cells,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        lines = ["s,j,k,abs_phi,abs_psi,abs_product,matrix_discrepancy"]
        for (j, k) in self.cells():
            residual = self.matrix_residuals.get((j, k))
            residual_text = "" if residual is None else repr(residual)
            lines.append(
                f"{self.s!r},{j},{k},{abs(self.phi[(j, k)])!r},"
                f"{abs(self.psi[(j, k)])!r},{abs(self.products[(j, k)])!r},"
                f"{residual_text}"
            )
        return "\n".join(lines) + "\n"


def _radial_wrapper(u: RadialProfile, name: str = "u") -> SymbolSpec:
    return SymbolSpec.from_modes({0: u}, name=name)


def commutator_cross_check(
    u: RadialProfile,
    v: SymbolSpec,
    s: "float | SobolevOrder",
    N: int,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    k_max: int | None = None,
) -> dict:
    """Relative discrepancy between commutator entries and the criterion form.

    For every nonradial mode j of v and every k inside the exactness window,
    compares C[k+j, k] against
    -(2 pi)^2 Phi_j(k+s) Psi_j(k+s) / sqrt(Gamma(s+k+1) Gamma(s+k+j+1)).
    Cells where both sides sit below the propagated error floor count as
    discrepancy zero.
    """
    sv = order_value(s)
    band = v.max_mode
    k_cap = N - 2 * band - 1
    if k_cap < 0:
        raise PreconditionError(
            f"N = {N} leaves no exactness window for modes up to |j| = {band}"
        )
    if k_max is not None:
        if k_max + band >= N - band:
            raise PreconditionError(
                f"k_max = {k_max} violates the window: need k_max + {band} < {N - band}"
            )
        k_cap = min(k_cap, int(k_max))
    op_u = toeplitz_matrix(_radial_wrapper(u), sv, N, quad)
    op_v = toeplitz_matrix(v, sv, N, quad)
    comm = commutator(op_u, op_v)
    out: dict = {}
    for j, profile in v.mode_items:
        for k in range(max(0, -j), k_cap + 1):
            if j == 0:
                out[(j, k)] = 0.0
                continue
            phi_val, phi_e = phi_with_error(j, k, sv, u, quad)
            psi_val, psi_e = psi_with_error(j, k, sv, profile, quad)
            scale = (2.0 * math.pi) ** 2 * math.exp(
                -0.5 * (log_gamma(sv + k + 1.0) + log_gamma(sv + k + j + 1.0))
            )
            formula = -scale * phi_val * psi_val
            formula_err = scale * (abs(phi_val) * psi_e + abs(psi_val) * phi_e + phi_e * psi_e)
            matrix_entry = complex(comm.entries[k + j, k])
            denominator = max(abs(formula), abs(matrix_entry))
            floor = 3.0 * (formula_err + comm.entry_error) + 1e-300
            if denominator <= floor:
                out[(j, k)] = 0.0
            else:
                out[(j, k)] = abs(matrix_entry - formula) / denominator
    return out


def functional_equation_residuals(
    u: RadialProfile,
    v: SymbolSpec,
    s: "float | SobolevOrder",
    k_max: int,
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    N: int | None = None,
    assert_commutation: bool = True,
    verdict_multiplier: float = DEFAULT_VERDICT_MULTIPLIER,
) -> CriterionReport:
    """Evaluate all functional-equation cells and issue the verdict.

    The commutation hypothesis is in force when asserted by the caller
    (default) or when the measured commutator window residual is below the
    propagated error floor.  Under that hypothesis:

    * no surviving nonradial mode        -> consistent_radial
    * u numerically constant (Phi == 0)  -> inconclusive("u constant")
    * nonvanishing products at modes J   -> nonradial_mode_detected(J)
    * nonvanishing Psi but vanishing
      products everywhere                -> inconclusive (internal
                                            inconsistency at tested indices)
    """
    sv = order_value(s)
    if int(k_max) != k_max or k_max < 1:
        raise DomainError(f"k_max must be a positive integer, got {k_max!r}")
    k_max = int(k_max)
    band = v.max_mode
    if N is None:
        N = k_max + 2 * band + 2
    report = CriterionReport(
        s=sv,
        k_max=k_max,
        j_modes=v.mode_indices,
        commutation_asserted=bool(assert_commutation),
        verdict_multiplier=float(verdict_multiplier),
        truncation_size=int(N),
        quad_abs_tol=quad.abs_tol,
        quad_rel_tol=quad.rel_tol,
    )

    for j, profile in v.mode_items:
        for k in range(max(0, -j), k_max + 1):
            try:
                phi_val, phi_e = phi_with_error(j, k, sv, u, quad)
                psi_val, psi_e = psi_with_error(j, k, sv, profile, quad)
            except AccuracyError as exc:
                report.phi[(j, k)] = complex("nan")
                report.phi_err[(j, k)] = math.inf
                report.psi[(j, k)] = complex("nan")
                report.psi_err[(j, k)] = math.inf
                report.products[(j, k)] = complex("nan")
                report.product_err[(j, k)] = math.inf
                report.cell_notes[(j, k)] = f"accuracy: {exc}"
                continue
            report.phi[(j, k)] = phi_val
            report.phi_err[(j, k)] = phi_e
            report.psi[(j, k)] = psi_val
            report.psi_err[(j, k)] = psi_e
            report.products[(j, k)] = phi_val * psi_val
            report.product_err[(j, k)] = (
                abs(phi_val) * psi_e + abs(psi_val) * phi_e + phi_e * psi_e
            )

    try:
        report.matrix_residuals = commutator_cross_check(u, v, sv, N, quad, k_max=k_max)
    except PreconditionError:
        report.matrix_residuals = {}

    op_u = toeplitz_matrix(_radial_wrapper(u), sv, N, quad)
    op_v = toeplitz_matrix(v, sv, N, quad)
    comm = commutator(op_u, op_v)
    window = comm.exactness_window
    if window >= 0:
        report.matrix_window_residual = window_max_abs(comm, window)
    residual_floor = max(verdict_multiplier * comm.entry_error, 1e-10)
    commutation_observed = (
        report.matrix_window_residual is not None
        and report.matrix_window_residual <= residual_floor
    )

    report.verdict = _decide(
        report, assert_commutation or commutation_observed, verdict_multiplier
    )
    return report


def _decide(report: CriterionReport, hypothesis_in_force: bool, multiplier: float) -> Verdict:
    nonzero_modes = [j for j in report.j_modes if j != 0]
    if not nonzero_modes:
        return Verdict("consistent_radial")

    def exceeds(j: int, values: dict, errors: dict) -> bool:
        for (jj, k), value in values.items():
            if jj != j:
                continue
            bar = multiplier * errors[(jj, k)]
            if np.isfinite(abs(value)) and abs(value) > bar:
                return True
        return False

    phi_alive = {j: exceeds(j, report.phi, report.phi_err) for j in nonzero_modes}
    psi_alive = {j: exceeds(j, report.psi, report.psi_err) for j in nonzero_modes}
    product_alive = {j: exceeds(j, report.products, report.product_err) for j in nonzero_modes}

    if not any(phi_alive.values()):
        return Verdict("inconclusive", reason="u constant")
    if not hypothesis_in_force:
        return Verdict(
            "inconclusive",
            reason=(
                "commutation hypothesis neither asserted nor observed "
                f"(window residual {report.matrix_window_residual!r})"
            ),
        )
    detected = tuple(
        sorted(j for j in nonzero_modes if psi_alive[j] and phi_alive[j] and product_alive[j])
    )
    if detected:
        return Verdict("nonradial_mode_detected", modes=detected)
    if any(psi_alive.values()):
        return Verdict(
            "inconclusive",
            reason=(
                "internal inconsistency: products vanish within error bars although "
                "Phi and Psi both exceed theirs on the tested range"
            ),
        )
    return Verdict("consistent_radial")


class MomentProbe(NamedTuple):
    k: int
    value: complex
    below_tolerance: bool


def moment_vanishing_probe(
    f: RadialProfile,
    a: float,
    k_list: Sequence[int],
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    tolerance_multiplier: float = DEFAULT_VERDICT_MULTIPLIER,
) -> list[MomentProbe]:
    """Probe of the one-sided moment statement: int_0^inf f(t) e^{-t} t^{ak} dt.

    Substituting t = x^2 turns each moment into the standard Gaussian-weight
    integral 2 * I(x -> f(x^2), 2ak + 2).  Flags mark moments within
    quadrature error of zero.  This probes the hypothesis of the vanishing
    statement; it never proves the a.e. conclusion.
    """
    a = float(a)
    if not (0.0 < a <= 2.0):
        raise DomainError(f"exponent a must lie in (0, 2], got {a!r}")
    results = []
    for k in k_list:
        if int(k) != k or k < 1:
            raise DomainError(f"moment indices must be positive integers, got {k!r}")
        alpha = 2.0 * a * int(k) + 2.0
        spec = quad.covering(alpha + 2.0 * f.growth_exponent)
        value, estimate = gaussian_weighted_integral_with_estimate(
            lambda x: np.asarray(f(x * x)),
            alpha,
            spec,
            growth_exponent=2.0 * f.growth_exponent,
        )
        value = 2.0 * value
        estimate = 2.0 * estimate
        results.append(
            MomentProbe(int(k), complex(value), abs(value) <= tolerance_multiplier * estimate)
        )
    return results


def periodicity_probe_with_error(
    u: RadialProfile,
    s: "float | SobolevOrder",
    j: int,
    z_grid: Sequence[float],
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> tuple[float, float]:
    """Max of |H(z) - H(z+j)| over the real grid, with its error bound.

    H(z) = M[u G](2z+2) / Gamma(z+1), evaluated through the shifted
    transform M[u G_s](2z+2-2s) so the single quadrature path is reused.
    Constant u gives zero to quadrature error.
    """
    sv = order_value(s)
    if int(j) != j or j < 1:
        raise DomainError(f"period j must be a positive integer, got {j!r}")
    worst = 0.0
    worst_err = 0.0
    for z in z_grid:
        z = float(z)
        if z <= -1.0:
            raise DomainError(f"grid point {z!r} outside the holomorphy half-plane z > -1")
        values = []
        errors = []
        for point in (z, z + j):
            transform = mellin_weighted_cached(u, sv, 2.0 * point + 2.0 - 2.0 * sv, quad)
            inv_gamma = math.exp(-log_gamma(point + 1.0))
            values.append(transform.value * inv_gamma)
            errors.append(transform.abs_error_estimate * inv_gamma)
        difference = abs(values[0] - values[1])
        if difference >= worst:
            worst = difference
            worst_err = errors[0] + errors[1]
    return worst, worst_err


def periodicity_probe(
    u: RadialProfile,
    s: "float | SobolevOrder",
    j: int,
    z_grid: Sequence[float],
    quad: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Max of |H(z) - H(z+j)| over the real grid (see the _with_error variant)."""
    return periodicity_probe_with_error(u, s, j, z_grid, quad)[0]
