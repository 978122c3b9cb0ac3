"""Perfect-fluid decomposition, field-equation stress-energy and equation-of-state eras."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .curvature import curvature_pack
from .errors import ValidationError
from .spacetime import SpacetimeSpec, check_nondegenerate

DEFAULT_TOL = 1e-7
ERAS = ("dust", "radiation", "dark_energy", "phantom", "other")


@dataclass(frozen=True)
class PFDecomposition:
    a1: float
    b1: float
    residual: float
    tolerance: float = DEFAULT_TOL

    @property
    def is_pf(self) -> bool:
        return self.residual <= self.tolerance


@dataclass(frozen=True)
class FluidState:
    p: float
    nu: float
    k: float = 1.0
    tolerance: float = DEFAULT_TOL

    @property
    def omega(self) -> float | None:
        """EOS parameter p / nu, or None when the density vanishes."""
        if abs(self.nu) <= self.tolerance:
            return None
        return self.p / self.nu


@dataclass(frozen=True)
class EraLabel:
    kind: str
    omega: float | None = None

    def __str__(self):
        if self.kind == "other" and self.omega is not None:
            return f"other({self.omega:.6g})"
        return self.kind


def _projection(X: np.ndarray, g: np.ndarray, eta: np.ndarray):
    """``(X(rho, rho), h^ij X_ij / (n - 1))`` with ``h = g^-1 + rho rho``."""
    check_nondegenerate(g)
    n = g.shape[0]
    g_inv = np.linalg.inv(g)
    rho = g_inv @ eta
    h_up = g_inv + np.outer(rho, rho)
    return float(rho @ X @ rho), float(np.einsum("ij,ij->", h_up, X) / (n - 1))


def pf_decompose(S: np.ndarray, g: np.ndarray, eta: np.ndarray, tol: float = DEFAULT_TOL) -> PFDecomposition:
    """Fit ``S = a1 g + b1 eta (x) eta`` by projecting along and across rho."""
    S = np.asarray(S, dtype=float)
    eta = np.asarray(eta, dtype=float)
    s_rr, a1 = _projection(S, g, eta)
    b1 = s_rr + a1  # S(rho, rho) = -a1 + b1
    residual = float(np.max(np.abs(S - a1 * g - b1 * np.outer(eta, eta))))
    return PFDecomposition(a1, b1, residual, tol)


def stress_energy(spec: SpacetimeSpec, point: Sequence[float], k: float = 1.0) -> np.ndarray:
    """``T = (S - r g / 2) / k^2`` (no cosmological constant)."""
    if k == 0:
        raise ValidationError("gravitational coupling k must be non-zero")
    pack = curvature_pack(spec, point, with_weyl=False)
    return (pack.ricci - 0.5 * pack.r * pack.g) / k**2


def fit_fluid(T: np.ndarray, g: np.ndarray, eta: np.ndarray, k: float = 1.0, tol: float = DEFAULT_TOL):
    """Read ``(p, nu)`` off ``T = (nu + p) eta (x) eta + p g``; returns (state, residual)."""
    nu, p = _projection(np.asarray(T, dtype=float), g, eta)
    residual = float(np.max(np.abs(T - (nu + p) * np.outer(eta, eta) - p * g)))
    return FluidState(p, nu, k, tol), residual


def pressure_density(pf: PFDecomposition, n: int, k: float = 1.0, tol: float = DEFAULT_TOL) -> FluidState:
    """Invert ``b1 = k^2 (p + nu)``, ``a1 = k^2 (p - nu) / (2 - n)``."""
    if k == 0:
        raise ValidationError("gravitational coupling k must be non-zero")
    if n < 3:
        raise ValidationError(f"pressure/density inversion needs n >= 3, got {n}")
    k2 = k * k
    p_minus = pf.a1 * (2 - n) / k2
    p_plus = pf.b1 / k2
    return FluidState(0.5 * (p_plus + p_minus), 0.5 * (p_plus - p_minus), k, tol)


def pf_coefficients(p: float, nu: float, n: int, k: float = 1.0) -> tuple:
    """Forward map ``(p, nu) -> (a1, b1)``."""
    k2 = k * k
    return k2 * (p - nu) / (2 - n), k2 * (p + nu)


def eos_classify(state: FluidState, tol: float | None = None) -> EraLabel:
    p, nu = state.p, state.nu
    if not (math.isfinite(p) and math.isfinite(nu)):
        raise ValidationError("equation-of-state classification needs finite p and nu")
    tol = state.tolerance if tol is None else tol
    scale = tol * (1.0 + abs(nu))
    omega = state.omega
    if abs(p) <= scale:
        return EraLabel("dust", omega)
    if abs(p - nu / 3.0) <= scale:
        return EraLabel("radiation", omega)
    if abs(p + nu) <= scale:
        return EraLabel("dark_energy", omega)
    if omega is not None and omega < -1.0 - tol:
        return EraLabel("phantom", omega)
    return EraLabel("other", omega)


@dataclass
class RemarkEOSReport:
    p: list
    nu: list
    sum_3p_nu: list  # 3p + nu, the combination fixed by the soliton coefficient
    diff_3p_nu: list  # 3p - nu, the literal combination
    invariant_constant: bool
    literal_constant: bool
    omega: float | None
    remark_case: bool  # 3p + nu = 0, i.e. omega = -1/3

    @property
    def passed(self) -> bool:
        return self.invariant_constant


def _constant(values, tol):
    arr = np.asarray(values, dtype=float)
    return bool(np.ptp(arr) <= tol * (1.0 + np.max(np.abs(arr)))) if arr.size else True


def remark_eos_check(
    c1: float,
    psi_values: Sequence[float],
    coefficient: float,
    n: int,
    k: float = 1.0,
    tol: float = DEFAULT_TOL,
) -> RemarkEOSReport:
    """EOS implied by ``S = (c1 psi + coefficient) g + c1 psi eta (x) eta`` in four dimensions.

    ``coefficient`` is ``-lambda1`` for a gradient Ricci soliton and ``beta1``
    for a quasi-Einstein soliton.
    """
    if n != 4:
        raise ValidationError(f"the soliton EOS check applies to n = 4 only, got {n}")
    p, nu = [], []
    for psi in psi_values:
        a1 = c1 * psi + coefficient
        b1 = c1 * psi
        state = pressure_density(PFDecomposition(a1, b1, 0.0), n, k)
        p.append(state.p)
        nu.append(state.nu)
    sums = [3 * a + b for a, b in zip(p, nu)]
    diffs = [3 * a - b for a, b in zip(p, nu)]
    invariant_constant = _constant(sums, tol)
    remark_case = invariant_constant and all(abs(s) <= tol * (1.0 + abs(b)) for s, b in zip(sums, nu))
    omega = None
    if remark_case and nu and all(abs(b) > tol for b in nu):
        omega = float(np.mean([a / b for a, b in zip(p, nu)]))
    return RemarkEOSReport(p, nu, sums, diffs, invariant_constant, _constant(diffs, tol), omega, remark_case)


def fluid_at(spec: SpacetimeSpec, point: Sequence[float], k: float = 1.0, tol: float = DEFAULT_TOL):
    """PF fit, EOS state and era at one point; ``(pf, state, era)``."""
    pack = curvature_pack(spec, point, with_weyl=False)
    eta = pack.g[:, spec.t_index]
    pf = pf_decompose(pack.ricci, pack.g, eta, tol)
    state = pressure_density(pf, spec.n, k, tol)
    return pf, state, eos_classify(state)

