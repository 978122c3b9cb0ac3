"""Soliton residuals and the hypothesis-audited PF theorem pipelines.

Sign conventions are kept as the two soliton equations are usually written:

* gradient Ricci soliton ``Hess f + S + lambda1 g = 0``
* quasi-Einstein ``Hess f + S - (1/m) df (x) df = (lambda1 + tau r) g``

so at ``m = inf, tau = 0`` the quasi-Einstein residual with ``lambda1``
equals the gradient Ricci soliton residual with ``-lambda1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curvature import GradientField, ScalarFieldSpec, curvature_pack, hessian, lie_metric, third_order_pack
from .errors import ValidationError
from .fluid import pf_decompose
from .grw import observer_frame
from .spacetime import SpacetimeSpec, metric_at

MODES = ("ricci_lie", "ricci_gradient", "quasi_einstein", "tau_einstein")
SOLITON_TOL = 1e-7
CONSTANCY_RTOL = 1e-8


@dataclass(frozen=True)
class SolitonParams:
    mode: str
    lambda1: float = 0.0
    tau: float = 0.0
    m: float = math.inf
    potential: ScalarFieldSpec | None = None
    W: object | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(f"unknown soliton mode {self.mode!r}")
        if self.mode == "ricci_lie":
            if self.W is None:
                raise ValidationError("ricci_lie mode needs a vector field W")
        elif self.potential is None:
            raise ValidationError(f"{self.mode} mode needs a potential function")
        if self.mode == "quasi_einstein" and not (0.0 < self.m < math.inf):
            raise ValidationError(f"quasi-Einstein solitons need 0 < m < inf, got {self.m!r}")
        if self.mode == "tau_einstein":
            object.__setattr__(self, "m", math.inf)


def rs_lie_residual(spec: SpacetimeSpec, params: SolitonParams, point: Sequence[float]) -> np.ndarray:
    """``L_W g + 2 S + 2 lambda1 g``."""
    pack = curvature_pack(spec, point, with_weyl=False)
    return lie_metric(spec, params.W, point) + 2.0 * pack.ricci + 2.0 * params.lambda1 * pack.g


def gradient_rs_residual(spec: SpacetimeSpec, params: SolitonParams, point: Sequence[float]) -> np.ndarray:
    """``Hess f + S + lambda1 g``."""
    pack = curvature_pack(spec, point, with_weyl=False)
    return hessian(spec, params.potential, point) + pack.ricci + params.lambda1 * pack.g


def qes_beta(spec: SpacetimeSpec, params: SolitonParams, point: Sequence[float]) -> float:
    return params.lambda1 + params.tau * curvature_pack(spec, point, with_weyl=False).r


def qes_residual(spec: SpacetimeSpec, params: SolitonParams, point: Sequence[float]) -> np.ndarray:
    """``Hess f + S - (1/m) df (x) df - beta1 g``; the df term is dropped at m = inf."""
    pack = curvature_pack(spec, point, with_weyl=False)
    res = hessian(spec, params.potential, point) + pack.ricci
    if math.isfinite(params.m):
        df = params.potential.jet(point, 1).gradient()
        res = res - np.outer(df, df) / params.m
    return res - (params.lambda1 + params.tau * pack.r) * pack.g


def soliton_residual(spec: SpacetimeSpec, params: SolitonParams, point: Sequence[float]) -> np.ndarray:
    if params.mode == "ricci_lie":
        return rs_lie_residual(spec, params, point)
    if params.mode == "ricci_gradient":
        return gradient_rs_residual(spec, params, point)
    return qes_residual(spec, params, point)


def check_df_collinear(spec: SpacetimeSpec, potential: ScalarFieldSpec, point: Sequence[float]) -> tuple:
    """``(c1, residual)`` with ``c1 = rho f`` and residual ``max |Df + (rho f) rho|``."""
    met = metric_at(spec, point, 0)
    df = potential.jet(point, 1).gradient()
    grad = met.g_inv @ df
    c1 = float(df[spec.t_index])
    rho = np.zeros(spec.n)
    rho[spec.t_index] = 1.0
    return c1, float(np.max(np.abs(grad + c1 * rho)))


def gradient_of(potential: ScalarFieldSpec) -> GradientField:
    return GradientField(potential)


@dataclass
class TheoremVerdict:
    theorem: str
    status: str
    hypothesis: dict
    flags: list
    branch: str | None = None
    conclusion_residual: float | None = None
    div_c_max: float | None = None
    pf_fit: list = field(default_factory=list)
    points: list = field(default_factory=list)

    @property
    def hypotheses_hold(self) -> bool:
        return not self.flags

    @property
    def concludes_pf(self) -> bool:
        return self.status == "PF"

    @property
    def consistent(self) -> bool:
        """False only when every hypothesis holds but the conclusion fails."""
        return not (self.hypotheses_hold and not self.concludes_pf)


def _constant(values) -> tuple:
    arr = np.asarray(values, dtype=float)
    mean = float(np.mean(arr))
    std = float(np.std(arr, ddof=1)) if arr.size > 1 else 0.0
    return std <= CONSTANCY_RTOL * (1.0 + abs(mean)), mean, std


def theorem_pipeline(
    spec: SpacetimeSpec,
    params: SolitonParams,
    points: Sequence[Sequence[float]],
    tol: float = SOLITON_TOL,
) -> TheoremVerdict:
    """Audit the soliton hypotheses at ``points`` and, if they hold, test the PF conclusion."""
    if not points:
        raise ValidationError("theorem pipeline needs at least one point")
    if params.mode == "ricci_gradient":
        theorem = "gradient_rs"
    elif params.mode in ("quasi_einstein", "tau_einstein"):
        theorem = "quasi_einstein"
    else:
        raise ValidationError(f"theorem pipeline does not apply to mode {params.mode!r}")
    n = spec.n

    rows = []
    for pt in points:
        frame = observer_frame(spec, pt)
        c1, df_res = check_df_collinear(spec, params.potential, pt)
        row = {
            "soliton_residual": float(np.max(np.abs(soliton_residual(spec, params, pt)))),
            "c1": c1,
            "df_collinear_residual": df_res,
            "psi": frame.psi,
            "mu": frame.mu,
            "xi": frame.xi,
        }
        if theorem == "quasi_einstein":
            row["beta1"] = qes_beta(spec, params, pt)
        rows.append(row)

    soliton_max = max(r["soliton_residual"] for r in rows)
    c1_const, c1_mean, c1_std = _constant([r["c1"] for r in rows])
    hypothesis = {
        "soliton_residual_max": soliton_max,
        "is_soliton": soliton_max <= tol,
        "c1_mean": c1_mean,
        "c1_std": c1_std,
        "c1_constant": c1_const,
        "df_collinear_max": max(r["df_collinear_residual"] for r in rows),
        "mu_zero": all(abs(r["mu"]) <= tol for r in rows),
    }
    flags = []
    if not hypothesis["is_soliton"]:
        flags.append("hypothesis fails: not a soliton")
    if not c1_const:
        flags.append("hypothesis fails: rho f not constant")
    if theorem == "quasi_einstein":
        betas = [r["beta1"] for r in rows]
        beta_const, beta_mean, beta_std = _constant(betas)
        matches = all(
            abs(r["beta1"] - (n - 1) * r["mu"]) <= CONSTANCY_RTOL * (1.0 + abs(r["beta1"])) for r in rows
        )
        nonzero = abs(beta_mean) > tol
        hypothesis.update(
            beta1_mean=beta_mean,
            beta1_std=beta_std,
            beta1_constant=beta_const,
            beta1_matches_mu=matches,
            beta1_nonzero=nonzero,
        )
        if not (beta_const and matches and nonzero):
            flags.append("hypothesis fails: beta1 = (n-1) mu = nonzero constant")
    if hypothesis["mu_zero"]:
        flags.append("contradiction case: xi = 0")

    verdict = TheoremVerdict(theorem, flags[0] if flags else "", hypothesis, flags, points=rows)
    if flags:
        return verdict

    c1 = c1_mean
    verdict.branch = "c1_nonzero" if abs(c1) > tol else "c1_zero"
    conclusion = []
    div_c = []
    for pt, row in zip(points, rows):
        pack = curvature_pack(spec, pt, with_weyl=False)
        eta = pack.g[:, spec.t_index]
        base = -params.lambda1 if theorem == "gradient_rs" else row["beta1"]
        if verdict.branch == "c1_nonzero":
            cpsi = c1 * row["psi"]
            target = (cpsi + base) * pack.g + cpsi * np.outer(eta, eta)
        else:
            target = base * pack.g
            div_c.append(float(np.max(np.abs(third_order_pack(spec, pt).div_c))))
        res = float(np.max(np.abs(pack.ricci - target)))
        row["conclusion_residual"] = res
        conclusion.append(res)
        pf = pf_decompose(pack.ricci, pack.g, eta, tol)
        verdict.pf_fit.append(
            {"a1": pf.a1, "b1": pf.b1, "residual": pf.residual, "is_pf": pf.is_pf, "b1_minus_c1psi": pf.b1 - c1 * row["psi"]}
        )
    verdict.conclusion_residual = max(conclusion)
    ok = verdict.conclusion_residual <= tol
    if div_c:
        verdict.div_c_max = max(div_c)
        ok = ok and verdict.div_c_max <= tol
    verdict.status = "PF" if ok else "conclusion fails"
    return verdict
