"""Observer field rho = d_t of a GRW spacetime and point-wise structure identities.

Every identity here is checked as a max-norm residual over coordinate-basis
insertions.  Scalars that appear differentiated (psi in its spatial-constancy
and R(U,V)rho forms, mu in its contraction identity) are rebuilt geometrically
from the connection and the Ricci tensor rather than read off the warp, so the
checks exercise the curvature pipeline instead of restating the construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .curvature import Geometry, geometry, third_order_pack
from .expr import compose
from .jets import Jet, TensorJet, contract
from .spacetime import SpacetimeSpec

DEFAULT_TOL = 1e-7


@dataclass(frozen=True)
class ObserverFrame:
    point: tuple
    rho: np.ndarray
    eta: np.ndarray
    psi: float
    mu: float
    xi: float

    @property
    def xi_zero(self) -> bool:
        """True when the Ricci eigenvalue on rho vanishes (flat-like case)."""
        return abs(self.xi) <= 1e-12


@dataclass
class LemmaReport:
    lemma: str
    max_residual: float
    residuals: list
    tolerance: float
    aux: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def _rho(n: int) -> np.ndarray:
    rho = np.zeros(n)
    rho[n - 1] = 1.0
    return rho


def warp_scalars(spec: SpacetimeSpec, t: float) -> tuple:
    """``(psi, mu) = (f'/f, f''/f)`` straight from the warp jet."""
    fj = compose(spec.warp, [Jet.variable(0, float(t), 1, 2)])
    f = fj.value
    return fj.derivative((1,)) / f, fj.derivative((2,)) / f


def observer_frame(spec: SpacetimeSpec, point: Sequence[float]) -> ObserverFrame:
    geo = geometry(spec, point, 2)
    n = spec.n
    rho = _rho(n)
    eta = geo.g @ rho
    psi, mu = warp_scalars(spec, point[spec.t_index])
    xi = float(rho @ geo.ricci @ rho / (rho @ geo.g @ rho))
    return ObserverFrame(tuple(float(x) for x in point), rho, eta, psi, mu, xi)


# -- geometric scalar jets -----------------------------------------------------


def _nabla_eta_jet(geo: Geometry, t: int) -> TensorJet:
    """``nabla_i rho_j`` as a jet (rho = d_t has constant components)."""
    eta = geo.metric[:, t]
    p = geo.gamma_jet.order
    d_eta = eta.partial()
    return d_eta - contract("kij,k->ij", geo.gamma_jet, eta.truncate(p))


def psi_jet(geo: Geometry, t: int) -> Jet:
    """``psi = div(rho) / (n - 1)`` from the connection."""
    n = geo.dim
    tr = contract("ij,ij->", geo.ginv_jet, _nabla_eta_jet(geo, t))
    return tr.scalar() * (1.0 / (n - 1))


def mu_jet(geo: Geometry, t: int) -> Jet:
    """``mu = xi / (n - 1)`` with ``xi = S(rho, rho) / g(rho, rho)``."""
    n = geo.dim
    q = geo.ricci_jet.order
    S_tt = geo.ricci_jet[t, t].scalar()
    g_tt = geo.metric.truncate(q)[t, t].scalar()
    return (S_tt / g_tt) * (1.0 / (n - 1))


# -- single-point checks ----------------------------------------------------


def check_torse_forming(spec: SpacetimeSpec, point: Sequence[float]) -> float:
    """max |nabla_i rho_j - psi (g_ij + eta_i eta_j)|."""
    geo = geometry(spec, point, 2)
    frame = observer_frame(spec, point)
    nabla = _nabla_eta_jet(geo, spec.t_index).value
    target = frame.psi * (geo.g + np.outer(frame.eta, frame.eta))
    return float(np.max(np.abs(nabla - target)))


class EigenvectorCheck(NamedTuple):
    xi: float
    residual: float
    xi_vs_mu: float  # |xi - (n - 1) mu|
    xi_zero: bool


def check_ricci_eigenvector(spec: SpacetimeSpec, point: Sequence[float]) -> EigenvectorCheck:
    geo = geometry(spec, point, 2)
    frame = observer_frame(spec, point)
    q_rho = geo.g_inv @ geo.ricci @ frame.rho
    residual = float(np.max(np.abs(q_rho - frame.xi * frame.rho)))
    return EigenvectorCheck(frame.xi, residual, abs(frame.xi - (spec.n - 1) * frame.mu), frame.xi_zero)


def _lemma1_point(spec, point):
    geo = geometry(spec, point, 2)
    frame = observer_frame(spec, point)
    n, t = spec.n, spec.t_index
    eye = np.eye(n)
    lhs = geo.riem_up[:, t, :, :]  # R(d_j, d_k) rho, component l
    rhs = frame.mu * (np.einsum("k,lj->ljk", frame.eta, eye) - np.einsum("j,lk->ljk", frame.eta, eye))
    riem_res = float(np.max(np.abs(lhs - rhs)))
    ric_res = float(np.max(np.abs(geo.ricci[:, t] - (n - 1) * frame.mu * frame.eta)))
    return riem_res, ric_res


def verify_lemma1(spec: SpacetimeSpec, points, tol: float = DEFAULT_TOL) -> LemmaReport:
    riem_res, ric_res = zip(*[_lemma1_point(spec, p) for p in points]) if points else ((), ())
    residuals = [max(a, b) for a, b in zip(riem_res, ric_res)]
    return LemmaReport("lemma1", _max(residuals), residuals, tol, {"riemann_rho": list(riem_res), "ricci_rho": list(ric_res)})


def _lemma2_point(spec, point):
    geo = geometry(spec, point, 3)
    n, t = spec.n, spec.t_index
    frame = observer_frame(spec, point)
    dmu = mu_jet(geo, t).gradient()
    corrected = float(np.max(np.abs(dmu + dmu[t] * frame.eta)))
    literal = 0.0
    for i in range(n - 1):
        vec = np.eye(n)[i] + frame.eta[i] * frame.rho
        literal = max(literal, abs(frame.mu) * float(np.max(np.abs(vec))))
    return corrected, literal


def verify_lemma2(spec: SpacetimeSpec, points, tol: float = DEFAULT_TOL) -> LemmaReport:
    """Scores ``U(mu) + (rho mu) eta(U) = 0``; the literal form ``mu (U + eta(U) rho)`` is data only."""
    pairs = [_lemma2_point(spec, p) for p in points]
    corrected = [c for c, _ in pairs]
    literal = [lit for _, lit in pairs]
    return LemmaReport(
        "lemma2",
        _max(corrected),
        corrected,
        tol,
        {"contraction_residual": corrected, "literal_form": literal, "literal_form_max": _max(literal)},
    )


def _lemma3_point(spec, point):
    pack = third_order_pack(spec, point)
    t = spec.t_index
    eta = pack.g[:, t]
    # (nabla_a Q)^c_b
    nabla_q = np.einsum("cd,adb->acb", pack.g_inv, pack.nabla_ricci)
    vec = nabla_q[t, :, :] - np.transpose(nabla_q[:, :, t])  # [c, b]
    return float(np.max(np.abs(eta @ vec)))


def verify_lemma3(spec: SpacetimeSpec, points, tol: float = DEFAULT_TOL) -> LemmaReport:
    residuals = [_lemma3_point(spec, p) for p in points]
    return LemmaReport("lemma3", _max(residuals), residuals, tol)


def _aux_point(spec, point):
    geo = geometry(spec, point, 3)
    n, t = spec.n, spec.t_index
    eye = np.eye(n)
    rho = _rho(n)
    eta = geo.g @ rho
    pj = psi_jet(geo, t)
    psi = pj.value
    dpsi = pj.gradient()
    psi_res = float(np.max(np.abs(dpsi + dpsi[t] * eta)))

    proj = eye + np.outer(rho, eta)  # proj[l, k] = delta_lk + rho^l eta_k
    rhs = (
        np.einsum("j,lk->ljk", dpsi, proj)
        - np.einsum("k,lj->ljk", dpsi, proj)
        + psi**2 * (np.einsum("k,lj->ljk", eta, eye) - np.einsum("j,lk->ljk", eta, eye))
    )
    riem_psi_res = float(np.max(np.abs(geo.riem_up[:, t, :, :] - rhs)))

    NR = geo.nabla_riem()
    cyclic = NR + np.einsum("jlika->alijk", NR) + np.einsum("kliaj->alijk", NR)
    bianchi = float(np.max(np.abs(cyclic)))
    return psi_res, riem_psi_res, bianchi


def check_aux_identities(spec: SpacetimeSpec, points, tol: float = DEFAULT_TOL) -> LemmaReport:
    rows = [_aux_point(spec, p) for p in points]
    psi_res = [r[0] for r in rows]
    riem_psi_res = [r[1] for r in rows]
    bianchi = [r[2] for r in rows]
    residuals = [max(r) for r in rows]
    return LemmaReport("aux_identities", _max(residuals), residuals, tol, {"psi_spatial": psi_res, "riemann_rho_psi": riem_psi_res, "bianchi": bianchi})


def torse_forming_report(spec: SpacetimeSpec, points, tol: float = DEFAULT_TOL) -> LemmaReport:
    residuals = [check_torse_forming(spec, p) for p in points]
    return LemmaReport("torse_forming", _max(residuals), residuals, tol)


def _max(values) -> float:
    return float(max(values)) if len(values) else 0.0
