"""Levi-Civita curvature of a metric known as a jet at one point.

Conventions (time-last signature ``(+, ..., +, -)``):

* ``gamma[k, i, j] = Gamma^k_{ij}``
* ``R(X, Y) Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`` and
  ``R(d_j, d_k) d_i = riem_up[l, i, j, k] d_l``
* ``riem_down[l, i, j, k] = g_lm riem_up[m, i, j, k]``
* ``ricci[i, k] = riem_up[l, i, l, k]`` (positive on de Sitter)
* ``div_c[i, j, k] = (div C)(d_i, d_j) d_k`` assembled from the Ricci
  derivative and ``dr``.

Everything is computed exactly from the metric jet; a third-order metric jet
yields first derivatives of every curvature tensor.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ArityError, ValidationError
from .expr import ExprAst, jet_eval, parse_expr
from .jets import Jet, TensorJet, contract
from .spacetime import SpacetimeSpec, check_nondegenerate, coordinate_names, metric_jet

CONVENTIONS = {
    "signature": "(+,...,+,-), time coordinate last, g_tt = -1",
    "riemann": "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; R(d_j,d_k)d_i = R^l_ijk d_l",
    "ricci": "S_ik = R^l_ilk (de Sitter: S = (n-1) H^2 g)",
    "observer": "rho = +d_t, eta = g(rho, .)",
}


def _reindex(tj: TensorJet, spec: str) -> TensorJet:
    src, dst = spec.split("->")
    return TensorJet(np.einsum(f"{src}...->{dst}...", tj.data), tj.n_vars, tj.order)


class Geometry:
    """Curvature jets derived from a metric jet of order 2 or 3."""

    def __init__(self, gj: TensorJet):
        if gj.order < 2:
            raise ValueError("curvature needs a metric jet of order >= 2")
        p = gj.order
        self.dim = gj.shape[0]
        self.metric = gj
        g0 = gj.value
        check_nondegenerate(g0)

        dg = gj.partial()  # d_m g_ij
        self.ginv_jet = gj.truncate(p - 1).inv()
        first_kind = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
        self.gamma_jet = contract("kl,ijl->kij", self.ginv_jet, first_kind) * 0.5

        dgam = self.gamma_jet.partial()  # d_m Gamma^k_ij
        gam = self.gamma_jet.truncate(p - 2)
        self.riem_up_jet = (
            _reindex(dgam, "jlki->lijk")
            - _reindex(dgam, "klji->lijk")
            + contract("ljm,mki->lijk", gam, gam)
            - contract("lkm,mji->lijk", gam, gam)
        )
        g_low = gj.truncate(p - 2)
        self.riem_down_jet = contract("lm,mijk->lijk", g_low, self.riem_up_jet)
        self.ricci_jet = _reindex(self.riem_up_jet, "lilk->ik")
        self.ginv_low = self.ginv_jet.truncate(p - 2)
        self.r_jet = contract("ik,ik->", self.ginv_low, self.ricci_jet)

        self.g = g0
        self.g_inv = self.ginv_jet.value
        self.gamma = self.gamma_jet.value
        self.riem_up = self.riem_up_jet.value
        self.riem_down = self.riem_down_jet.value
        self.ricci = self.ricci_jet.value
        self.r = float(self.r_jet.value)

    @property
    def has_derivatives(self) -> bool:
        return self.metric.order >= 3

    def weyl(self) -> np.ndarray:
        n = self.dim
        if n < 4:
            raise ValidationError("the Weyl tensor is only assembled for n >= 4")
        g, S, r = self.g, self.ricci, self.r
        ricci_part = (
            np.einsum("lj,ik->lijk", g, S)
            - np.einsum("lk,ij->lijk", g, S)
            - np.einsum("ij,lk->lijk", g, S)
            + np.einsum("ik,lj->lijk", g, S)
        )
        scalar_part = np.einsum("lj,ik->lijk", g, g) - np.einsum("lk,ij->lijk", g, g)
        return self.riem_down - ricci_part / (n - 2) + r * scalar_part / ((n - 1) * (n - 2))

    def nabla_ricci(self) -> np.ndarray:
        """``out[m, i, k] = nabla_m S_ik``."""
        dS = self.ricci_jet.partial().value
        G, S = self.gamma, self.ricci
        return dS - np.einsum("ami,ak->mik", G, S) - np.einsum("amk,ia->mik", G, S)

    def dr(self) -> np.ndarray:
        return self.r_jet.partial().value

    def nabla_riem(self) -> np.ndarray:
        """``out[m, l, i, j, k] = nabla_m R_lijk``."""
        dR = self.riem_down_jet.partial().value
        G, R = self.gamma, self.riem_down
        return (
            dR
            - np.einsum("aml,aijk->mlijk", G, R)
            - np.einsum("ami,lajk->mlijk", G, R)
            - np.einsum("amj,liak->mlijk", G, R)
            - np.einsum("amk,lija->mlijk", G, R)
        )

    def div_weyl(self, nabla_s=None, dr=None) -> np.ndarray:
        n = self.dim
        nabla_s = self.nabla_ricci() if nabla_s is None else nabla_s
        dr = self.dr() if dr is None else dr
        g = self.g
        bracket = (
            nabla_s
            - nabla_s.transpose(1, 0, 2)
            - (np.einsum("jk,i->ijk", g, dr) - np.einsum("ik,j->ijk", g, dr)) / (2.0 * (n - 1))
        )
        return (n - 3) / (n - 2) * bracket


@lru_cache(maxsize=2048)
def _geometry(spec: SpacetimeSpec, point: tuple, order: int) -> Geometry:
    return Geometry(metric_jet(spec, point, order))


def geometry(spec: SpacetimeSpec, point: Sequence[float], order: int = 2) -> Geometry:
    """Cached :class:`Geometry` of ``spec`` at ``point``."""
    if len(point) != spec.n:
        raise ArityError(f"point has {len(point)} coordinates, spacetime has {spec.n}")
    return _geometry(spec, tuple(float(x) for x in point), order)


@dataclass(frozen=True)
class CurvaturePack:
    point: tuple
    g: np.ndarray
    g_inv: np.ndarray
    gamma: np.ndarray
    riem_up: np.ndarray
    riem_down: np.ndarray
    ricci: np.ndarray
    r: float
    weyl: np.ndarray | None = None
    nabla_ricci: np.ndarray | None = None
    dr: np.ndarray | None = None
    div_c: np.ndarray | None = None
    bianchi_contracted: float | None = None  # max |g^ij nabla_i S_jk - dr_k / 2|


def christoffel(spec: SpacetimeSpec, point: Sequence[float]) -> np.ndarray:
    return geometry(spec, point, 2).gamma


def curvature_pack(spec: SpacetimeSpec, point: Sequence[float], with_weyl: bool = True) -> CurvaturePack:
    geo = geometry(spec, point, 2)
    return CurvaturePack(
        tuple(float(x) for x in point),
        geo.g,
        geo.g_inv,
        geo.gamma,
        geo.riem_up,
        geo.riem_down,
        geo.ricci,
        geo.r,
        geo.weyl() if with_weyl else None,
    )


def third_order_pack(spec: SpacetimeSpec, point: Sequence[float]) -> CurvaturePack:
    geo = geometry(spec, point, 3)
    nabla_s = geo.nabla_ricci()
    dr = geo.dr()
    div_s = np.einsum("ij,ijk->k", geo.g_inv, nabla_s)
    return CurvaturePack(
        tuple(float(x) for x in point),
        geo.g,
        geo.g_inv,
        geo.gamma,
        geo.riem_up,
        geo.riem_down,
        geo.ricci,
        geo.r,
        geo.weyl(),
        nabla_s,
        dr,
        geo.div_weyl(nabla_s, dr),
        float(np.max(np.abs(div_s - 0.5 * dr))),
    )


# -- fields ------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarFieldSpec:
    """Scalar field on spacetime (e.g. a soliton potential)."""

    expr: ExprAst

    @classmethod
    def parse(cls, text: str, n: int, constants=None) -> "ScalarFieldSpec":
        return cls(parse_expr(text, n, coordinate_names(n), constants))

    def jet(self, point: Sequence[float], order: int) -> Jet:
        return jet_eval(self.expr, point, order)


@dataclass(frozen=True)
class VectorFieldSpec:
    """Vector field given by contravariant component expressions."""

    components: tuple

    @classmethod
    def parse(cls, texts: Sequence[str], n: int, constants=None) -> "VectorFieldSpec":
        if len(texts) != n:
            raise ArityError(f"vector field needs {n} components, got {len(texts)}")
        names = coordinate_names(n)
        return cls(tuple(parse_expr(t, n, names, constants) for t in texts))

    def vector_jet(self, spec: SpacetimeSpec, point: Sequence[float], order: int) -> TensorJet:
        if len(self.components) != spec.n:
            raise ArityError(f"vector field has {len(self.components)} components, spacetime has {spec.n}")
        return TensorJet.from_jets([jet_eval(c, point, order) for c in self.components])


@dataclass(frozen=True)
class GradientField:
    """``grad f`` with the index raised by the metric."""

    potential: ScalarFieldSpec

    def vector_jet(self, spec: SpacetimeSpec, point: Sequence[float], order: int) -> TensorJet:
        df = TensorJet(self.potential.jet(point, order + 1).c, spec.n, order + 1).partial()
        ginv = metric_jet(spec, point, order).inv()
        return contract("kl,l->k", ginv, df)


def hessian(spec: SpacetimeSpec, field: ScalarFieldSpec, point: Sequence[float]) -> np.ndarray:
    """``(Hess f)_ij = d_i d_j f - Gamma^k_ij d_k f``."""
    fj = field.jet(point, 2)
    return fj.hessian() - np.einsum("kij,k->ij", christoffel(spec, point), fj.gradient())


def lie_metric(spec: SpacetimeSpec, W, point: Sequence[float]) -> np.ndarray:
    """``(L_W g)_ij = nabla_i W_j + nabla_j W_i``."""
    w_up = W.vector_jet(spec, point, 1)
    w_low = contract("jk,k->j", metric_jet(spec, point, 1), w_up)
    nabla = w_low.partial().value - np.einsum("kij,k->ij", christoffel(spec, point), w_low.value)
    return nabla + nabla.T


def fiber_geometry(spec: SpacetimeSpec, fiber_point: Sequence[float]) -> Geometry:
    d = spec.fiber.dim
    if len(fiber_point) != d:
        raise ArityError(f"fiber point has {len(fiber_point)} coordinates, fiber has {d}")
    seeds = [Jet.variable(i, float(fiber_point[i]), d, 2) for i in range(d)]
    return Geometry(spec.fiber.metric_jet(seeds))


def fiber_sectional(spec: SpacetimeSpec, fiber_point: Sequence[float], plane) -> float:
    """Sectional curvature of the fiber metric ``g*`` on the plane ``span(u, v)``."""
    u, v = (np.asarray(w, dtype=float) for w in plane)
    geo = fiber_geometry(spec, fiber_point)
    g = geo.g
    area2 = (u @ g @ u) * (v @ g @ v) - (u @ g @ v) ** 2
    if not area2 > 1e-14 * (u @ u) * (v @ v):
        raise ValidationError("plane vectors are linearly dependent")
    return float(np.einsum("lijk,l,i,j,k->", geo.riem_down, u, v, u, v) / area2)
