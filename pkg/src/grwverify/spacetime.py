"""Warped-product spacetimes ``-dt^2 + f(t)^2 g*`` with time as the last coordinate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ArityError, DegenerateMetricError, GRWError, ValidationError
from .expr import ExprAst, compose, parse_expr
from .jets import Jet, TensorJet, contract

FIBER_KINDS = ("flat", "constant_curvature", "custom_diagonal")


def fiber_names(dim: int) -> list:
    return [f"x{i}" for i in range(1, dim + 1)]


def coordinate_names(n: int) -> list:
    """Coordinate labels: fiber ``x1..x{n-1}`` followed by ``t``."""
    return fiber_names(n - 1) + ["t"]


@dataclass(frozen=True)
class FiberSpec:
    """Riemannian fiber ``M*`` of dimension ``dim``.

    ``constant_curvature`` uses the conformally flat chart
    ``g*_ab = delta_ab / (1 + (k/4) |x|^2)^2``.
    """

    kind: str
    dim: int
    curvature: float = 0.0
    exprs: tuple = ()

    def __post_init__(self):
        if self.kind not in FIBER_KINDS:
            raise ValidationError(f"unknown fiber kind {self.kind!r}")
        if self.dim < 1:
            raise ValidationError("fiber dimension must be positive")
        if self.kind == "custom_diagonal" and len(self.exprs) != self.dim:
            raise ArityError(f"custom fiber of dimension {self.dim} needs {self.dim} entries, got {len(self.exprs)}")

    @classmethod
    def flat(cls, dim: int) -> "FiberSpec":
        return cls("flat", dim)

    @classmethod
    def constant_curvature(cls, dim: int, k: float) -> "FiberSpec":
        return cls("constant_curvature", dim, float(k))

    @classmethod
    def custom_diagonal(cls, entries: Sequence[str], constants: Mapping[str, float] | None = None) -> "FiberSpec":
        dim = len(entries)
        names = fiber_names(dim)
        exprs = tuple(parse_expr(e, dim, names, constants) for e in entries)
        return cls("custom_diagonal", dim, 0.0, exprs)

    def metric_jet(self, coords: Sequence[Jet]) -> TensorJet:
        """Fiber metric components as jets of the given coordinate jets."""
        d = self.dim
        n_vars, order = coords[0].n_vars, coords[0].order
        one = Jet.constant(1.0, n_vars, order)
        zero = Jet.constant(0.0, n_vars, order)
        if self.kind == "flat":
            diag = [one] * d
        elif self.kind == "constant_curvature":
            radius2 = zero
            for x in coords:
                radius2 = radius2 + x * x
            denom = one + radius2 * (self.curvature / 4.0)
            if denom.value == 0.0:
                raise ValidationError("constant-curvature chart is singular at this point")
            factor = denom.reciprocal() * denom.reciprocal()
            diag = [factor] * d
        else:
            diag = []
            for a, expr in enumerate(self.exprs):
                entry = compose(expr, list(coords))
                if entry.value <= 0.0:
                    raise ValidationError(
                        f"fiber entry {a + 1} ({expr}) is not positive: {entry.value!r}"
                    )
                diag.append(entry)
        rows = [[diag[a] if a == b else zero for b in range(d)] for a in range(d)]
        return TensorJet.from_jets(rows)


@dataclass(frozen=True)
class SpacetimeSpec:
    n: int
    warp: ExprAst
    fiber: FiberSpec
    constants: tuple = ()
    t_index: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "t_index", self.n - 1)

    @property
    def names(self) -> list:
        return coordinate_names(self.n)


def build_grw(
    n: int,
    warp_text: str,
    fiber: FiberSpec | None = None,
    constants: Mapping[str, float] | None = None,
) -> SpacetimeSpec:
    """Validated GRW spacetime of dimension ``n`` with scale factor ``warp_text(t)``."""
    if not isinstance(n, int) or n < 4:
        raise ValidationError(f"GRW spacetimes need dimension n >= 4, got {n!r}")
    if fiber is None:
        fiber = FiberSpec.flat(n - 1)
    if fiber.dim != n - 1:
        raise ArityError(f"fiber dimension {fiber.dim} does not match n - 1 = {n - 1}")
    constants = dict(constants or {})
    warp = parse_expr(warp_text, 1, ["t"], constants)
    return SpacetimeSpec(n, warp, fiber, tuple(sorted(constants.items())))


def metric_jet(spec: SpacetimeSpec, point: Sequence[float], order: int) -> TensorJet:
    """The metric as an ``n x n`` tensor jet at ``point``."""
    n = spec.n
    if len(point) != n:
        raise ArityError(f"point has {len(point)} coordinates, spacetime has {n}")
    seeds = [Jet.variable(i, float(point[i]), n, order) for i in range(n)]
    f = compose(spec.warp, [seeds[spec.t_index]])
    if f.value <= 0.0:
        raise ValidationError(f"warp f = {f.value!r} is not positive at t = {point[spec.t_index]!r}")
    gstar = spec.fiber.metric_jet(seeds[: n - 1])
    f2 = f * f
    data = np.zeros((n, n, f.c.size))
    data[: n - 1, : n - 1] = contract("ab,->ab", gstar, TensorJet(f2.c, n, order)).data
    data[spec.t_index, spec.t_index, 0] = -1.0
    return TensorJet(data, n, order)


@dataclass(frozen=True)
class MetricAtPoint:
    point: tuple
    g: np.ndarray
    g_inv: np.ndarray
    dg: np.ndarray | None = None  # dg[i, j, k] = d_i g_jk
    d2g: np.ndarray | None = None
    d3g: np.ndarray | None = None


def check_nondegenerate(g: np.ndarray) -> None:
    det = np.linalg.det(g)
    scale = np.prod(np.linalg.norm(g, axis=1))
    if not abs(det) >= 1e-12 * scale:
        raise DegenerateMetricError(f"degenerate metric at point (det = {det!r})")


def metric_at(spec: SpacetimeSpec, point: Sequence[float], order: int = 0) -> MetricAtPoint:
    gj = metric_jet(spec, point, order)
    g = gj.value
    check_nondegenerate(g)
    g_inv = np.linalg.solve(g, np.eye(spec.n))
    parts = [gj.derivatives(k) if order >= k else None for k in (1, 2, 3)]
    return MetricAtPoint(tuple(float(x) for x in point), g, g_inv, *parts)


def is_admissible(spec: SpacetimeSpec, point: Sequence[float]) -> bool:
    try:
        metric_at(spec, point, 0)
    except GRWError:
        return False
    return True
