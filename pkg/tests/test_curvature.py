import numpy as np
import pytest
from conftest import fixture_points, fixture_spec
from fd_oracle import curvature as oracle
from fd_oracle import partials, rel_err

from grwverify.curvature import (
    GradientField,
    ScalarFieldSpec,
    VectorFieldSpec,
    christoffel,
    curvature_pack,
    fiber_sectional,
    hessian,
    lie_metric,
    third_order_pack,
)
from grwverify.errors import ValidationError
from grwverify.spacetime import FiberSpec, build_grw

X, T = 0, 3


def test_minkowski_christoffel_vanish(minkowski):
    assert not np.any(christoffel(minkowski, [0.1, 0.2, 0.3, 1.0]))


def test_desitter_christoffel(desitter):
    gam = christoffel(desitter, [0, 0, 0, 0])
    assert gam[T, X, X] == pytest.approx(1.0)
    assert gam[X, X, T] == pytest.approx(1.0)
    assert gam[X, T, X] == pytest.approx(1.0)


def test_flrw_christoffel(flrw_dust):
    assert christoffel(flrw_dust, [0, 0, 0, 1.0])[X, X, T] == pytest.approx(2.0 / 3.0)


def test_minkowski_curvature_vanishes(minkowski):
    pk = curvature_pack(minkowski, [0.2, -0.1, 0.4, 0.8])
    for arr in (pk.riem_up, pk.ricci, pk.weyl):
        assert np.max(np.abs(arr)) <= 1e-12
    assert pk.r == 0.0


def test_desitter_closed_form(desitter):
    pk = curvature_pack(desitter, [0.3, 0.1, -0.5, 0.7])
    assert np.max(np.abs(pk.ricci - 3 * pk.g)) <= 1e-9
    assert pk.r == pytest.approx(12.0, abs=1e-8)
    assert np.max(np.abs(pk.weyl)) <= 1e-9


def test_flrw_ricci_on_observer(flrw_dust):
    pk = curvature_pack(flrw_dust, [0, 0, 0, 1.0])
    assert pk.ricci[T, T] == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_riemann_symmetries():
    spec = fixture_spec("anisotropic_fiber")
    R = curvature_pack(spec, [0.4, 0.2, -0.3, 1.1]).riem_down
    assert np.allclose(R, -R.transpose(0, 1, 3, 2), atol=1e-12)
    assert np.allclose(R, -R.transpose(1, 0, 2, 3), atol=1e-12)
    assert np.allclose(R, R.transpose(2, 3, 0, 1), atol=1e-12)
    cyclic = R + R.transpose(0, 2, 3, 1) + R.transpose(0, 3, 1, 2)
    assert np.max(np.abs(cyclic)) <= 1e-12


def test_weyl_is_trace_free():
    spec = fixture_spec("anisotropic_fiber")
    pk = curvature_pack(spec, [0.4, 0.2, -0.3, 1.1])
    trace = np.einsum("lj,lijk->ik", pk.g_inv, pk.weyl)
    assert np.max(np.abs(trace)) <= 1e-12


@pytest.mark.parametrize("name", ["desitter", "closed_rw", "anisotropic_fiber"])
def test_engine_matches_finite_difference_oracle(name):
    spec = fixture_spec(name)
    for pt in fixture_points(name, 4, seed=11):
        ref = oracle(name, pt)
        pk = curvature_pack(spec, pt)
        for key in ("gamma", "riem_up", "ricci", "weyl"):
            assert rel_err(getattr(pk, key), ref[key]) <= 1e-6, key
        assert rel_err(pk.r, ref["r"]) <= 1e-6


@pytest.mark.parametrize("name", ["flrw_dust", "anisotropic_fiber"])
def test_third_order_jets_match_differenced_ricci(name):
    spec = fixture_spec(name)
    pt = np.array(fixture_points(name, 1, seed=3)[0])
    pk = third_order_pack(spec, pt)
    dS = partials(lambda y: curvature_pack(spec, y, with_weyl=False).ricci, pt, h=1e-3)
    nabla = dS - np.einsum("ami,ak->mik", pk.gamma, pk.ricci) - np.einsum("amk,ia->mik", pk.gamma, pk.ricci)
    assert rel_err(pk.nabla_ricci, nabla) <= 1e-6
    dr = partials(lambda y: np.array(curvature_pack(spec, y, with_weyl=False).r), pt, h=1e-3)
    assert rel_err(pk.dr, dr) <= 1e-6


def test_contracted_bianchi_identity():
    for name in ("flrw_dust", "closed_rw", "anisotropic_fiber"):
        spec = fixture_spec(name)
        for pt in fixture_points(name, 3):
            assert third_order_pack(spec, pt).bianchi_contracted <= 1e-10


def test_third_order_closed_forms(minkowski, desitter, flrw_dust):
    mk = third_order_pack(minkowski, [0.1, 0.2, 0.3, 1.0])
    assert not np.any(mk.nabla_ricci) and not np.any(mk.dr) and not np.any(mk.div_c)
    ds = third_order_pack(desitter, [0.1, 0.2, 0.3, 0.4])
    assert np.max(np.abs(ds.nabla_ricci)) <= 1e-9
    assert np.max(np.abs(ds.div_c)) <= 1e-9
    assert np.max(np.abs(third_order_pack(flrw_dust, [0, 0, 0, 1.0]).div_c)) <= 1e-7


def test_anisotropic_fiber_has_weyl_divergence():
    spec = fixture_spec("anisotropic_fiber")
    assert np.max(np.abs(third_order_pack(spec, [0.5, 0.1, 0.2, 1.0]).div_c)) > 1e-3


def _field(text, n=4):
    return ScalarFieldSpec.parse(text, n)


def test_hessian_examples(minkowski, desitter):
    gauss = _field("-0.5*(x1^2 + x2^2 + x3^2 - t^2)")
    assert np.allclose(hessian(minkowski, gauss, [0.3, 0.1, 0.2, 1.0]), -np.diag([1.0, 1.0, 1.0, -1.0]))
    assert not np.any(hessian(desitter, _field("4.5"), [0.3, 0.1, 0.2, 1.0]))
    assert hessian(desitter, _field("t"), [0, 0, 0, 0])[X, X] == pytest.approx(-1.0)


def test_killing_field(minkowski):
    W = VectorFieldSpec.parse(["1", "0", "0", "0"], 4)
    assert not np.any(lie_metric(minkowski, W, [0.1, 0.2, 0.3, 0.4]))


def test_observer_lie_derivative(desitter):
    rho = VectorFieldSpec.parse(["0", "0", "0", "1"], 4)
    assert lie_metric(desitter, rho, [0, 0, 0, 0])[X, X] == pytest.approx(2.0)


@pytest.mark.parametrize("text", ["t^2 + x1*x2", "sin(x1)*exp(0.3*t)", "cosh(x3) - t*x2"])
@pytest.mark.parametrize("name", ["desitter", "closed_rw", "anisotropic_fiber"])
def test_lie_of_gradient_is_twice_hessian(name, text):
    spec = fixture_spec(name)
    f = _field(text)
    pt = fixture_points(name, 1, seed=5)[0]
    assert np.max(np.abs(lie_metric(spec, GradientField(f), pt) - 2 * hessian(spec, f, pt))) <= 1e-10


def test_fiber_sectional_examples():
    flat = build_grw(4, "1")
    assert fiber_sectional(flat, [0.1, 0.2, 0.3], ([1, 0, 0], [0, 1, 1])) == 0.0
    sphere = build_grw(4, "1", FiberSpec.constant_curvature(3, 1.0))
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = rng.uniform(-1, 1, 3)
        u, v = rng.standard_normal((2, 3))
        assert fiber_sectional(sphere, x, (u, v)) == pytest.approx(1.0, abs=1e-9)


def test_anisotropic_fiber_curvature_closed_form():
    spec = fixture_spec("anisotropic_fiber")
    x1 = 0.7
    K = fiber_sectional(spec, [x1, 0.0, 0.0], ([1, 0, 0], [0, 1, 0]))
    assert K == pytest.approx(-1.0 / (1 + x1**2) ** 2, rel=1e-12)
    assert fiber_sectional(spec, [x1, 0.0, 0.0], ([1, 0, 0], [0, 0, 1])) == pytest.approx(0.0, abs=1e-14)


def test_degenerate_plane_rejected():
    with pytest.raises(ValidationError):
        fiber_sectional(build_grw(4, "1"), [0, 0, 0], ([1, 0, 0], [2, 0, 0]))
