import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from conftest import random_domain_points
from weierstrass_disks import (ConstructionParams, DomainError, HelicoidData, QuadratureConfig,
                               QuadratureError, build_domain, eval_F, eval_F_batch,
                               helicoid_oracle)
from weierstrass_disks.holo import FamilyData, h_values
from weierstrass_disks.immersion import (GAUSS_WEIGHTS, KRONROD_NODES, KRONROD_WEIGHTS,
                                         integrate_vertical, tangents, weierstrass_integrand)

QUAD = QuadratureConfig()


def test_kronrod_rule_integrates_polynomials():
    # K15 is exact to degree 22, the embedded G7 to degree 13
    for deg in (0, 5, 13, 22):
        exact = (1 - (-1) ** (deg + 1)) / (deg + 1)
        assert KRONROD_WEIGHTS @ KRONROD_NODES**deg == pytest.approx(exact, abs=1e-14)
    assert GAUSS_WEIGHTS @ KRONROD_NODES**13 == pytest.approx(0, abs=1e-14)
    assert GAUSS_WEIGHTS @ KRONROD_NODES**12 == pytest.approx(2 / 13, abs=1e-14)


@given(t=st.floats(-0.5, 0.5))
def test_axis_maps_to_vertical_line(t):
    p = ConstructionParams([-0.2, 0.2], 0.05)
    s = eval_F(p, t)
    assert s.F.tolist() == [0.0, 0.0, t]


def test_helicoid_example():
    s = eval_F(HelicoidData(), complex(np.pi / 2, 1.0))
    np.testing.assert_allclose(s.F, [np.sinh(1), 0.0, np.pi / 2], atol=1e-12)
    np.testing.assert_allclose(helicoid_oracle(complex(np.pi / 2, 1.0)),
                               [1.175201, 0.0, 1.570796], atol=1e-6)


@pytest.mark.parametrize("z, expected", [(0j, [0, 0, 0]), (0.3 + 0j, [0, 0, 0.3])])
def test_helicoid_oracle_axis(z, expected):
    np.testing.assert_allclose(helicoid_oracle(z), expected, atol=0)


def test_helicoid_grid_end_to_end():
    x = np.linspace(-1, 1, 41)
    z = x[:, None] + 1j * x[None, :]
    s = eval_F_batch(HelicoidData(), z, QUAD)
    assert np.max(np.abs(s.F - helicoid_oracle(z))) < 1e-8


def test_pinch_top_matches_mpmath(oracles):
    row = oracles["F_n1_a025_top"]
    z = complex(*row["z"])
    p = ConstructionParams([0.0], 0.25)
    assert z.imag == pytest.approx(build_domain(p).column_width(0.0), rel=1e-15)
    s = eval_F(p, z)
    assert np.all(np.isfinite(s.F))
    assert s.quad_error < 1e-9
    np.testing.assert_allclose(s.F, row["F"], atol=1e-10)


def test_pinch_top_matches_complex_weierstrass_quadrature():
    # integrate Re of the complex integrand along the same path, with scipy
    p = ConstructionParams([0.0], 0.25)
    w = build_domain(p).column_width(0.0)

    def comp(t, k):
        return (weierstrass_integrand(h_values(p, 1j * t))[k] * 1j).real

    ref = [integrate.quad(comp, 0, w, args=(k,), epsabs=1e-13)[0] for k in range(3)]
    np.testing.assert_allclose(eval_F(p, 1j * w).F, ref, atol=1e-10)


def test_three_point_values_match_mpmath(oracles):
    p = ConstructionParams([-0.3, 0.0, 0.3], 0.05)
    for row in oracles["F_n3_a005_samples"]:
        np.testing.assert_allclose(eval_F(p, complex(*row["z"])).F, row["F"], atol=1e-10)


def test_tangent_closed_forms(family):
    z = random_domain_points(family, 300, seed=4)
    s = eval_F(family, z)
    h = h_values(family, z)
    Fx, Fy = tangents(h.real, h.imag)
    np.testing.assert_array_equal(s.Fx, Fx)
    np.testing.assert_allclose(Fx[..., 0], np.sinh(h.imag) * np.cos(h.real), atol=1e-12)
    np.testing.assert_allclose(Fy[..., 1], -np.cosh(h.imag) * np.cos(h.real), atol=1e-12)


def test_finite_differences_match_tangents(family):
    # 10^3 random interior points, kept a step away from the column ends
    step = 1e-4 * family.a
    z = random_domain_points(family, 1000, seed=6, frac=0.8)
    x, y = z.real, z.imag
    keep = (np.abs(x) < 0.5 - 2 * step)
    z = z[keep]
    dx = (eval_F_batch(family, z + step, QUAD).F - eval_F_batch(family, z - step, QUAD).F) / (2 * step)
    dy = (eval_F_batch(family, z + 1j * step, QUAD).F
          - eval_F_batch(family, z - 1j * step, QUAD).F) / (2 * step)
    s = eval_F_batch(family, z, QUAD)
    scale = np.cosh(s.v)[:, None]
    assert np.max(np.abs(dx - s.Fx) / scale) < 1e-6
    assert np.max(np.abs(dy - s.Fy) / scale) < 1e-6


def test_conformality(family):
    z = random_domain_points(family, 2000, seed=7)
    s = eval_F_batch(family, z, QUAD)
    c2 = np.cosh(s.v) ** 2
    np.testing.assert_allclose(np.sum(s.Fx**2, -1), c2, rtol=1e-10)
    np.testing.assert_allclose(np.sum(s.Fy**2, -1), c2, rtol=1e-10)
    assert np.max(np.abs(np.sum(s.Fx * s.Fy, -1)) / c2) < 1e-10


def _staircase(data, spec, z, steps=4):
    # (0,0) -> (x1,0) -> (x1,y1) -> (x2,y1) -> ... -> (x,y): x-legs integrate dF/dx
    x_end, y_end = z.real, z.imag
    xs = np.linspace(0, x_end, steps + 1)
    ys = np.linspace(0, y_end, steps + 1)
    F = np.array([0.0, 0.0, xs[1]])
    for i in range(1, steps + 1):
        I1, I2, _ = integrate_vertical(data, xs[i], ys[i - 1], ys[i], 1e-12)
        F = F + [I1, I2, 0.0]
        if i < steps:
            def fx(t, k, y=ys[i]):
                h = data.h(t + 1j * y)
                return [np.sinh(h.imag) * np.cos(h.real), np.sinh(h.imag) * np.sin(h.real)][k]
            leg = [integrate.quad(fx, xs[i], xs[i + 1], args=(k,), epsabs=1e-13)[0]
                   for k in (0, 1)]
            F = F + np.array(leg + [xs[i + 1] - xs[i]])
    return F


def test_path_independence():
    p = ConstructionParams([-0.2, 0.2], 0.1)
    spec = build_domain(p)
    data = FamilyData(p)
    for x in (0.05, 0.3, -0.45):
        # staircase stays inside when column widths along the way exceed the target height
        ww = spec.column_width(np.linspace(0, x, 200)).min()
        z = complex(x, 0.9 * ww)
        np.testing.assert_allclose(_staircase(data, spec, z), eval_F(p, z).F, atol=4e-10)


def test_batch_of_one_equals_single():
    p = ConstructionParams([0.0], 0.1)
    z = np.array([0.2 + 0.01j])
    assert np.array_equal(eval_F_batch(p, z).F[0], eval_F(p, z[0]).F)


def test_batch_matches_independent(family):
    z = random_domain_points(family, 400, seed=8)
    b = eval_F_batch(family, z, QUAD).F
    s = eval_F(family, z, QUAD).F
    assert np.max(np.abs(b - s)) <= 2 * QUAD.abs_tol


def test_column_partial_sums():
    p = ConstructionParams([0.0], 0.05)
    x = 0.013
    w = build_domain(p).column_width(x)
    ys = np.linspace(0, w, 9)
    F = eval_F_batch(p, x + 1j * ys, QUAD).F
    for y0, y1, F0, F1 in zip(ys[:-1], ys[1:], F[:-1], F[1:]):
        I1, I2, _ = integrate_vertical(FamilyData(p), x, y0, y1, 1e-12)
        assert np.max(np.abs(F1[:2] - F0[:2] - [I1, I2])) <= 2 * QUAD.abs_tol


@given(x=st.floats(-0.5, 0.5), f=st.floats(0, 1))
def test_symmetric_pair_same_height(x, f):
    p = ConstructionParams([-0.2, 0.2], 0.05)
    y = f * build_domain(p).column_width(x)
    s = eval_F_batch(p, np.array([complex(x, y), complex(x, -y)]))
    assert s.F[0, 2] == s.F[1, 2] == x


def test_outside_domain_rejected():
    with pytest.raises(DomainError):
        eval_F(ConstructionParams([0.0], 0.1), 0.1j)


def test_nonconvergence_reported():
    p = ConstructionParams([0.0], 1e-3)
    z = 1j * build_domain(p).column_width(0.0)
    with pytest.raises(QuadratureError) as exc:
        eval_F(p, z, QuadratureConfig(abs_tol=1e-16, max_depth=1))
    assert exc.value.achieved > 0


@pytest.mark.parametrize("kw", [{"abs_tol": 0}, {"max_depth": 0}, {"rule": "simpson"}])
def test_quadrature_config_validation(kw):
    with pytest.raises(ValueError):
        QuadratureConfig(**kw)
