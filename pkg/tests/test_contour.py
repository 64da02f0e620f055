import mpmath as mp
import numpy as np
import pytest

from soefgt import ContourKind, ContourSpec, DomainError, contour_point, max_error, soe_from_contour
from soefgt.bench import convergence
from soefgt.contour import principal_sqrt

KINDS = ["parabolic", "hyperbolic", "talbot", "stabilized-hyperbolic"]


@pytest.mark.parametrize("kind", KINDS)
def test_nodes_are_conjugate_symmetric(kind):
    spec = ContourSpec(kind, 24)
    th = spec.nodes()
    assert th.size == 24
    np.testing.assert_array_equal(th, -th[::-1])
    np.testing.assert_allclose(np.diff(th), spec.step, rtol=1e-12)
    s = soe_from_contour(spec)
    np.testing.assert_allclose(s.nodes, np.conj(s.nodes[::-1]), rtol=1e-14)
    np.testing.assert_allclose(s.weights, np.conj(s.weights[::-1]), rtol=1e-13)
    assert np.all(s.nodes.real > 0)
    assert s.source == "contour" and s.meta["kind"] == kind


@pytest.mark.parametrize("kind", KINDS)
def test_derivative_matches_finite_difference(kind):
    spec = ContourSpec(kind, 16)
    th = np.array([-0.9, -0.2, 0.0, 1e-6, 0.7]) * spec.half_width
    z, dz = contour_point(spec, th)
    h = 1e-6
    zp, _ = contour_point(spec, th + h)
    zm, _ = contour_point(spec, th - h)
    np.testing.assert_allclose(dz, (zp - zm) / (2 * h), rtol=1e-6)


def test_parabola_against_closed_form():
    # z(theta) = n (0.1309 - 0.1194 theta^2 + 0.25 i theta)
    n = 20
    spec = ContourSpec("parabolic", n)
    for th in [-3.0, -1.0, 0.5, 2.5]:
        z, dz = contour_point(spec, th)
        assert z == pytest.approx(n * (0.1309 - 0.1194 * th ** 2 + 0.25j * th), rel=1e-15)
        assert dz == pytest.approx(n * (-2 * 0.1194 * th + 0.25j), rel=1e-15)


def test_talbot_series_branch_is_continuous():
    spec = ContourSpec("talbot", 10)
    a, _ = contour_point(spec, 0.99e-4 / 0.6407)
    b, _ = contour_point(spec, 1.01e-4 / 0.6407)
    assert abs(a.real - b.real) < 1e-8  # real part is flat at theta = 0
    z0, _ = contour_point(spec, 0.0)
    assert z0 == pytest.approx(10 * (0.5017 / 0.6407 - 0.6122), rel=1e-14)


def test_quadrature_weight_against_extended_precision():
    spec = ContourSpec("hyperbolic", 12)
    s = soe_from_contour(spec)
    k = 3
    th = mp.mpf(spec.nodes()[k])
    with mp.workdps(30):
        arg = mp.mpf("1.1721") - 1j * mp.mpf("0.3443") * th
        z = mp.mpf("2.246") * 12 * (1 - mp.sin(arg))
        dz = mp.mpf("2.246") * 12 * 1j * mp.mpf("0.3443") * mp.cos(arg)
        w = mp.mpf(spec.step) / (2 * mp.sqrt(mp.pi) * 1j) * dz / mp.sqrt(z) * mp.exp(z)
    assert abs(s.weights[k] - complex(w)) < 1e-13 * abs(complex(w))
    assert abs(s.nodes[k] - complex(mp.sqrt(z))) < 1e-14 * abs(s.nodes[k])


def test_principal_sqrt_has_positive_real_part():
    z = np.array([1 + 1e-300j, 1 - 1e-300j, -4 + 1e-20j, -4 - 1e-20j, 3j])
    r = principal_sqrt(z)
    assert np.all(r.real >= 0)
    np.testing.assert_allclose(r * r, z, rtol=1e-14)


def test_spec_validation():
    with pytest.raises(DomainError):
        ContourSpec("parabolic", 1)
    with pytest.raises(DomainError):
        ContourSpec("parabolic", 8, 0.3)
    with pytest.raises(DomainError):
        ContourSpec("stabilized-hyperbolic", 8, 1.5)
    with pytest.raises(ValueError):
        ContourSpec("ellipse", 8)
    with pytest.raises(DomainError):
        contour_point(ContourSpec("parabolic", 8), 4.0)


def test_stabilized_default_theta():
    assert ContourSpec("stabilized-hyperbolic", 16).theta == 0.25
    assert ContourSpec("stabilized-hyperbolic", 48).theta == 0.25
    assert ContourSpec("stabilized-hyperbolic", 60).theta == pytest.approx(0.2)
    assert ContourSpec("stabilized-hyperbolic", 48, 0.1).theta == 0.1


# Regression goldens: grid errors recorded on the first run of this build.
GOLDEN_E = {
    ("parabolic", 32): 1.9761969838327786e-14,
    ("hyperbolic", 16): 9.0e-09,
    ("talbot", 16): 7.045773e-10,
}


@pytest.mark.parametrize("key", list(GOLDEN_E))
def test_error_goldens(key):
    E = max_error(soe_from_contour(ContourSpec(*key))).max_abs_error
    # pre-saturation values are stable; the saturated one only to its order
    tol = 0.5 if E < 1e-12 else 0.02
    assert E == pytest.approx(GOLDEN_E[key], rel=tol)


# Fitted rates, pinned after the first run (nominal 2.85, 3.20, 3.89).
GOLDEN_RATE = {"parabolic": 2.854, "hyperbolic": 3.096, "talbot": 3.843}


@pytest.mark.parametrize("kind", list(GOLDEN_RATE))
def test_convergence_rate_pinned(kind):
    _, rates = convergence(kind, range(8, 65, 4))
    assert rates["rate"] == pytest.approx(GOLDEN_RATE[kind], rel=0.02)
