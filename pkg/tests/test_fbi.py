import numpy as np
import pytest
from scipy.integrate import dblquad
from scipy.optimize import minimize

from quadprop.catalog import catalog_symbol
from quadprop.fbi import (FbiPhase, Weight, egorov_symbol, fbi_transform_gaussian,
                          hphi_norm_sq, kappa_phi, lambda_of_weight, polarize,
                          standard_phase, weight_of_lambda, weight_of_phase)
from quadprop.gaussians import DivergentIntegralError, GaussianData
from quadprop.symplectic import symplectic_unit


def second_phase():
    """Perturbed frame with D = 2i (A, B standard)."""
    return FbiPhase(1j * np.eye(1), -1j * np.eye(1), 2j * np.eye(1))


def test_standard_phase_n1():
    phi = standard_phase(1)
    assert np.allclose([phi.A, phi.B, phi.D], [[[1j]], [[-1j]], [[1j]]])
    assert np.isclose(phi.c_phi, 2 ** -0.5 * np.pi ** -0.75)


def test_standard_phase_n2_tensor():
    phi = standard_phase(2)
    assert np.allclose(phi.A, 1j * np.eye(2))
    assert np.isclose(phi.c_phi, (2 ** -0.5 * np.pi ** -0.75) ** 2)


def test_phase_validation():
    with pytest.raises(ValueError):
        FbiPhase(1j * np.eye(1), np.zeros((1, 1)), 1j * np.eye(1))  # det B = 0
    with pytest.raises(ValueError):
        FbiPhase(1j * np.eye(1), -1j * np.eye(1), -1j * np.eye(1))  # Im D < 0
    with pytest.raises(ValueError):
        FbiPhase(np.array([[0, 1], [2, 0]], dtype=complex), -1j * np.eye(2), 1j * np.eye(2))


def test_weight_of_standard_phase():
    w = weight_of_phase(standard_phase(1))
    assert np.isclose(w.P[0, 0], -0.5) and np.isclose(w.H[0, 0], 0.5)
    assert np.isclose(w.levi()[0, 0], 0.25)
    assert np.isclose(w.value([1 + 2j]), 2.0)  # (Im z)^2 / 2


def test_weight_of_perturbed_phase_against_sup_oracle():
    phi = second_phase()
    w = weight_of_phase(phi)
    rng = np.random.default_rng(3)
    for _ in range(5):
        z = rng.standard_normal() + 1j * rng.standard_normal()
        res = minimize(lambda y: float(np.imag(phi.value([z], [y[0]]))), [0.0])
        assert np.isclose(w.value([z]), -res.fun, atol=1e-8)


def test_kappa_phi_standard():
    K = kappa_phi(standard_phase(1)).K
    assert np.allclose(K, [[1, -1j], [0, 1]])
    # image of (1, 0) lies on the graph with zeta = -Im z = 0
    assert np.allclose(K @ [1, 0], [1, 0])
    J = symplectic_unit(1)
    assert np.linalg.norm(K.T @ J @ K - J) <= 1e-12


def test_kappa_phi_image_is_weight_graph():
    for phi in (standard_phase(1), second_phase(), standard_phase(2)):
        K = kappa_phi(phi)  # raises if kappa(R^{2n}) != Lambda_Phi
        w = weight_of_phase(phi)
        X = K.K @ np.array([0.3, -1.2] * phi.n)
        assert np.allclose(X[phi.n:], w.zeta(X[:phi.n]), atol=1e-10)


def test_polarize_standard():
    w = weight_of_phase(standard_phase(1))
    psi, defect = polarize(w)
    for z, th in [(1.0 + 2j, 0.5 - 1j), (0.2j, 3.0)]:
        assert np.isclose(psi.value([z], [th]), (-z ** 2 + 2 * z * th - th ** 2) / 8)
    # defect form is exactly -1/4 |z - w|^2
    I2 = np.eye(2)
    ref = -0.25 * np.block([[I2, -I2], [-I2, I2]])
    assert np.allclose(defect, ref, atol=1e-12)


def test_polarization_identities():
    rng = np.random.default_rng(11)
    for w in (weight_of_phase(standard_phase(1)), weight_of_phase(second_phase()),
              weight_of_phase(standard_phase(2))):
        psi, _ = polarize(w)
        for _ in range(20):
            z = rng.standard_normal(w.n) + 1j * rng.standard_normal(w.n)
            v = rng.standard_normal(w.n) + 1j * rng.standard_normal(w.n)
            assert np.isclose(psi.value(z, np.conj(z)), w.value(z), rtol=1e-12, atol=1e-12)
            assert np.isclose(psi.value(v, np.conj(z)),
                              np.conj(psi.value(z, np.conj(v))), rtol=1e-12, atol=1e-12)


def test_polarize_perturbed_weights_negative_transverse():
    # negative definite transverse to the diagonal radical z = w
    for w in (Weight([[-0.3]], [[0.7]]), weight_of_phase(second_phase())):
        _, defect = polarize(w)
        evals = np.sort(np.linalg.eigvalsh(defect))
        assert evals[-1] <= 1e-12          # negative semidefinite
        assert np.sum(np.abs(evals) <= 1e-12) == 2
        assert evals[1] < -1e-6            # strictly negative off the radical


def test_egorov_examples():
    phi = standard_phase(1)
    qt = egorov_symbol(catalog_symbol("heat"), phi)
    assert np.allclose([qt.A1, qt.A2, qt.A3], [[[0]], [[0]], [[2]]])
    qo = egorov_symbol(catalog_symbol("harmonic_oscillator"), phi)
    assert np.allclose([qo.A1, qo.A2, qo.A3], [[[2j]], [[-2]], [[0]]])
    from quadprop.symplectic import build_symbol
    qz = egorov_symbol(build_symbol(1, np.zeros((2, 2)), np.zeros((2, 2))), phi)
    assert np.allclose(qz.Qtilde, 0)


def test_lambda_round_trip():
    for w in (weight_of_phase(standard_phase(1)), weight_of_phase(second_phase()),
              weight_of_phase(standard_phase(2))):
        w2 = weight_of_lambda(lambda_of_weight(w))
        assert np.allclose(w2.P, w.P, atol=1e-10)
        assert np.allclose(w2.H, w.H, atol=1e-10)


def test_weight_of_lambda_rejects_non_graph():
    from quadprop.symplectic import TotallyRealSubspace
    # pi_1 kills this span: columns concentrated in the fiber variable
    V = np.array([[0, 0], [1, 1j]], dtype=complex)
    with pytest.raises(ValueError):
        weight_of_lambda(TotallyRealSubspace(V))


def test_fbi_transform_examples():
    phi = standard_phase(1)
    u = fbi_transform_gaussian(phi, GaussianData("delta", 1))
    assert np.isclose(u.alpha, phi.c_phi) and np.isclose(u.g[0, 0], -1.0)
    u = fbi_transform_gaussian(phi, GaussianData("gaussian", 1, G=np.eye(1)))
    assert np.isclose(u.alpha, phi.c_phi * np.sqrt(np.pi))
    assert np.isclose(u.g[0, 0], -0.5)
    u = fbi_transform_gaussian(phi, GaussianData("constant", 1))
    assert np.isclose(u.alpha, phi.c_phi * np.sqrt(2 * np.pi))
    assert np.allclose(u.g, 0) and np.allclose(u.l, 0)


def test_fbi_transform_divergent():
    phi = standard_phase(1)
    data = GaussianData("constant", 1)
    data.kind = "gaussian"             # bypass the constructor guard
    data.G = np.array([[-2.0 + 0j]])   # Re(G - iD) loses definiteness
    with pytest.raises(DivergentIntegralError):
        fbi_transform_gaussian(phi, data)


@pytest.mark.parametrize("G", [1.0, 2.0, 1.0 + 0.5j])
def test_unitarity_on_gaussians(G):
    phi = standard_phase(1)
    w = weight_of_phase(phi)
    u = fbi_transform_gaussian(phi, GaussianData("gaussian", 1, G=[[G]]))
    l2 = np.sqrt(np.pi / G.real) if isinstance(G, complex) else np.sqrt(np.pi / G)
    assert np.isclose(hphi_norm_sq(u, w), l2, rtol=1e-10)
    if G == 1.0:
        assert np.isclose(hphi_norm_sq(u, w), np.sqrt(np.pi), rtol=1e-10)


def test_unitarity_against_numerical_quadrature():
    phi = standard_phase(1)
    w = weight_of_phase(phi)
    u = fbi_transform_gaussian(phi, GaussianData("gaussian", 1, G=np.eye(1)))

    def integrand(y, x):
        z = x + 1j * y
        return abs(u.value([z])) ** 2 * np.exp(-2 * w.value([z]))

    val, err = dblquad(integrand, -8, 8, -8, 8, epsabs=1e-10, epsrel=1e-10)
    assert np.isclose(hphi_norm_sq(u, w), val, rtol=1e-8)


def test_frame_independence_of_singular_directions():
    # the wavefront of delta data agrees across two frames after kappa-flat
    from quadprop.wavefront import kappa_flat, singular_directions, _angular_distance
    phi1, phi2 = standard_phase(1), second_phase()
    w1, w2 = weight_of_phase(phi1), weight_of_phase(phi2)
    u1 = fbi_transform_gaussian(phi1, GaussianData("delta", 1))
    u2 = fbi_transform_gaussian(phi2, GaussianData("delta", 1))
    d1 = singular_directions(u1, w1)
    d2 = singular_directions(u2, w2)
    assert len(d1) == len(d2) == 1
    K12 = kappa_phi(phi1) @ kappa_phi(phi2).inverse()
    flat = kappa_flat(K12, w2, w1)
    mapped = flat.apply(d2[0])
    mapped = mapped / np.linalg.norm(mapped)
    assert _angular_distance(mapped, d1[0]) <= 1e-8
