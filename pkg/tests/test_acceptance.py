"""Acceptance gate: eleven end-to-end criteria, one pass/fail line each.

Run with `pytest -s tests/test_acceptance.py` to see the lines as they pass.
"""

import numpy as np

from quadprop.catalog import catalog_symbol, CATALOG_NAMES
from quadprop.fbi import (Polarization, Weight, egorov_symbol,
                          fbi_transform_gaussian, hphi_norm_sq, polarize,
                          standard_phase, weight_of_phase)
from quadprop.gaussians import GaussianData
from quadprop.propagator import (PhasePath, QuadraticPhase, apply_kernel,
                                 bergman_kernel, compose_kernels, evolve_weight,
                                 generator_defect, transport_amplitude)
from quadprop.symplectic import hamilton_flow, singular_space, symplectic_unit
from quadprop.wavefront import verify_singular_space_identity, verify_theorem


def report(number, label, passed):
    print("criterion %2d [%s]: %s" % (number, "PASS" if passed else "FAIL", label))
    assert passed, "criterion %d failed: %s" % (number, label)


def conjugated(name):
    q = catalog_symbol(name)
    phi = standard_phase(q.n)
    return egorov_symbol(q, phi), weight_of_phase(phi)


def test_criterion_01_singular_spaces():
    expected = {"heat": 1, "harmonic_oscillator": 2, "free_schrodinger": 2, "kfp": 0}
    ok = True
    for name, dim in expected.items():
        # singular_space runs the kernel-intersection/dynamical cross-check itself
        ok = ok and singular_space(catalog_symbol(name)).dim == dim
    report(1, "singular space dimensions 1/2/2/0 with dual characterizations", ok)


def test_criterion_02_symplecticity_and_group_law():
    ok = True
    for name in CATALOG_NAMES:
        q = catalog_symbol(name)
        J = symplectic_unit(q.n)
        for t in (0.1, 0.7, 4.0):
            K = hamilton_flow(q, t).K
            ok = ok and np.linalg.norm(K.T @ J @ K - J) <= 1e-10 * np.linalg.norm(K) ** 2
            for s in (0.1, 0.7, 4.0):
                res = np.linalg.norm(hamilton_flow(q, s).K @ K
                                     - hamilton_flow(q, s + t).K)
                ok = ok and res <= 1e-9
    report(2, "flow symplecticity <= 1e-10 and group law <= 1e-9", ok)


def test_criterion_03_fbi_unitarity():
    phi = standard_phase(1)
    w = weight_of_phase(phi)
    ok = True
    for G in (1.0, 2.0, 1.0 + 0.5j):
        u = fbi_transform_gaussian(phi, GaussianData("gaussian", 1, G=[[G]]))
        l2 = np.sqrt(np.pi / np.real(G))
        ok = ok and abs(hphi_norm_sq(u, w) - l2) <= 1e-10 * l2
    u = fbi_transform_gaussian(phi, GaussianData("gaussian", 1, G=np.eye(1)))
    ok = ok and abs(hphi_norm_sq(u, w) - np.sqrt(np.pi)) <= 1e-10
    report(3, "FBI unitarity on three Gaussians, sqrt(pi) for the ground state", ok)


def test_criterion_04_fundamental_estimate():
    w = weight_of_phase(standard_phase(1))
    _, defect = polarize(w)
    I2 = np.eye(2)
    ref = -0.25 * np.block([[I2, -I2], [-I2, I2]])
    ok = np.allclose(defect, ref, atol=1e-12)
    for wp in (Weight([[-0.3]], [[0.7]]), Weight([[-0.75]], [[0.25]])):
        _, d = polarize(wp)  # raises unless negative semidefinite w/ diagonal radical
        evals = np.sort(np.linalg.eigvalsh(d))
        ok = ok and evals[-1] <= 1e-12 and evals[1] < -1e-8
    report(4, "fundamental estimate: -|z-w|^2/4 exactly; negative for perturbations", ok)


def test_criterion_05_heat_closed_forms():
    qt, w = conjugated("heat")
    psi0 = Polarization(w)
    ok = True
    for t in (0.5, 1.0, 4.0):
        path = PhasePath(psi0, qt, t)
        ph = path.at(t)
        ref = QuadraticPhase(-0.25 / (1 + t), 0.25 / (1 + t), -0.25 / (1 + t))
        ok = ok and ph.block_distance(ref) <= 1e-9
        amp = transport_amplitude(qt, path, t, w.bergman_constant())
        ok = ok and abs(amp - 1 / (2 * np.pi * np.sqrt(1 + t))) <= 1e-9
        wt = evolve_weight(w, qt, t)
        ok = ok and abs(wt.P[0, 0] + 0.5 / (1 + 2 * t)) <= 1e-9
        ok = ok and abs(wt.H[0, 0] - 0.5 / (1 + 2 * t)) <= 1e-9
    report(5, "heat closed forms Psi_t, a(t), Phi_t at t in {0.5, 1, 4}", ok)


def test_criterion_06_bergman_projector():
    qt, w = conjugated("heat")
    k = bergman_kernel(w, qt, 0.0)
    psi0 = QuadraticPhase.from_polarization(Polarization(w))
    ok = k.phase.block_distance(psi0) <= 1e-10
    ok = ok and abs(k.amp - w.bergman_constant()) <= 1e-10
    phi = standard_phase(1)
    for G in (np.eye(1), np.array([[2.0 + 0.5j]])):
        u = fbi_transform_gaussian(phi, GaussianData("gaussian", 1, G=G))
        pu = apply_kernel(k, u)
        ok = ok and abs(pu.alpha - u.alpha) <= 1e-10
        ok = ok and np.linalg.norm(pu.g - u.g) + np.linalg.norm(pu.l - u.l) <= 1e-10
    report(6, "t=0 kernel is the Bergman projector; reproducing on Gaussians", ok)


def test_criterion_07_semigroup_law():
    ok = True
    for name in ("heat", "harmonic_oscillator"):
        qt, w = conjugated(name)
        for s, t in ((0.3, 0.4), (0.1, 1.0)):
            comp = compose_kernels(bergman_kernel(w, qt, t), bergman_kernel(w, qt, s))
            ref = bergman_kernel(w, qt, s + t)
            ok = ok and comp.phase.block_distance(ref.phase) <= 1e-8
            ok = ok and abs(comp.amp - ref.amp) <= 1e-8
    report(7, "kernel semigroup law via the Gaussian-composition oracle", ok)


def test_criterion_08_generator_convergence():
    phi = standard_phase(1)
    u = fbi_transform_gaussian(phi, GaussianData("gaussian", 1, G=np.eye(1)))
    ok = True
    for name in ("heat", "harmonic_oscillator"):
        qt, w = conjugated(name)
        d1 = generator_defect(w, qt, u, 0.5, 1e-3)
        d2 = generator_defect(w, qt, u, 0.5, 2e-3)
        ok = ok and 4 * 0.8 <= d2 / d1 <= 4 * 1.2
    report(8, "generator defect O(h^2): ratio 4 +/- 20% when h halves", ok)


def test_criterion_09_singular_space_identity():
    ok = True
    for name in CATALOG_NAMES:
        q = catalog_symbol(name)
        for t in (0.25, 1.0, 4.0):
            ok = ok and verify_singular_space_identity(q, standard_phase(q.n), t)
    report(9, "S = kappa_phi^{-1}(Lambda_Phi intersect Lambda_{Phi_t})", ok)


def test_criterion_10_theorem_end_to_end():
    cases = [("heat", "delta", 0.5, 0), ("heat", "constant", 1.0, 1),
             ("free_schrodinger", "delta", 0.5, 1),
             ("harmonic_oscillator", "delta", 0.4, 1),
             ("kfp", "delta", 0.25, 0)]
    ok = True
    for name, kind, t, count in cases:
        q = catalog_symbol(name)
        passed, rep = verify_theorem(q, standard_phase(q.n),
                                     GaussianData(kind, q.n), t)
        ok = ok and passed and len(rep["measured"]) == count
    report(10, "propagation law measured vs predicted on five model cases", ok)


def test_criterion_11_unitary_case_equality():
    qt, w = conjugated("harmonic_oscillator")
    q = catalog_symbol("harmonic_oscillator")
    ok = True
    for t in (0.3, 1.2):
        wt = evolve_weight(w, qt, t)
        ok = ok and np.linalg.norm(wt.P - w.P) + np.linalg.norm(wt.H - w.H) <= 1e-10
        passed, rep = verify_theorem(q, standard_phase(1), GaussianData("delta", 1), t)
        ok = ok and passed and len(rep["measured"]) == 1  # cardinality preserved
    report(11, "unitary case: Phi_t = Phi and wavefront cardinality preserved", ok)
