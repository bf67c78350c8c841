"""The semigroup on the Bargmann side in Bergman form.

The kernel of e^{-t q~^w(z,D)} acting on H_Phi is a(t) e^{2 Psi_t(z, conj w)}
against e^{-2 Phi(w)} L(dw).  The phase blocks solve a matrix Riccati system
obtained from the eikonal equation

    2 d_t Psi_t + q~(z, (2/i) d_z Psi_t) = 0,

and the amplitude solves a'(t) + (1/2i) beta(t) a(t) = 0 with
beta(t) = tr(A2 - 2i A3 P_t).  An independent algebraic construction of the
phase from the conjugated flow (whose generating function Psi_t must be)
serves as a mandatory cross-check.
"""

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .fbi import Polarization, Weight, lambda_of_weight, weight_of_lambda
from .gaussians import (DivergentIntegralError, HolomorphicGaussian, PolyGaussian,
                        holomorphic_linear, holomorphic_parts, quad_accumulate,
                        sqrt_det_rhp)
from .linalg import (complexify_vector, embed_matrix, real_quadratic_matrix,
                     realify_vector)
from .symplectic import ComplexSymplecticMap, CrossCheckError, symplectic_unit

__all__ = ["QuadraticPhase", "PhasePath", "BergmanKernel", "conjugated_flow",
           "evolve_weight", "eikonal_phase", "transport_amplitude",
           "bergman_kernel", "apply_kernel", "compose_kernels", "weyl_apply",
           "generator_defect"]


class QuadraticPhase:
    """Psi(z, theta) = 1/2 z^T Pt z + z^T Qt theta + 1/2 theta^T Rt theta."""

    def __init__(self, Pt, Qt, Rt):
        Pt = np.atleast_2d(np.asarray(Pt, dtype=complex))
        Qt = np.atleast_2d(np.asarray(Qt, dtype=complex))
        Rt = np.atleast_2d(np.asarray(Rt, dtype=complex))
        self.Pt = (Pt + Pt.T) / 2
        self.Qt = Qt
        self.Rt = (Rt + Rt.T) / 2
        self.n = Pt.shape[0]

    @classmethod
    def from_polarization(cls, psi):
        return cls(*psi.blocks())

    def value(self, z, theta):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        theta = np.atleast_1d(np.asarray(theta, dtype=complex))
        return (0.5 * z @ self.Pt @ z + z @ self.Qt @ theta
                + 0.5 * theta @ self.Rt @ theta)

    def block_distance(self, other):
        return max(np.linalg.norm(self.Pt - other.Pt),
                   np.linalg.norm(self.Qt - other.Qt),
                   np.linalg.norm(self.Rt - other.Rt))


def _riccati_rhs(qt):
    A1, A2, A3 = qt.A1, qt.A2, qt.A3

    def rhs(P, Q, R):
        PA2 = P @ A2
        dP = -0.5 * A1 + 1j * (PA2 + PA2.T) + 2 * P @ A3 @ P
        dQ = (1j * A2.T + 2 * P @ A3) @ Q
        dR = 2 * Q.T @ A3 @ Q
        return dP, dQ, dR

    return rhs


class PhasePath:
    """Dense-in-time solution of the phase Riccati system on [0, t_max]."""

    def __init__(self, psi0, qt, t_max):
        n = qt.n
        rhs = _riccati_rhs(qt)

        def f(t, y):
            blocks = y.view(complex).reshape(3, n, n)
            dP, dQ, dR = rhs(*blocks)
            return np.stack([dP, dQ, dR]).ravel().view(float)

        P0, Q0, R0 = (psi0.blocks() if isinstance(psi0, Polarization)
                      else (psi0.Pt, psi0.Qt, psi0.Rt))
        y0 = np.stack([np.asarray(b, dtype=complex) for b in (P0, Q0, R0)]).ravel().view(float)
        self.n = n
        self.qt = qt
        self.t_max = t_max
        if t_max == 0:
            self._sol = None
            self._y0 = y0
        else:
            sol = solve_ivp(f, (0.0, t_max), y0, method="RK45",
                            rtol=1e-11, atol=1e-11, max_step=0.05,
                            dense_output=True)
            if not sol.success:
                raise RuntimeError("Riccati integration failed: %s" % sol.message)
            self._sol = sol
            self._y0 = y0

    def at(self, t):
        if t == 0 or self._sol is None:
            y = self._y0
        else:
            y = self._sol.sol(t)
        P, Q, R = np.ascontiguousarray(y).view(complex).reshape(3, self.n, self.n)
        return QuadraticPhase(P, Q, R)

    def beta(self, t):
        """Transport coefficient tr(A2 - 2i A3 P_t)."""
        ph = self.at(t)
        return np.trace(self.qt.A2) - 2j * np.trace(self.qt.A3 @ ph.Pt)


def conjugated_flow(qt, t):
    """kappa~_t = exp(-2it F~) with F~ = J Qtilde; cross-checked against
    kappa_phi kappa_t kappa_phi^{-1} when the symbol carries its provenance."""
    Ft = symplectic_unit(qt.n) @ qt.Qtilde
    if abs(t) * np.linalg.norm(Ft, 2) > 50:
        raise ValueError("|t|*||F~|| exceeds the sanity bound 50")
    K = ComplexSymplecticMap(expm(-2j * t * Ft), qt.n)
    if qt.source is not None and qt.kappa is not None:
        from .symplectic import hamilton_flow
        Kref = qt.kappa.K @ hamilton_flow(qt.source, t).K @ np.linalg.inv(qt.kappa.K)
        if np.linalg.norm(K.K - Kref) > 1e-9 * max(1.0, np.linalg.norm(Kref)):
            raise CrossCheckError("conjugated flow disagrees with kappa_phi kappa_t kappa_phi^{-1}")
    return K


def algebraic_phase(psi0, qt, t):
    """Generating-function construction of Psi_t from the conjugated flow.

    With flow blocks K and Psi_0 = (P0, Q0, R0), graph(kappa~_t) generated by
    (2/i)(Psi_t(z,theta) - Psi(w,theta)) forces
    P_t = (i/2) Ww Zw^{-1}, Q_t = (i/2) Wtheta - P_t Ztheta,
    R_t = R0 - Q_t^T Ztheta, with consistency Q_t^T Zw = Q0^T.
    """
    P0, Q0, R0 = (psi0.blocks() if isinstance(psi0, Polarization)
                  else (psi0.Pt, psi0.Qt, psi0.Rt))
    n = qt.n
    K = conjugated_flow(qt, t).K
    K11, K12, K21, K22 = K[:n, :n], K[:n, n:], K[n:, :n], K[n:, n:]
    Zw = K11 - 2j * K12 @ P0
    Zth = -2j * K12 @ Q0
    Ww = K21 - 2j * K22 @ P0
    Wth = -2j * K22 @ Q0
    Pt = 0.5j * Ww @ np.linalg.inv(Zw)
    Qt = 0.5j * Wth - Pt @ Zth
    Rt = R0 - Qt.T @ Zth
    consistency = np.linalg.norm(Qt.T @ Zw - np.asarray(Q0).T)
    if consistency > 1e-8 * max(1.0, np.linalg.norm(Q0)):
        raise CrossCheckError("generating-function relations inconsistent (%.3e)" % consistency)
    return QuadraticPhase(Pt, Qt, Rt)


def eikonal_phase(psi0, qt, t):
    """Phase blocks at time t from the Riccati ODE, cross-checked against the
    algebraic generating-function construction (residual <= 1e-8)."""
    path = PhasePath(psi0, qt, t)
    ph = path.at(t)
    ref = algebraic_phase(psi0, qt, t)
    res = ph.block_distance(ref)
    if res > 1e-8:
        raise CrossCheckError("Riccati vs generating-function phase mismatch: %.3e" % res)
    return ph


def _adaptive_simpson(f, a, b, tol):
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6 * (fa + 4 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = (a + b) / 2
        flm, frm = f((a + m) / 2), f((m + b) / 2)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        if depth <= 0:
            raise RuntimeError("adaptive Simpson recursion limit reached")
        if abs(left + right - whole) <= 15 * tol:
            return left + right + (left + right - whole) / 15
        return (recurse(a, m, fa, flm, fm, left, tol / 2, depth - 1)
                + recurse(m, b, fm, frm, fb, right, tol / 2, depth - 1))

    if a == b:
        return 0.0
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = simpson(fa, fm, fb, a, b)
    return recurse(a, b, fa, fm, fb, whole, tol, 50)


def transport_amplitude(qt, phase_path, t, C_Phi):
    """a(t) = C_Phi exp(-(1/2i) integral(beta)), beta by adaptive Simpson."""
    integral = _adaptive_simpson(phase_path.beta, 0.0, t, 1e-10)
    amp = C_Phi * np.exp(-integral / 2j)
    if amp == 0 or not np.isfinite(amp):
        raise RuntimeError("amplitude vanished or overflowed")
    return complex(amp)


def evolve_weight(weight, qt, t):
    """Phi_t with Lambda_{Phi_t} = kappa~_t(Lambda_Phi); asserts Phi_0 = Phi,
    Phi - Phi_t positive semidefinite, and the weight eikonal equation by a
    sampled central-difference residual."""
    if not qt.re_nonneg:
        raise ValueError("weight evolution needs a re_nonneg symbol")
    lam = lambda_of_weight(weight)

    def at(s):
        from .symplectic import TotallyRealSubspace
        return weight_of_lambda(TotallyRealSubspace(conjugated_flow(qt, s).K @ lam.V))

    wt = at(t)
    diff = weight.real_form() - wt.real_form()
    min_eig = np.linalg.eigvalsh((diff + diff.T) / 2).min()
    if min_eig < -1e-9 * max(1.0, np.linalg.norm(diff)):
        raise ValueError("Phi - Phi_t not positive semidefinite (min eig %.3e)" % min_eig)
    if t > 0:
        _check_weight_eikonal(weight, qt, t, at, wt)
    return wt


def _check_weight_eikonal(weight, qt, t, at, wt):
    h = 1e-4
    wp, wm = at(t + h), at(max(t - h, 0.0))
    rng = np.random.default_rng(7)
    scale = 100 * h ** 2 * (1 + np.linalg.norm(qt.Qtilde)) ** 3
    for _ in range(10):
        z = rng.standard_normal(qt.n) + 1j * rng.standard_normal(qt.n)
        dphi = (wp.value(z) - wm.value(z)) / (2 * h)
        req = np.real(qt.value(np.concatenate([z, wt.zeta(z)])))
        if abs(dphi + req) > scale * (1 + abs(z @ np.conj(z))) ** 2:
            raise CrossCheckError("weight eikonal residual %.3e at z=%r" % (abs(dphi + req), z))


class BergmanKernel:
    """(t, a(t), Psi_t, Phi, Phi_t) with construction-time diagnostics."""

    def __init__(self, t, amp, phase, src_weight, dst_weight, diagnostics=None):
        self.t = t
        self.amp = complex(amp)
        self.phase = phase
        self.src_weight = src_weight
        self.dst_weight = dst_weight
        self.diagnostics = diagnostics or {}
        self.n = phase.n


def _r_form_matrix(kernel):
    """Real matrix of (z,theta) -> Phi_t(z) + Phi(conj theta) - 2 Re Psi_t(z,theta)."""
    n = kernel.n
    src, dst, ph = kernel.src_weight, kernel.dst_weight, kernel.phase

    def f(v):
        z = complexify_vector(v[:2 * n])
        th = complexify_vector(v[2 * n:])
        return float(dst.value(z) + src.value(np.conj(th))
                     - 2 * np.real(ph.value(z, th)))

    return real_quadratic_matrix(f, 4 * n)


def _flat_map(K, weight):
    """z -> pi_1(K(z, zeta_Phi(z))) together with the graph residual."""
    n = weight.n

    def apply(z):
        X = K.K @ np.concatenate([np.atleast_1d(z), weight.zeta(z)])
        return X[:n]

    return apply


def bergman_kernel(weight, qt, t):
    """Assemble the Bergman-form propagator kernel at time t with diagnostics:
    the t=0 projector identity, positive semidefiniteness of the R_t form,
    and the radical-on-graph check of the two-sided R estimate."""
    if not qt.re_nonneg:
        raise ValueError("kernel construction needs a re_nonneg symbol")
    psi0 = Polarization(weight)
    path = PhasePath(psi0, qt, t)
    phase = path.at(t)
    ref = algebraic_phase(psi0, qt, t)
    cross = phase.block_distance(ref)
    if cross > 1e-8:
        raise CrossCheckError("phase cross-check failed: %.3e" % cross)
    amp = transport_amplitude(qt, path, t, weight.bergman_constant())
    dst = evolve_weight(weight, qt, t)

    t0_phase = path.at(0.0)
    t0_residual = t0_phase.block_distance(QuadraticPhase.from_polarization(psi0))
    amp0 = transport_amplitude(qt, path, 0.0, weight.bergman_constant())
    t0_residual = max(t0_residual, abs(amp0 - weight.bergman_constant()))
    if t0_residual > 1e-10:
        raise CrossCheckError("t=0 kernel is not the Bergman projector (%.3e)" % t0_residual)

    kernel = BergmanKernel(t, amp, phase, weight, dst)
    R = _r_form_matrix(kernel)
    evals, evecs = np.linalg.eigh(R)
    scale = max(1.0, abs(evals).max())
    psd_min = float(evals.min())
    if psd_min < -1e-9 * scale:
        raise ValueError("R_t form not positive semidefinite (min eig %.3e)" % psd_min)
    # radical must sit on the graph z = kappa~flat_t(conj theta)
    flat = _flat_map(conjugated_flow(qt, t), weight)
    n = kernel.n
    graph_res = 0.0
    for v in evecs[:, np.abs(evals) <= 1e-9 * scale].T:
        th = complexify_vector(v[2 * n:])
        z_pred = flat(np.conj(th))
        graph_res = max(graph_res, float(np.linalg.norm(v[:2 * n] - realify_vector(z_pred))))
    if graph_res > 1e-8:
        raise CrossCheckError("R_t radical off the kappa~flat graph (%.3e)" % graph_res)

    kernel.diagnostics = {
        "psd_min": psd_min,
        "t0_residual": float(t0_residual),
        "phase_cross_check": float(cross),
        "radical_graph_residual": float(graph_res),
    }
    return kernel


def apply_kernel(kernel, u):
    """Closed-form action a(t) integral(e^{2 Psi_t(z, conj w)} u(w) e^{-2 Phi(w)} dL(w));
    the result must be holomorphic (Cauchy-Riemann residual <= 1e-10)."""
    n = kernel.n
    ph, src = kernel.phase, kernel.src_weight
    E = embed_matrix(n)
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    M = quad_accumulate(M, ph.Rt, True, True, n)          # conj(w)^T Rt conj(w)
    M = quad_accumulate(M, u.g / 2, False, False, n)
    M = quad_accumulate(M, -src.P / 2, False, False, n)
    M = quad_accumulate(M, -np.conj(src.P) / 2, True, True, n)
    M = quad_accumulate(M, -src.H, True, False, n)
    re_max = np.linalg.eigvalsh((M.real + M.real.T) / 2).max()
    if re_max >= -1e-12:
        raise DivergentIntegralError(
            "kernel application diverges (max Re-eigenvalue %.3e)" % re_max)
    # linear-in-w part: 2 z^T Qt conj(w) + l^T w, with z kept realified
    Bz = np.conj(E).T @ (2 * ph.Qt.T @ E)
    b0 = E.T @ u.l
    Minv = np.linalg.inv(M)
    # z-quadratic: direct z^T Pt z plus the completed square
    S = np.zeros((2 * n, 2 * n), dtype=complex)
    X = E.T @ ph.Pt @ E
    S += X + X.T
    S -= Bz.T @ Minv @ Bz
    lin = -Bz.T @ (Minv @ b0)
    g_out, cr_quad = holomorphic_parts(S, n)
    l_out, cr_lin = holomorphic_linear(lin, n)
    scale = max(1.0, np.linalg.norm(S), np.linalg.norm(lin))
    if cr_quad + cr_lin > 1e-10 * scale:
        raise CrossCheckError("kernel output not holomorphic (CR residual %.3e)"
                              % (cr_quad + cr_lin))
    alpha = (kernel.amp * u.alpha * (2 * np.pi) ** n / sqrt_det_rhp(-M)
             * np.exp(-0.5 * b0 @ Minv @ b0))
    return HolomorphicGaussian(alpha, g_out, l_out)


def compose_kernels(outer, inner):
    """Gaussian-composition of two Bergman kernels (outer after inner) against
    the shared source weight; returns a BergmanKernel with combined time."""
    n = outer.n
    src = inner.src_weight
    P2, Q2, R2 = outer.phase.Pt, outer.phase.Qt, outer.phase.Rt
    P1, Q1, R1 = inner.phase.Pt, inner.phase.Qt, inner.phase.Rt
    E = embed_matrix(n)
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    M = quad_accumulate(M, R2, True, True, n)             # conj(w)^T R2 conj(w)
    M = quad_accumulate(M, P1, False, False, n)           # w^T P1 w
    M = quad_accumulate(M, -src.P / 2, False, False, n)
    M = quad_accumulate(M, -np.conj(src.P) / 2, True, True, n)
    M = quad_accumulate(M, -src.H, True, False, n)
    re_max = np.linalg.eigvalsh((M.real + M.real.T) / 2).max()
    if re_max >= -1e-12:
        raise DivergentIntegralError("kernel composition diverges")
    Minv = np.linalg.inv(M)
    Bz = np.conj(E).T @ (2 * Q2.T)                        # coefficient of z in b
    Bth = E.T @ (2 * Q1)                                  # coefficient of theta
    B = np.hstack([Bz, Bth])
    X = -0.5 * B.T @ Minv @ B
    Pt = 2 * P2 + 2 * X[:n, :n]
    Rt = 2 * R1 + 2 * X[n:, n:]
    Qt = 2 * X[:n, n:]
    amp = outer.amp * inner.amp * (2 * np.pi) ** n / sqrt_det_rhp(-M)
    return BergmanKernel(outer.t + inner.t, amp,
                         QuadraticPhase(Pt / 2, Qt / 2, Rt / 2),
                         src, outer.dst_weight)


def weyl_apply(qt, u):
    """Exact action of q~^w(z,D) = 1/2 A1 z.z + A2 z.D_z + (1/2i) tr A2
    + 1/2 A3 D_z.D_z on a holomorphic Gaussian."""
    A1, A2, A3 = qt.A1, qt.A2, qt.A3
    g, l = u.g, u.l
    C2 = A1 + (g @ A2 + A2.T @ g) / 1j - g @ A3 @ g
    c1 = A2.T @ l / 1j - g @ A3 @ l
    c0 = np.trace(A2) / 2j - 0.5 * np.trace(A3 @ g) - 0.5 * l @ A3 @ l
    return PolyGaussian(u, c0, c1, C2)


def generator_defect(weight, qt, u, t, h):
    """Coefficientwise norm of d_t(G~(t)u) + q~^w(G~(t)u), with d_t by
    central differences of the Gaussian parameters; expected O(h^2)."""
    up = apply_kernel(bergman_kernel(weight, qt, t + h), u)
    um = apply_kernel(bergman_kernel(weight, qt, t - h), u)
    u0 = apply_kernel(bergman_kernel(weight, qt, t), u)
    w = weyl_apply(qt, u0)
    c0 = (up.alpha - um.alpha) / (2 * h) / u0.alpha + w.c0
    c1 = (up.l - um.l) / (2 * h) + w.c1
    C2 = (up.g - um.g) / (2 * h) + w.C2
    return float(abs(c0) + np.linalg.norm(c1) + np.linalg.norm(C2))
