"""FBI phases, plurisubharmonic weights, canonical maps and polarizations.

A phase phi(z,y) = 1/2 Az.z + Bz.y + 1/2 Dy.y (A, D symmetric, det B != 0,
Im D > 0) induces the weight Phi(z) = sup_y(-Im phi(z,y)), encoded here by
the pair (P, H) with

    Phi(z) = 1/2 Re(z^T P z) + 1/2 conj(z)^T H z,

so the Levi matrix is literally H/2.  The associated canonical map
kappa_phi carries real phase space onto the graph
Lambda_Phi = {(z, -i(Pz + conj(H) conj(z)))}.
"""

import numpy as np

from .gaussians import DivergentIntegralError, GaussianData, HolomorphicGaussian, \
    gaussian_integral, linear_accumulate, quad_accumulate, sqrt_det_rhp
from .linalg import (complexify_vector, real_quadratic_matrix, realify_vector)
from .symplectic import ComplexSymplecticMap, TotallyRealSubspace

__all__ = ["FbiPhase", "Weight", "Polarization", "ConjugatedSymbol",
           "standard_phase", "weight_of_phase", "kappa_phi", "polarize",
           "egorov_symbol", "lambda_of_weight", "weight_of_lambda",
           "fbi_transform_gaussian", "hphi_norm_sq"]


class FbiPhase:
    """phi(z,y) = 1/2 Az.z + Bz.y + 1/2 Dy.y with the unitarity normalization
    c_phi = 2^{-n/2} pi^{-3n/4} (det Im D)^{-1/4} |det B|."""

    def __init__(self, A, B, D):
        A = np.atleast_2d(np.asarray(A, dtype=complex))
        B = np.atleast_2d(np.asarray(B, dtype=complex))
        D = np.atleast_2d(np.asarray(D, dtype=complex))
        n = A.shape[0]
        if not (np.allclose(A, A.T, atol=1e-12) and np.allclose(D, D.T, atol=1e-12)):
            raise ValueError("A and D must be symmetric")
        if abs(np.linalg.det(B)) <= 1e-12:
            raise ValueError("det B vanishes")
        imd_min = np.linalg.eigvalsh((D.imag + D.imag.T) / 2).min()
        if imd_min <= 1e-12:
            raise ValueError("Im D not positive definite")
        self.n = n
        self.A, self.B, self.D = A, B, D
        det_imd = np.linalg.det((D.imag + D.imag.T) / 2)
        self.c_phi = (2.0 ** (-n / 2) * np.pi ** (-3 * n / 4)
                      * det_imd ** (-0.25) * abs(np.linalg.det(B)))

    def value(self, z, y):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        y = np.atleast_1d(np.asarray(y, dtype=complex))
        return 0.5 * z @ self.A @ z + y @ self.B @ z + 0.5 * y @ self.D @ y


def standard_phase(n):
    """The default frame phi(z,y) = (i/2)(z-y).(z-y): A = iI, B = -iI, D = iI."""
    I = np.eye(n)
    return FbiPhase(1j * I, -1j * I, 1j * I)


class Weight:
    """Strictly plurisubharmonic quadratic weight, blocks (P, H)."""

    def __init__(self, P, H, tol=1e-10):
        P = np.atleast_2d(np.asarray(P, dtype=complex))
        H = np.atleast_2d(np.asarray(H, dtype=complex))
        if not np.allclose(P, P.T, atol=tol * max(1.0, np.linalg.norm(P))):
            raise ValueError("P must be symmetric")
        if not np.allclose(H, H.conj().T, atol=tol * max(1.0, np.linalg.norm(H))):
            raise ValueError("H must be Hermitian")
        H = (H + H.conj().T) / 2
        if np.linalg.eigvalsh(H).min() <= 0:
            raise ValueError("H not positive definite (weight not strictly plurisubharmonic)")
        self.n = P.shape[0]
        self.P = (P + P.T) / 2
        self.H = H

    def value(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return float(np.real(0.5 * np.real(z @ self.P @ z) + 0.5 * np.conj(z) @ self.H @ z))

    def dz(self, z):
        """Holomorphic gradient d_z Phi = (Pz + conj(H) conj(z))/2."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return 0.5 * (self.P @ z + np.conj(self.H) @ np.conj(z))

    def zeta(self, z):
        """The Lambda_Phi fiber (2/i) d_z Phi(z)."""
        return -2j * self.dz(z)

    def levi(self):
        return self.H / 2

    def bergman_constant(self):
        """C_Phi = (2/pi)^n det(Levi matrix)."""
        return float((2 / np.pi) ** self.n * np.linalg.det(self.levi()).real)

    def real_form(self):
        """Symmetric 2n x 2n matrix S with Phi(z) = 1/2 v^T S v, v = (Re z, Im z)."""
        Pr, Pi = self.P.real, self.P.imag
        Hr, Hi = self.H.real, self.H.imag
        return np.block([[Pr + Hr, -(Pi + Hi)], [-(Pi + Hi).T, -Pr + Hr]])

    @classmethod
    def from_real_form(cls, S, tol=1e-10):
        S = np.asarray(S, dtype=float)
        n = S.shape[0] // 2
        S = (S + S.T) / 2
        S11, S12, S22 = S[:n, :n], S[:n, n:], S[n:, n:]
        Hr = (S11 + S22) / 2
        Pr = (S11 - S22) / 2
        Pi = -(S12 + S12.T) / 2
        Hi = -(S12 - S12.T) / 2
        return cls(Pr + 1j * Pi, Hr + 1j * Hi, tol=tol)


def weight_of_phase(phi):
    """Phi(z) = sup_y(-Im phi(z,y)), maximized over real y in closed form."""
    n = phi.n
    ImD = (phi.D.imag + phi.D.imag.T) / 2

    def neg_im_phi(v):
        z = complexify_vector(v)
        # stationarity: -(Im(Bz) + ImD y) = 0
        y = -np.linalg.solve(ImD, np.imag(phi.B @ z))
        return float(-np.imag(phi.value(z, y)))

    # real_quadratic_matrix returns M with f = v^T M v; the weight encoding
    # uses Phi = 1/2 v^T S v
    S = 2 * real_quadratic_matrix(neg_im_phi, 2 * n)
    return Weight.from_real_form(S)


class Polarization:
    """The holomorphic quadratic form Psi(z, theta) with Psi(z, conj z) = Phi(z)."""

    def __init__(self, weight):
        self.weight = weight
        self.P = weight.P
        self.H = weight.H
        self.n = weight.n

    def value(self, z, theta):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        theta = np.atleast_1d(np.asarray(theta, dtype=complex))
        return (0.25 * z @ self.P @ z + 0.25 * theta @ np.conj(self.P) @ theta
                + 0.5 * z @ self.H.T @ theta)

    def blocks(self):
        """(P0, Q0, R0) with Psi = 1/2 z^T P0 z + z^T Q0 theta + 1/2 theta^T R0 theta."""
        return self.P / 2, self.H.T / 2, np.conj(self.P) / 2


def polarize(weight, tol=1e-9):
    """Polarization of a weight plus the fundamental-estimate defect form
    (z,w) -> 2 Re Psi(z, conj w) - Phi(z) - Phi(w) as a 4n x 4n real matrix.

    The defect must vanish exactly on the diagonal z = w and be strictly
    negative transverse to it.
    """
    psi = Polarization(weight)
    n = weight.n

    def defect(v):
        z = complexify_vector(v[:2 * n])
        w = complexify_vector(v[2 * n:])
        return float(2 * np.real(psi.value(z, np.conj(w)))
                     - weight.value(z) - weight.value(w))

    M = real_quadratic_matrix(defect, 4 * n)
    evals, evecs = np.linalg.eigh(M)
    scale = max(1.0, abs(evals).max())
    if evals.max() > tol * scale:
        raise ValueError("non-negative eigenvalue found: %.3e" % evals.max())
    null = np.abs(evals) <= tol * scale
    if null.sum() != 2 * n:
        raise ValueError("fundamental-estimate radical has dimension %d, expected %d"
                         % (int(null.sum()), 2 * n))
    for v in evecs[:, null].T:
        if np.linalg.norm(v[:2 * n] - v[2 * n:]) > 1e-7:
            raise ValueError("fundamental-estimate radical is not the diagonal z = w")
    return psi, M


def kappa_phi(phi):
    """Canonical map (y, eta) -> (z, zeta) solving eta = -(B^T z + D y),
    zeta = A z + B y; verified to carry R^{2n} onto Lambda_Phi."""
    Bmt = np.linalg.inv(phi.B.T)
    K11 = -Bmt @ phi.D
    K12 = -Bmt
    K21 = phi.B + phi.A @ K11
    K22 = phi.A @ K12
    K = ComplexSymplecticMap(np.block([[K11, K12], [K21, K22]]), phi.n, rtol=1e-12)
    w = weight_of_phase(phi)
    for j in range(2 * phi.n):
        X = K.K[:, j]
        res = np.linalg.norm(X[phi.n:] - w.zeta(X[:phi.n]))
        if res > 1e-10 * max(1.0, np.linalg.norm(X)):
            raise ValueError("kappa_phi(R^{2n}) != Lambda_Phi (residual %.3e)" % res)
    return K


class ConjugatedSymbol:
    """q conjugated to the FBI side: q~(z, zeta) with symmetric matrix Qtilde
    in coordinates (z, zeta) and Hessian blocks A1, A2, A3."""

    def __init__(self, n, Qtilde, source=None, kappa=None):
        Qtilde = np.asarray(Qtilde, dtype=complex)
        self.n = n
        self.Qtilde = (Qtilde + Qtilde.T) / 2
        self.source = source
        self.kappa = kappa

    @property
    def A1(self):
        return 2 * self.Qtilde[:self.n, :self.n]

    @property
    def A2(self):
        return 2 * self.Qtilde[self.n:, :self.n]

    @property
    def A3(self):
        return 2 * self.Qtilde[self.n:, self.n:]

    def value(self, X):
        X = np.asarray(X, dtype=complex)
        return X @ self.Qtilde @ X

    @property
    def re_nonneg(self):
        return self.source.re_nonneg if self.source is not None else True


def egorov_symbol(q, phi):
    """q~ = q o kappa_phi^{-1}: Qtilde = (kappa^{-1})^T Q kappa^{-1}."""
    K = kappa_phi(phi)
    Kinv = np.linalg.inv(K.K)
    return ConjugatedSymbol(q.n, Kinv.T @ q.Q @ Kinv, source=q, kappa=K)


def lambda_of_weight(weight):
    """Lambda_Phi = {(z, (2/i) d_z Phi(z))} as a totally real subspace of C^{2n}."""
    n = weight.n
    cols = []
    for j in range(n):
        for z in (np.eye(n)[:, j], 1j * np.eye(n)[:, j]):
            cols.append(np.concatenate([z.astype(complex), weight.zeta(z)]))
    return TotallyRealSubspace(np.column_stack(cols))


def weight_of_lambda(Sigma, tol=1e-10):
    """Recover the weight whose graph a totally real subspace is.

    Solves the real-linear graph relation zeta = -i(Pz + conj(H) conj(z))
    from a spanning set; fails if pi_1 is singular or the recovered blocks
    are not of weight type.
    """
    V = Sigma.V
    n = V.shape[0] // 2
    Zr = np.column_stack([realify_vector(V[:n, j]) for j in range(2 * n)])
    Wr = np.column_stack([realify_vector(V[n:, j]) for j in range(2 * n)])
    if abs(np.linalg.det(Zr)) <= 1e-12 * max(1.0, np.linalg.norm(Zr) ** (2 * n)):
        raise ValueError("pi_1 singular: subspace is not a weight graph")
    L = Wr @ np.linalg.inv(Zr)
    # columns of L on the realified basis e_j, i e_j give
    # c_j = -i(P + conj(H)) e_j and d_j = (P - conj(H)) e_j
    C = np.column_stack([complexify_vector(L @ realify_vector(np.eye(n)[:, j]))
                         for j in range(n)])
    Dm = np.column_stack([complexify_vector(L @ realify_vector(1j * np.eye(n)[:, j]))
                          for j in range(n)])
    P = (1j * C + Dm) / 2
    H = np.conj((1j * C - Dm) / 2)
    sym_res = np.linalg.norm(P - P.T) + np.linalg.norm(H - H.conj().T)
    if sym_res > 1e-8 * max(1.0, np.linalg.norm(P) + np.linalg.norm(H)):
        raise ValueError("recovered blocks not of weight type (residual %.3e)" % sym_res)
    return Weight((P + P.T) / 2, (H + H.conj().T) / 2, tol=tol)


def fbi_transform_gaussian(phi, data):
    """Closed-form FBI transform c_phi * integral(e^{i phi(z,y)} u(y) dy) of
    Gaussian-class data; returns a HolomorphicGaussian."""
    n = phi.n
    if data.kind == "delta":
        # exact limit: c_phi e^{i phi(z, 0)}
        return HolomorphicGaussian(phi.c_phi, 1j * phi.A, np.zeros(n))
    G = data.G if data.kind == "gaussian" else np.zeros((n, n), dtype=complex)
    l = data.l
    M = 1j * phi.D - G
    re_max = np.linalg.eigvalsh((M.real + M.real.T) / 2).max()
    if re_max >= -1e-12:
        raise DivergentIntegralError("FBI integral diverges: Re(G - iD) not positive definite")
    Minv = np.linalg.inv(M)
    g = 1j * phi.A + phi.B.T @ Minv @ phi.B
    l_out = -1j * phi.B.T @ Minv @ l
    alpha = (phi.c_phi * (2 * np.pi) ** (n / 2) / sqrt_det_rhp(-M)
             * np.exp(-0.5 * l @ Minv @ l))
    return HolomorphicGaussian(alpha, g, l_out)


def hphi_norm_sq(u, weight):
    """The squared weighted Bergman norm integral(|u|^2 e^{-2 Phi} dL) in closed form."""
    n = u.n
    M = np.zeros((2 * n, 2 * n), dtype=complex)
    M = quad_accumulate(M, u.g / 2, False, False, n)
    M = quad_accumulate(M, np.conj(u.g) / 2, True, True, n)
    M = quad_accumulate(M, -weight.P / 2, False, False, n)
    M = quad_accumulate(M, -np.conj(weight.P) / 2, True, True, n)
    M = quad_accumulate(M, -weight.H, True, False, n)
    b = np.zeros(2 * n, dtype=complex)
    b = linear_accumulate(b, u.l, False, n)
    b = linear_accumulate(b, np.conj(u.l), True, n)
    val = abs(u.alpha) ** 2 * gaussian_integral(M, b, 2 * n)
    return float(val.real)
