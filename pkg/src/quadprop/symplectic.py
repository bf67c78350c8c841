"""Complex symplectic linear algebra for quadratic phase-space symbols.

Coordinates are ordered (x_1..x_n, xi_1..xi_n) and the symplectic unit is
J = [[0, I], [-I, 0]], so that sigma(X, Y) = (JX) . Y and the Hamilton
matrix of q(X) = QX . X is F = JQ.
"""

import numpy as np
from scipy.linalg import expm

from .linalg import (RealSubspace, intersect_subspaces, map_subspace,
                     null_space, real_quadratic_matrix, subspace_equal)

__all__ = [
    "QuadraticSymbol", "HamiltonMatrix", "TotallyRealSubspace",
    "ComplexSymplecticMap", "CrossCheckError", "build_symbol",
    "hamilton_matrix", "singular_space", "hamilton_flow", "im_flow",
    "positivity_defect", "symplectic_unit",
    "RealSubspace", "intersect_subspaces", "map_subspace", "subspace_equal",
]


class CrossCheckError(RuntimeError):
    """Two independent computations of the same object disagree."""


def symplectic_unit(n):
    """J = [[0, I], [-I, 0]] of size 2n x 2n."""
    Z = np.zeros((n, n))
    I = np.eye(n)
    return np.block([[Z, I], [-I, Z]])


class QuadraticSymbol:
    """Complex quadratic form q(X) = QX . X on C^{2n}, Q symmetric."""

    def __init__(self, n, Q, tol=1e-10):
        Q = np.asarray(Q, dtype=complex)
        if Q.shape != (2 * n, 2 * n):
            raise ValueError("Q must be 2n x 2n")
        if not np.all(np.isfinite(Q)):
            raise ValueError("Q has non-finite entries")
        self.n = n
        self.Q = (Q + Q.T) / 2
        self.tol = tol
        re_eigs = np.linalg.eigvalsh((self.Q.real + self.Q.real.T) / 2)
        self.re_nonneg = bool(re_eigs.min() >= -tol)

    def value(self, X):
        X = np.asarray(X, dtype=complex)
        return X @ self.Q @ X


def build_symbol(n, Q_re, Q_im, tol=1e-10):
    """Assemble a QuadraticSymbol from real and imaginary parts of Q."""
    Q_re = np.asarray(Q_re, dtype=float)
    Q_im = np.asarray(Q_im, dtype=float)
    if Q_re.shape != (2 * n, 2 * n) or Q_im.shape != (2 * n, 2 * n):
        raise ValueError("Q_re/Q_im must be 2n x 2n")
    return QuadraticSymbol(n, Q_re + 1j * Q_im, tol=tol)


class HamiltonMatrix:
    """F = JQ with the Hamiltonian identity F^T J + J F = 0."""

    def __init__(self, F, n):
        F = np.asarray(F, dtype=complex)
        J = symplectic_unit(n)
        res = np.linalg.norm(F.T @ J + J @ F)
        if res > 1e-12 * max(np.linalg.norm(F), 1e-300):
            raise ValueError("Hamiltonian identity violated")
        self.F = F
        self.n = n

    @property
    def re(self):
        return self.F.real

    @property
    def im(self):
        return self.F.imag


def hamilton_matrix(q):
    """Hamilton matrix F = JQ of a quadratic symbol."""
    return HamiltonMatrix(symplectic_unit(q.n) @ q.Q, q.n)


class ComplexSymplecticMap:
    """Linear map K on C^{2n} with K^T J K = J."""

    def __init__(self, K, n, rtol=1e-10):
        K = np.asarray(K, dtype=complex)
        J = symplectic_unit(n)
        res = np.linalg.norm(K.T @ J @ K - J)
        if res > rtol * np.linalg.norm(K) ** 2:
            raise ValueError("map is not symplectic (residual %.3e)" % res)
        self.K = K
        self.n = n

    def __matmul__(self, other):
        return ComplexSymplecticMap(self.K @ other.K, self.n)

    def inverse(self):
        return ComplexSymplecticMap(np.linalg.inv(self.K), self.n)

    def apply(self, X):
        return self.K @ np.asarray(X, dtype=complex)


class TotallyRealSubspace:
    """A maximal totally real subspace Sigma of C^{2n}, spanned over R by the
    columns of an invertible complex matrix V; carries the antilinear
    involution iota(X) = V conj(V^{-1} X) fixing Sigma pointwise."""

    def __init__(self, V, tol=1e-12):
        V = np.asarray(V, dtype=complex)
        if abs(np.linalg.det(V)) <= tol:
            raise ValueError("columns do not span a totally real subspace")
        self.V = V

    @classmethod
    def real_phase_space(cls, n):
        return cls(np.eye(2 * n, dtype=complex))

    def involution(self, X):
        return self.V @ np.conj(np.linalg.solve(self.V, np.asarray(X, dtype=complex)))


def singular_space(q, tol=None):
    """Singular space S = (intersection of ker[(Re F)(Im F)^j], j=0..2n-1) in R^{2n}.

    Cross-checked against the dynamical characterization
    S = ker(Im e^{2isF}) over sampled s; disagreement raises CrossCheckError.
    """
    F = hamilton_matrix(q).F
    n2 = 2 * q.n
    ReF, ImF = F.real, F.imag
    rows = []
    P = np.eye(n2)
    for _ in range(n2):
        rows.append(ReF @ P)
        P = ImF @ P
    S = RealSubspace(n2, null_space(np.vstack(rows), tol=tol))

    dyn_rows = [np.imag(expm(2j * s * F)) for s in np.arange(0.1, 1.05, 0.1)]
    S_dyn = RealSubspace(n2, null_space(np.vstack(dyn_rows), tol=tol))
    if not subspace_equal(S, S_dyn, tol=1e-8):
        raise CrossCheckError("kernel-intersection and dynamical singular spaces disagree")
    return S


def hamilton_flow(q, t):
    """Hamilton flow kappa_t = exp(-2itF) of -iq."""
    F = hamilton_matrix(q).F
    if abs(t) * np.linalg.norm(F, 2) > 50:
        raise ValueError("|t|*||F|| exceeds the sanity bound 50")
    return ComplexSymplecticMap(expm(-2j * t * F), q.n)


def im_flow(q, t):
    """Real flow exp(2t Im F) = exp(t H_{Im q}); agrees with kappa_t on S."""
    F = hamilton_matrix(q).F
    if abs(t) * np.linalg.norm(F, 2) > 50:
        raise ValueError("|t|*||F|| exceeds the sanity bound 50")
    return expm(2 * t * F.imag)


def positivity_defect(K, Sigma):
    """Minimum eigenvalue of X -> (1/i)(sigma(KX, iota KX) - sigma(X, iota X))
    over the realification of C^{2n}; K is positive relative to Sigma iff >= -tol."""
    n = K.n
    J = symplectic_unit(n)

    def sigma(X, Y):
        return (J @ X) @ Y

    def form(v):
        X = v[:2 * n] + 1j * v[2 * n:]
        KX = K.K @ X
        val = (sigma(KX, Sigma.involution(KX)) - sigma(X, Sigma.involution(X))) / 1j
        return val.real

    M = real_quadratic_matrix(form, 4 * n)
    return float(np.linalg.eigvalsh(M).min())
