"""Shared numerical linear algebra: null spaces, real subspaces, realification."""

import numpy as np


def null_space(A, tol=None):
    """Orthonormal basis of the null space of A via SVD thresholding.

    Singular values below tol = 1e-10 * max(A.shape) * s_max are treated
    as zero (overridable).
    """
    A = np.atleast_2d(np.asarray(A))
    u, s, vh = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    if tol is None:
        tol = 1e-10 * max(A.shape) * max(smax, 1.0)
    nnz = int((s >= tol).sum())
    return vh[nnz:].conj().T


def orthonormalize(cols, tol=None):
    """Orthonormal basis for the column span of `cols` (rank-revealing)."""
    cols = np.atleast_2d(np.asarray(cols, dtype=float))
    if cols.shape[1] == 0:
        return cols.reshape(cols.shape[0], 0)
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    smax = s[0] if s.size else 0.0
    if tol is None:
        tol = 1e-10 * max(cols.shape) * max(smax, 1.0)
    r = int((s >= tol).sum())
    return u[:, :r]


class RealSubspace:
    """A subspace of R^d stored as an orthonormal basis matrix (d x k)."""

    def __init__(self, ambient_dim, basis, tol=1e-10):
        basis = np.asarray(basis, dtype=float).reshape(ambient_dim, -1)
        gram = basis.T @ basis
        if basis.shape[1] and not np.allclose(gram, np.eye(basis.shape[1]), atol=tol):
            raise ValueError("basis columns not orthonormal")
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.tol = tol

    @classmethod
    def from_spanning(cls, ambient_dim, cols, tol=1e-10):
        return cls(ambient_dim, orthonormalize(np.asarray(cols, dtype=float).reshape(ambient_dim, -1)), tol)

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim):
        return cls(ambient_dim, np.eye(ambient_dim))

    @property
    def dim(self):
        return self.basis.shape[1]

    def project(self, v):
        return self.basis @ (self.basis.T @ v)

    def contains(self, v, tol=1e-8):
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0:
            return True
        return np.linalg.norm(v - self.project(v)) <= tol * nv


def intersect_subspaces(A, B):
    """Intersection of two real subspaces (null space of stacked complement projectors)."""
    if A.ambient_dim != B.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    d = A.ambient_dim
    rows = np.vstack([np.eye(d) - A.basis @ A.basis.T,
                      np.eye(d) - B.basis @ B.basis.T])
    return RealSubspace(d, null_space(rows))


def map_subspace(M, A):
    """Image of subspace A under the linear map M."""
    M = np.asarray(M, dtype=float)
    if M.shape[1] != A.ambient_dim:
        raise ValueError("dimension mismatch")
    return RealSubspace.from_spanning(M.shape[0], M @ A.basis)


def subspace_equal(A, B, tol=1e-8):
    """Equality of subspaces via dimensions and mutual projection residuals."""
    if A.ambient_dim != B.ambient_dim or A.dim != B.dim:
        return False
    if A.dim == 0:
        return True
    ra = np.linalg.norm(A.basis - B.basis @ (B.basis.T @ A.basis))
    rb = np.linalg.norm(B.basis - A.basis @ (A.basis.T @ B.basis))
    return max(ra, rb) <= tol


def realify_vector(z):
    """C^n vector -> R^{2n} vector (Re z, Im z)."""
    z = np.asarray(z, dtype=complex).ravel()
    return np.concatenate([z.real, z.imag])


def complexify_vector(v):
    """R^{2n} vector -> C^n vector."""
    v = np.asarray(v, dtype=float).ravel()
    n = v.size // 2
    return v[:n] + 1j * v[n:]


def embed_matrix(n):
    """The n x 2n map E with z = E (Re z, Im z): E = [I, iI]."""
    return np.hstack([np.eye(n), 1j * np.eye(n)])


def real_quadratic_matrix(f, dim):
    """Real symmetric matrix of a real-valued quadratic form f on R^dim,
    recovered by polarization on the standard basis."""
    I = np.eye(dim)
    vals = np.array([f(I[:, i]) for i in range(dim)])
    M = np.zeros((dim, dim))
    for i in range(dim):
        M[i, i] = vals[i]
        for j in range(i + 1, dim):
            M[i, j] = M[j, i] = (f(I[:, i] + I[:, j]) - vals[i] - vals[j]) / 2
    return M


def realify_complex_linear(M):
    """Real 2n x 2n matrix of the C-linear map z -> Mz in (Re, Im) coordinates."""
    M = np.asarray(M, dtype=complex)
    return np.block([[M.real, -M.imag], [M.imag, M.real]])
