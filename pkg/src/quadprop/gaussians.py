"""Gaussian-class functions and the realified Gaussian integral engine.

All integrals over C^n are evaluated over the realified coordinates
(Re w, Im w) in R^{2n}.  Determinant square roots are taken as products of
principal square roots of eigenvalues, which is branch-safe whenever the
real part of the exponent Hessian is negative definite.
"""

import numpy as np

from .linalg import embed_matrix

__all__ = ["HolomorphicGaussian", "PolyGaussian", "GaussianData",
           "DivergentIntegralError", "sqrt_det_rhp", "gaussian_integral",
           "holomorphic_parts"]


class DivergentIntegralError(ValueError):
    """The quadratic exponent is not negative definite on the real slice."""


class HolomorphicGaussian:
    """u(z) = alpha * exp(1/2 z^T g z + l^T z) with g complex symmetric."""

    def __init__(self, alpha, g, l):
        g = np.atleast_2d(np.asarray(g, dtype=complex))
        l = np.atleast_1d(np.asarray(l, dtype=complex))
        if not np.allclose(g, g.T, atol=1e-12 * max(1.0, np.linalg.norm(g))):
            raise ValueError("g must be symmetric")
        if not (np.isfinite(alpha) and np.all(np.isfinite(g)) and np.all(np.isfinite(l))):
            raise ValueError("non-finite Gaussian parameters")
        self.alpha = complex(alpha)
        self.g = (g + g.T) / 2
        self.l = l
        self.n = l.size

    def value(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return self.alpha * np.exp(0.5 * z @ self.g @ z + self.l @ z)

    def scaled(self, c):
        return HolomorphicGaussian(c * self.alpha, self.g, self.l)


class PolyGaussian:
    """(c0 + c1^T z + 1/2 z^T C2 z) * base(z), the image class of the
    quadratic Weyl operator on Gaussians."""

    def __init__(self, base, c0, c1, C2):
        C2 = np.atleast_2d(np.asarray(C2, dtype=complex))
        c1 = np.atleast_1d(np.asarray(c1, dtype=complex))
        if not np.all(np.isfinite(C2)) or not np.all(np.isfinite(c1)) or not np.isfinite(c0):
            raise ValueError("non-finite polynomial coefficients")
        self.base = base
        self.c0 = complex(c0)
        self.c1 = c1
        self.C2 = (C2 + C2.T) / 2

    def value(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        poly = self.c0 + self.c1 @ z + 0.5 * z @ self.C2 @ z
        return poly * self.base.value(z)

    def coefficient_norm(self):
        return float(abs(self.c0) + np.linalg.norm(self.c1) + np.linalg.norm(self.C2))

    def minus(self, other):
        if np.allclose(self.base.g, other.base.g, atol=1e-9) and \
           np.allclose(self.base.l, other.base.l, atol=1e-9):
            a, b = self.base.alpha, other.base.alpha
            return PolyGaussian(self.base, self.c0 - (b / a) * other.c0,
                                self.c1 - (b / a) * other.c1,
                                self.C2 - (b / a) * other.C2)
        raise ValueError("incompatible bases")


class GaussianData:
    """Real-side datum: delta at 0, the constant 1, or exp(-1/2 y^T G y + l^T y)."""

    KINDS = ("gaussian", "delta", "constant")

    def __init__(self, kind, n, G=None, l=None):
        if kind not in self.KINDS:
            raise ValueError("unknown data kind %r" % (kind,))
        self.kind = kind
        self.n = n
        self.G = np.zeros((n, n), dtype=complex) if G is None else np.asarray(G, dtype=complex)
        self.l = np.zeros(n, dtype=complex) if l is None else np.asarray(l, dtype=complex)
        if kind == "gaussian":
            re_min = np.linalg.eigvalsh((self.G.real + self.G.real.T) / 2).min()
            if re_min <= 0:
                raise ValueError("gaussian data needs Re G positive definite")

    @classmethod
    def from_dict(cls, d, n):
        kind = d.get("kind", "gaussian")
        G = np.asarray(d.get("G_re", np.zeros((n, n)))) + 1j * np.asarray(d.get("G_im", np.zeros((n, n))))
        l = np.asarray(d.get("l_re", np.zeros(n))) + 1j * np.asarray(d.get("l_im", np.zeros(n)))
        return cls(kind, n, G, l)


def sqrt_det_rhp(A):
    """sqrt(det A) for A with spectrum in the open right half-plane,
    via the product of principal eigenvalue square roots."""
    lam = np.linalg.eigvals(np.asarray(A, dtype=complex))
    if np.any(lam.real <= 0):
        raise DivergentIntegralError(
            "eigenvalue off the right half-plane: %r" % (lam[lam.real <= 0][0],))
    return np.prod(np.sqrt(lam))


def gaussian_integral(M, b, dim):
    """integral over R^dim of exp(1/2 v^T M v + b^T v).

    Requires Re(M) negative definite; returns
    (2 pi)^{dim/2} det(-M)^{-1/2} exp(-1/2 b^T M^{-1} b).
    """
    M = (np.asarray(M, dtype=complex) + np.asarray(M, dtype=complex).T) / 2
    re_max = np.linalg.eigvalsh((M.real + M.real.T) / 2).max()
    if re_max >= -1e-12:
        raise DivergentIntegralError(
            "exponent Hessian not negative definite (max Re-eigenvalue %.3e)" % re_max)
    b = np.asarray(b, dtype=complex)
    val = (2 * np.pi) ** (dim / 2) / sqrt_det_rhp(-M)
    return val * np.exp(-0.5 * b @ np.linalg.solve(M, b))


def holomorphic_parts(S, n, tol=1e-10):
    """Split a complex quadratic form 1/2 v^T S v on realified C^n into its
    zz, z zbar and zbar zbar coefficient blocks.

    Returns (g, cr_residual) with the form equal to 1/2 z^T g z when the
    antiholomorphic residual vanishes.
    """
    I = np.eye(n)
    # v = W (z, zbar) with x = (z+zbar)/2, y = (z-zbar)/(2i)
    W = 0.5 * np.block([[I, I], [-1j * I, 1j * I]])
    Sp = W.T @ ((S + S.T) / 2) @ W
    mixed = Sp[:n, n:] + Sp[n:, :n].T
    cr = float(np.linalg.norm(mixed) + np.linalg.norm(Sp[n:, n:]))
    return Sp[:n, :n], cr


def holomorphic_linear(b, n):
    """Split a complex linear form b^T v on realified C^n into its z and
    zbar coefficients; returns (l, cr_residual)."""
    I = np.eye(n)
    W = 0.5 * np.block([[I, I], [-1j * I, 1j * I]])
    c = W.T @ np.asarray(b, dtype=complex)
    return c[:n], float(np.linalg.norm(c[n:]))


def quad_accumulate(M, A, left_bar, right_bar, n):
    """Add the full quadratic w_left^T A w_right to the 1/2 v^T M v accumulator,
    where each side is w or conj(w) depending on the bar flags."""
    E = embed_matrix(n)
    L = np.conj(E) if left_bar else E
    R = np.conj(E) if right_bar else E
    X = L.T @ np.asarray(A, dtype=complex) @ R
    M += X + X.T
    return M


def linear_accumulate(b, a, bar, n):
    """Add the linear term a^T w (or a^T conj(w)) to the b^T v accumulator."""
    E = embed_matrix(n)
    L = np.conj(E) if bar else E
    return b + L.T @ np.asarray(a, dtype=complex)
