"""1/2-Gelfand-Shilov wavefront classification on the Gaussian class.

On a holomorphic Gaussian u the decay exponent against a weight Phi is exact:
along the ray lambda*omega, log|u| - Phi = -c(omega) lambda^2 + O(lambda)
with c(omega) = Phi(omega) - Re(1/2 omega^T g omega), so membership of a
direction in the wavefront set is a closed-form test.
"""

import numpy as np
from scipy.optimize import minimize_scalar, minimize

from .fbi import Weight, lambda_of_weight, weight_of_lambda
from .linalg import (RealSubspace, complexify_vector, intersect_subspaces,
                     null_space, realify_vector, realify_complex_linear,
                     subspace_equal)
from .propagator import apply_kernel, bergman_kernel, evolve_weight
from .symplectic import im_flow, singular_space

__all__ = ["RealLinearMapOnCn", "WavefrontReport", "decay_exponent",
           "wavefront_report", "singular_directions", "kappa_flat", "radical",
           "verify_singular_space_identity", "predict_wavefront",
           "verify_theorem"]

THRESHOLD = 1e-8


class RealLinearMapOnCn:
    """Invertible real-linear map on C^n, stored as 2n x 2n real matrix in
    (Re z, Im z) coordinates."""

    def __init__(self, M):
        M = np.asarray(M, dtype=float)
        if abs(np.linalg.det(M)) <= 1e-12:
            raise ValueError("map not invertible")
        self.M = M
        self.n = M.shape[0] // 2

    def apply(self, z):
        return complexify_vector(self.M @ realify_vector(z))

    def compose(self, other):
        return RealLinearMapOnCn(self.M @ other.M)

    def inverse(self):
        return RealLinearMapOnCn(np.linalg.inv(self.M))


class WavefrontReport:
    """Sampled directions with their decay exponents and classification."""

    def __init__(self, directions, exponents, threshold=THRESHOLD):
        order = np.argsort(exponents)
        self.directions = [directions[i] for i in order]
        self.exponents = [float(exponents[i]) for i in order]
        self.threshold = threshold
        self.flags = [e <= threshold for e in self.exponents]
        self.marginal = [0 <= e < threshold for e in self.exponents]

    def singular(self):
        return [d for d, f in zip(self.directions, self.flags) if f]


def decay_exponent(u, weight, omega):
    """c(omega) = Phi(omega) - Re(1/2 omega^T g omega) for |omega| = 1."""
    omega = np.atleast_1d(np.asarray(omega, dtype=complex))
    if abs(np.linalg.norm(omega) - 1) > 1e-12:
        raise ValueError("omega must be a unit vector")
    return float(weight.value(omega) - np.real(0.5 * omega @ u.g @ omega))


def _grid_directions(n, grid_density):
    """Unit directions: a circle grid for n=1, a product-of-angles grid on the
    unit sphere of C^n ~ R^{2n} for n > 1."""
    if n == 1:
        angles = 2 * np.pi * np.arange(grid_density) / grid_density
        return [np.array([np.exp(1j * a)]) for a in angles]
    rng = np.random.default_rng(20230817)
    dirs = []
    angles = 2 * np.pi * np.arange(grid_density) / grid_density
    # great-circle sweeps through random 2-planes plus coordinate planes
    planes = []
    for i in range(2 * n):
        for j in range(i + 1, 2 * n):
            planes.append((np.eye(2 * n)[:, i], np.eye(2 * n)[:, j]))
    for _ in range(4):
        a = rng.standard_normal(2 * n)
        b = rng.standard_normal(2 * n)
        a /= np.linalg.norm(a)
        b -= (b @ a) * a
        b /= np.linalg.norm(b)
        planes.append((a, b))
    for e1, e2 in planes:
        for a in angles:
            v = np.cos(a) * e1 + np.sin(a) * e2
            dirs.append(complexify_vector(v / np.linalg.norm(v)))
    return dirs


def wavefront_report(u, weight, grid_density=64):
    """Classify every grid direction by its exact decay exponent."""
    if grid_density < 8:
        raise ValueError("grid_density must be at least 8")
    dirs = _grid_directions(u.n, grid_density)
    exps = [decay_exponent(u, weight, d) for d in dirs]
    return WavefrontReport(dirs, exps)


def _polish_direction(u, weight, v0):
    """Local minimization of the decay exponent over unit directions, started
    from the realified direction v0."""
    n = u.n

    def f(v):
        v = np.asarray(v, dtype=float)
        z = complexify_vector(v / np.linalg.norm(v))
        return decay_exponent(u, weight, z)

    if n == 1:
        a0 = np.arctan2(v0[1], v0[0])

        def fa(a):
            return decay_exponent(u, weight, np.array([np.exp(1j * a)]))

        res = minimize_scalar(fa, bounds=(a0 - 0.2, a0 + 0.2), method="bounded",
                              options={"xatol": 1e-13})
        return np.array([np.exp(1j * res.x)]), float(res.fun)
    res = minimize(f, v0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14})
    v = res.x / np.linalg.norm(res.x)
    return complexify_vector(v), float(res.fun)


def singular_directions(u, weight, grid_density=64, threshold=THRESHOLD):
    """Singular directions of u relative to the weight: grid local minima of
    the decay exponent polished by local minimization, kept when the polished
    exponent falls below the threshold.  Directions are reported modulo sign."""
    dirs = _grid_directions(u.n, grid_density)
    exps = np.array([decay_exponent(u, weight, d) for d in dirs])
    found = []
    order = np.argsort(exps)
    for i in order[:max(8, len(dirs) // 8)]:
        d, c = _polish_direction(u, weight, realify_vector(dirs[i]))
        if c <= threshold:
            if not any(_angular_distance(d, e) <= 1e-6 for e in found):
                found.append(d)
    return found


def _angular_distance(a, b):
    """Angle between complex directions modulo sign (real inner product)."""
    va, vb = realify_vector(a), realify_vector(b)
    c = abs(va @ vb) / (np.linalg.norm(va) * np.linalg.norm(vb))
    return float(np.arccos(min(1.0, c)))


def kappa_flat(K, w_src, w_dst):
    """kappa-flat: lift z to Lambda_{Phi_src}, apply K, project by pi_1.
    Requires K(Lambda_{Phi_src}) = Lambda_{Phi_dst}."""
    n = w_src.n
    cols = []
    for j in range(n):
        for z in (np.eye(n)[:, j], 1j * np.eye(n)[:, j]):
            X = K.K @ np.concatenate([z.astype(complex), w_src.zeta(z)])
            res = np.linalg.norm(X[n:] - w_dst.zeta(X[:n]))
            if res > 1e-8 * max(1.0, np.linalg.norm(X)):
                raise ValueError("K does not map the source graph onto the target graph"
                                 " (residual %.3e)" % res)
            cols.append(realify_vector(X[:n]))
    return RealLinearMapOnCn(np.column_stack(cols))


def _lambda_real_subspace(weight):
    """Lambda_Phi as a real 2n-dim subspace of realified C^{2n} = R^{4n}."""
    lam = lambda_of_weight(weight)
    cols = np.column_stack([realify_vector(lam.V[:, j]) for j in range(lam.V.shape[1])])
    return RealSubspace.from_spanning(4 * weight.n, cols)


def radical(w0, wt, tol=None):
    """Rad(Phi - Phi_t): null space of the realified difference form; also
    checks pi_1(Lambda_Phi intersect Lambda_{Phi_t}) against it."""
    n = w0.n
    diff = w0.real_form() - wt.real_form()
    diff = (diff + diff.T) / 2
    if np.linalg.eigvalsh(diff).min() < -1e-9 * max(1.0, np.linalg.norm(diff)):
        raise ValueError("Phi - Phi_t not positive semidefinite")
    rad = RealSubspace(2 * n, null_space(diff, tol=tol))
    inter = intersect_subspaces(_lambda_real_subspace(w0), _lambda_real_subspace(wt))
    # pi_1 on realified C^{2n}: keep (Re z, Im z)
    proj = np.hstack([np.eye(2 * n), np.zeros((2 * n, 2 * n))]) @ inter.basis
    pi1 = RealSubspace.from_spanning(2 * n, proj) if proj.size else RealSubspace.zero(2 * n)
    if not subspace_equal(rad, pi1, tol=1e-8):
        raise ValueError("radical and Lambda-intersection pi_1 image disagree")
    return rad


def verify_singular_space_identity(q, phi, t):
    """Check S = kappa_phi^{-1}(Lambda_Phi intersect Lambda_{Phi_t})."""
    from .fbi import egorov_symbol, kappa_phi, weight_of_phase
    S = singular_space(q)
    w0 = weight_of_phase(phi)
    qt = egorov_symbol(q, phi)
    wt = evolve_weight(w0, qt, t)
    inter = intersect_subspaces(_lambda_real_subspace(w0), _lambda_real_subspace(wt))
    Kinv = np.linalg.inv(kappa_phi(phi).K)
    mapped = realify_complex_linear(Kinv) @ inter.basis
    n2 = 2 * q.n
    if mapped.size and np.linalg.norm(mapped[n2:]) > 1e-8 * max(1.0, np.linalg.norm(mapped)):
        return False
    back = (RealSubspace.from_spanning(n2, mapped[:n2]) if mapped.size
            else RealSubspace.zero(n2))
    return subspace_equal(S, back, tol=1e-8)


def predict_wavefront(directions_in, q, t, angular_tol=1e-6):
    """WF_out = exp(t H_{Im q})(WF_in intersect S): keep directions lying in
    the singular space, transport by the Im-flow, renormalize."""
    S = singular_space(q)
    flow = im_flow(q, t)
    out = []
    for d in directions_in:
        d = np.asarray(d, dtype=float)
        d = d / np.linalg.norm(d)
        if np.linalg.norm(d - S.project(d)) > angular_tol:
            continue
        y = flow @ d
        y = y / np.linalg.norm(y)
        if not any(np.linalg.norm(y - o) <= 1e-12 or np.linalg.norm(y + o) <= 1e-12
                   for o in out):
            out.append(y)
    return out


def _dedupe_mod_sign(dirs, tol=1e-6):
    out = []
    for d in dirs:
        if not any(_angular_distance(d, o) <= tol for o in out):
            out.append(d)
    return out


def verify_theorem(q, phi, data, t, grid_density=64, angular_tol=1e-3):
    """End-to-end check of the propagation law: measured singular directions of
    the propagated FBI image against the Im-flow transport of WF_in intersect S,
    pushed to the FBI side by kappa_phi-flat.  Directions compared modulo sign.

    Returns (passed, report dict)."""
    from .fbi import egorov_symbol, fbi_transform_gaussian, kappa_phi, weight_of_phase
    n = q.n
    w0 = weight_of_phase(phi)
    qt = egorov_symbol(q, phi)
    u = fbi_transform_gaussian(phi, data)
    kernel = bergman_kernel(w0, qt, t)
    gu = apply_kernel(kernel, u)
    measured = _dedupe_mod_sign(
        singular_directions(gu, w0, grid_density=grid_density), tol=angular_tol)

    wf_in = _input_wavefront(data, n, grid_density)
    predicted_real = predict_wavefront(wf_in, q, t)
    K = kappa_phi(phi).K
    predicted = []
    for d in predicted_real:
        z = (K @ d.astype(complex))[:n]   # kappa_phi-flat: project the lifted image
        predicted.append(z / np.linalg.norm(z))
    predicted = _dedupe_mod_sign(predicted, tol=angular_tol)

    unmatched_m = [m for m in measured
                   if not any(_angular_distance(m, p) <= angular_tol for p in predicted)]
    unmatched_p = [p for p in predicted
                   if not any(_angular_distance(m, p) <= angular_tol for m in measured)]
    passed = not unmatched_m and not unmatched_p
    report = {
        "measured": measured,
        "predicted": predicted,
        "unmatched_measured": unmatched_m,
        "unmatched_predicted": unmatched_p,
    }
    return passed, report


def _input_wavefront(data, n, grid_density):
    """Real-side wavefront directions of the supported data kinds: delta is
    singular in every momentum direction, a constant in every position
    direction, a genuine Gaussian nowhere."""
    if data.kind == "delta":
        planes = np.vstack([np.zeros((n, n)), np.eye(n)])
    elif data.kind == "constant":
        planes = np.vstack([np.eye(n), np.zeros((n, n))])
    else:
        return []
    if n == 1:
        return [planes[:, 0], -planes[:, 0]]
    dirs = []
    angles = 2 * np.pi * np.arange(grid_density) / grid_density
    if n == 2:
        e1, e2 = planes[:, 0], planes[:, 1]
        for a in angles:
            dirs.append(np.cos(a) * e1 + np.sin(a) * e2)
        return dirs
    rng = np.random.default_rng(5)
    for _ in range(4 * grid_density):
        c = rng.standard_normal(n)
        v = planes @ c
        dirs.append(v / np.linalg.norm(v))
    return dirs
