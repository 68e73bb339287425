"""Dense complex matrix kernels.

Singular values come from a cyclic Jacobi eigensolver applied to ``M^* M``;
general eigenvalues come from Householder reduction to Hessenberg form
followed by Wilkinson-shifted QR iteration.  Both are written for desk-scale
problems (n up to a few dozen) where determinism and accuracy matter more
than speed.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError

DEFAULT_TOL = 1e-10


def as_matrix(M):
    """Return ``M`` as a square, finite complex128 array (a copy)."""
    A = np.array(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InputError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    return A


def scale_of(M):
    """max(1, Frobenius norm): the yardstick for unstated tolerances."""
    return max(1.0, frobenius_norm(M))


# --------------------------------------------------------------------------
# Hermitian eigenproblem: cyclic Jacobi


def jacobi_eigh(H, tol=1e-15, max_sweeps=100):
    """Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.

    Each rotation first rotates the phase of ``H[p, q]`` onto the real axis
    and then applies the classical real Jacobi rotation that annihilates it.
    """
    H = as_matrix(H)
    H = 0.5 * (H + H.conj().T)
    n = H.shape[0]
    V = np.eye(n, dtype=np.complex128)
    norm = np.linalg.norm(H)
    if n == 1 or norm == 0.0:
        return np.real(np.diag(H)).copy(), V
    for _ in range(max_sweeps):
        off = np.linalg.norm(H - np.diag(np.diag(H)))
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = H[p, q]
                mag = abs(apq)
                if mag <= 1e-300 or mag <= tol * 1e-3 * norm:
                    continue
                phase = apq / mag
                theta = (H[q, q].real - H[p, p].real) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                G = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                H[:, idx] = H[:, idx] @ G
                H[idx, :] = G.conj().T @ H[idx, :]
                H[p, q] = H[q, p] = 0.0
                H[p, p] = H[p, p].real
                H[q, q] = H[q, q].real
                V[:, idx] = V[:, idx] @ G
    else:
        raise NumericalError("Jacobi sweeps did not converge", partial=np.real(np.diag(H)))
    w = np.real(np.diag(H))
    order = np.argsort(w)
    return w[order], V[:, order]


def singular_values(M):
    """Singular values in descending order, as square roots of eig(M^* M)."""
    A = as_matrix(M)
    w, _ = jacobi_eigh(A.conj().T @ A)
    return np.sqrt(np.clip(w[::-1], 0.0, None))


def spectral_norm(M):
    """Matrix 2-norm, i.e. the largest singular value."""
    return float(singular_values(M)[0])


def frobenius_norm(M):
    A = np.asarray(M, dtype=np.complex128)
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    return float(np.sqrt(np.sum(np.abs(A) ** 2)))


# --------------------------------------------------------------------------
# General eigenproblem: Hessenberg + shifted QR


def hessenberg(M):
    """Unitarily similar upper Hessenberg form via Householder reflectors."""
    H = as_matrix(M)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1 :, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1 :, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1 :, :])
        H[:, k + 1 :] -= 2.0 * np.outer(H[:, k + 1 :] @ v, v.conj())
        H[k + 2 :, k] = 0.0
    return H


def _wilkinson_shift(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closest to d
    tr = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    l1, l2 = tr + disc, tr - disc
    return l1 if abs(l1 - d) < abs(l2 - d) else l2


def _givens(a, b):
    # unitary [[c, s], [-conj(s), c]] (c real) mapping (a, b) to (r, 0)
    r = np.hypot(abs(a), abs(b))
    if r == 0.0:
        return 1.0, 0.0
    if a == 0:
        return 0.0, np.conj(b) / abs(b)
    c = abs(a) / r
    s = (a / abs(a)) * np.conj(b) / r
    return c, s


def _qr_step(B, shift):
    k = B.shape[0]
    B = B - shift * np.eye(k)
    rots = []
    for j in range(k - 1):
        c, s = _givens(B[j, j], B[j + 1, j])
        G = np.array([[c, s], [-np.conj(s), c]])
        B[j : j + 2, j:] = G @ B[j : j + 2, j:]
        B[j + 1, j] = 0.0
        rots.append(G)
    for j, G in enumerate(rots):
        B[: j + 2, j : j + 2] = B[: j + 2, j : j + 2] @ G.conj().T
    return B + shift * np.eye(k)


def _sort_key(scale):
    def key(z):
        return (-round(abs(z) / scale, 10), float(np.angle(z)))

    return key


def sort_eigenvalues(values, scale=1.0):
    """Order by modulus descending, then principal argument ascending."""
    return sorted((complex(z) for z in values), key=_sort_key(scale))


def eigenvalues(M, max_iter=None):
    """All eigenvalues of ``M`` with multiplicity, sorted by ``sort_eigenvalues``."""
    A = as_matrix(M)
    n = A.shape[0]
    scale = scale_of(A)
    H = hessenberg(A)
    deflate = 1e-14 * max(np.linalg.norm(H), 1e-300)
    max_iter = 100 * n if max_iter is None else max_iter
    found = []
    hi = n - 1
    its = 0
    since = 0
    while hi >= 0:
        if hi == 0:
            found.append(H[0, 0])
            break
        lo = hi
        while lo > 0 and abs(H[lo, lo - 1]) > deflate:
            lo -= 1
        if lo == hi:
            found.append(H[hi, hi])
            hi -= 1
            since = 0
            continue
        if its >= max_iter:
            raise NumericalError(
                f"QR iteration did not converge in {max_iter} steps",
                partial=sort_eigenvalues(found, scale),
            )
        its += 1
        since += 1
        if since % 11 == 10:
            # exceptional shift breaks rare cycles
            shift = H[hi, hi] + abs(H[hi, hi - 1]) * (0.75 + 0.5j)
        else:
            shift = _wilkinson_shift(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        H[lo : hi + 1, lo : hi + 1] = _qr_step(H[lo : hi + 1, lo : hi + 1], shift)
    return sort_eigenvalues(found, scale)


def spectral_radius(M):
    """Largest eigenvalue modulus."""
    return float(abs(eigenvalues(M)[0]))


def is_normal(M, tol=DEFAULT_TOL):
    """Return ``(normal, residual)`` with residual ``||M^*M - MM^*||_F``."""
    A = as_matrix(M)
    residual = frobenius_norm(A.conj().T @ A - A @ A.conj().T)
    return residual <= tol * max(1.0, frobenius_norm(A) ** 2), residual


@dataclass(frozen=True)
class SpectralSummary:
    sigma_max: float
    rho: float
    singular_values: tuple
    frobenius: float

    def to_dict(self):
        return {
            "sigma_max": self.sigma_max,
            "rho": self.rho,
            "singular_values": list(self.singular_values),
            "frobenius": self.frobenius,
        }


def spectral_summary(M):
    sv = singular_values(M)
    return SpectralSummary(
        sigma_max=float(sv[0]),
        rho=spectral_radius(M),
        singular_values=tuple(float(s) for s in sv),
        frobenius=frobenius_norm(M),
    )
