"""Lower and upper bounds on the structured singular value.

Lower bound: ``max rho(MU)`` over block-diagonal unitaries U, which equals mu
but is not concave, so it is searched from several starts (the identity
first, so the bound never drops below ``rho(M)``).

Upper bound: ``inf sigma_max(D M D^-1)`` over positive block scalings D,
parametrized in log space with the last block pinned to 1.  The objective is
convex in the log-scalings, so local descent finds the infimum.

The optimizer inner loops call LAPACK directly for speed; reported
values are re-evaluated with the ``matnum`` kernels.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import lapack

from . import matnum
from .blockstruct import (
    BlockKind,
    ScalingMember,
    UnitaryMember,
    assemble_unitary,
    project_unitary,
    sample_unitary,
    scaling_matrix,
)
from .errors import (
    ComplexityError,
    DimensionError,
    InputError,
    NoPerturbationError,
    UnsupportedStructureError,
)

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
LOG_SCALE_LIMIT = 50.0
ZERO_MU_RATIO = 1e-3


@dataclass
class MuOptions:
    restarts: int = 16
    max_iters: int = 500
    tol: float = 1e-8
    seed: int = 0
    grid: int = 256

    def __post_init__(self):
        for name in ("restarts", "max_iters", "grid"):
            if int(getattr(self, name)) < 1:
                raise InputError(f"{name} must be a positive integer")
        if not 0.0 < self.tol < 1.0:
            raise InputError("tol must lie in (0, 1)")


@dataclass
class MuReport:
    lower: float
    upper: float
    u_witness: UnitaryMember
    d_witness: ScalingMember
    perturbation: np.ndarray = None
    lower_converged: bool = False
    upper_converged: bool = False
    iterations: dict = field(default_factory=dict)

    @property
    def converged(self):
        return self.lower_converged and self.upper_converged

    def to_dict(self):
        from .fileio import matrix_to_pairs

        return {
            "lower": self.lower,
            "upper": self.upper,
            "u_witness": matrix_to_pairs(self.u_witness.matrix),
            "d_witness": [float(x) for x in self.d_witness.d],
            "perturbation": None
            if self.perturbation is None
            else matrix_to_pairs(self.perturbation),
            "lower_converged": self.lower_converged,
            "upper_converged": self.upper_converged,
            "iterations": dict(self.iterations),
        }


def _check_dims(M, B):
    M = matnum.as_matrix(M)
    if M.shape[0] != B.n:
        raise DimensionError(f"matrix is {M.shape[0]}x{M.shape[0]}, structure has n={B.n}")
    return M


def _rho(A):
    w = lapack.zgeev(A, compute_vl=0, compute_vr=0)[0]
    return float(np.max(np.abs(w)))


def _sigma(A):
    return float(lapack.zgesdd(A, compute_uv=0)[1][0])


def _dominant(A):
    """Dominant eigenvalue with right vector x and left row vector yH, yH @ x = 1."""
    w, vl, vr, info = lapack.zgeev(A, compute_vl=1, compute_vr=1)
    mod = np.abs(w)
    top = mod.max()
    ties = np.flatnonzero(mod >= top - 1e-10 * max(top, 1e-300))
    k = ties[np.argmin(np.angle(w[ties]))]
    x = vr[:, k]
    yH = vl[:, k].conj()
    pairing = yH @ x
    if info != 0 or abs(pairing) < 1e-14:
        return w[k], x, None
    return w[k], x, yH / pairing


def _golden_max(f, a, b, xtol):
    """Golden-section maximization of ``f`` on ``[a, b]``; returns (x, f(x))."""
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


# --------------------------------------------------------------------------
# lower bound


def _ascent_direction(B, x, yH):
    """Block-diagonal Hermitian G with d log rho = <G, H> for U -> U exp(iH)."""
    w = np.outer(x, yH)
    G = np.zeros_like(w)
    for blk, sl in zip(B.blocks, B.slices):
        wb = w[sl, sl]
        if blk.kind is BlockKind.REPEATED_SCALAR:
            G[sl, sl] = -np.imag(np.trace(wb)) * np.eye(blk.size) / blk.size
        else:
            G[sl, sl] = 0.5j * (wb - wb.conj().T)
    return G


def _gradient_ascent(M, B, U, f, opts):
    step = 0.5
    its = 0
    converged = False
    while its < opts.max_iters:
        its += 1
        lam, x, yH = _dominant(M @ U.matrix)
        if abs(lam) == 0.0 or yH is None:
            converged = True
            break
        G = _ascent_direction(B, x, yH)
        if np.linalg.norm(G) <= opts.tol:
            converged = True
            break
        t = step
        accepted = False
        while t > 1e-13:
            cand = project_unitary(U.matrix + t * U.matrix @ (1j * G), B)
            fc = _rho(M @ cand.matrix)
            if fc > f:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            converged = True
            break
        gain = (fc - f) / fc
        U, f = cand, fc
        step = min(2.0 * t, math.pi)
        if gain < opts.tol:
            converged = True
            break
    return U, f, converged, its


def _phase_sweeps(M, B, U, f, opts, scan=24):
    """Cyclic golden-section coordinate ascent over the block phases."""
    phases = np.array(U.parameters, dtype=float)
    idx = B.block_index()
    sweeps = 0
    converged = False

    def rho_at(ph):
        return _rho(M * np.exp(1j * ph[idx])[None, :])

    while sweeps < opts.max_iters:
        sweeps += 1
        start = f
        for b in range(len(B.blocks)):
            grid = phases[b] + np.linspace(0.0, 2 * np.pi, scan, endpoint=False)
            cols = np.exp(1j * phases[idx])
            stack = np.repeat((M * cols[None, :])[None], scan, axis=0)
            mask = idx == b
            stack[:, :, mask] *= np.exp(1j * (grid - phases[b]))[:, None, None]
            vals = np.max(np.abs(np.linalg.eigvals(stack)), axis=1)
            k = int(np.argmax(vals))
            h = 2 * np.pi / scan

            def line(theta, b=b):
                ph = phases.copy()
                ph[b] = theta
                return rho_at(ph)

            theta, val = _golden_max(line, grid[k] - h, grid[k] + h, 1e-9)
            if val > f:
                phases[b] = theta
                f = val
        if f - start <= opts.tol * f:
            converged = True
            break
    return assemble_unitary(B, phases), f, converged, sweeps


def _lower_search(M, B, opts, ceiling=None, keep=4, screen=8):
    """Multistart ascent; returns (value, U, converged, iterations).

    Every start gets ``screen`` ascent steps; the best ``keep`` are then run
    to convergence (for all-scalar structures followed by phase sweeps and a
    final ascent).  The search stops early once a start reaches ``ceiling``,
    an upper bound on mu.
    """
    ceiling = matnum.spectral_norm(M) if ceiling is None else ceiling
    done = ceiling * (1.0 - opts.tol)
    identity = assemble_unitary(
        B, [0.0 if b.kind is BlockKind.REPEATED_SCALAR else np.eye(b.size) for b in B.blocks]
    )
    short = replace(opts, max_iters=min(screen, opts.max_iters))
    screened = []
    total = 0
    for k in range(opts.restarts):
        U = identity if k == 0 else sample_unitary(B, [opts.seed, k])
        U, f, conv, its = _gradient_ascent(M, B, U, _rho(M @ U.matrix), short)
        total += its
        screened.append((f, k, U, f >= done or (conv and its < short.max_iters)))
        if f >= done:
            break
    screened.sort(key=lambda item: (-item[0], item[1]))
    if screened[0][0] >= done:
        finished = screened[:1]
    else:
        finished = []
        for f, k, U, conv in screened[:keep]:
            if not conv:
                U, f, conv, its = _gradient_ascent(M, B, U, f, opts)
                total += its
            if B.all_scalar:
                U, f, conv2, sw = _phase_sweeps(M, B, U, f, opts)
                U, f, conv3, its3 = _gradient_ascent(M, B, U, f, opts)
                total += sw + its3
                conv = conv2 and conv3
            finished.append((f, k, U, conv))
            if f >= done:
                break
        finished.sort(key=lambda item: (-item[0], item[1]))
    _, _, U, conv = finished[0]
    value = matnum.spectral_radius(M @ U.matrix)
    return value, U, conv, total


def mu_lower(M, B, opts=None):
    """Lower bound ``max rho(MU)`` and the unitary that attains it."""
    opts = opts or MuOptions()
    M = _check_dims(M, B)
    value, U, _, _ = _lower_search(M, B, opts)
    return value, U


# --------------------------------------------------------------------------
# upper bound


def _frobenius_balance(M, idx, nb, sweeps=50):
    # closed-form coordinate minimization of ||e^X M e^-X||_F^2 over block logs
    P = np.abs(M) ** 2
    W = np.zeros((nb, nb))
    np.add.at(W, (idx[:, None], idx[None, :]), P)
    np.fill_diagonal(W, 0.0)
    x = np.zeros(nb)
    for _ in range(sweeps):
        for b in range(nb - 1):
            out = np.sum(W[b, :] * np.exp(-2 * x))  # entries scaled by e^{2 x_b}
            inn = np.sum(W[:, b] * np.exp(2 * x))  # entries scaled by e^{-2 x_b}
            if out > 0 and inn > 0:
                x[b] = 0.25 * np.log(inn / out)
    return np.clip(x - x[-1], -LOG_SCALE_LIMIT, LOG_SCALE_LIMIT)


def _line_min(g, x, direction, fx, width=10.0, xtol=1e-10):
    """Minimize g(x + t*direction) over t by golden section, widening the window
    while the minimizer sits on its edge."""
    lo, hi = -width, width
    best_t, best_f = 0.0, fx
    for _ in range(8):
        a, b = lo, hi

        def phi(t):
            y = np.clip(x + t * direction, -LOG_SCALE_LIMIT, LOG_SCALE_LIMIT)
            return -g(y)

        t, negf = _golden_max(phi, a, b, xtol)
        if -negf < best_f:
            best_t, best_f = t, -negf
        span = hi - lo
        if t - lo < 1e-6 * span:
            lo, hi = lo - span, lo + 1e-6 * span
        elif hi - t < 1e-6 * span:
            lo, hi = hi - 1e-6 * span, hi + span
        else:
            break
    y = np.clip(x + best_t * direction, -LOG_SCALE_LIMIT, LOG_SCALE_LIMIT)
    return y, best_f


def _upper_search(M, B, opts):
    nb = len(B.blocks)
    idx = B.block_index()

    def g(x):
        e = np.exp(x[idx])
        return _sigma(M * (e[:, None] / e[None, :]))

    x = np.zeros(nb)
    f = g(x)
    if nb == 1:
        return f, ScalingMember(np.ones(1)), True, 0
    xb = _frobenius_balance(M, idx, nb)
    fb = g(xb)
    if fb < f:
        x, f = xb, fb
    its = 0
    converged = False
    while its < opts.max_iters:
        its += 1
        start = f
        for b in range(nb - 1):
            e = np.zeros(nb)
            e[b] = 1.0
            x, f = _line_min(g, x, e, f)
        # descent along the gradient of the top singular value helps off kinks
        e = np.exp(x[idx])
        A = M * (e[:, None] / e[None, :])
        Uu, s, Vh = np.linalg.svd(A)
        u, v = Uu[:, 0], Vh[0].conj()
        grad = np.zeros(nb)
        np.add.at(grad, idx, np.abs(u) ** 2 - np.abs(v) ** 2)
        grad[-1] = 0.0
        gn = np.linalg.norm(grad)
        if gn > 0:
            x, f = _line_min(g, x, -grad / gn, f)
        if start - f <= opts.tol * start:
            converged = True
            break
    d = np.exp(x)
    value = matnum.spectral_norm(
        scaling_matrix(d, B) @ M @ scaling_matrix(1.0 / d, B)
    )
    return value, ScalingMember(d), converged, its


def mu_upper(M, B, opts=None):
    """Upper bound ``inf sigma_max(D M D^-1)`` and the scaling that attains it."""
    opts = opts or MuOptions()
    M = _check_dims(M, B)
    value, d, _, _ = _upper_search(M, B, opts)
    return value, d


# --------------------------------------------------------------------------
# certificate and oracle


def destabilizing_perturbation(M, U):
    """``Delta = -U / lambda`` for a dominant eigenvalue lambda of MU.

    Delta lies in the structure, has norm ``1/rho(MU)`` and makes
    ``I + M Delta`` singular.
    """
    M = matnum.as_matrix(M)
    Um = U.matrix if isinstance(U, UnitaryMember) else matnum.as_matrix(U)
    lam = matnum.eigenvalues(M @ Um)[0]
    if lam == 0:
        raise NoPerturbationError("rho(MU) = 0; the lower bound is zero")
    return -Um / lam


def _cubic_roots(c2, c1, c0):
    # roots of z^3 - c2 z^2 + c1 z - c0 (Cardano) with two Newton polishing steps
    shift = c2 / 3.0
    p = c1 - c2 * c2 / 3.0
    q = -(2.0 * c2**3 / 27.0 - c2 * c1 / 3.0 + c0)
    disc = np.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    big = np.where(np.abs(-q / 2.0 + disc) >= np.abs(-q / 2.0 - disc), -q / 2.0 + disc, -q / 2.0 - disc)
    u = big ** (1.0 / 3.0)
    safe = np.where(u == 0, 1.0, u)
    v = np.where(u == 0, 0.0, -p / (3.0 * safe))
    w = np.exp(2j * np.pi / 3.0)
    z = np.stack([u + v, w * u + v / w, u / w + w * v], axis=-1) + shift[:, None]
    for _ in range(2):
        f = ((z - c2[:, None]) * z + c1[:, None]) * z - c0[:, None]
        df = (3.0 * z - 2.0 * c2[:, None]) * z + c1[:, None]
        ok = np.abs(df) > 1e-300
        z = np.where(ok, z - f / np.where(ok, df, 1.0), z)
    return z


def _batch_rho(stack):
    """Spectral radii of a stack of small matrices.

    Sizes up to 3 use characteristic-polynomial roots, larger sizes LAPACK.
    Only the coarse oracle scan uses this; refinement goes through LAPACK.
    """
    n = stack.shape[-1]
    if n == 1:
        return np.abs(stack[:, 0, 0])
    if n == 2:
        tr = stack[:, 0, 0] + stack[:, 1, 1]
        det = stack[:, 0, 0] * stack[:, 1, 1] - stack[:, 0, 1] * stack[:, 1, 0]
        root = np.sqrt(tr * tr / 4.0 - det)
        return np.maximum(np.abs(tr / 2.0 + root), np.abs(tr / 2.0 - root))
    if n == 3:
        a = stack
        c2 = a[:, 0, 0] + a[:, 1, 1] + a[:, 2, 2]
        c1 = (
            a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
            + a[:, 0, 0] * a[:, 2, 2] - a[:, 0, 2] * a[:, 2, 0]
            + a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1]
        )
        c0 = np.linalg.det(a)
        return np.max(np.abs(_cubic_roots(c2, c1, c0)), axis=1)
    return np.max(np.abs(np.linalg.eigvals(stack)), axis=1)


def _column_phase_rhos(M, phases, idx, fast=False, chunk=32768):
    out = np.empty(len(phases))
    for start in range(0, len(phases), chunk):
        ph = phases[start : start + chunk]
        stack = M[None, :, :] * np.exp(1j * ph[:, idx])[:, None, :]
        if fast:
            out[start : start + chunk] = _batch_rho(stack)
        else:
            out[start : start + chunk] = np.max(np.abs(np.linalg.eigvals(stack)), axis=1)
    return out


def mu_bruteforce(M, B, opts=None, top=8):
    """Grid search of ``max rho(M diag(exp(i*phi)))`` for all-scalar structures.

    The first block's phase is fixed to zero, which loses nothing because a
    global phase leaves ``rho`` unchanged.  The best ``top`` grid cells are
    each refined by two rounds of ten-fold local grid shrinking.
    """
    opts = opts or MuOptions()
    M = _check_dims(M, B)
    if not B.all_scalar:
        raise UnsupportedStructureError("brute force needs repeated-scalar blocks only")
    nb = len(B.blocks)
    if nb > 4:
        raise ComplexityError(f"{nb} phase angles exceeds the limit of 4")
    if nb == 1:
        return _rho(M)
    grid = opts.grid if nb <= 3 else min(opts.grid, 64)
    free = nb - 1
    idx = B.block_index()
    axis = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    mesh = np.stack(np.meshgrid(*([axis] * free), indexing="ij"), axis=-1).reshape(-1, free)
    phases = np.hstack([np.zeros((len(mesh), 1)), mesh])
    vals = _column_phase_rhos(M, phases, idx, fast=True)
    best = -np.inf
    local = np.linspace(-1.0, 1.0, 21)
    offsets = np.stack(np.meshgrid(*([local] * free), indexing="ij"), axis=-1).reshape(-1, free)
    for k in np.argsort(vals)[::-1][:top]:
        centre = phases[k, 1:]
        h = 2 * np.pi / grid
        for _ in range(2):
            cand = centre[None, :] + h * offsets
            full = np.hstack([np.zeros((len(cand), 1)), cand])
            cv = _column_phase_rhos(M, full, idx)
            j = int(np.argmax(cv))
            centre = cand[j]
            best = max(best, float(cv[j]))
            h /= 10.0
    return best


def compute_mu(M, B, opts=None):
    """Both bounds, their witnesses and (when mu is not ~0) a destabilizing Delta."""
    opts = opts or MuOptions()
    M = _check_dims(M, B)
    upper, d, uconv, uits = _upper_search(M, B, opts)
    lower, U, lconv, lits = _lower_search(M, B, opts, ceiling=upper)
    sigma = matnum.spectral_norm(M)
    if lower > upper and lower - upper <= 1e-10 * matnum.scale_of(M):
        # the bounds pinch mu; they only differ by rounding
        upper = lower
    delta = None
    if lower > 0 and upper >= ZERO_MU_RATIO * sigma:
        delta = destabilizing_perturbation(M, U)
    return MuReport(
        lower=lower,
        upper=upper,
        u_witness=U,
        d_witness=d,
        perturbation=delta,
        lower_converged=lconv,
        upper_converged=uconv,
        iterations={"lower": lits, "upper": uits},
    )
