"""Row/column-sum analysis and exact mu for generalized stochastic matrices.

A matrix with all row sums equal to ``c`` and ``|c| = sigma_max`` is radial,
hence ``mu(A^m) = sigma^m`` for every block structure.  Matrices whose row
(or column) sums merely share the modulus ``sigma_max`` reduce to that case
by a diagonal unitary, provided the structure contains that unitary.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import matnum
from .blockstruct import contains_diagonal
from .errors import HypothesisError, InputError, NotInClassError

CONST_TOL = 1e-9
EXTREMAL_TOL = 1e-8


class Side(enum.Enum):
    ROW = "row"
    COLUMN = "column"


def sum_scale(A):
    """Yardstick for row-sum comparisons: max(1, n * max|entry|)."""
    A = np.asarray(A)
    return max(1.0, float(np.max(np.abs(A))) * A.shape[0])


@dataclass(frozen=True)
class StochasticProfile:
    row_sums: np.ndarray
    col_sums: np.ndarray
    constant_row: complex
    constant_col: complex
    sigma: float
    equimodular_rows: bool
    equimodular_cols: bool
    row_phases: np.ndarray
    col_phases: np.ndarray

    def to_dict(self):
        def pairs(v):
            return [[float(z.real), float(z.imag)] for z in v]

        def opt(z):
            return None if z is None else [float(z.real), float(z.imag)]

        return {
            "row_sums": pairs(self.row_sums),
            "col_sums": pairs(self.col_sums),
            "constant_row": opt(self.constant_row),
            "constant_col": opt(self.constant_col),
            "sigma": self.sigma,
            "equimodular_rows": self.equimodular_rows,
            "equimodular_cols": self.equimodular_cols,
            "row_phases": None if self.row_phases is None else [float(x) for x in self.row_phases],
            "col_phases": None if self.col_phases is None else [float(x) for x in self.col_phases],
        }


def _constant(sums, tol):
    mean = complex(np.mean(sums))
    return mean if np.max(np.abs(sums - mean)) <= tol else None


def profile(A, tol=CONST_TOL, extremal_tol=EXTREMAL_TOL):
    A = matnum.as_matrix(A)
    scale = sum_scale(A)
    rows = A.sum(axis=1)
    cols = A.sum(axis=0)
    sigma = matnum.spectral_norm(A)
    eq_rows = bool(np.max(np.abs(np.abs(rows) - sigma)) <= extremal_tol * scale)
    eq_cols = bool(np.max(np.abs(np.abs(cols) - sigma)) <= extremal_tol * scale)
    # phases default to 0 for the zero matrix
    return StochasticProfile(
        row_sums=rows,
        col_sums=cols,
        constant_row=_constant(rows, tol * scale),
        constant_col=_constant(cols, tol * scale),
        sigma=sigma,
        equimodular_rows=eq_rows,
        equimodular_cols=eq_cols,
        row_phases=np.where(np.abs(rows) > 0, np.angle(rows), 0.0) if eq_rows else None,
        col_phases=np.where(np.abs(cols) > 0, np.angle(cols), 0.0) if eq_cols else None,
    )


def check_row_bound(A):
    """``sigma - |c|`` for a constant-row-sum matrix; never negative beyond rounding."""
    p = profile(A)
    if p.constant_row is None:
        raise NotInClassError("row sums are not constant")
    return p.sigma - abs(p.constant_row)


def _is_extremal(p, scale):
    return p.constant_row is not None and abs(abs(p.constant_row) - p.sigma) <= EXTREMAL_TOL * scale


def check_extremal_doubly(A, tol=1e-6):
    """For a row-extremal matrix (|c| = sigma), check that every column sums to c.

    Returns ``(passed, residual)`` with residual ``max_j |col_j - c|``.
    """
    A = matnum.as_matrix(A)
    p = profile(A)
    scale = sum_scale(A)
    if not _is_extremal(p, scale):
        raise NotInClassError("row sums are not constant with modulus sigma_max")
    residual = float(np.max(np.abs(p.col_sums - p.constant_row)))
    return residual <= tol * scale, residual


def mu_exact_power(A, m, B=None):
    """Exact ``mu_B(A^m) = sigma^m`` for a row-extremal matrix, any structure."""
    _check_power(m)
    A = matnum.as_matrix(A)
    p = profile(A)
    if not _is_extremal(p, sum_scale(A)):
        raise NotInClassError("needs constant row sum c with |c| = sigma_max")
    return p.sigma**m


def _check_power(m):
    if int(m) != m or m < 1:
        raise InputError(f"power must be a positive integer, got {m!r}")


def _phases_scalar(phases, tol=1e-10):
    z = np.exp(1j * np.asarray(phases))
    return bool(np.max(np.abs(z - z[0])) <= tol)


def mu_exact_equimodular(A, m, B):
    """Exact ``mu_B(A^m)`` for matrices whose row (or column) sums all have
    modulus ``sigma_max``.

    Writing ``A = W A0`` with ``A0`` row-extremal, ``mu(A) = mu(A0) = sigma``
    when ``W`` is in the structure.  For ``m >= 2`` the reduction only goes
    through when the phases coincide (``A`` is a rotated row-extremal
    matrix); otherwise ``sigma_max(A^m)`` can fall below ``sigma^m`` and no
    value is returned.
    """
    _check_power(m)
    A = matnum.as_matrix(A)
    if A.shape[0] != B.n:
        raise InputError(f"matrix is {A.shape[0]}x{A.shape[0]}, structure has n={B.n}")
    p = profile(A)
    if p.sigma == 0.0:
        return 0.0
    candidates = []
    if p.equimodular_rows:
        candidates.append(p.row_phases)
    if p.equimodular_cols:
        candidates.append(p.col_phases)
    if not candidates:
        raise NotInClassError("neither row nor column sums are equimodular at sigma_max")
    usable = [ph for ph in candidates if contains_diagonal(B, ph)]
    if not usable:
        raise HypothesisError("structure does not contain the diagonal unitary of sum phases")
    if m > 1 and not any(_phases_scalar(ph) for ph in usable):
        raise NotInClassError(
            "for m >= 2 the sum phases must coincide; mu(A^m) = sigma^m fails otherwise"
        )
    return p.sigma**m


@dataclass(frozen=True)
class Factorization:
    sigma: float
    w: np.ndarray
    d_core: np.ndarray
    side: Side

    def reassemble(self):
        if self.side is Side.ROW:
            return self.sigma * self.w @ self.d_core
        return self.sigma * self.d_core @ self.w


def decompose_equimodular(A, side=Side.ROW):
    """Factor ``A = sigma W D`` (rows) or ``A = sigma D W`` (columns).

    ``W`` is the diagonal unitary of sum phases and ``D`` is 1-generalized
    doubly stochastic with ``||D||_2 = 1``.
    """
    A = matnum.as_matrix(A)
    side = Side(side)
    n = A.shape[0]
    p = profile(A)
    if p.sigma == 0.0:
        return Factorization(0.0, np.eye(n, dtype=complex), np.zeros((n, n), complex), side)
    if side is Side.ROW:
        if not p.equimodular_rows:
            raise NotInClassError("row sums are not equimodular at sigma_max")
        W = np.diag(np.exp(1j * p.row_phases))
        D = W.conj().T @ A / p.sigma
    else:
        if not p.equimodular_cols:
            raise NotInClassError("column sums are not equimodular at sigma_max")
        W = np.diag(np.exp(1j * p.col_phases))
        D = A @ W.conj().T / p.sigma
    return Factorization(p.sigma, W, D, side)


def entry_bound_check(D, tol=1e-8):
    """``(max|D_ij| <= 1, max|D_ij|)`` for a 1-generalized doubly stochastic D of norm 1."""
    D = matnum.as_matrix(D)
    scale = sum_scale(D)
    p = profile(D)
    one = (
        p.constant_row is not None
        and p.constant_col is not None
        and abs(p.constant_row - 1) <= tol * scale
        and abs(p.constant_col - 1) <= tol * scale
    )
    if not one or abs(p.sigma - 1.0) > tol:
        raise NotInClassError("needs row and column sums 1 and spectral norm 1")
    biggest = float(np.max(np.abs(D)))
    return biggest <= 1.0 + 1e-9, biggest


def mu_exact_class(cert, B):
    """Exact mu of ``delta (W_theta X W_gamma)^m`` for a class certificate.

    Valid when the structure contains both diagonal unitaries and either
    ``m = 1`` or ``W_gamma W_theta`` is a multiple of the identity; then
    ``mu = delta * r^m`` with r the common row sum of X.
    """
    if cert.n != B.n:
        raise InputError(f"certificate has n={cert.n}, structure has n={B.n}")
    if not (contains_diagonal(B, cert.theta) and contains_diagonal(B, cert.gamma)):
        raise HypothesisError("structure does not contain both W_theta and W_gamma")
    if not cert.exact:
        raise NotInClassError(
            "for m >= 2 the formula needs W_gamma W_theta to be a multiple of I"
        )
    return cert.expected_mu
