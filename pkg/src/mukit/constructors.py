"""Matrix families with known spectral norm and known mu.

Circulants follow the row convention: row ``i`` is the first row cyclically
shifted right by ``i``, so their eigenvalues are
``lambda_j = sum_k row[k] * omega**(j*k)`` with ``omega = exp(2*pi*i/n)``.
"""

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import matnum
from .errors import DimensionError, InputError, NumericalError

NORM_TOL = 1e-8


class NormClaimWarning(UserWarning):
    """A circulant whose spectral norm is not its row sum."""


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class CirculantSpec:
    parity: Parity
    a: float
    b: float
    alpha1: float = None
    alphas: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        object.__setattr__(self, "alphas", tuple(float(x) for x in self.alphas))
        if not self.a > 0:
            raise InputError(f"a must be positive, got {self.a}")
        if any(not x > 0 for x in self.alphas):
            raise InputError("every alpha_t must be positive")
        if self.parity is Parity.ODD and not (self.alpha1 is not None and self.alpha1 > 0):
            raise InputError("odd circulants need a positive alpha1")

    @property
    def n(self):
        k = 1 + len(self.alphas)
        return 2 * k if self.parity is Parity.EVEN else 2 * k + 1

    @property
    def row_sum(self):
        total = 2 * self.a * (1 + sum(self.alphas))
        return total + (self.alpha1 if self.parity is Parity.ODD else 0.0)

    @property
    def template_condition(self):
        """``a >= |b|`` for even size; odd size carries no condition on b."""
        return self.parity is Parity.ODD or self.a >= abs(self.b)

    @property
    def spectral_norm(self):
        # circulants are normal, so the norm is the largest DFT modulus
        return float(np.max(np.abs(circulant_eigs(self.first_row()))))

    @property
    def norm_is_row_sum(self):
        """Whether ``||C||_2`` equals the row sum, checked on the DFT spectrum.

        The template condition alone does not guarantee this: large |b|
        breaks it for odd size, and some even specs with ``a >= |b|`` fail too.
        """
        return abs(self.spectral_norm - self.row_sum) <= 1e-9 * max(1.0, self.row_sum)

    def first_row(self):
        z = complex(self.a, self.b)
        row = []
        for w in (1.0,) + self.alphas:
            row += [w * z, w * z.conjugate()]
        if self.parity is Parity.ODD:
            row.append(complex(self.alpha1))
        return np.array(row, dtype=np.complex128)

    def matrix(self):
        return circulant(self.first_row())

    def to_dict(self):
        d = {"parity": self.parity.value, "a": self.a, "b": self.b, "alphas": list(self.alphas)}
        if self.parity is Parity.ODD:
            d["alpha1"] = self.alpha1
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(d["parity"], float(d["a"]), float(d["b"]), d.get("alpha1"), d.get("alphas", ()))


def circulant(first_row):
    row = np.asarray(first_row, dtype=np.complex128)
    if row.ndim != 1 or row.size == 0:
        raise InputError("circulant needs a non-empty first row")
    return np.array([np.roll(row, i) for i in range(row.size)])


def circulant_eigs(first_row):
    """Eigenvalues by direct DFT of the first row, ordered j = 0..n-1."""
    row = np.asarray(first_row, dtype=np.complex128)
    if row.ndim != 1 or row.size == 0:
        raise InputError("circulant needs a non-empty first row")
    n = row.size
    k = np.arange(n)
    omega = np.exp(2j * np.pi * np.outer(k, k) / n)
    return omega @ row


def _check_norm(spec, M):
    sigma = matnum.spectral_norm(M)
    if abs(sigma - spec.row_sum) > 1e-9 * max(1.0, spec.row_sum):
        why = "" if spec.template_condition else f" (a={spec.a} < |b|={abs(spec.b)})"
        warnings.warn(
            f"spectral norm {sigma!r} is not the row sum {spec.row_sum!r}{why}",
            NormClaimWarning,
            stacklevel=3,
        )


def circulant_even(a, b, alphas=(), validate_norm=True):
    """Even-size circulant and its row sum ``2a(1 + sum alphas)``.

    With ``validate_norm`` the dense spectral norm is compared with the row
    sum and a ``NormClaimWarning`` is issued when they differ.  A spec with
    ``a < |b|`` always warns.
    """
    spec = CirculantSpec(Parity.EVEN, a, b, None, alphas)
    M = spec.matrix()
    if validate_norm or not spec.template_condition:
        _check_norm(spec, M)
    return M, spec.row_sum


def circulant_odd(a, b, alpha1, alphas=(), validate_norm=True):
    """Odd-size circulant and its row sum ``2a(1 + sum alphas) + alpha1``.

    The norm equals the row sum only for moderate |b|; ``validate_norm``
    warns when it does not.
    """
    spec = CirculantSpec(Parity.ODD, a, b, alpha1, alphas)
    M = spec.matrix()
    if validate_norm:
        _check_norm(spec, M)
    return M, spec.row_sum


def birkhoff(n, k, seed):
    """Convex combination of ``k`` random permutation matrices."""
    if k < 1 or n < 1:
        raise InputError("birkhoff needs n >= 1 and k >= 1")
    rng = np.random.default_rng(seed)
    w = -np.log(rng.uniform(size=k))
    w = np.where(w > 0, w, np.finfo(float).tiny)
    w /= w.sum()
    M = np.zeros((n, n))
    for wi in w:
        M[np.arange(n), rng.permutation(n)] += wi
    return M.astype(np.complex128)


def checkerboard(n):
    """``(-1)**(i+j)`` sign pattern, +1 in the corner; odd n only.

    Row and column sums alternate +1, -1 and the spectral norm is n.
    """
    if n < 1 or n % 2 == 0:
        raise InputError("checkerboard needs an odd positive size")
    i = np.arange(n)
    return ((-1.0) ** (i[:, None] + i[None, :])).astype(np.complex128)


def _is_doubly_stochastic(D, tol=1e-10):
    D = np.asarray(D)
    return (
        np.all(np.abs(D.imag) <= tol)
        and np.all(D.real >= -tol)
        and np.allclose(D.sum(axis=0), 1.0, atol=tol, rtol=0)
        and np.allclose(D.sum(axis=1), 1.0, atol=tol, rtol=0)
    )


def cone_combo(ds_terms=(), cir_terms=()):
    """``X = sum d_i D_i + sum alpha_j C_j`` and its common row sum r.

    ``ds_terms`` pairs weights with doubly stochastic matrices,
    ``cir_terms`` pairs weights with ``CirculantSpec``.  Circulants whose
    norm exceeds their row sum (every even spec with ``a < |b|``, and some
    others) are rejected, since they would break ``||X||_2 = r``.
    """
    ds_terms, cir_terms = list(ds_terms), list(cir_terms)
    if not ds_terms and not cir_terms:
        raise InputError("cone_combo needs at least one term")
    mats = []
    r = 0.0
    for w, D in ds_terms:
        D = matnum.as_matrix(D)
        if w < 0:
            raise InputError("weights must be nonnegative")
        if not _is_doubly_stochastic(D):
            raise InputError("ds_terms must be doubly stochastic")
        mats.append(w * D)
        r += w
    for w, spec in cir_terms:
        if w < 0:
            raise InputError("weights must be nonnegative")
        if not spec.norm_is_row_sum:
            raise InputError(
                f"circulant {spec.to_dict()} has norm {spec.spectral_norm!r} "
                f"above its row sum {spec.row_sum!r}; not in the cone"
            )
        mats.append(w * spec.matrix())
        r += w * spec.row_sum
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise DimensionError("all cone terms must share one size")
    X = sum(mats)
    tol = NORM_TOL * max(1.0, r)
    if (
        np.max(np.abs(X.sum(axis=1) - r)) > tol
        or np.max(np.abs(X.sum(axis=0) - r)) > tol
        or abs(matnum.spectral_norm(X) - r) > tol
    ):
        raise NumericalError("cone combination failed its row-sum / norm check")
    return X, r


@dataclass
class OmegaCertificate:
    """Recipe for ``delta * (W_theta X W_gamma)^m`` with X in the cone."""

    n: int
    delta: float
    theta: np.ndarray
    gamma: np.ndarray
    m: int
    ds_terms: list = field(default_factory=list)
    cir_terms: list = field(default_factory=list)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        self.gamma = np.asarray(self.gamma, dtype=float)
        if self.theta.shape != (self.n,) or self.gamma.shape != (self.n,):
            raise DimensionError("theta and gamma need n entries each")
        if not self.delta > 0:
            raise InputError("delta must be positive")
        if int(self.m) != self.m or self.m < 1:
            raise InputError("m must be a positive integer")
        self.ds_terms = [(float(w), matnum.as_matrix(D)) for w, D in self.ds_terms]

    @property
    def r(self):
        return sum(w for w, _ in self.ds_terms) + sum(w * s.row_sum for w, s in self.cir_terms)

    @property
    def expected_mu(self):
        return self.delta * self.r**self.m

    @property
    def exact(self):
        """Whether ``expected_mu`` is provably mu (given both W in the structure)."""
        if self.m == 1:
            return True
        z = np.exp(1j * (self.theta + self.gamma))
        return bool(np.max(np.abs(z - z[0])) <= 1e-10)

    def core(self):
        X, _ = cone_combo(self.ds_terms, self.cir_terms)
        return X

    def to_dict(self):
        from .fileio import matrix_to_pairs

        return {
            "n": self.n,
            "delta": self.delta,
            "theta": [float(x) for x in self.theta],
            "gamma": [float(x) for x in self.gamma],
            "m": self.m,
            "ds_terms": [{"weight": w, "matrix": matrix_to_pairs(D)} for w, D in self.ds_terms],
            "cir_terms": [{"weight": w, **s.to_dict()} for w, s in self.cir_terms],
            "r": self.r,
            "expected_mu": self.expected_mu,
            "exact": self.exact,
        }

    @classmethod
    def from_dict(cls, d):
        from .fileio import pairs_to_matrix

        n = int(d["n"])
        return cls(
            n=n,
            delta=float(d.get("delta", 1.0)),
            theta=d.get("theta", [0.0] * n),
            gamma=d.get("gamma", [0.0] * n),
            m=int(d.get("m", 1)),
            ds_terms=[(float(t["weight"]), pairs_to_matrix(t["matrix"])) for t in d.get("ds_terms", [])],
            cir_terms=[(float(t["weight"]), CirculantSpec.from_dict(t)) for t in d.get("cir_terms", [])],
        )


def omega_build(cert):
    """Assemble ``delta * (W_theta X W_gamma)^m``."""
    X = cert.core()
    if X.shape[0] != cert.n:
        raise DimensionError(f"terms are {X.shape[0]}x{X.shape[0]}, certificate says n={cert.n}")
    Y = np.exp(1j * cert.theta)[:, None] * X * np.exp(1j * cert.gamma)[None, :]
    return cert.delta * np.linalg.matrix_power(Y, cert.m)
