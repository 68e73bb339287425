"""Golden verification suite for the worked examples and the class theorems.

``run_suite`` returns one ``Check`` per numeric claim, grouped by criterion
id (G1..G10).  The CLI ``verify`` command and the acceptance tests both
consume it.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import catalog, matnum
from .blockstruct import parse_structure
from .constructors import (
    CirculantSpec,
    OmegaCertificate,
    Parity,
    birkhoff,
    checkerboard,
    circulant_eigs,
    cone_combo,
    omega_build,
)
from .mu import MuOptions, compute_mu, mu_bruteforce
from .stochastic import check_row_bound, profile

ALL_SCALAR_3 = "r:1,r:1,r:1"


@dataclass
class Check:
    criterion: str
    name: str
    expected: object
    actual: object
    tol: float
    passed: bool

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"{verdict}  {self.criterion:<4} {self.name:<52} "
            f"expected={_fmt(self.expected)} actual={_fmt(self.actual)} tol={self.tol:g}"
        )


def _fmt(x):
    if isinstance(x, (complex, np.complexfloating)):
        return f"{x.real:.10g}{x.imag:+.10g}i"
    if isinstance(x, (float, np.floating)):
        return f"{x:.12g}"
    return str(x)


def _close(cid, name, expected, actual, tol):
    return Check(cid, name, expected, actual, tol, bool(abs(actual - expected) <= tol))


def _atmost(cid, name, bound, actual):
    # the bound itself is the tolerance on a zero target
    return Check(cid, name, 0.0, actual, bound, bool(actual <= bound))


def random_structure(rng, n):
    tokens, left = [], n
    while left:
        k = int(rng.integers(1, left + 1))
        tokens.append(("r" if rng.random() < 0.5 else "f") + f":{k}")
        left -= k
    return parse_structure(",".join(tokens), n)


def _complex_gaussian(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def multiset_distance(a, b):
    """Largest pairing error under the optimal matching of two value lists."""
    a, b = np.asarray(a), np.asarray(b)
    cost = np.abs(a[:, None] - b[None, :])
    i, j = linear_sum_assignment(cost)
    return float(cost[i, j].max())


# --------------------------------------------------------------------------


def g1():
    A = omega_build(catalog.rotated_a_certificate())
    lit = catalog.ROTATED_A
    lam = matnum.eigenvalues(A)[0]
    sigma = matnum.spectral_norm(A)
    rho = matnum.spectral_radius(A)
    return [
        _atmost("G1", "rebuilt A matches literal entrywise", 1e-12, float(np.max(np.abs(A - lit)))),
        _close("G1", "sigma_max(A)", 0.1, sigma, 1e-9),
        _close("G1", "dominant eigenvalue of A", catalog.ROTATED_A_DOMINANT_EIGENVALUE, lam, 1e-5),
        _atmost("G1", "rho(A) < sigma_max(A) - 0.01 (not radial)", sigma - 0.01, rho),
    ]


def g2(opts=None):
    B = parse_structure(ALL_SCALAR_3, 3)
    out = []
    for m in (1, 2):
        rep = compute_mu(np.linalg.matrix_power(catalog.ROTATED_A, m), B, opts)
        out.append(_close("G2", f"mu lower of A^{m}", 0.1**m, rep.lower, 1e-5))
        out.append(_close("G2", f"mu upper of A^{m}", 0.1**m, rep.upper, 1e-5))
    return out


def g3(C=None, opts=None):
    C = catalog.ODD_EXAMPLE.matrix() if C is None else np.asarray(C)
    sv = matnum.singular_values(C)
    out = [
        _close("G3", f"singular value {k + 1}", e, float(s), 1e-9)
        for k, (e, s) in enumerate(zip(catalog.ODD_EXAMPLE_SINGULAR_VALUES, sv))
    ]
    out.append(_atmost("G3", "max |row sum - 1|", 1e-12, float(np.max(np.abs(C.sum(axis=1) - 1)))))
    out.append(_atmost("G3", "max |column sum - 1|", 1e-12, float(np.max(np.abs(C.sum(axis=0) - 1)))))
    rep = compute_mu(C, parse_structure(ALL_SCALAR_3, 3), opts)
    out.append(_close("G3", "mu lower", 1.0, rep.lower, 1e-5))
    out.append(_close("G3", "mu upper", 1.0, rep.upper, 1e-5))
    return out


def g4():
    Ce = catalog.EVEN_EXAMPLE.matrix()
    E = catalog.EVEN_COUNTEREXAMPLE.matrix()
    return [
        _close("G4", "sigma_max(C^e) = 8/3", 8 / 3, matnum.spectral_norm(Ce), 1e-9),
        _atmost("G4", "max |E row sum - 8|", 1e-12, float(np.max(np.abs(E.sum(axis=1) - 8)))),
        _close("G4", "sigma_max(E) = 16 (a < |b|)", 16.0, matnum.spectral_norm(E), 1e-9),
    ]


def g5():
    S, r = cone_combo([(1.0, catalog.STOCHASTIC_ADDEND)], [(1.0, catalog.EVEN_EXAMPLE)])
    _, residual = matnum.is_normal(S)
    return [
        _atmost("G5", "S matches literal entrywise", 1e-12, float(np.max(np.abs(S - catalog.SUM_EXAMPLE_LITERAL)))),
        _atmost("G5", "max |row sum - 11/3|", 1e-12, float(np.max(np.abs(S.sum(axis=1) - 11 / 3)))),
        _atmost("G5", "max |column sum - 11/3|", 1e-12, float(np.max(np.abs(S.sum(axis=0) - 11 / 3)))),
        _close("G5", "sigma_max(S) = 11/3", 11 / 3, matnum.spectral_norm(S), 1e-9),
        Check("G5", "normality residual > 1e-3", "> 0.001", residual, 0.0, bool(residual > 1e-3)),
    ]


def g6():
    D = checkerboard(5)
    p = profile(D)
    spread = float(np.max(np.abs(D.sum(axis=1) - 1.0)))
    if p.constant_row is None:
        margin = Check("G6", "row-bound margin sigma - |c|", 4.0, "row sums not constant", 1e-9, False)
    else:
        margin = _close("G6", "row-bound margin sigma - |c|", 4.0, check_row_bound(D), 1e-9)
    return [
        _close("G6", "sigma_max(checkerboard 5)", 5.0, matnum.spectral_norm(D), 1e-9),
        _close("G6", "Frobenius(checkerboard 5)", 5.0, matnum.frobenius_norm(D), 1e-9),
        _atmost("G6", "max |row sum - 1| (constant row sum 1)", 1e-9, spread),
        margin,
    ]


def g7(count=200, seed=7, opts=None):
    rng = np.random.default_rng(seed)
    fails = {"sandwich": 0, "norm": 0, "det": 0}
    worst_norm = worst_det = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 7))
        M = _complex_gaussian(rng, n)
        B = random_structure(rng, n)
        rep = compute_mu(M, B, opts)
        rho, sigma = matnum.spectral_radius(M), matnum.spectral_norm(M)
        if not (rho - 1e-6 <= rep.lower <= rep.upper <= sigma + 1e-6):
            fails["sandwich"] += 1
        if rep.perturbation is None:
            fails["norm"] += 1
            continue
        err = abs(matnum.spectral_norm(rep.perturbation) * rep.lower - 1.0)
        worst_norm = max(worst_norm, err)
        fails["norm"] += err > 1e-8
        det = abs(np.linalg.det(np.eye(n) + M @ rep.perturbation)) / max(1.0, sigma) ** n
        worst_det = max(worst_det, det)
        fails["det"] += det > 1e-6
    return [
        Check("G7", f"sandwich violations rho <= lower <= upper <= sigma ({count} cases)", 0, fails["sandwich"], 1e-6,
              fails["sandwich"] == 0),
        Check("G7", "worst |sigma(Delta) * lower - 1|", 0.0, worst_norm, 1e-8, fails["norm"] == 0),
        Check("G7", "worst |det(I + M Delta)| / max(1,sigma)^n", 0.0, worst_det, 1e-6, fails["det"] == 0),
    ]


def g8(count=25, seed=8, grid=256, opts=None):
    rng = np.random.default_rng(seed)
    B = parse_structure(ALL_SCALAR_3, 3)
    opts = opts or MuOptions()
    fine = MuOptions(grid=grid)
    coarse = MuOptions(grid=max(1, grid // 2))
    worst_lower = worst_self = 0.0
    for _ in range(count):
        M = _complex_gaussian(rng, 3)
        rep = compute_mu(M, B, opts)
        ref = mu_bruteforce(M, B, fine)
        worst_lower = max(worst_lower, abs(rep.lower - ref))
        worst_self = max(worst_self, abs(mu_bruteforce(M, B, coarse) - ref))
    return [
        _atmost("G8", f"worst |lower - oracle(grid {grid})|", 5e-3, worst_lower),
        _atmost("G8", f"worst |oracle({grid // 2}) - oracle({grid})|", 1e-3, worst_self),
    ]


def _random_cone(rng):
    n = int(rng.integers(2, 8))
    k = n // 2
    ds, cir = [], []
    while not ds and not cir:
        for _ in range(int(rng.integers(0, 3))):
            ds.append((float(rng.uniform(0.1, 1.0)), birkhoff(n, int(rng.integers(1, 4)), rng.integers(1 << 31))))
        for _ in range(int(rng.integers(0, 3))):
            # redraw until the circulant really has norm = row sum
            spec = None
            while spec is None or not spec.norm_is_row_sum:
                a = float(rng.uniform(0.05, 0.5))
                b = float(rng.uniform(-a, a))
                alphas = tuple(rng.uniform(0.1, 1.0, size=k - 1))
                if n % 2 == 0:
                    spec = CirculantSpec(Parity.EVEN, a, b, None, alphas)
                else:
                    spec = CirculantSpec(Parity.ODD, a, b, float(rng.uniform(0.1, 1.0)), alphas)
            cir.append((float(rng.uniform(0.1, 1.0)), spec))
    return n, ds, cir


def g9(count=100, seed=9, opts=None):
    rng = np.random.default_rng(seed)
    worst = {"rows": 0.0, "cols": 0.0, "norm": 0.0, "mu": 0.0}
    for _ in range(count):
        n, ds, cir = _random_cone(rng)
        X, r = cone_combo(ds, cir)
        worst["rows"] = max(worst["rows"], float(np.max(np.abs(X.sum(axis=1) - r))))
        worst["cols"] = max(worst["cols"], float(np.max(np.abs(X.sum(axis=0) - r))))
        worst["norm"] = max(worst["norm"], abs(matnum.spectral_norm(X) - r))
        B = random_structure(rng, n)
        for m in (1, 2):
            rep = compute_mu(np.linalg.matrix_power(X, m), B, opts)
            worst["mu"] = max(worst["mu"], abs(rep.lower - r**m), abs(rep.upper - r**m))
    return [
        _atmost("G9", f"worst |row sum - r| ({count} cone matrices)", 1e-9, worst["rows"]),
        _atmost("G9", "worst |column sum - r|", 1e-9, worst["cols"]),
        _atmost("G9", "worst |sigma_max(X) - r|", 1e-8, worst["norm"]),
        _atmost("G9", "worst |mu bound of X^m - r^m|, m in {1,2}", 1e-5, worst["mu"]),
    ]


def g10(count=50, seed=10):
    rng = np.random.default_rng(seed)
    worst = {"eigs": 0.0, "odd": 0.0, "even": 0.0}
    for _ in range(count):
        k = int(rng.integers(1, 8))
        a = float(rng.uniform(0.05, 1.0))
        alphas = tuple(rng.uniform(0.05, 1.0, size=k - 1))
        if rng.random() < 0.5:
            spec = CirculantSpec(Parity.EVEN, a, float(rng.uniform(-a, a)), None, alphas)
        else:
            spec = CirculantSpec(Parity.ODD, a, float(rng.normal()), float(rng.uniform(0.05, 1.0)), alphas)
        M = spec.matrix()
        worst["eigs"] = max(worst["eigs"], multiset_distance(circulant_eigs(spec.first_row()), matnum.eigenvalues(M)))
        key = "odd" if spec.parity is Parity.ODD else "even"
        worst[key] = max(worst[key], abs(matnum.spectral_norm(M) - spec.row_sum))
    return [
        _atmost("G10", f"worst DFT vs dense eigenvalues ({count} specs)", 1e-9, worst["eigs"]),
        _atmost("G10", "worst |sigma_max - delta_o| (odd)", 1e-9, worst["odd"]),
        _atmost("G10", "worst |sigma_max - delta_e| (even, a >= |b|)", 1e-9, worst["even"]),
    ]


CRITERIA = {
    "G1": g1, "G2": g2, "G3": g3, "G4": g4, "G5": g5,
    "G6": g6, "G7": g7, "G8": g8, "G9": g9, "G10": g10,
}


def run_criterion(cid, grid=256):
    return CRITERIA[cid](grid=grid) if cid == "G8" else CRITERIA[cid]()


def run_suite(grid=256):
    checks = []
    for cid in CRITERIA:
        checks.extend(run_criterion(cid, grid=grid))
    return checks


def class_power_notes(seed=0, opts=None):
    """Compare the ``delta * r^m`` formula with numerical bounds on class
    members whose diagonal phases do not cancel (m >= 2).

    These members fall outside the proven range of the formula; the rows
    report where formula and bounds part ways.
    """
    rng = np.random.default_rng(seed)
    cases = [("A^2 (equimodular rows)", catalog.rotated_a_certificate(2))]
    cases.append(
        (
            "2 (W C^o)^2, random phases",
            OmegaCertificate(3, 2.0, rng.uniform(0, 2 * np.pi, 3), np.zeros(3), 2,
                             cir_terms=[(1.0, catalog.ODD_EXAMPLE)]),
        )
    )
    B = parse_structure(ALL_SCALAR_3, 3)
    rows = []
    for label, cert in cases:
        rep = compute_mu(omega_build(cert), B, opts)
        rows.append((label, cert.expected_mu, rep.lower, rep.upper, cert.exact))
    return rows
