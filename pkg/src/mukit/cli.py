"""``mukit`` command line: analyze, build, verify, oracle.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 dimension
mismatch, 4 non-convergence (report still written), 5 unsupported structure.
"""

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import fileio, matnum, verify
from .blockstruct import parse_structure
from .constructors import (
    CirculantSpec,
    OmegaCertificate,
    Parity,
    birkhoff,
    checkerboard,
    cone_combo,
    omega_build,
)
from .errors import (
    ComplexityError,
    DimensionError,
    HypothesisError,
    InputError,
    NotInClassError,
    UnsupportedStructureError,
)
from .mu import MuOptions, compute_mu, mu_bruteforce
from .stochastic import mu_exact_equimodular, profile

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_DIMENSION = 3
EXIT_NONCONVERGED = 4
EXIT_UNSUPPORTED = 5

AGREEMENT_TOL = 1e-5


def options_from_env(seed=0, grid=256):
    tol = os.environ.get("MUKIT_TOL")
    try:
        return MuOptions(seed=seed, grid=grid, tol=float(tol) if tol else 1e-8)
    except ValueError:
        raise InputError(f"MUKIT_TOL={tol!r} is not a number") from None


def digest(M):
    text = fileio.dumps_matrix(M)
    return {"n": int(M.shape[0]), "sha256": hashlib.sha256(text.encode()).hexdigest()}


def analyze_matrix(A, structure, m=1, opts=None):
    """Full report for ``A^m``; plain JSON types only."""
    opts = opts or MuOptions()
    A = matnum.as_matrix(A)
    if int(m) != m or m < 1:
        raise InputError(f"--m must be a positive integer, got {m!r}")
    B = parse_structure(structure, A.shape[0])
    M = np.linalg.matrix_power(A, int(m))
    rep = compute_mu(M, B, opts)
    report = {
        "input": digest(A),
        "structure": str(B),
        "m": int(m),
        "profile": profile(A).to_dict(),
        "spectral": matnum.spectral_summary(M).to_dict(),
        "mu": rep.to_dict(),
        "seed": opts.seed,
        "tol": opts.tol,
    }
    try:
        exact = mu_exact_equimodular(A, int(m), B)
    except (NotInClassError, HypothesisError):
        exact = None
    if exact is not None:
        gap = max(abs(rep.lower - exact), abs(rep.upper - exact))
        report["exact"] = {"mu": exact, "gap": gap, "agrees": bool(gap <= AGREEMENT_TOL)}
    report["flags"] = {
        "converged": rep.converged,
        "bounds_ordered": bool(rep.lower <= rep.upper),
        "exact_agrees": None if exact is None else report["exact"]["agrees"],
    }
    # json round trip normalises tuples and numpy scalars
    return json.loads(json.dumps(report))


def _analyze_path(job):
    path, structure, m, opts = job
    return str(path), analyze_matrix(fileio.read_matrix(path), structure, m, opts)


def cmd_analyze(args):
    opts = options_from_env(seed=args.seed)
    jobs = [(p, args.structure, args.m, opts) for p in args.matrix]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_analyze_path, jobs))
    else:
        results = [_analyze_path(j) for j in jobs]
    out = {path: rep for path, rep in results}
    payload = out[str(args.matrix[0])] if len(args.matrix) == 1 else out
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for path, rep in results:
        mu = rep["mu"]
        line = f"{path}: lower={mu['lower']:.10g} upper={mu['upper']:.10g}"
        if "exact" in rep:
            line += f" exact={rep['exact']['mu']:.10g} agrees={rep['exact']['agrees']}"
        print(line, file=sys.stderr)
    if not all(rep["flags"]["converged"] for _, rep in results):
        return EXIT_NONCONVERGED
    return EXIT_OK


def _floats(text):
    if not text:
        return ()
    return tuple(float(x) for x in text.split(","))


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.family} needs --{', --'.join(missing)}")


def _circulant_meta(spec):
    # circulants are normal; DFT gives the norm exactly
    meta = {"spec": spec.to_dict(), "expected_row_sum": spec.row_sum, "expected_norm": spec.spectral_norm}
    meta["norm_is_row_sum"] = spec.norm_is_row_sum
    meta["expected_mu"] = spec.row_sum if spec.norm_is_row_sum else None
    return meta


def build_family(args):
    """Matrix and metadata for ``mukit build``."""
    fam = args.family
    if fam in ("circulant-even", "circulant-odd"):
        _require(args, "a", "b")
        if fam == "circulant-odd":
            _require(args, "alpha1")
            spec = CirculantSpec(Parity.ODD, args.a, args.b, args.alpha1, _floats(args.alphas))
        else:
            spec = CirculantSpec(Parity.EVEN, args.a, args.b, None, _floats(args.alphas))
        return spec.matrix(), _circulant_meta(spec)
    if fam == "birkhoff":
        _require(args, "n", "k")
        M = birkhoff(args.n, args.k, args.seed)
        return M, {"expected_row_sum": 1.0, "expected_norm": 1.0, "expected_mu": 1.0}
    if fam == "checkerboard":
        _require(args, "n")
        M = checkerboard(args.n)
        return M, {"expected_row_sum": None, "expected_norm": float(args.n), "expected_mu": None}
    if fam in ("cone", "omega"):
        _require(args, "cert")
        data = fileio.read_json(args.cert)
        if fam == "cone":
            try:
                ds = [(float(t["weight"]), fileio.pairs_to_matrix(t["matrix"])) for t in data.get("ds_terms", [])]
                cir = [(float(t["weight"]), CirculantSpec.from_dict(t)) for t in data.get("cir_terms", [])]
            except (KeyError, TypeError) as exc:
                raise InputError(f"malformed cone terms: {exc}") from None
            X, r = cone_combo(ds, cir)
            return X, {"expected_row_sum": r, "expected_norm": r, "expected_mu": r}
        cert = OmegaCertificate.from_dict(data)
        meta = cert.to_dict()
        meta.pop("ds_terms")
        meta["expected_norm"] = cert.delta * cert.r**cert.m if cert.exact else None
        meta["formula_mu"] = meta.pop("expected_mu")
        meta["expected_mu"] = meta["formula_mu"] if cert.exact else None
        return omega_build(cert), meta
    raise InputError(f"unknown family {fam!r}")


def cmd_build(args):
    M, meta = build_family(args)
    meta = {"family": args.family, "n": int(M.shape[0]), **meta}
    fileio.write_matrix(args.out, M)
    fileio.write_json(str(args.out) + ".meta.json", meta)
    print(f"wrote {args.out} ({M.shape[0]}x{M.shape[0]})", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    checks = verify.run_suite(grid=args.grid)
    for c in checks:
        print(c.line())
    for label, formula, lower, upper, exact in verify.class_power_notes():
        print(
            f"INFO  {label}: delta*r^m={formula:.10g} bounds=[{lower:.10g}, {upper:.10g}] "
            f"formula proven={exact}"
        )
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_oracle(args):
    M = fileio.read_matrix(args.matrix)
    B = parse_structure(args.structure, M.shape[0])
    value = mu_bruteforce(M, B, MuOptions(grid=args.grid))
    coarse = mu_bruteforce(M, B, MuOptions(grid=max(2, args.grid // 2)))
    print(json.dumps({"value": value, "grid": args.grid, "accuracy_estimate": abs(value - coarse)}))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="mukit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="bounds, witnesses and exact mu when available")
    a.add_argument("matrix", nargs="+", type=Path)
    a.add_argument("--structure", required=True, help='block structure, e.g. "r:1,r:1,f:2"')
    a.add_argument("--m", type=int, default=1, help="analyze A^m")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out", type=Path)
    a.add_argument("--jobs", type=int, default=1, help="worker processes for several matrices")
    a.set_defaults(func=cmd_analyze)

    b = sub.add_parser("build", help="write a matrix from a known family")
    b.add_argument(
        "family",
        choices=["circulant-even", "circulant-odd", "birkhoff", "checkerboard", "cone", "omega"],
    )
    b.add_argument("--a", type=float)
    b.add_argument("--b", type=float)
    b.add_argument("--alpha1", type=float)
    b.add_argument("--alphas", default="", help="comma separated alpha_2..alpha_k")
    b.add_argument("--n", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--cert", type=Path, help="certificate / term JSON for cone and omega")
    b.add_argument("--out", type=Path, required=True)
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run the golden suite")
    v.add_argument("--grid", type=int, default=256, help="brute-force oracle grid")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="brute-force lower bound for scalar structures")
    o.add_argument("matrix", type=Path)
    o.add_argument("--structure", required=True)
    o.add_argument("--grid", type=int, default=256)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DimensionError as exc:
        print(f"mukit: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except (UnsupportedStructureError, ComplexityError) as exc:
        print(f"mukit: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except InputError as exc:
        print(f"mukit: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
