import json

import numpy as np
import pytest

from mukit import catalog, cli, fileio, verify
from mukit.cli import main
from mukit.mu import MuReport


@pytest.fixture
def files(tmp_path, rng):
    paths = {}
    for name, M in {
        "A": catalog.ROTATED_A,
        "I3": np.eye(3),
        "I2": np.eye(2),
        "R4": rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)),
        "R3": rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)),
    }.items():
        paths[name] = tmp_path / f"{name}.json"
        fileio.write_matrix(paths[name], M)
    return paths


def test_analyze_rotated_a(files, tmp_path):
    out = tmp_path / "report.json"
    assert main(["analyze", str(files["A"]), "--structure", "r:1,r:1,r:1", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["exact"]["mu"] == pytest.approx(0.1)
    assert rep["exact"]["agrees"]
    assert abs(rep["mu"]["lower"] - 0.1) <= 1e-5 and abs(rep["mu"]["upper"] - 0.1) <= 1e-5
    assert rep["input"]["n"] == 3 and len(rep["input"]["sha256"]) == 64
    assert rep["profile"]["equimodular_rows"]


def test_analyze_square_has_no_exact_field(files, tmp_path):
    out = tmp_path / "report.json"
    assert main(["analyze", str(files["A"]), "--structure", "r:1,r:1,r:1", "--m", "2", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert "exact" not in rep
    assert rep["mu"]["upper"] == pytest.approx(0.0052201653, abs=1e-8)


def test_analyze_identity(files, tmp_path):
    out = tmp_path / "r.json"
    assert main(["analyze", str(files["I3"]), "--structure", "r:1,f:2", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["mu"]["lower"] == pytest.approx(1.0)
    assert rep["mu"]["upper"] == pytest.approx(1.0)
    assert rep["exact"]["mu"] == pytest.approx(1.0)


def test_analyze_random_bounds_only(files, tmp_path):
    out = tmp_path / "r.json"
    assert main(["analyze", str(files["R4"]), "--structure", "r:1,r:1,f:2", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert "exact" not in rep
    assert rep["mu"]["lower"] <= rep["mu"]["upper"] + 1e-8
    assert rep["flags"]["bounds_ordered"]


def test_report_round_trip(files, tmp_path):
    out = tmp_path / "r.json"
    main(["analyze", str(files["R4"]), "--structure", "r:2,f:2", "--out", str(out)])
    rep = json.loads(out.read_text())
    assert json.loads(json.dumps(rep)) == rep


def test_analyze_deterministic_and_parallel(files, tmp_path, capsys):
    args = [str(files["R4"]), str(files["A"]).replace("A.json", "R4.json")]
    serial, parallel = tmp_path / "s.json", tmp_path / "p.json"
    main(["analyze", *args, "--structure", "r:1,r:1,f:2", "--out", str(serial)])
    main(["analyze", *args, "--structure", "r:1,r:1,f:2", "--out", str(parallel), "--jobs", "2"])
    assert serial.read_text() == parallel.read_text()


def test_analyze_stdout(files, capsys):
    assert main(["analyze", str(files["I2"]), "--structure", "r:1,r:1"]) == 0
    assert json.loads(capsys.readouterr().out)["mu"]["upper"] == pytest.approx(1.0)


def test_exit_codes(files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"entries": [[[1, 0]], [[2, 0]]]}')
    assert main(["analyze", str(bad), "--structure", "r:1"]) == 2
    assert main(["analyze", str(files["I2"]), "--structure", "q:2"]) == 2
    assert main(["analyze", str(files["I2"]), "--structure", "r:3"]) == 3
    assert main(["oracle", str(files["I3"]), "--structure", "f:3"]) == 5
    assert main(["oracle", str(files["I3"]), "--structure", "r:1,f:2"]) == 5
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 2


def test_nonconvergence_exit_writes_report(files, tmp_path, monkeypatch):
    real = cli.compute_mu

    def stalled(M, B, opts=None):
        rep = real(M, B, opts)
        return MuReport(rep.lower, rep.upper, rep.u_witness, rep.d_witness, rep.perturbation, False, True)

    monkeypatch.setattr(cli, "compute_mu", stalled)
    out = tmp_path / "r.json"
    assert main(["analyze", str(files["R3"]), "--structure", "r:1,r:1,r:1", "--out", str(out)]) == 4
    assert json.loads(out.read_text())["flags"]["converged"] is False


def test_env_tolerance(files, tmp_path, monkeypatch):
    monkeypatch.setenv("MUKIT_TOL", "1e-4")
    out = tmp_path / "r.json"
    main(["analyze", str(files["I2"]), "--structure", "r:1,r:1", "--out", str(out)])
    assert json.loads(out.read_text())["tol"] == 1e-4
    monkeypatch.setenv("MUKIT_TOL", "loose")
    assert main(["analyze", str(files["I2"]), "--structure", "r:1,r:1"]) == 2


def _meta(path):
    return json.loads((path.parent / (path.name + ".meta.json")).read_text())


def test_build_odd_example(tmp_path):
    out = tmp_path / "co.json"
    assert main(["build", "circulant-odd", "--a", "0.05", "--b", "-0.0866025403784", "--alpha1", "0.9", "--out", str(out)]) == 0
    M = fileio.read_matrix(out)
    np.testing.assert_allclose(M, catalog.ODD_EXAMPLE_LITERAL, atol=1e-12)
    assert _meta(out)["expected_norm"] == pytest.approx(1.0)


def test_build_other_families(tmp_path):
    cb = tmp_path / "cb.json"
    assert main(["build", "checkerboard", "--n", "5", "--out", str(cb)]) == 0
    assert _meta(cb)["expected_norm"] == 5.0
    bk = tmp_path / "bk.json"
    assert main(["build", "birkhoff", "--n", "4", "--k", "3", "--seed", "7", "--out", str(bk)]) == 0
    M = fileio.read_matrix(bk)
    np.testing.assert_allclose(M.sum(axis=0), 1.0, atol=1e-12)
    assert _meta(bk)["expected_norm"] == 1.0
    ce = tmp_path / "ce.json"
    assert main(["build", "circulant-even", "--a", "1", "--b", "-0.5", "--alphas", "0.3333333333333333", "--out", str(ce)]) == 0
    assert _meta(ce)["expected_norm"] == pytest.approx(8 / 3)


def test_build_reports_true_norm_for_large_b(tmp_path):
    out = tmp_path / "co.json"
    assert main(["build", "circulant-odd", "--a", "1", "--b", "100", "--alpha1", "1", "--out", str(out)]) == 0
    meta = _meta(out)
    assert meta["expected_row_sum"] == 3.0
    assert meta["expected_norm"] == pytest.approx(100 * np.sqrt(3))
    assert meta["norm_is_row_sum"] is False and meta["expected_mu"] is None


def test_build_cone_and_omega(tmp_path):
    terms = tmp_path / "terms.json"
    terms.write_text(json.dumps({
        "ds_terms": [{"weight": 1.0, "matrix": fileio.matrix_to_pairs(catalog.STOCHASTIC_ADDEND)}],
        "cir_terms": [{"weight": 1.0, **catalog.EVEN_EXAMPLE.to_dict()}],
    }))
    out = tmp_path / "s.json"
    assert main(["build", "cone", "--cert", str(terms), "--out", str(out)]) == 0
    np.testing.assert_allclose(fileio.read_matrix(out), catalog.SUM_EXAMPLE_LITERAL, atol=1e-14)
    assert _meta(out)["expected_norm"] == pytest.approx(11 / 3)

    cert = tmp_path / "cert.json"
    fileio.write_json(cert, catalog.rotated_a_certificate(1).to_dict())
    out = tmp_path / "a.json"
    assert main(["build", "omega", "--cert", str(cert), "--out", str(out)]) == 0
    np.testing.assert_allclose(fileio.read_matrix(out), catalog.ROTATED_A, atol=1e-12)
    assert _meta(out)["expected_mu"] == pytest.approx(0.1)


def test_build_missing_params(tmp_path):
    assert main(["build", "circulant-odd", "--a", "1", "--b", "0", "--out", str(tmp_path / "x.json")]) == 2
    assert main(["build", "checkerboard", "--n", "4", "--out", str(tmp_path / "x.json")]) == 2


def test_oracle(files, capsys):
    assert main(["oracle", str(files["A"]), "--structure", "r:1,r:1,r:1", "--grid", "128"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["value"] == pytest.approx(0.1, abs=2e-3)
    assert main(["oracle", str(files["I2"]), "--structure", "r:1,r:1"]) == 0
    assert json.loads(capsys.readouterr().out)["value"] == pytest.approx(1.0)


def test_oracle_matches_analyze(files, tmp_path, capsys):
    main(["oracle", str(files["R3"]), "--structure", "r:1,r:1,r:1"])
    value = json.loads(capsys.readouterr().out)["value"]
    out = tmp_path / "r.json"
    main(["analyze", str(files["R3"]), "--structure", "r:1,r:1,r:1", "--out", str(out)])
    assert abs(json.loads(out.read_text())["mu"]["lower"] - value) <= 5e-3


def test_verify_exit_reflects_failures(monkeypatch, capsys):
    ok = verify.Check("G0", "fine", 1.0, 1.0, 0.0, True)
    bad = verify.Check("G0", "off", 1.0, 1.01, 0.0, False)
    monkeypatch.setattr(verify, "class_power_notes", lambda: [])
    monkeypatch.setattr(verify, "run_suite", lambda grid=256: [ok])
    assert main(["verify"]) == 0
    monkeypatch.setattr(verify, "run_suite", lambda grid=256: [ok, bad])
    assert main(["verify"]) == 1
    out = capsys.readouterr().out
    assert "FAIL  G0" in out and "1/2 checks passed" in out


def test_verify_detects_perturbed_odd_example():
    C = catalog.ODD_EXAMPLE_LITERAL.copy()
    C[0, 0] += 0.01
    checks = verify.g3(C)
    assert not all(c.passed for c in checks if "singular" in c.name)
    assert all(c.passed for c in verify.g3(catalog.ODD_EXAMPLE_LITERAL))


def test_verify_grid_override_reaches_oracle():
    # refinement usually rescues even an 8-point grid; only the wiring is checked
    checks = verify.g8(count=2, grid=8)
    assert [c.name for c in checks] == [
        "worst |lower - oracle(grid 8)|",
        "worst |oracle(4) - oracle(8)|",
    ]
