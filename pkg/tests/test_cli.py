import csv
import io
import json
import time

import numpy as np
import pytest

from susyosc.cli import EXIT_INVALID, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, run


def _csv(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    meta = dict(line[2:].split("=", 1) for line in text.splitlines() if line.startswith("# "))
    return list(csv.DictReader(io.StringIO("\n".join(body)))), {k: json.loads(v) for k, v in meta.items()}


def test_spectrum_row_zero(capsys):
    assert run(["spectrum", "--k", "1.25", "--family", "u", "--p", "0", "--nmax", "2"]) == EXIT_OK
    rows, meta = _csv(capsys.readouterr().out)
    assert float(rows[0]["E_n"]) == 2.5 and meta["alpha"] == 0.5
    assert float(rows[0]["E_n_minus_alpha"]) == 2.0
    assert meta["regime"] == "ExactSUSY" and meta["nmax"] == 2


def test_spectrum_broken_regime_json(capsys):
    assert run(["spectrum", "--k", "0.75", "--family", "v", "--format", "json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["regime"] == "BrokenSUSY"
    assert doc["values"]["E_n"][:2] == [1.5, 3.5]


def test_odd_p_u_is_invalid(capsys):
    assert run(["spectrum", "--family", "u", "--p", "1"]) == EXIT_INVALID
    assert "poles" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["spectrum", "--k", "1", "--b", "2"],
    ["spectrum", "--k", "0.2"],
    ["spectrum", "--tol", "nonsense=1"],
    ["export", "coherent"],
    ["export", "coherent", "--z", "1.5,0"],
    ["export", "coherent", "--z", "abc"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE


def test_export_partner_potential(tmp_path):
    out = tmp_path / "a.csv"
    assert run(["export", "partner_potential", "--k", "2", "--npoints", "50", "--out", str(out)]) == EXIT_OK
    rows, meta = _csv(out.read_text())
    x = np.array([float(r["x"]) for r in rows])
    A = np.array([float(r["A"]) for r in rows])
    np.testing.assert_allclose(A, -1 + (3 - 4 * 2.0) / x**2, rtol=1e-13)
    assert meta["k"] == 2.0 and meta["family"] == "U" and "tolerances" in meta


def test_coherent_z0_equals_ground_state(tmp_path):
    a, b = tmp_path / "c.csv", tmp_path / "w.csv"
    run(["export", "coherent", "--z", "0,0", "--npoints", "40", "--out", str(a)])
    run(["export", "wavefunction", "--nmax", "0", "--npoints", "40", "--out", str(b)])
    ra, _ = _csv(a.read_text())
    rb, _ = _csv(b.read_text())
    np.testing.assert_allclose([float(r["re_psi_z"]) for r in ra], [float(r["psi_0"]) for r in rb], atol=1e-15)


def test_supercoherent_columns_and_determinism(tmp_path):
    paths = [tmp_path / f"s{i}.json" for i in range(2)]
    for path in paths:
        assert run(["export", "supercoherent", "--z", "0.3,0.2", "--alpha-coeff", "1,-0.5",
                    "--npoints", "30", "--format", "json", "--out", str(path)]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    doc = json.loads(paths[0].read_text())
    assert set(doc["values"]) == {"re_even", "im_even", "re_odd_alpha", "im_odd_alpha"}
    assert doc["meta"]["alpha_coeff"] == [1.0, -0.5] and len(doc["grid"]) == 30
    assert doc["meta"]["supernorm"][0] == pytest.approx(1.0, abs=1e-12)


def test_wavefunction_export_has_partner_states(capsys):
    assert run(["export", "wavefunction", "--k", "2.1", "--p", "2", "--states", "1", "--npoints", "20"]) == EXIT_OK
    rows, _ = _csv(capsys.readouterr().out)
    assert {"psi_0", "psi_1", "phi_-1", "phi_0", "phi_1"} <= set(rows[0])


def test_export_potential(capsys):
    assert run(["export", "potential", "--family", "v", "--p", "1", "--npoints", "20"]) == EXIT_OK
    rows, _ = _csv(capsys.readouterr().out)
    assert {"V0", "V1"} <= set(rows[0])


def test_verify_grassmann_fast(capsys):
    t0 = time.perf_counter()
    assert run(["verify", "--suite", "grassmann"]) == EXIT_OK
    assert time.perf_counter() - t0 < 1.0
    assert "FAIL" not in capsys.readouterr().out


def test_verify_darboux_includes_normalization(capsys):
    assert run(["verify", "--suite", "darboux", "--k", "2.1", "--p", "2", "--format", "json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    names = {c["name"] for c in doc["checks"]}
    assert "normalization_integral" in names and doc["passed"]


def test_verify_all_defaults(capsys):
    assert run(["verify"]) == EXIT_OK


def test_verify_failure_exit_and_anchor(capsys):
    assert run(["verify", "--suite", "oscillator", "--tol", "residual=1e-14"]) == EXIT_VERIFY
    err = capsys.readouterr().err
    assert "FAILED oscillator/schrodinger_residual" in err and "h0 psi_n" in err


def test_unwritable_path(tmp_path):
    assert run(["spectrum", "--out", str(tmp_path / "missing" / "x.csv")]) == EXIT_USAGE


def test_nonconvergence_exit_code(monkeypatch, capsys):
    from susyosc import cli
    from susyosc.quadrature import QuadratureError

    def boom(*a, **k):
        raise QuadratureError("disc quadrature did not converge", 0.0, 1.0)

    monkeypatch.setattr(cli, "run_suite", boom)
    assert run(["verify"]) == cli.EXIT_CONVERGENCE
    assert "did not converge" in capsys.readouterr().err
