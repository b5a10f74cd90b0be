import csv
import hashlib
import json

import numpy as np
import pytest

from conftest import full_grid_plan
from vdfourier.cli import main
from vdfourier.coherence import kappa_l2
from vdfourier.pgm import read_pgm, write_pgm
from vdfourier.phantoms import shepp_logan


def file_hash(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_test_image(path, n=16):
    write_pgm(path, shepp_logan(n), maxval=255)
    img, _ = read_pgm(path)
    return img


# ---------------------------------------------------------------------------
# coherence

def test_cmd_coherence_outputs(tmp_path):
    out = tmp_path / "coh"
    assert main(["coherence", "--n", "32", "--out", str(out)]) == 0
    for name in ("coherence_map.csv", "kappa.csv", "kappa_prime.csv", "report.json"):
        assert (out / name).exists()
    report = json.loads((out / "report.json").read_text())
    assert all(c["pass"] for c in report["checks"])
    with open(out / "coherence_map.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 32 * 32


def test_cmd_coherence_rejects_bad_n(tmp_path):
    assert main(["coherence", "--n", "3", "--out", str(tmp_path / "x")]) == 2


def test_cmd_coherence_l2_matches_library(tmp_path):
    out = tmp_path / "coh8"
    assert main(["coherence", "--n", "8", "--out", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["kappa_prime_l2"] == pytest.approx(kappa_l2(8, "kappa_prime"), rel=1e-12)


# ---------------------------------------------------------------------------
# sample

def test_cmd_sample_lowpass_single_pixel(tmp_path):
    out = tmp_path / "s"
    assert main(["sample", "--n", "8", "--density", "lowpass", "--m", "1",
                 "--out", str(out)]) == 0
    mask, _ = read_pgm(out / "mask.pgm")
    assert mask.sum() == 1.0
    assert mask[4, 4] == 1.0  # DC lands at the center after fftshift


def test_cmd_sample_reproducible_hash(tmp_path):
    args = ["sample", "--n", "32", "--density", "power:2", "--m", "200", "--seed", "7"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    assert file_hash(out1 / "mask.pgm") == file_hash(out2 / "mask.pgm")
    assert file_hash(out1 / "plan.csv") == file_hash(out2 / "plan.csv")


def test_cmd_sample_uniform_duplicates_in_csv(tmp_path):
    out = tmp_path / "u"
    n = 16
    assert main(["sample", "--n", str(n), "--density", "uniform", "--m", str(n * n),
                 "--seed", "3", "--out", str(out)]) == 0
    with open(out / "plan.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == n * n  # duplicates kept in the CSV
    unique = {(r["k1"], r["k2"]) for r in rows}
    mask, _ = read_pgm(out / "mask.pgm")
    assert int(mask.sum()) == len(unique) < n * n


def test_cmd_sample_invalid_density(tmp_path):
    assert main(["sample", "--n", "8", "--density", "banana", "--m", "4",
                 "--out", str(tmp_path / "x")]) == 2


# ---------------------------------------------------------------------------
# reconstruct

def test_cmd_reconstruct_full_sampling_identity(tmp_path):
    img_path = tmp_path / "in.pgm"
    f = write_test_image(img_path, n=16)
    plan_path = tmp_path / "full.csv"
    full_grid_plan(16, rho_value=16.0).to_csv(plan_path)
    out = tmp_path / "rec"
    code = main(["reconstruct", "--image", str(img_path), "--plan", str(plan_path),
                 "--out", str(out), "--max-iters", "6000"])
    assert code == 0
    recon, _ = read_pgm(out / "recon.pgm")
    assert np.abs(recon - f).max() <= 1.0 / 255  # within output quantization
    with open(out / "error.csv") as fh:
        rows = {r["quantity"]: float(r["value"]) for r in csv.DictReader(fh)}
    assert rows["relative_l2_error"] <= 1e-6
    report = json.loads((out / "report.json").read_text())
    assert report["converged"] is True


def test_cmd_reconstruct_error_formula(tmp_path):
    img_path = tmp_path / "in.pgm"
    f = write_test_image(img_path, n=16)
    out = tmp_path / "rec"
    main(["reconstruct", "--image", str(img_path), "--density", "inv-square",
          "--m", "120", "--seed", "5", "--out", str(out), "--max-iters", "3000"])
    # undersampled run leaves a complex residual, so the sidecar holds the
    # exact reconstruction; recompute || f - f# ||_2 / || f ||_2 from it
    recon = np.zeros((16, 16), dtype=complex)
    with open(out / "recon_complex.csv") as fh:
        for r in csv.DictReader(fh):
            recon[int(r["t1"]), int(r["t2"])] = float(r["real"]) + 1j * float(r["imag"])
    with open(out / "error.csv") as fh:
        rows = {r["quantity"]: float(r["value"]) for r in csv.DictReader(fh)}
    expected = np.linalg.norm(recon - f) / np.linalg.norm(f)
    assert rows["relative_l2_error"] == pytest.approx(expected, rel=1e-12)


def test_cmd_reconstruct_phantom_regression(tmp_path):
    from vdfourier.phantoms import rect_phantom

    img_path = tmp_path / "phantom.pgm"
    write_pgm(img_path, rect_phantom(32, seed=0), maxval=255)
    out = tmp_path / "rec"
    code = main(["reconstruct", "--image", str(img_path), "--density", "inv-square",
                 "--m", "410", "--seed", "100", "--out", str(out),
                 "--primal-tol", "1e-8", "--dual-tol", "1e-8"])
    assert code == 0
    with open(out / "error.csv") as fh:
        rows = {r["quantity"]: float(r["value"]) for r in csv.DictReader(fh)}
    assert rows["relative_l2_error"] <= 1e-3


def test_cmd_reconstruct_rejects_bad_image(tmp_path):
    img_path = tmp_path / "bad.pgm"
    write_pgm(img_path, np.zeros((6, 6)), maxval=255)
    assert main(["reconstruct", "--image", str(img_path), "--density", "uniform",
                 "--m", "10", "--out", str(tmp_path / "x")]) == 2


def test_cmd_reconstruct_nonconvergence_exit_code(tmp_path):
    img_path = tmp_path / "in.pgm"
    write_test_image(img_path, n=16)
    out = tmp_path / "rec"
    code = main(["reconstruct", "--image", str(img_path), "--density", "inv-square",
                 "--m", "100", "--seed", "1", "--out", str(out),
                 "--max-iters", "120"])
    assert code == 3
    report = json.loads((out / "report.json").read_text())
    assert report["converged"] is False


def test_cmd_reconstruct_manifest_reproducibility(tmp_path):
    img_path = tmp_path / "in.pgm"
    write_test_image(img_path, n=16)
    out = tmp_path / "rec"
    args = ["reconstruct", "--image", str(img_path), "--density", "inv-square",
            "--m", "150", "--seed", "9", "--eps", "0.05", "--noise-model",
            "unweighted", "--out", str(out), "--max-iters", "2000"]
    main(args)
    first = {p.name: file_hash(p) for p in out.iterdir()}
    main(args)
    second = {p.name: file_hash(p) for p in out.iterdir()}
    assert first == second


# ---------------------------------------------------------------------------
# sweep

def test_cmd_sweep_rows_and_columns(tmp_path):
    img_path = tmp_path / "in.pgm"
    write_test_image(img_path, n=16)
    out = tmp_path / "sw"
    code = main(["sweep", "--image", str(img_path), "--alphas", "0,2,inf",
                 "--eps-list", "0,0.2", "--trials", "2", "--m", "80",
                 "--seed", "11", "--out", str(out), "--max-iters", "800"])
    assert code == 0
    with open(out / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 3 * 2 * 2
    seeds = sorted(int(r["seed"]) for r in rows)
    assert seeds == list(range(11, 11 + 12))  # one seed per cell


def test_cmd_sweep_noise_monotonicity(tmp_path):
    img_path = tmp_path / "in.pgm"
    write_test_image(img_path, n=16)
    out = tmp_path / "mono"
    assert main(["sweep", "--image", str(img_path), "--alphas", "2",
                 "--eps-list", "0,0.5", "--trials", "3", "--m", "120",
                 "--seed", "21", "--out", str(out), "--max-iters", "4000"]) == 0
    with open(out / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    by_eps = {}
    for r in rows:
        by_eps.setdefault(float(r["epsilon"]), []).append(float(r["error"]))
    assert np.mean(by_eps[0.0]) <= np.mean(by_eps[0.5])


def test_cmd_sweep_density_trend_64(tmp_path):
    # low-pass leaning density beats uniform on a compressible 64x64 scene
    from vdfourier.phantoms import compressible_scene

    img_path = tmp_path / "scene.pgm"
    write_pgm(img_path, compressible_scene(64), maxval=255)
    out = tmp_path / "trend"
    assert main(["sweep", "--image", str(img_path), "--alphas", "0,2",
                 "--trials", "3", "--m", "614", "--seed", "4242",
                 "--out", str(out), "--max-iters", "4000"]) == 0
    with open(out / "sweep.csv") as fh:
        rows = list(csv.DictReader(fh))
    by_alpha = {}
    for r in rows:
        by_alpha.setdefault(float(r["alpha"]), []).append(float(r["error"]))
    assert np.mean(by_alpha[2.0]) < np.mean(by_alpha[0.0])


def test_cmd_sweep_parallel_matches_serial(tmp_path):
    img_path = tmp_path / "in.pgm"
    write_test_image(img_path, n=16)
    args = ["sweep", "--image", str(img_path), "--alphas", "0,2", "--trials", "2",
            "--m", "60", "--seed", "4", "--max-iters", "400"]
    out1, out2 = tmp_path / "ser", tmp_path / "par"
    assert main(args + ["--out", str(out1), "--jobs", "1"]) == 0
    assert main(args + ["--out", str(out2), "--jobs", "2"]) == 0
    assert file_hash(out1 / "sweep.csv") == file_hash(out2 / "sweep.csv")


# ---------------------------------------------------------------------------
# verify

def test_cmd_verify_passes(tmp_path):
    out = tmp_path / "v"
    assert main(["verify", "--n-list", "2,4,8", "--out", str(out)]) == 0
    report = json.loads((out / "verify.json").read_text())
    assert report["all_pass"] is True
    claims = {r["claim"] for r in report["results"]}
    assert "preconditioned isotropy identity" in claims


def test_cmd_verify_rejects_large_n(tmp_path):
    assert main(["verify", "--n-list", "128", "--out", str(tmp_path / "x")]) == 2
