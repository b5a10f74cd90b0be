"""Command-line front end: coherence tables, masks, reconstructions, sweeps.

Commands emit tidy CSV/JSON artifacts plus a run manifest that pins every
input (seeds included), so a run can be reproduced bit-exactly from its
manifest. Plotting is left to external tools.

Exit codes: 0 success, 2 invalid input, 3 solver non-convergence,
4 verification failure.
"""

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .coherence import (
    kappa_l2,
    kappa_prime_table,
    kappa_table,
    local_coherence_exact,
    univariate_coherence_bound_check,
)
from .image_core import is_power_of_two
from .pgm import read_pgm, write_pbm_mask, write_pgm
from .sampling import (
    SamplingPlan,
    density_from_kappa,
    density_inverse_max,
    density_inverse_square,
    density_power_law,
    density_uniform,
    deterministic_mask,
    draw_plan,
)
from .solvers import SolverOptions, add_noise, l1_haar_reconstruct, tv_min_reconstruct
from .transforms import freq_values, partial_dft
from .verify import (
    build_preconditioned_matrix,
    check_atom_tv,
    check_coeff_decay,
    check_edge_lemma,
    isotropy_identity_error,
    rip_exact,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3
EXIT_VERIFY_FAILED = 4

NOISE_SEED_OFFSET = 1_000_003  # keeps plan and noise streams decoupled


class CliError(Exception):
    pass


@dataclass(frozen=True)
class RunManifest:
    command: str
    image: str | None
    n: int
    density: str | None
    m: int | None
    seed: int | None
    epsilon: float | None
    noise_model: str | None
    solver: str | None
    solver_options: dict | None
    out_dir: str
    version: str

    def write(self, path):
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _write_grid_csv(path, n, values):
    ks = freq_values(n)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k1", "k2", "value"])
        for i1 in range(n):
            for i2 in range(n):
                w.writerow([int(ks[i1]), int(ks[i2]), repr(float(values[i1, i2]))])


def _parse_density_spec(spec):
    """Split a --density value into (kind, parameter)."""
    if spec in ("uniform", "inv-square", "inv-max", "lowpass"):
        return spec, None
    if spec.startswith("power:"):
        arg = spec.split(":", 1)[1]
        alpha = math.inf if arg in ("inf", "Inf", "INF") else float(arg)
        if alpha < 0:
            raise CliError(f"power-law exponent must be >= 0, got {alpha}")
        return "power", alpha
    if spec.startswith("radial:"):
        lines = int(spec.split(":", 1)[1])
        if lines < 1:
            raise CliError("radial line count must be >= 1")
        return "radial", lines
    raise CliError(f"unknown density spec {spec!r}")


def _build_plan(n, spec, m, seed):
    kind, param = _parse_density_spec(spec)
    if kind == "lowpass" or (kind == "power" and math.isinf(param)):
        if m is None:
            raise CliError("lowpass sampling requires --m")
        return deterministic_mask(n, "lowest_frequencies", m=m)
    if kind == "radial":
        return deterministic_mask(n, "radial_lines", lines=param)
    if m is None:
        raise CliError(f"density {spec!r} requires --m")
    if kind == "uniform":
        density = density_uniform(n)
    elif kind == "inv-square":
        density = density_inverse_square(n)
    elif kind == "inv-max":
        density = density_inverse_max(n)
    else:
        density = density_power_law(n, param)
    return draw_plan(density, m, seed)


def _check_n(n, limit=256):
    if not is_power_of_two(n) or n < 2 or n > limit:
        raise CliError(f"--n must be a power of two in [2, {limit}], got {n}")


# ---------------------------------------------------------------------------
# coherence

def cmd_coherence(args):
    _check_n(args.n)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    n = args.n
    p = n.bit_length() - 1

    mu = local_coherence_exact(n)
    kap = kappa_table(n)
    kapp = kappa_prime_table(n)
    _write_grid_csv(out / "coherence_map.csv", n, mu)
    _write_grid_csv(out / "kappa.csv", n, kap)
    _write_grid_csv(out / "kappa_prime.csv", n, kapp)

    uni = univariate_coherence_bound_check(n)
    l2k = kappa_l2(n, "kappa")
    l2kp = kappa_l2(n, "kappa_prime")
    checks = [
        {"claim": "local_coherence <= kappa", "bound": 1e-9,
         "measured": float((mu - kap).max()), "pass": bool((mu <= kap + 1e-9).all())},
        {"claim": "kappa <= kappa_prime", "bound": 0.0,
         "measured": float((kap - kapp).max()), "pass": bool((kap <= kapp + 1e-15).all())},
        {"claim": "univariate ratio <= 1", "bound": 1.0,
         "measured": uni["max_ratio"], "pass": bool(uni["max_ratio"] <= 1.0)},
        {"claim": "corollary ratio <= 1", "bound": 1.0,
         "measured": uni["max_corollary_ratio"],
         "pass": bool(uni["max_corollary_ratio"] <= 1.0)},
    ]
    if p >= 8:
        bound = 52 * math.sqrt(p)
        checks.append({"claim": "kappa_prime l2 <= 52 sqrt(p)", "bound": bound,
                       "measured": l2kp, "pass": bool(l2kp <= bound)})
    report = {"n": n, "kappa_l2": l2k, "kappa_prime_l2": l2kp, "checks": checks}
    with open(out / "report.json", "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")

    RunManifest("coherence", None, n, None, None, None, None, None, None, None,
                str(out), __version__).write(out / "manifest.json")
    for c in checks:
        print(f"[{'PASS' if c['pass'] else 'FAIL'}] {c['claim']}: measured {c['measured']:.6g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sample

def cmd_sample(args):
    _check_n(args.n)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    plan = _build_plan(args.n, args.density, args.m, args.seed)
    plan.to_csv(out / "plan.csv")
    write_pbm_mask(out / "mask.pgm", np.fft.fftshift(plan.mask()))
    RunManifest("sample", None, args.n, args.density, plan.m, args.seed, None, None,
                None, None, str(out), __version__).write(out / "manifest.json")
    print(f"wrote plan with m={plan.m} ({plan.m - len(set(map(tuple, plan.freqs)))} duplicate draws)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# reconstruct

def _solver_options(args):
    return SolverOptions(
        max_iters=args.max_iters,
        primal_tol=args.primal_tol,
        dual_tol=args.dual_tol,
        noise_model=args.noise_model,
        epsilon=args.eps,
    )


def _load_image(path):
    pixels, maxval = read_pgm(path)
    if pixels.shape[0] != pixels.shape[1] or not is_power_of_two(pixels.shape[0]):
        raise CliError(f"image must be square with power-of-two side, got {pixels.shape}")
    return pixels, maxval


def _reconstruct_once(f, plan, eps, noise_model, solver, opts, noise_seed):
    clean = partial_dft(f, plan)
    y = add_noise(clean, plan, eps, model=noise_model, seed=noise_seed)
    solve = tv_min_reconstruct if solver == "tv" else l1_haar_reconstruct
    recon, report = solve(y, plan, opts)
    err = float(np.linalg.norm(recon - f) / np.linalg.norm(f))
    return recon, report, err


def cmd_reconstruct(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    f, maxval = _load_image(args.image)
    n = f.shape[0]
    if args.plan:
        plan = SamplingPlan.from_csv(args.plan, n)
    else:
        if args.density is None:
            raise CliError("either --plan or --density is required")
        plan = _build_plan(n, args.density, args.m, args.seed)
    opts = _solver_options(args)
    recon, report, err = _reconstruct_once(
        f, plan, args.eps, args.noise_model, args.solver, opts,
        args.seed + NOISE_SEED_OFFSET,
    )

    write_pgm(out / "recon.pgm", np.clip(recon.real, 0.0, 1.0), maxval=maxval)
    if np.abs(recon.imag).max() > 1e-6:
        with open(out / "recon_complex.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t1", "t2", "real", "imag"])
            for t1 in range(n):
                for t2 in range(n):
                    w.writerow([t1, t2, repr(float(recon[t1, t2].real)),
                                repr(float(recon[t1, t2].imag))])
    with open(out / "error.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["quantity", "value"])
        w.writerow(["relative_l2_error", repr(err)])
    with open(out / "report.json", "w") as fh:
        json.dump(asdict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")
    plan.to_csv(out / "plan.csv")
    RunManifest("reconstruct", args.image, n, args.density, plan.m, args.seed,
                args.eps, args.noise_model, args.solver, asdict(opts), str(out),
                __version__).write(out / "manifest.json")
    print(f"relative l2 error: {err:.6g} (converged={report.converged}, "
          f"iterations={report.iterations})")
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


# ---------------------------------------------------------------------------
# sweep

def _sweep_cell(task):
    """One (alpha, eps, trial) cell; returns a result row dict."""
    (image_path, alpha, eps, trial, m, seed, noise_model, solver,
     max_iters, primal_tol, dual_tol) = task
    f, _ = read_pgm(image_path)
    n = f.shape[0]
    try:
        if math.isinf(alpha):
            plan = deterministic_mask(n, "lowest_frequencies", m=m)
        else:
            plan = draw_plan(density_power_law(n, alpha), m, seed)
        opts = SolverOptions(max_iters=max_iters, primal_tol=primal_tol,
                             dual_tol=dual_tol, noise_model=noise_model, epsilon=eps)
        _, report, err = _reconstruct_once(f, plan, eps, noise_model, solver, opts,
                                           seed + NOISE_SEED_OFFSET)
        return {"alpha": alpha, "epsilon": eps, "trial": trial, "m": m,
                "error": err, "seed": seed, "converged": report.converged,
                "status": "ok"}
    except Exception as exc:  # noqa: BLE001 - cell failures must not kill the sweep
        return {"alpha": alpha, "epsilon": eps, "trial": trial, "m": m,
                "error": float("nan"), "seed": seed, "converged": False,
                "status": f"error: {exc}"}


def cmd_sweep(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _load_image(args.image)  # validate early
    alphas = [math.inf if a.strip() in ("inf", "Inf", "INF") else float(a)
              for a in args.alphas.split(",")]
    eps_list = [float(e) for e in args.eps_list.split(",")]
    if args.m is None:
        raise CliError("sweep requires --m")

    tasks = []
    cell = 0
    for alpha in alphas:
        for eps in eps_list:
            for trial in range(args.trials):
                tasks.append((args.image, alpha, eps, trial, args.m,
                              args.seed + cell, args.noise_model, args.solver,
                              args.max_iters, args.primal_tol, args.dual_tol))
                cell += 1

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_cell, tasks))
    else:
        rows = [_sweep_cell(t) for t in tasks]

    with open(out / "sweep.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["alpha", "epsilon", "trial", "m", "error",
                                           "seed", "converged", "status"])
        w.writeheader()
        w.writerows(rows)
    RunManifest("sweep", args.image, 0, f"power:{args.alphas}", args.m, args.seed,
                None, args.noise_model, args.solver,
                {"eps_list": eps_list, "trials": args.trials, "jobs": args.jobs},
                str(out), __version__).write(out / "manifest.json")
    bad = sum(r["status"] != "ok" for r in rows)
    print(f"sweep finished: {len(rows)} cells, {bad} failed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    n_list = [int(v) for v in args.n_list.split(",")]
    for n in n_list:
        _check_n(n, limit=64)

    results = []
    for n in n_list:
        p = n.bit_length() - 1
        edge = check_edge_lemma(n)
        results.append({"claim": "edge crossings <= 6p", "n": n, "bound": 6 * p,
                        "measured": edge, "pass": edge <= 6 * p})
        atom_tv = check_atom_tv(n)
        results.append({"claim": "atom TV <= 8", "n": n, "bound": 8.0,
                        "measured": atom_tv, "pass": atom_tv <= 8.0 + 1e-9})
        uni = univariate_coherence_bound_check(n)
        results.append({"claim": "univariate ratio <= 1", "n": n, "bound": 1.0,
                        "measured": uni["max_ratio"], "pass": uni["max_ratio"] <= 1.0})

    iso = isotropy_identity_error(8, density_from_kappa(kappa_table(8)))
    results.append({"claim": "preconditioned isotropy identity", "n": 8,
                    "bound": 1e-10, "measured": iso, "pass": iso <= 1e-10})

    ks = freq_values(8)
    freqs = np.stack(np.meshgrid(ks, ks, indexing="ij"), axis=-1).reshape(-1, 2)
    full = SamplingPlan(n=8, freqs=freqs, rho=np.full(64, 8.0), density_label="full")
    delta = rip_exact(build_preconditioned_matrix(full, 8), 2).delta
    results.append({"claim": "full-sampling RIP delta_2 = 0", "n": 8, "bound": 1e-10,
                    "measured": delta, "pass": delta <= 1e-10})

    mean_zero = np.add.outer(np.linspace(-1, 1, 16), np.linspace(-1, 1, 16))
    decay = check_coeff_decay(mean_zero)
    results.append({"claim": "coefficient decay constant finite", "n": 16,
                    "bound": None, "measured": decay, "pass": math.isfinite(decay)})

    all_pass = all(r["pass"] for r in results)
    with open(out / "verify.json", "w") as fh:
        json.dump({"all_pass": all_pass, "results": results}, fh, indent=2,
                  sort_keys=True, default=float)
        fh.write("\n")
    RunManifest("verify", None, max(n_list), None, None, None, None, None, None,
                {"n_list": n_list}, str(out), __version__).write(out / "manifest.json")
    for r in results:
        print(f"[{'PASS' if r['pass'] else 'FAIL'}] n={r['n']} {r['claim']}: "
              f"{r['measured']:.6g}")
    return EXIT_OK if all_pass else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# parser

def _add_common_solver_flags(sp):
    sp.add_argument("--eps", type=float, default=0.0, help="noise level epsilon")
    sp.add_argument("--noise-model", choices=["weighted", "unweighted"],
                    default="unweighted")
    sp.add_argument("--solver", choices=["tv", "haar"], default="tv")
    sp.add_argument("--max-iters", type=int, default=20000)
    sp.add_argument("--primal-tol", type=float, default=1e-6)
    sp.add_argument("--dual-tol", type=float, default=1e-6)


def build_parser():
    ap = argparse.ArgumentParser(prog="vdfourier",
                                 description="Variable-density Fourier compressive imaging")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("coherence", help="exact coherence map and bound report")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_coherence)

    sp = sub.add_parser("sample", help="draw a sampling plan and mask image")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--density", required=True,
                    help="uniform|inv-square|inv-max|power:<a>|lowpass|radial:<L>")
    sp.add_argument("--m", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("reconstruct", help="reconstruct a PGM image from partial DFT")
    sp.add_argument("--image", required=True)
    sp.add_argument("--plan", help="existing plan CSV (overrides --density)")
    sp.add_argument("--density")
    sp.add_argument("--m", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    _add_common_solver_flags(sp)
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("sweep", help="error table over power-law exponents and noise")
    sp.add_argument("--image", required=True)
    sp.add_argument("--alphas", required=True, help="comma list, e.g. 0,2,4,inf")
    sp.add_argument("--eps-list", default="0")
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", required=True)
    _add_common_solver_flags(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run the structural verification suite")
    sp.add_argument("--n-list", default="2,4,8,16,32,64")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_verify)

    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
