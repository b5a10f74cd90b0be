"""Constrained TV and l1-Haar reconstruction from partial Fourier data.

Both programs minimize a seminorm subject to the weighted data-fit ball

    || rho o (F_Omega g - y) ||_2 <= eps * sqrt(m)        (weighted)
    ||        F_Omega g - y  ||_2 <= eps * sqrt(m)        (unweighted)

via a first-order primal-dual splitting (PDHG). The measurement rows are
given per-row dual step sizes proportional to 1/rho_j^2, which equalizes
their scales; the resulting dual update is an l2-ball projection in a
diagonal metric, solved by a scalar Newton iteration (it reduces to the
closed-form projection when the steps are uniform, e.g. unweighted mode).
"""

from dataclasses import dataclass

import numpy as np

from .image_core import gradient_adjoint, lp_norm
from .transforms import (
    dft2_forward,
    dft2_inverse,
    haar_forward,
    haar_inverse,
    plan_storage_indices,
)

__all__ = [
    "SolverOptions",
    "SolverReport",
    "tv_min_reconstruct",
    "l1_haar_reconstruct",
    "add_noise",
]


@dataclass(frozen=True)
class SolverOptions:
    """Iteration controls for the primal-dual solvers.

    ``tau``/``sigma`` default to automatic steps from a power-method
    estimate of the stacked operator norm, with the dual side favored by
    ``step_balance`` (their product must satisfy tau * sigma * L**2 <= 1).
    ``epsilon`` is the noise level entering the constraint radius
    eps * sqrt(m).
    """

    max_iters: int = 20000
    primal_tol: float = 1e-6
    dual_tol: float = 1e-6
    tau: float | None = None
    sigma: float | None = None
    noise_model: str = "unweighted"
    epsilon: float = 0.0
    step_balance: float = 10.0
    power_iters: int = 50
    check_every: int = 50

    def __post_init__(self):
        if self.noise_model not in ("weighted", "unweighted"):
            raise ValueError(f"noise_model must be weighted|unweighted, got {self.noise_model!r}")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


@dataclass(frozen=True)
class SolverReport:
    iterations: int
    primal_residual: float
    constraint_violation: float
    objective: float
    converged: bool


def _prox_dual_ball(v, sig, b, r):
    """argmin_z r*||z|| + Re<b, z> + (1/2) * sum |z_j - v_j|^2 / sig_j.

    The dual prox of the indicator of the ball {w : ||w - b|| <= r} under a
    diagonal step metric. ``sig`` may be a scalar (closed form) or a vector,
    in which case the radial scalar t solves sum |a_j|^2/(t + r*sig_j)^2 = 1.
    """
    a = v - sig * b
    if r == 0.0:
        return a
    if np.isscalar(sig) or np.ptp(sig) == 0.0:
        s = sig if np.isscalar(sig) else sig.flat[0]
        na = np.linalg.norm(a)
        t = na - r * s
        if t <= 0:
            return np.zeros_like(a)
        return a * (t / na)
    a2 = np.abs(a) ** 2
    if np.sum(a2 / (r * sig) ** 2) <= 1.0:
        return np.zeros_like(a)
    # phi(t) = sum a2/(t + r sig)^2 is convex decreasing: Newton from the
    # left bracket t >= ||a|| - r*max(sig) converges monotonically
    t = max(np.sqrt(a2.sum()) - r * sig.max(), 1e-300)
    for _ in range(80):
        den = t + r * sig
        phi = np.sum(a2 / den**2)
        if abs(phi - 1.0) < 1e-13:
            break
        dphi = -2.0 * np.sum(a2 / den**3)
        step = (phi - 1.0) / dphi
        t = t / 2 if t - step <= 0 else t - step
    return a * (t / (t + r * sig))


class _Measurement:
    """Weighted restricted-Fourier operator g -> D (F_Omega g) for a plan."""

    def __init__(self, plan, weighted):
        self.n = plan.n
        self.m = plan.m
        i1, i2 = plan_storage_indices(plan, plan.n)
        self.lin = i1 * plan.n + i2
        self.d = plan.rho.astype(float) if weighted else np.ones(plan.m)

    def apply(self, g):
        return self.d * dft2_forward(g).ravel()[self.lin]

    def adjoint(self, z):
        w = self.d * z
        nn = self.n * self.n
        spec = np.bincount(self.lin, weights=w.real, minlength=nn) + 1j * np.bincount(
            self.lin, weights=w.imag, minlength=nn
        )
        return dft2_inverse(spec.reshape(self.n, self.n))


def _operator_norm(k1, k1t, meas, sig_pat, n, iters):
    """Power-method estimate of ||[K1; sqrt(sig_pat) M]||."""
    rng = np.random.default_rng(0)
    v = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    v /= np.linalg.norm(v)
    lam = 1.0
    for _ in range(iters):
        u = k1t(k1(v)) + meas.adjoint(sig_pat * meas.apply(v))
        lam = np.linalg.norm(u)
        v = u / lam
    return float(np.sqrt(lam))


def _solve(y, plan, opts, k1, k1t):
    y = np.asarray(y, dtype=np.complex128).ravel()
    if y.size != plan.m:
        raise ValueError(f"measurement length {y.size} != plan.m = {plan.m}")
    n = plan.n
    meas = _Measurement(plan, weighted=opts.noise_model == "weighted")
    b = meas.d * y
    radius = opts.epsilon * np.sqrt(plan.m)
    viol_tol = opts.dual_tol * np.sqrt(plan.m) * max(opts.epsilon, 1.0)

    sig_pat = 1.0 / meas.d**2
    lam = _operator_norm(k1, k1t, meas, sig_pat, n, opts.power_iters) * 1.01
    if (opts.tau is None) != (opts.sigma is None):
        raise ValueError("tau and sigma must be given together or both left automatic")
    if opts.tau is not None:
        tau, sig_base = opts.tau, opts.sigma
        if tau * sig_base * lam**2 > 1.01:
            raise ValueError(
                f"tau*sigma*L^2 = {tau * sig_base * lam**2:.3g} exceeds 1 (L ~ {lam:.3g})"
            )
    else:
        sig_base = opts.step_balance / lam
        tau = 1.0 / (opts.step_balance * lam)
    sig_m = sig_base * sig_pat

    def objective(g):
        return sum(lp_norm(part, 1) for part in k1(g))

    def violation(g):
        return max(0.0, float(np.linalg.norm(meas.apply(g) - b)) - radius)

    g = np.zeros((n, n), dtype=np.complex128)
    gbar = g
    q = tuple(np.zeros_like(part) for part in k1(g))
    z = np.zeros(plan.m, dtype=np.complex128)

    obj_prev = objective(g)
    rel_change = np.inf
    viol = violation(g)
    converged = False
    it = 0
    for it in range(1, opts.max_iters + 1):
        parts = k1(gbar)
        q = tuple(
            (qi + sig_base * pi) / np.maximum(1.0, np.abs(qi + sig_base * pi))
            for qi, pi in zip(q, parts)
        )
        z = _prox_dual_ball(z + sig_m * meas.apply(gbar), sig_m, b, radius)
        g_old = g
        g = g - tau * (k1t(q) + meas.adjoint(z))
        gbar = 2 * g - g_old
        if it % opts.check_every == 0:
            obj = objective(g)
            viol = violation(g)
            rel_change = abs(obj - obj_prev) / max(abs(obj), 1e-30)
            obj_prev = obj
            if it >= 2 * opts.check_every and rel_change <= opts.primal_tol and viol <= viol_tol:
                converged = True
                break

    report = SolverReport(
        iterations=it,
        primal_residual=float(rel_change),
        constraint_violation=float(violation(g)),
        objective=float(objective(g)),
        converged=converged,
    )
    return g, report


def tv_min_reconstruct(y, plan, opts=None):
    """Minimize the anisotropic TV of g subject to the data-fit ball.

    Returns the reconstructed image and a :class:`SolverReport`;
    non-convergence within ``max_iters`` is reported, never raised.
    """
    opts = opts or SolverOptions()

    def k1(g):
        return (g[1:, :] - g[:-1, :], g[:, 1:] - g[:, :-1])

    def k1t(q):
        return gradient_adjoint(q[0], q[1])

    return _solve(y, plan, opts, k1, k1t)


def l1_haar_reconstruct(y, plan, opts=None):
    """Minimize the l1 norm of the Haar coefficients of g subject to the ball."""
    opts = opts or SolverOptions()

    def k1(g):
        return (haar_forward(g),)

    def k1t(q):
        return haar_inverse(q[0])

    return _solve(y, plan, opts, k1, k1t)


def add_noise(clean, plan, eps, model="weighted", seed=0):
    """Corrupt measurements with complex Gaussian noise of exact level eps.

    The noise vector is rescaled so that ||rho o xi||_2 (weighted model) or
    ||xi||_2 (unweighted model) equals eps * sqrt(m) exactly; eps = 0
    returns the input unchanged.
    """
    if model not in ("weighted", "unweighted"):
        raise ValueError(f"model must be weighted|unweighted, got {model!r}")
    clean = np.asarray(clean, dtype=np.complex128).ravel()
    if clean.size != plan.m:
        raise ValueError(f"measurement length {clean.size} != plan.m = {plan.m}")
    if eps == 0:
        return clean.copy()
    rng = np.random.default_rng(seed)
    xi = rng.standard_normal(plan.m) + 1j * rng.standard_normal(plan.m)
    w = plan.rho * xi if model == "weighted" else xi
    return clean + xi * (eps * np.sqrt(plan.m) / np.linalg.norm(w))
