"""Desk-scale checks of the structural claims behind the sampling theory.

Covers exhaustive and Monte-Carlo restricted-isometry constants, the
preconditioned measurement matrix and its isotropy identity, the per-edge
wavelet-crossing count, the per-atom TV bound, and the sorted-coefficient
decay of the Haar transform relative to the TV seminorm.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .image_core import as_image, tv_norm
from .transforms import (
    dft2_forward,
    haar_atom_2d,
    haar_forward,
    haar_indices,
    plan_storage_indices,
)

__all__ = [
    "RipEstimate",
    "rip_exact",
    "rip_monte_carlo",
    "build_preconditioned_matrix",
    "isotropy_identity_error",
    "check_edge_lemma",
    "check_atom_tv",
    "check_coeff_decay",
]

ENUMERATION_BUDGET = 10**6


@dataclass(frozen=True)
class RipEstimate:
    """Restricted isometry constant of order s.

    Exhaustive enumeration fills ``delta_exact``; random supports yield
    only the lower bound ``delta_lower_mc`` (an exhaustive run records its
    value in both fields, the exact constant being the tightest bound).
    """

    s: int
    delta_lower_mc: float
    supports_checked: int
    method: str  # "exhaustive" | "monte_carlo"
    delta_exact: float | None = None

    @property
    def delta(self):
        """Best available value: exact when known, else the lower bound."""
        return self.delta_exact if self.delta_exact is not None else self.delta_lower_mc


def _delta_over_supports(gram, supports):
    """Max spectral deviation from identity over s x s Gram submatrices."""
    supports = np.asarray(supports)
    sub = gram[supports[:, :, None], supports[:, None, :]]
    eig = np.linalg.eigvalsh(sub)
    return float(np.maximum(np.abs(eig - 1.0), np.abs(1.0 - eig)).max())


def _n_choose_s(n, s):
    out = 1
    for i in range(s):
        out = out * (n - i) // (i + 1)
    return out


def rip_exact(a, s):
    """Exact delta_s of a matrix by enumerating all size-s column supports.

    Refuses when the support count exceeds the enumeration budget; use
    :func:`rip_monte_carlo` for a seeded lower bound in that case.
    """
    a = np.asarray(a)
    n = a.shape[1]
    if not 1 <= s <= n:
        raise ValueError(f"s must be in [1, {n}], got {s}")
    count = _n_choose_s(n, s)
    if count > ENUMERATION_BUDGET:
        raise ValueError(
            f"C({n},{s}) = {count} supports exceeds the budget of {ENUMERATION_BUDGET}; "
            "use rip_monte_carlo for a lower bound"
        )
    gram = a.conj().T @ a
    supports = np.fromiter(
        (i for comb in combinations(range(n), s) for i in comb), dtype=np.intp
    ).reshape(count, s)
    delta = _delta_over_supports(gram, supports)
    return RipEstimate(s=s, delta_lower_mc=delta, supports_checked=count,
                       method="exhaustive", delta_exact=delta)


def rip_monte_carlo(a, s, trials, seed=0):
    """Lower bound on delta_s from random supports; deterministic per seed."""
    a = np.asarray(a)
    n = a.shape[1]
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    supports = np.stack([rng.choice(n, size=s, replace=False) for _ in range(trials)])
    gram = a.conj().T @ a
    delta = _delta_over_supports(gram, supports)
    return RipEstimate(s=s, delta_lower_mc=delta, supports_checked=trials,
                       method="monte_carlo")


def build_preconditioned_matrix(plan, n):
    """Dense m x n^2 matrix with rows rho_j/sqrt(m) * (Fourier row in Haar basis).

    Column k holds the measurements of the k-th Haar atom, so the matrix
    represents g-coefficients -> normalized weighted measurements. Dense
    materialization is limited to n <= 16.
    """
    if n > 16:
        raise ValueError(f"dense materialization limited to n <= 16, got {n}")
    p = n.bit_length() - 1
    i1, i2 = plan_storage_indices(plan, n)
    cols = [dft2_forward(haar_atom_2d(p, idx))[i1, i2] for idx in haar_indices(p)]
    return (plan.rho[:, None] / np.sqrt(plan.m)) * np.stack(cols, axis=1)


def isotropy_identity_error(n, density):
    """Deviation from identity of sum_j nu_j rho_j^2 conj(A_j,k1) A_j,k2.

    A ranges over the full frequency grid with rho_j = nu_j ** -0.5, so the
    weighted Gram of the preconditioned rows must be exactly the identity.
    Returns the max-abs deviation.
    """
    p = n.bit_length() - 1
    nu = density.values.ravel()
    rho2 = 1.0 / nu
    a = np.stack(
        [dft2_forward(haar_atom_2d(p, idx)).ravel() for idx in haar_indices(p)], axis=1
    )
    gram = a.conj().T @ ((nu * rho2)[:, None] * a)
    return float(np.abs(gram - np.eye(n * n)).max())


def check_edge_lemma(n):
    """Max number of Haar atoms varying across any pair of adjacent pixels.

    Scans every detail atom and counts, per adjacent pixel pair along each
    axis, how many atoms take different values on the two pixels; the
    maximum must be at most 6*p.
    """
    p = n.bit_length() - 1
    count_x = np.zeros((n - 1, n), dtype=int)
    count_y = np.zeros((n, n - 1), dtype=int)
    for idx in haar_indices(p)[1:]:
        atom = haar_atom_2d(p, idx)
        count_x += np.abs(atom[1:, :] - atom[:-1, :]) > 0
        count_y += np.abs(atom[:, 1:] - atom[:, :-1]) > 0
    return int(max(count_x.max(), count_y.max()))


def check_atom_tv(n):
    """Max anisotropic TV over all Haar atoms of the side-n system (<= 8)."""
    p = n.bit_length() - 1
    return max(tv_norm(haar_atom_2d(p, idx)) for idx in haar_indices(p))


def check_coeff_decay(f):
    """Empirical constant max_k k * |w_(k)| / ||f||_TV for a mean-zero image.

    ``w_(k)`` is the k-th largest Haar coefficient magnitude after removing
    the image mean. Constant images have no TV to compare against and are
    rejected.
    """
    f = as_image(f)
    f = f - f.mean()
    tv = tv_norm(f)
    if tv == 0:
        raise ValueError("coefficient decay is undefined for constant images")
    mags = np.sort(np.abs(haar_forward(f)))[::-1]
    k = np.arange(1, mags.size + 1)
    return float((k * mags).max() / tv)
