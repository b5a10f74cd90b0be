"""Sampling densities over the frequency grid, i.i.d. plans, and masks.

Density values are stored on the same ``(k1 % n, k2 % n)`` layout as
spectra. Stochastic plans carry preconditioning weights
``rho_j = eta(omega_j) ** -0.5`` derived from the generating density;
deterministic masks carry ``rho = 1``.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .image_core import is_power_of_two
from .transforms import freq_grids, freq_values

__all__ = [
    "Density",
    "SamplingPlan",
    "density_uniform",
    "density_inverse_square",
    "density_power_law",
    "density_inverse_max",
    "density_from_kappa",
    "draw_plan",
    "deterministic_mask",
]

GENERATOR_ID = "pcg64"  # numpy default_rng bit generator


@dataclass(frozen=True, eq=False)
class Density:
    """Probability mass over the n x n frequency grid (storage layout)."""

    values: np.ndarray
    label: str
    params: dict = field(default_factory=dict)
    degenerate: bool = False

    @property
    def n(self):
        return self.values.shape[0]

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1] or not is_power_of_two(v.shape[0]):
            raise ValueError(f"density grid must be square power-of-two, got {v.shape}")
        if np.any(v < 0):
            raise ValueError("density entries must be nonnegative")
        if abs(v.sum() - 1.0) > 1e-12:
            raise ValueError(f"density must sum to 1, got {v.sum()!r}")


@dataclass(frozen=True, eq=False)
class SamplingPlan:
    """m drawn frequencies (duplicates allowed) plus preconditioning weights.

    ``freqs`` is an (m, 2) integer array of (k1, k2) values; ``rho`` the m
    positive weights. ``seed``/``generator`` record how a stochastic plan
    was drawn so it can be reproduced exactly.
    """

    n: int
    freqs: np.ndarray
    rho: np.ndarray
    density_label: str
    seed: int | None = None
    generator: str | None = None

    @property
    def m(self):
        return self.freqs.shape[0]

    def __post_init__(self):
        if self.freqs.ndim != 2 or self.freqs.shape[1] != 2:
            raise ValueError("freqs must be an (m, 2) array")
        if self.rho.shape != (self.freqs.shape[0],):
            raise ValueError("rho length must match the number of frequencies")
        if np.any(self.rho <= 0):
            raise ValueError("rho entries must be positive")
        lo, hi = -self.n // 2 + 1, self.n // 2
        if self.freqs.min() < lo or self.freqs.max() > hi:
            raise ValueError(f"plan frequencies outside [{lo}, {hi}]")

    def mask(self):
        """Boolean n x n array, True where a frequency was drawn at least once."""
        out = np.zeros((self.n, self.n), dtype=bool)
        out[self.freqs[:, 0] % self.n, self.freqs[:, 1] % self.n] = True
        return out

    def to_csv(self, path):
        """Write rows (j, k1, k2, rho)."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j", "k1", "k2", "rho"])
            for j in range(self.m):
                w.writerow([j, int(self.freqs[j, 0]), int(self.freqs[j, 1]),
                            repr(float(self.rho[j]))])

    @classmethod
    def from_csv(cls, path, n, density_label="csv"):
        freqs, rho = [], []
        with open(path, newline="") as fh:
            for row in csv.DictReader(fh):
                freqs.append((int(row["k1"]), int(row["k2"])))
                rho.append(float(row["rho"]))
        return cls(n=n, freqs=np.array(freqs, dtype=int), rho=np.array(rho),
                   density_label=density_label)


def _normalized(mass, label, params, degenerate=False):
    return Density(values=mass / mass.sum(), label=label, params=params,
                   degenerate=degenerate)


def density_uniform(n):
    """Uniform density, 1/n^2 per frequency."""
    return _normalized(np.ones((n, n)), "uniform", {"alpha": 0.0})


def density_inverse_square(n, cap=1.0):
    """Density proportional to min(cap, 1/(k1^2 + k2^2)).

    The cap makes the mass finite at the zero frequency; with the default
    ``cap=1`` it binds only at radius <= 1.
    """
    k1, k2 = freq_grids(n)
    r2 = k1.astype(float) ** 2 + k2.astype(float) ** 2
    inv = np.divide(1.0, r2, out=np.full_like(r2, np.inf), where=r2 > 0)
    return _normalized(np.minimum(cap, inv), "inv-square", {"cap": cap})


def density_power_law(n, alpha):
    """Density proportional to (k1^2 + k2^2 + 1) ** (-alpha/2).

    ``alpha = 0`` is uniform. ``alpha = inf`` degenerates to a point mass at
    the zero frequency and is flagged so it cannot be drawn stochastically;
    use ``deterministic_mask(n, "lowest_frequencies", m=...)`` instead.
    """
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if math.isinf(alpha):
        mass = np.zeros((n, n))
        mass[0, 0] = 1.0
        return _normalized(mass, "power:inf", {"alpha": math.inf}, degenerate=True)
    k1, k2 = freq_grids(n)
    mass = (k1.astype(float) ** 2 + k2.astype(float) ** 2 + 1.0) ** (-alpha / 2)
    return _normalized(mass, f"power:{alpha:g}", {"alpha": float(alpha)})


def density_inverse_max(n):
    """Density proportional to min(1, 1/max(|k1|, |k2|))."""
    k1, k2 = freq_grids(n)
    mx = np.maximum(np.abs(k1), np.abs(k2)).astype(float)
    inv = np.divide(1.0, mx, out=np.full_like(mx, np.inf), where=mx > 0)
    return _normalized(np.minimum(1.0, inv), "inv-max", {})


def density_from_kappa(kappa_table, label="kappa"):
    """Density proportional to the square of a positive coherence-bound table."""
    kap = np.asarray(kappa_table, dtype=float)
    if np.any(kap <= 0):
        raise ValueError("kappa entries must be positive")
    return _normalized(kap**2, label, {})


def draw_plan(density, m, seed):
    """Draw m i.i.d. frequencies (with replacement) from a density.

    Uses inverse-CDF sampling over the flattened grid with a seeded PCG64
    generator, so a given (density, m, seed) always yields the same plan.
    Weights are ``rho_j = eta(omega_j) ** -0.5``.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if density.degenerate:
        raise ValueError(
            f"density {density.label!r} is degenerate and cannot be sampled; "
            "use deterministic_mask(n, 'lowest_frequencies', m=...)"
        )
    n = density.n
    flat = density.values.ravel()
    cdf = np.cumsum(flat)
    cdf[-1] = 1.0
    rng = np.random.default_rng(seed)
    lin = np.searchsorted(cdf, rng.random(m), side="right")
    i1, i2 = np.unravel_index(lin, (n, n))
    ks = freq_values(n)
    freqs = np.stack([ks[i1], ks[i2]], axis=1)
    rho = 1.0 / np.sqrt(flat[lin])
    return SamplingPlan(n=n, freqs=freqs, rho=rho, density_label=density.label,
                        seed=int(seed), generator=GENERATOR_ID)


def _lowest_frequencies(n, m):
    k1, k2 = freq_grids(n)
    k1 = k1.ravel()
    k2 = k2.ravel()
    r2 = k1.astype(float) ** 2 + k2**2
    ang = np.mod(np.arctan2(k2, k1), 2 * np.pi)
    order = np.lexsort((np.arange(n * n), ang, r2))
    sel = order[:m]
    return np.stack([k1[sel], k2[sel]], axis=1)


def _radial_lines(n, lines):
    lo, hi = -n // 2 + 1, n // 2
    pts = set()
    for i in range(lines):
        theta = np.pi * i / lines
        c, s = np.cos(theta), np.sin(theta)
        if abs(c) >= abs(s):
            for k1 in range(lo, hi + 1):
                k2 = int(round(k1 * s / c))
                if lo <= k2 <= hi:
                    pts.add((k1, k2))
        else:
            for k2 in range(lo, hi + 1):
                k1 = int(round(k2 * c / s))
                if lo <= k1 <= hi:
                    pts.add((k1, k2))
    return np.array(sorted(pts), dtype=int)


def deterministic_mask(n, variant, m=None, lines=None, seed=0):
    """Structured sampling plans: lowpass, radial lines, or uniform draws.

    ``lowest_frequencies``: the m frequencies of smallest k1^2 + k2^2, ties
    broken by angle then storage index, with rho = 1.
    ``radial_lines``: lattice points of ``lines`` equispaced-angle digital
    lines through the origin, with rho = 1.
    ``uniform_grid``: m i.i.d. uniform draws (a :func:`draw_plan` variant,
    so rho = n follows from the uniform density).
    """
    if variant == "lowest_frequencies":
        if m is None or not 1 <= m <= n * n:
            raise ValueError(f"lowest_frequencies requires 1 <= m <= {n * n}")
        freqs = _lowest_frequencies(n, m)
        return SamplingPlan(n=n, freqs=freqs, rho=np.ones(m), density_label="lowpass")
    if variant == "radial_lines":
        if lines is None or lines < 1:
            raise ValueError("radial_lines requires lines >= 1")
        freqs = _radial_lines(n, lines)
        return SamplingPlan(n=n, freqs=freqs, rho=np.ones(len(freqs)),
                            density_label=f"radial:{lines}")
    if variant == "uniform_grid":
        if m is None or m < 1:
            raise ValueError("uniform_grid requires m >= 1")
        return draw_plan(density_uniform(n), m, seed)
    raise ValueError(f"unknown mask variant {variant!r}")
