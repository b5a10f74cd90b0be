"""Bivariate Haar basis, orthonormal 2-D DFT, and restricted Fourier operators.

Conventions
-----------
Frequencies live on the grid ``{-n/2+1, ..., n/2}^2`` and are stored in
arrays at position ``(k1 % n, k2 % n)``, matching standard FFT layout.
The Fourier atom is ``phi_k(t) = exp(2j*pi*t*k/n) / sqrt(n)`` evaluated at
``t = 1..n`` (pixel index + 1), so transform coefficients are
``<phi_k, f> = sum_t conj(phi_k(t)) f(t)``, linear in ``f``.

Haar atoms are indexed by orientation ``e``, dyadic scale ``n`` and shift
``l``; the coefficient vector is ordered constant-first, then by ascending
scale with orientation blocks (0,1), (1,0), (1,1), each shift-row-major.
With that ordering the scale-``n`` block occupies ``[4**n, 4**(n+1))``.
"""

from typing import NamedTuple

import numpy as np

from .image_core import as_image, is_power_of_two

__all__ = [
    "freq_values",
    "freq_grids",
    "freq_to_index",
    "HaarIndex",
    "haar_indices",
    "haar_atom_1d",
    "haar_atom_2d",
    "haar_forward",
    "haar_inverse",
    "dft2_forward",
    "dft2_inverse",
    "partial_dft",
    "partial_dft_adjoint",
]


# ---------------------------------------------------------------------------
# frequency grid

def freq_values(n):
    """Frequency value at each storage index: 0, 1, ..., n/2, -n/2+1, ..., -1."""
    k = np.arange(n)
    return np.where(k <= n // 2, k, k - n)


def freq_grids(n):
    """Meshgrid pair (k1, k2) over the stored n x n frequency layout."""
    ks = freq_values(n)
    return np.meshgrid(ks, ks, indexing="ij")


def freq_to_index(k1, k2, n):
    """Storage position of frequency (k1, k2); rejects out-of-range input."""
    k1 = np.asarray(k1)
    k2 = np.asarray(k2)
    lo, hi = -n // 2 + 1, n // 2
    if np.any(k1 < lo) or np.any(k1 > hi) or np.any(k2 < lo) or np.any(k2 > hi):
        raise ValueError(f"frequency outside [{lo}, {hi}] for n={n}")
    return k1 % n, k2 % n


# ---------------------------------------------------------------------------
# Haar system

class HaarIndex(NamedTuple):
    """Label of a bivariate Haar atom.

    ``e = (0, 0)`` with ``n = 0``, ``l = (0, 0)`` is the constant atom;
    detail atoms use ``e`` in {(0,1), (1,0), (1,1)}, ``0 <= n < p`` and
    shifts ``0 <= l_i < 2**n``.
    """

    e: tuple
    n: int
    l: tuple


def haar_indices(p):
    """All 4**p Haar indices of the side-2**p system, in canonical order."""
    idx = [HaarIndex((0, 0), 0, (0, 0))]
    for n in range(p):
        for e in ((0, 1), (1, 0), (1, 1)):
            for l1 in range(1 << n):
                for l2 in range(1 << n):
                    idx.append(HaarIndex(e, n, (l1, l2)))
    return idx


def _check_1d_index(p, e, n, l):
    if e not in (0, 1):
        raise ValueError(f"e must be 0 or 1, got {e}")
    if not 0 <= n < p:
        raise ValueError(f"scale n must satisfy 0 <= n < {p}, got {n}")
    if not 0 <= l < (1 << n):
        raise ValueError(f"shift l must satisfy 0 <= l < {1 << n}, got {l}")


def haar_atom_1d(p, e, n, l):
    """Univariate Haar building block on 2**p points.

    ``e = 0`` is the window (constant on its dyadic interval), ``e = 1`` the
    step function (positive on the first half, negative on the second). The
    support is ``[l * 2**(p-n), (l+1) * 2**(p-n))`` and the nonzero value is
    ``2**((n-p)/2)``.
    """
    _check_1d_index(p, e, n, l)
    size = 1 << p
    wlen = 1 << (p - n)
    start = l * wlen
    v = 2.0 ** ((n - p) / 2)
    atom = np.zeros(size)
    if e == 0:
        atom[start : start + wlen] = v
    else:
        atom[start : start + wlen // 2] = v
        atom[start + wlen // 2 : start + wlen] = -v
    return atom


def haar_atom_2d(p, idx):
    """Bivariate Haar atom as a 2**p x 2**p image (tensor of 1-D atoms)."""
    e, n, l = idx
    if e == (0, 0):
        if n != 0 or l != (0, 0):
            raise ValueError(f"constant atom requires n=0, l=(0,0), got {idx}")
    elif e not in ((0, 1), (1, 0), (1, 1)):
        raise ValueError(f"invalid orientation {e}")
    return np.outer(haar_atom_1d(p, e[0], n, l[0]), haar_atom_1d(p, e[1], n, l[1]))


def haar_matrix(p):
    """Dense transform matrix: row per atom in canonical order (test oracle)."""
    size = 1 << p
    return np.array([haar_atom_2d(p, idx).ravel() for idx in haar_indices(p)]).reshape(
        size * size, size * size
    )


def haar_forward(f):
    """Bivariate Haar transform to the canonical coefficient vector.

    Computed by the recursive 2x2 butterfly scheme in O(n^2 log n); equals
    the dense matrix product with :func:`haar_matrix` rows.
    """
    f = as_image(f)
    n = f.shape[0]
    p = n.bit_length() - 1
    w = np.empty(n * n, dtype=np.complex128)
    cur = f
    for lev in range(p - 1, -1, -1):
        b00 = cur[0::2, 0::2]
        b01 = cur[0::2, 1::2]
        b10 = cur[1::2, 0::2]
        b11 = cur[1::2, 1::2]
        q = 4**lev
        w[q : 2 * q] = ((b00 - b01 + b10 - b11) / 2).ravel()
        w[2 * q : 3 * q] = ((b00 + b01 - b10 - b11) / 2).ravel()
        w[3 * q : 4 * q] = ((b00 - b01 - b10 + b11) / 2).ravel()
        cur = (b00 + b01 + b10 + b11) / 2
    w[0] = cur[0, 0]
    return w


def haar_inverse(w):
    """Inverse of :func:`haar_forward` (the transform is unitary)."""
    w = np.asarray(w, dtype=np.complex128).ravel()
    nn = w.size
    n = int(round(np.sqrt(nn)))
    if n * n != nn or not is_power_of_two(n):
        raise ValueError(f"coefficient vector length {nn} is not 4**p")
    p = n.bit_length() - 1
    cur = w[:1].reshape(1, 1)
    for lev in range(p):
        q = 4**lev
        m = 1 << lev
        d01 = w[q : 2 * q].reshape(m, m)
        d10 = w[2 * q : 3 * q].reshape(m, m)
        d11 = w[3 * q : 4 * q].reshape(m, m)
        nxt = np.empty((2 * m, 2 * m), dtype=np.complex128)
        nxt[0::2, 0::2] = (cur + d01 + d10 + d11) / 2
        nxt[0::2, 1::2] = (cur - d01 + d10 - d11) / 2
        nxt[1::2, 0::2] = (cur + d01 - d10 - d11) / 2
        nxt[1::2, 1::2] = (cur - d01 - d10 + d11) / 2
        cur = nxt
    return cur


# ---------------------------------------------------------------------------
# Fourier transforms

def _phase(n):
    # accounts for the t = index + 1 evaluation of the Fourier atoms
    return np.exp(-2j * np.pi * np.arange(n) / n)


def dft2_forward(f):
    """Orthonormal 2-D DFT; entry (k1 % n, k2 % n) equals <phi_{k1,k2}, f>."""
    f = as_image(f)
    n = f.shape[0]
    ph = _phase(n)
    return np.fft.fft2(f) / n * np.outer(ph, ph)


def dft2_inverse(spec):
    """Inverse (= adjoint) of :func:`dft2_forward`."""
    spec = np.asarray(spec, dtype=np.complex128)
    n = spec.shape[0]
    ph = np.conj(_phase(n))
    return np.fft.ifft2(spec * np.outer(ph, ph)) * n


def plan_storage_indices(plan, n):
    """Storage positions of a plan's frequencies on the n x n grid."""
    return freq_to_index(plan.freqs[:, 0], plan.freqs[:, 1], n)


def partial_dft(f, plan):
    """Fourier measurements of an image at a plan's frequencies.

    Duplicate frequencies produce repeated entries; the output is the
    row-subsample of :func:`dft2_forward` selected by the plan.
    """
    f = as_image(f)
    i1, i2 = plan_storage_indices(plan, f.shape[0])
    return dft2_forward(f)[i1, i2]


def partial_dft_adjoint(y, plan, n):
    """Adjoint of :func:`partial_dft`; duplicate frequencies accumulate."""
    y = np.asarray(y, dtype=np.complex128).ravel()
    if y.size != plan.m:
        raise ValueError(f"measurement length {y.size} != plan.m = {plan.m}")
    i1, i2 = plan_storage_indices(plan, n)
    lin = i1 * n + i2
    spec = np.bincount(lin, weights=y.real, minlength=n * n) + 1j * np.bincount(
        lin, weights=y.imag, minlength=n * n
    )
    return dft2_inverse(spec.reshape(n, n))
