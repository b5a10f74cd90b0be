"""Minimal PGM (portable graymap) reading and writing.

Reads binary P5 and ASCII P2 at 8 or 16 bits; writes P5. Pixel values are
exposed as floats in [0, 1] (value / maxval) and quantized back on write.
"""

import numpy as np

__all__ = ["read_pgm", "write_pgm"]


def _tokens(data):
    """Yield whitespace-separated header tokens, skipping # comments."""
    i = 0
    while i < len(data):
        c = data[i : i + 1]
        if c.isspace():
            i += 1
        elif c == b"#":
            j = data.find(b"\n", i)
            i = len(data) if j < 0 else j + 1
        else:
            j = i
            while j < len(data) and not data[j : j + 1].isspace():
                j += 1
            yield data[i:j], j
            i = j


def read_pgm(path):
    """Read a PGM file; returns (pixels in [0,1] as float array, maxval)."""
    with open(path, "rb") as fh:
        data = fh.read()
    toks = _tokens(data)
    magic, _ = next(toks)
    if magic not in (b"P2", b"P5"):
        raise ValueError(f"not a PGM file (magic {magic!r})")
    width, _ = next(toks)
    height, _ = next(toks)
    (maxval, end) = next(toks)
    width, height, maxval = int(width), int(height), int(maxval)
    if not 0 < maxval < 65536:
        raise ValueError(f"invalid maxval {maxval}")
    count = width * height
    if magic == b"P2":
        vals = np.array(data[end:].split()[:count], dtype=np.uint32)
        if vals.size != count:
            raise ValueError("truncated P2 pixel data")
    else:
        # single whitespace byte separates header from raster
        raw = data[end + 1 :]
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        if len(raw) < need:
            raise ValueError("truncated P5 pixel data")
        vals = np.frombuffer(raw[:need], dtype=dtype).astype(np.uint32)
    if vals.max(initial=0) > maxval:
        raise ValueError("pixel value exceeds maxval")
    return vals.reshape(height, width).astype(float) / maxval, maxval


def write_pgm(path, pixels, maxval=255):
    """Write float pixels in [0, 1] as a binary P5 file at the given depth."""
    if not 0 < maxval < 65536:
        raise ValueError(f"invalid maxval {maxval}")
    arr = np.clip(np.asarray(pixels, dtype=float), 0.0, 1.0)
    quant = np.rint(arr * maxval).astype(np.dtype(">u2") if maxval > 255 else np.dtype("u1"))
    header = f"P5\n{arr.shape[1]} {arr.shape[0]}\n{maxval}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(quant.tobytes())


def write_pbm_mask(path, mask):
    """Write a boolean mask as an 8-bit PGM (white where True)."""
    write_pgm(path, np.where(np.asarray(mask, bool), 1.0, 0.0), maxval=255)
