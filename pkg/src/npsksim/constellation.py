"""n-PSK alphabet: unit-circle symbol mapping, Gray labels and angular slicing.

Symbols live at angles 2*pi*m/n (zero offset); any global rotation of the
constellation is absorbed downstream by the carrier phase estimator.
"""

import numpy as np

__all__ = [
    "validate_order",
    "bits_per_symbol",
    "constellation",
    "modulate",
    "slice_symbols",
    "gray_labels",
    "gray_encode",
    "gray_decode",
    "random_symbols",
]

_TWO_PI = 2.0 * np.pi


def validate_order(order: int) -> int:
    """Check that a constellation size is a power of two >= 2 and return it."""
    n = int(order)
    if n != order or n < 2 or n & (n - 1):
        raise ValueError(f"modulation order must be a power of two >= 2, got {order!r}")
    return n


def bits_per_symbol(order: int) -> int:
    return validate_order(order).bit_length() - 1


def constellation(order: int) -> np.ndarray:
    """All n constellation points, index m at angle 2*pi*m/n."""
    n = validate_order(order)
    return np.exp(2j * np.pi * np.arange(n) / n)


def modulate(m, order: int):
    """Map symbol index(es) to unit-modulus constellation point(s).

    Accepts a scalar index or an integer array; returns complex of the same
    shape. Indices outside [0, n) are rejected.
    """
    n = validate_order(order)
    idx = np.asarray(m)
    if not np.issubdtype(idx.dtype, np.integer):
        raise ValueError("symbol indices must be integers")
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError(f"symbol index out of range [0, {n})")
    out = np.exp(2j * np.pi * idx / n)
    return complex(out) if np.isscalar(m) else out


def slice_symbols(y, order: int):
    """Angular minimum-distance decision: nearest index for each sample.

    Decision boundaries sit at odd multiples of pi/n. A sample exactly on a
    boundary is assigned to the lower of the two adjacent indices, so ties are
    deterministic. Zero samples have no angle and are rejected.
    """
    n = validate_order(order)
    samples = np.asarray(y, dtype=np.complex128)
    if np.any(samples == 0):
        raise ValueError("cannot slice a zero sample (angle undefined)")
    ang = np.angle(samples)
    v = ang * n / _TWO_PI
    upper = np.floor(v + 0.5)
    idx = upper.astype(np.int64) % n
    tie = v + 0.5 == upper
    if np.any(tie):
        u = upper.astype(np.int64)
        idx = np.where(tie, np.minimum(u % n, (u - 1) % n), idx)
    return int(idx) if np.isscalar(y) else idx


def gray_labels(order: int) -> np.ndarray:
    """Binary-reflected Gray label (as an integer) for every index.

    Angular neighbours differ in exactly one bit, including the wrap from
    n-1 back to 0, so a single adjacent-region decision error flips one bit.
    """
    n = validate_order(order)
    m = np.arange(n)
    return m ^ (m >> 1)


def gray_encode(m: int, order: int) -> np.ndarray:
    """Gray bit vector (MSB first, length log2 n) for one symbol index."""
    n = validate_order(order)
    if not 0 <= m < n:
        raise ValueError(f"symbol index out of range [0, {n})")
    g = m ^ (m >> 1)
    b = bits_per_symbol(n)
    return np.array([(g >> i) & 1 for i in range(b - 1, -1, -1)], dtype=np.uint8)


def gray_decode(bits) -> int:
    """Invert gray_encode; bit-vector length fixes the modulation order."""
    arr = np.asarray(bits)
    if arr.ndim != 1 or arr.size < 1 or not np.all((arr == 0) | (arr == 1)):
        raise ValueError("expected a 1-D vector of bits")
    g = 0
    for bit in arr:
        g = (g << 1) | int(bit)
    m = g
    shift = 1
    while shift < arr.size:
        m ^= m >> shift
        shift *= 2
    return m


def random_symbols(count: int, order: int, seed=None) -> np.ndarray:
    """Uniform i.i.d. symbol indices, deterministic for a fixed seed."""
    n = validate_order(order)
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.default_rng(seed)
    return rng.integers(0, n, size=count, dtype=np.int64)
