"""Bit-level codecs: Gray-labelled constellations, combinadic activation
patterns and per-scheme spectral efficiency."""
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .config import SchemeConfig


def _log2_exact(m):
    k = m.bit_length() - 1
    if m < 1 or 1 << k != m:
        raise ValueError(f"{m} is not a power of two")
    return k


def gray(i):
    return i ^ (i >> 1)


def bits_to_int(bits):
    """MSB-first bit arrays (..., k) to integers (...)."""
    bits = np.asarray(bits)
    k = bits.shape[-1]
    if k == 0:
        return np.zeros(bits.shape[:-1], dtype=np.int64)
    weights = 1 << np.arange(k - 1, -1, -1, dtype=np.int64)
    return bits.astype(np.int64) @ weights


def int_to_bits(values, k):
    """Integers (...) to MSB-first bit arrays (..., k)."""
    values = np.asarray(values, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    return ((values[..., None] >> shifts) & 1).astype(np.int8)


def all_bit_strings(k):
    """Every k-bit string in natural order, shape (2**k, k)."""
    return int_to_bits(np.arange(1 << k), k)


@dataclass(frozen=True, eq=False)
class Constellation:
    """Unit-energy constellation; ``points[label]`` is the point whose Gray
    label, read as an MSB-first integer, is ``label``."""

    kind: str
    m: int
    points: np.ndarray

    @property
    def bits(self):
        return _log2_exact(self.m)

    @property
    def labels(self):
        return all_bit_strings(self.bits)

    def map(self, bits):
        """Bits (..., log2 M) to points (...)."""
        bits = np.asarray(bits)
        if bits.shape[-1:] != (self.bits,):
            raise ValueError(f"expected {self.bits} bits per symbol, got shape {bits.shape}")
        return self.points[bits_to_int(bits)]

    def nearest(self, z):
        """Label index of the Euclidean-nearest point for every entry of z."""
        z = np.asarray(z, dtype=complex)
        d = np.abs(z[..., None] - self.points) ** 2
        return np.argmin(d, axis=-1)

    def demap(self, z):
        return int_to_bits(self.nearest(z), self.bits)

    def scaled_to_peak(self):
        """Copy rescaled so that the largest point has magnitude 1."""
        return Constellation(self.kind, self.m, self.points / np.max(np.abs(self.points)))


def _gray_axis(levels):
    # amplitude of each Gray label on one PAM axis, levels ascending
    amp = np.empty(levels)
    for i in range(levels):
        amp[gray(i)] = 2 * i - (levels - 1)
    return amp


@lru_cache(maxsize=None)
def build_constellation(kind, m):
    """Gray-labelled unit-average-energy PSK, square QAM or PAM.

    PSK points sit at ``exp(j(2 pi i / M + offset))`` with the offset 0 for
    BPSK and pi/M otherwise, so QPSK is the familiar (+-1 +-j)/sqrt(2) set
    and every point of higher-order PSK has non-zero I and Q parts.
    """
    if m < 2 or m & (m - 1):
        raise ValueError(f"constellation order must be a power of two >= 2, got {m}")
    if kind == "psk":
        offset = 0.0 if m == 2 else np.pi / m
        pts = np.empty(m, dtype=complex)
        for i in range(m):
            pts[gray(i)] = np.exp(1j * (2 * np.pi * i / m + offset))
    elif kind == "qam":
        side = int(round(np.sqrt(m)))
        if side * side != m:
            raise ValueError(f"QAM order must be a square, got {m}")
        axis = _gray_axis(side)
        half = _log2_exact(side)
        label = np.arange(m)
        pts = axis[label >> half] + 1j * axis[label & (side - 1)]
    elif kind == "pam":
        pts = _gray_axis(m).astype(complex)
    else:
        raise ValueError(f"unknown constellation kind {kind!r}")
    pts = pts / np.sqrt(np.mean(np.abs(pts) ** 2))
    pts.setflags(write=False)
    return Constellation(kind, m, pts)


def map_symbol(c, bits):
    return c.map(bits)


def demap_symbol(c, point):
    return c.demap(point)


def combination_unrank(n, k, rank):
    """The ``rank``-th k-subset of range(n) in lexicographic order."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    if not 0 <= rank < comb(n, k):
        raise IndexError(f"rank {rank} out of range for C({n}, {k}) = {comb(n, k)}")
    out = []
    c = 0
    for i in range(k, 0, -1):
        # skip every subset whose next element is c
        while (block := comb(n - c - 1, i - 1)) <= rank:
            rank -= block
            c += 1
        out.append(c)
        c += 1
    return tuple(out)


def combination_rank(n, indices):
    """Inverse of :func:`combination_unrank`."""
    indices = tuple(indices)
    k = len(indices)
    if any(b <= a for a, b in zip(indices, indices[1:])) or (k and not 0 <= indices[0] <= indices[-1] < n):
        raise ValueError(f"{indices} is not a strictly increasing subset of range({n})")
    rank = 0
    prev = -1
    for pos, c in enumerate(indices):
        remaining = k - pos
        for skipped in range(prev + 1, c):
            rank += comb(n - skipped - 1, remaining - 1)
        prev = c
    return rank


def index_bit_width(n, k):
    """floor(log2 C(n, k)): spatial bits carried by choosing k of n."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    return comb(n, k).bit_length() - 1


@lru_cache(maxsize=None)
def legal_patterns(n, k):
    """Activation patterns addressable by index bits, shape (2**width, k)."""
    width = index_bit_width(n, k)
    table = np.array([combination_unrank(n, k, r) for r in range(1 << width)], dtype=np.int64)
    table.setflags(write=False)
    return table


def symbol_bits(cfg):
    if cfg.scheme == "ris-rqsm" and not cfg.pam:
        return 0
    return _log2_exact(cfg.m)


def spatial_bits(cfg):
    """Bits carried by antenna / element / state indices (and RIS-RQSM signs)."""
    s = cfg.scheme
    if s == "sm":
        return index_bit_width(cfg.n_t, 1)
    if s == "gsm":
        return index_bit_width(cfg.n_t, cfg.n_a)
    if s == "qsm":
        return 2 * index_bit_width(cfg.n_t, 1)
    if s == "rsm":
        return index_bit_width(cfg.n_r, 1)
    if s == "rqsm":
        return 2 * index_bit_width(cfg.n_r, 1)
    if s == "mbm":
        return cfg.n
    if s == "ris-mimo":
        return 0
    if s in ("ris-gsm", "ris-qsm"):
        return index_bit_width(cfg.n_g, cfg.n_a)
    if s == "ris-rsm":
        return _log2_exact(cfg.n_r)
    if s == "ris-rqsm":
        # antenna index per branch plus one sign bit on the branch(es) without PAM
        return 2 * _log2_exact(cfg.n_r) + (1 if cfg.pam else 2)
    raise ValueError(f"unknown scheme {s!r}")


def spectral_efficiency(cfg: SchemeConfig) -> int:
    """Exact bits per channel use of the configured scheme."""
    if cfg.scheme == "ris-mimo":
        return cfg.n_g * symbol_bits(cfg)
    return spatial_bits(cfg) + symbol_bits(cfg)

