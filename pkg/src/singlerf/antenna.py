"""Antenna-based single-RF schemes: SM, single-RF GSM, QSM (receiver CSI
only) and the precoded RSM, RQSM (zero-forcing with transmitter CSI).

Encoders map MSB-first bit arrays to transmit vectors.  Bit fields are
laid out spatial first, symbol last; QSM and RQSM put the I-index field
before the Q-index field.  Every function accepts a single frame or a
batch with leading frame axes.
"""
import numpy as np

from .channel import MimoChannel, sample_mimo
from .mapping import (
    all_bit_strings,
    bits_to_int,
    build_constellation,
    index_bit_width,
    int_to_bits,
    legal_patterns,
    spectral_efficiency,
)
from .numerics import singular_mask, zf_precoder

# cap on complex entries materialised per ML block
_ML_BLOCK = 1 << 22


def _fields(bits, cfg, *widths):
    bits = np.asarray(bits)
    se = spectral_efficiency(cfg)
    if bits.shape[-1:] != (se,):
        raise ValueError(f"{cfg.scheme} consumes {se} bits per channel use, got shape {bits.shape}")
    out, pos = [], 0
    for w in widths:
        out.append(bits[..., pos:pos + w])
        pos += w
    out.append(bits[..., pos:])
    return out


def _scatter(shape, n, idx, values):
    """Zero array (*shape, n) holding ``values`` at position ``idx`` along the last axis."""
    x = np.zeros(shape + (n,), dtype=complex)
    idx = np.broadcast_to(idx, shape)
    np.put_along_axis(x, idx[..., None], np.broadcast_to(values, shape)[..., None], -1)
    return x


def constellation(cfg):
    return build_constellation(cfg.kind, cfg.m)


def sm_encode(bits, cfg):
    nb = index_bit_width(cfg.n_t, 1)
    a_bits, s_bits = _fields(bits, cfg, nb)
    s = constellation(cfg).map(s_bits)
    return _scatter(s.shape, cfg.n_t, bits_to_int(a_bits), s)


def gsm_encode(bits, cfg):
    nb = index_bit_width(cfg.n_t, cfg.n_a)
    p_bits, s_bits = _fields(bits, cfg, nb)
    s = constellation(cfg).map(s_bits)
    active = legal_patterns(cfg.n_t, cfg.n_a)[bits_to_int(p_bits)]
    x = np.zeros(s.shape + (cfg.n_t,), dtype=complex)
    np.put_along_axis(x, active, (s / np.sqrt(cfg.n_a))[..., None], -1)
    return x


def qsm_encode(bits, cfg):
    nb = index_bit_width(cfg.n_t, 1)
    i_bits, q_bits, s_bits = _fields(bits, cfg, nb, nb)
    s = constellation(cfg).map(s_bits)
    x = _scatter(s.shape, cfg.n_t, bits_to_int(i_bits), s.real)
    return x + _scatter(s.shape, cfg.n_t, bits_to_int(q_bits), 1j * s.imag)


def zf_gain(P):
    """Global gain sqrt(n_r / tr((H H^H)^-1)); tr((H H^H)^-1) = ||P||_F^2."""
    n_r = P.shape[-1]
    return np.sqrt(n_r / np.sum(np.abs(P) ** 2, axis=(-2, -1)))


def precode(H):
    """``(P, gain)`` for a channel array or a :class:`MimoChannel`."""
    if isinstance(H, MimoChannel):
        if H.precoder is not None:
            return H.precoder, H.gain
        H = H.H
    P = zf_precoder(H)
    return P, zf_gain(P)


def _rx_targets(bits, cfg, quadrature):
    nb = index_bit_width(cfg.n_r, 1)
    if quadrature:
        i_bits, q_bits, s_bits = _fields(bits, cfg, nb, nb)
        s = constellation(cfg).map(s_bits)
        z = _scatter(s.shape, cfg.n_r, bits_to_int(i_bits), s.real)
        return z + _scatter(s.shape, cfg.n_r, bits_to_int(q_bits), 1j * s.imag)
    r_bits, s_bits = _fields(bits, cfg, nb)
    s = constellation(cfg).map(s_bits)
    return _scatter(s.shape, cfg.n_r, bits_to_int(r_bits), s)


def rsm_encode(bits, H, cfg):
    """``x = gain * P e_r s`` so the noiseless receive vector is ``gain * e_r s``."""
    P, gain = precode(H)
    z = _rx_targets(bits, cfg, quadrature=False)
    return np.asarray(gain)[..., None] * (P @ z[..., None])[..., 0]


def rqsm_encode(bits, H, cfg):
    """``x = gain * P (e_rI Re s + j e_rQ Im s)``."""
    P, gain = precode(H)
    z = _rx_targets(bits, cfg, quadrature=True)
    return np.asarray(gain)[..., None] * (P @ z[..., None])[..., 0]


def ml_detect(y, hypotheses, hypothesis_bits):
    """Bits of the hypothesis closest to ``y`` in Euclidean distance.

    ``y`` is (..., n_r), ``hypotheses`` the noiseless receive vectors
    (..., n_r, K) and ``hypothesis_bits`` a (K, k) table.  Ties go to the
    lowest hypothesis ordinal.
    """
    hypotheses = np.asarray(hypotheses)
    if hypotheses.shape[-1] == 0:
        raise ValueError("empty hypothesis set")
    y = np.asarray(y, dtype=complex)
    d = np.sum(np.abs(y[..., :, None] - hypotheses) ** 2, axis=-2)
    return np.asarray(hypothesis_bits)[np.argmin(d, axis=-1)]


def rsm_detect(y, gain, cfg):
    """Strongest receive antenna, then nearest symbol to ``y_r / gain``."""
    y = np.asarray(y, dtype=complex)
    nb = index_bit_width(cfg.n_r, 1)
    legal = y[..., : 1 << nb]
    r = np.argmax(np.abs(legal), axis=-1)
    yr = np.take_along_axis(legal, r[..., None], -1)[..., 0]
    c = constellation(cfg)
    return np.concatenate([int_to_bits(r, nb), c.demap(yr / gain)], axis=-1)


def rqsm_detect(y, gain, cfg):
    """Independent I and Q decisions: strongest |Re| and strongest |Im| antenna."""
    y = np.asarray(y, dtype=complex)
    nb = index_bit_width(cfg.n_r, 1)
    legal = y[..., : 1 << nb]
    r_i = np.argmax(np.abs(legal.real), axis=-1)
    r_q = np.argmax(np.abs(legal.imag), axis=-1)
    s_i = np.take_along_axis(legal.real, r_i[..., None], -1)[..., 0]
    s_q = np.take_along_axis(legal.imag, r_q[..., None], -1)[..., 0]
    c = constellation(cfg)
    return np.concatenate(
        [int_to_bits(r_i, nb), int_to_bits(r_q, nb), c.demap((s_i + 1j * s_q) / gain)], axis=-1
    )


def hypothesis_table(cfg):
    """Noiseless signal for every bit string, shape (dim, 2**SE).

    For SM, GSM and QSM this is the transmit vector; for RSM and RQSM the
    receive vector before the channel gain.  Column k belongs to the bit
    string whose MSB-first integer is k.
    """
    c = constellation(cfg)
    pts = c.points
    s = cfg.scheme
    if s in ("sm", "gsm"):
        pats = legal_patterns(cfg.n_t, 1 if s == "sm" else cfg.n_a)
        amp = 1.0 if s == "sm" else 1.0 / np.sqrt(cfg.n_a)
        cols = []
        for pat in pats:
            e = np.zeros(cfg.n_t)
            e[pat] = amp
            cols.append(e[:, None] * pts[None, :])
        return np.concatenate(cols, axis=1)
    dim = cfg.n_t if s == "qsm" else cfg.n_r
    eye = np.eye(dim)
    if s == "rsm":
        nb = index_bit_width(cfg.n_r, 1)
        return np.concatenate([eye[:, [r]] * pts[None, :] for r in range(1 << nb)], axis=1)
    nb = index_bit_width(dim, 1)
    cols = [
        eye[:, [a_i]] * pts.real[None, :] + 1j * eye[:, [a_q]] * pts.imag[None, :]
        for a_i in range(1 << nb)
        for a_q in range(1 << nb)
    ]
    return np.concatenate(cols, axis=1)


class AntennaLink:
    """Vectorised encode / channel / detect chain for one antenna scheme."""

    def __init__(self, cfg):
        if cfg.is_ris:
            raise ValueError(f"{cfg.scheme} is not an antenna scheme")
        self.cfg = cfg
        self.se = spectral_efficiency(cfg)
        self.n_rx = cfg.n_r
        self.csit = cfg.scheme in ("rsm", "rqsm")
        if cfg.detector == "ml":
            if self.se > 16:
                raise ValueError(f"ML search over 2^{self.se} hypotheses is not supported")
            self._hyp = hypothesis_table(cfg)
            self._hyp_bits = all_bit_strings(self.se)

    def draw_channel(self, rng, frames):
        """Independent channels for ``frames`` channel uses and the count of
        singular draws that were replaced (CSIT schemes only)."""
        cfg = self.cfg
        ch = sample_mimo(cfg.n_r, cfg.n_t, rng, frames)
        if not self.csit:
            return ch, 0
        H = ch.H
        redraws = 0
        bad = singular_mask(H)
        while bad.any():
            k = int(bad.sum())
            redraws += k
            H[bad] = sample_mimo(cfg.n_r, cfg.n_t, rng, k).H
            bad = singular_mask(H)
        P = zf_precoder(H)
        return MimoChannel(H, P, zf_gain(P)), redraws

    def encode(self, bits, ch):
        s = self.cfg.scheme
        if s == "sm":
            return sm_encode(bits, self.cfg)
        if s == "gsm":
            return gsm_encode(bits, self.cfg)
        if s == "qsm":
            return qsm_encode(bits, self.cfg)
        if s == "rsm":
            return rsm_encode(bits, ch, self.cfg)
        return rqsm_encode(bits, ch, self.cfg)

    def transmit(self, bits, ch):
        """Noiseless receive vectors ``H x``, shape (frames, n_r)."""
        x = self.encode(bits, ch)
        return (ch.H @ x[..., None])[..., 0]

    def detect(self, y, ch):
        cfg = self.cfg
        if cfg.detector == "greedy":
            fn = rsm_detect if cfg.scheme == "rsm" else rqsm_detect
            return fn(y, ch.gain, cfg)
        frames = y.shape[0]
        step = max(1, _ML_BLOCK // (cfg.n_r * self._hyp.shape[1]))
        out = np.empty((frames, self.se), dtype=np.int8)
        for a in range(0, frames, step):
            sl = slice(a, a + step)
            if self.csit:
                hyp = ch.gain[sl, None, None] * self._hyp
            else:
                hyp = ch.H[sl] @ self._hyp
            out[sl] = ml_detect(y[sl], hyp, self._hyp_bits)
        return out
