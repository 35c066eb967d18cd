"""Metasurface-based single-RF schemes: MBM, RIS-MIMO, RIS-SM/GSM, RIS-QSM,
RIS-RSM and RIS-RQSM.

Reflection patterns are returned per group, shape (..., n_g); with the
default ``n_g == n`` that is one coefficient per element.  The surface is
lit with unit amplitude and phase 0, so a pattern ``beta`` produces the
noiseless receive vector ``(n / n_g) * G @ beta`` times the RF symbol,
where ``G`` holds the group gains of :class:`~singlerf.channel.RisChannel`.
"""
import numpy as np

from .antenna import ml_detect
from .channel import sample_mbm, sample_ris
from .mapping import (
    all_bit_strings,
    bits_to_int,
    build_constellation,
    index_bit_width,
    int_to_bits,
    legal_patterns,
    spectral_efficiency,
    symbol_bits,
)

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


def rf_constellation(cfg):
    """Symbol alphabet of the RF chain, or of the reflection itself for
    RIS-MIMO and the PAM branch of RIS-RQSM (rescaled to peak magnitude 1,
    since a passive element cannot amplify)."""
    if cfg.m == 1:
        return None
    c = build_constellation(cfg.kind, cfg.m)
    if cfg.scheme in ("ris-mimo", "ris-rqsm"):
        return c.scaled_to_peak()
    return c


def _symbol(bits, cfg):
    c = rf_constellation(cfg)
    if c is None:
        return np.ones(bits.shape[:-1], dtype=complex)
    return c.map(bits)


def _groups(channel):
    return channel.groups if hasattr(channel, "groups") else np.asarray(channel)


def alignment(G, r=0):
    """Phase-alignment coefficients exp(-j arg G[r, g]) towards antenna ``r``."""
    g = np.take_along_axis(G, np.broadcast_to(np.asarray(r)[..., None, None], G.shape[:-2] + (1, 1)), -2)[..., 0, :]
    return np.conj(g) / np.abs(g)


def receive(channel, beta, carrier=1.0):
    """Noiseless receive vector (..., n_r) for group pattern ``beta``."""
    G = channel.groups
    return channel.group_size * (G @ np.asarray(beta)[..., None])[..., 0] * np.asarray(carrier)[..., None]


def expand(beta, cfg):
    """Group pattern to per-element pattern, shape (..., n)."""
    return np.repeat(beta, cfg.group_size, axis=-1)


# -- MBM ---------------------------------------------------------------------

def mbm_encode(bits, cfg):
    """``(state_index, symbol)``: mirror bits pick one of 2**n radiation states."""
    m_bits, s_bits = _fields(bits, cfg, cfg.n)
    return bits_to_int(m_bits), _symbol(s_bits, cfg)


def mbm_receive(state_channels, state, symbol):
    H = state_channels.states if hasattr(state_channels, "states") else np.asarray(state_channels)
    idx = np.broadcast_to(np.asarray(state)[..., None, None], H.shape[:-1] + (1,))
    return np.take_along_axis(H, idx, -1)[..., 0] * np.asarray(symbol)[..., None]


def mbm_hypotheses(state_channels, cfg):
    H = state_channels.states if hasattr(state_channels, "states") else np.asarray(state_channels)
    pts = rf_constellation(cfg).points
    hyp = H[..., :, :, None] * pts
    return hyp.reshape(H.shape[:-1] + (-1,))


def mbm_detect(y, state_channels, cfg):
    hyp = mbm_hypotheses(state_channels, cfg)
    y = np.asarray(y, dtype=complex)
    if y.ndim < hyp.ndim - 1:
        y = y[..., None]
    return ml_detect(y, hyp, all_bit_strings(spectral_efficiency(cfg)))


# -- RIS-MIMO ----------------------------------------------------------------

def ris_mimo_encode(bits, channel, cfg):
    """Every group reflects its own M-ary point from an unmodulated carrier."""
    (sym,) = _fields(bits, cfg)
    k = symbol_bits(cfg)
    sym = sym.reshape(sym.shape[:-1] + (cfg.n_g, k))
    return rf_constellation(cfg).map(sym)


def _mimo_table(cfg):
    k = symbol_bits(cfg)
    strings = all_bit_strings(cfg.n_g * k).reshape(-1, cfg.n_g, k)
    return rf_constellation(cfg).map(strings).T  # (n_g, K)


def ris_mimo_detect(y, channel, cfg):
    hyp = channel.group_size * (channel.groups @ _mimo_table(cfg))
    return ml_detect(y, hyp, all_bit_strings(spectral_efficiency(cfg)))


# -- RIS-SM/GSM and RIS-QSM -------------------------------------------------

def _pattern_masks(cfg):
    """(P, n_g) reflection states per legal pattern: 1 for active (State-I)
    groups, 0 (GSM) or j (QSM, State-II) for the rest."""
    pats = legal_patterns(cfg.n_g, cfg.n_a)
    idle = 1j if cfg.scheme == "ris-qsm" else 0.0
    masks = np.full((len(pats), cfg.n_g), idle, dtype=complex)
    np.put_along_axis(masks, pats, 1.0, axis=1)
    return masks


def _index_encode(bits, channel, cfg):
    nb = index_bit_width(cfg.n_g, cfg.n_a)
    p_bits, s_bits = _fields(bits, cfg, nb)
    masks = _pattern_masks(cfg)[bits_to_int(p_bits)]
    return alignment(_groups(channel)) * masks, _symbol(s_bits, cfg)


def ris_gsm_encode(bits, channel, cfg):
    """``(beta, symbol)``: active groups phase-aligned with amplitude 1, others off."""
    return _index_encode(bits, channel, cfg)


def ris_qsm_encode(bits, channel, cfg):
    """``(beta, symbol)``: State-I groups at -arg(h), State-II groups at -arg(h) + pi/2."""
    return _index_encode(bits, channel, cfg)


def _index_hypotheses(channel, cfg):
    G = channel.groups
    B = alignment(G)[..., :, None] * _pattern_masks(cfg).T  # (..., n_g, P)
    amp = channel.group_size * (G @ B)  # (..., n_r, P)
    pts = rf_constellation(cfg).points
    return (amp[..., None] * pts).reshape(amp.shape[:-1] + (-1,))


def ris_gsm_detect(y, channel, cfg):
    return ml_detect(y, _index_hypotheses(channel, cfg), all_bit_strings(spectral_efficiency(cfg)))


ris_qsm_detect = ris_gsm_detect


# -- RIS-RSM -----------------------------------------------------------------

def ris_rsm_encode(bits, channel, cfg):
    """``(beta, symbol)`` maximising the power at the receive antenna the
    index bits select."""
    nb = index_bit_width(cfg.n_r, 1)
    r_bits, s_bits = _fields(bits, cfg, nb)
    return alignment(_groups(channel), bits_to_int(r_bits)), _symbol(s_bits, cfg)


def _coherent_gain(channel, r, idx=None):
    G = channel.groups
    mag = np.abs(G) if idx is None else np.abs(G[..., idx])
    r = np.asarray(r)
    lead = np.broadcast_shapes(mag.shape[:-2], r.shape)
    mag = np.broadcast_to(mag, lead + mag.shape[-2:])
    mag = np.take_along_axis(mag, np.broadcast_to(r, lead)[..., None, None], -2)[..., 0, :]
    return channel.group_size * mag.sum(axis=-1)


def ris_rsm_detect(y, channel, cfg):
    """Greedy: strongest antenna, then nearest symbol after removing the coherent gain."""
    y = np.asarray(y, dtype=complex)
    nb = index_bit_width(cfg.n_r, 1)
    r = np.argmax(np.abs(y), axis=-1)
    out = [int_to_bits(r, nb)]
    c = rf_constellation(cfg)
    if c is not None:
        yr = np.take_along_axis(y, r[..., None], -1)[..., 0]
        out.append(c.demap(yr / _coherent_gain(channel, r)))
    return np.concatenate(out, axis=-1)


def ris_rsm_hypotheses(channel, cfg):
    G = channel.groups
    B = np.swapaxes(np.exp(-1j * np.angle(G)), -1, -2)  # (..., n_g, n_r): column r aims at antenna r
    amp = channel.group_size * (G @ B)
    c = rf_constellation(cfg)
    pts = np.ones(1) if c is None else c.points
    return (amp[..., None] * pts).reshape(amp.shape[:-1] + (-1,))


def ris_rsm_ml_detect(y, channel, cfg):
    return ml_detect(y, ris_rsm_hypotheses(channel, cfg), all_bit_strings(spectral_efficiency(cfg)))


# -- RIS-RQSM ----------------------------------------------------------------

def _rqsm_widths(cfg):
    nb = index_bit_width(cfg.n_r, 1)
    return nb, (symbol_bits(cfg) if cfg.pam else 1), nb


def ris_rqsm_encode(bits, channel, cfg):
    """Reflection pattern steering the I-half onto Re(y[r_I]) and the Q-half
    onto Im(y[r_Q]).

    Bits are ``[r_I | I sign or PAM label | r_Q | Q sign]``.  The I-half
    phase is -arg(h) (+pi for sign 1); with PAM it stays at -arg(h) and the
    signed PAM amplitude is applied by the elements.  The Q-half phase is
    -arg(h) + pi/2 (-pi/2 for sign 1).
    """
    G = _groups(channel)
    half = cfg.n_g // 2
    ri_bits, i_bits, rq_bits, q_bits = _fields(bits, cfg, *_rqsm_widths(cfg))
    if cfg.pam:
        amp_i = rf_constellation(cfg).map(i_bits).real
    else:
        amp_i = 1.0 - 2.0 * i_bits[..., 0]
    sign_q = 1.0 - 2.0 * q_bits[..., 0]
    beta_i = alignment(G[..., :half], bits_to_int(ri_bits)) * np.asarray(amp_i)[..., None]
    beta_q = alignment(G[..., half:], bits_to_int(rq_bits)) * np.asarray(1j * sign_q)[..., None]
    return np.concatenate([beta_i, beta_q], axis=-1)


def ris_rqsm_detect(y, channel, cfg):
    """Greedy, with the I and Q branches decided independently."""
    y = np.asarray(y, dtype=complex)
    nb = index_bit_width(cfg.n_r, 1)
    half = cfg.n_g // 2
    r_i = np.argmax(np.abs(y.real), axis=-1)
    r_q = np.argmax(np.abs(y.imag), axis=-1)
    v_i = np.take_along_axis(y.real, r_i[..., None], -1)[..., 0]
    v_q = np.take_along_axis(y.imag, r_q[..., None], -1)[..., 0]
    if cfg.pam:
        c = rf_constellation(cfg)
        i_field = c.demap(v_i / _coherent_gain(channel, r_i, slice(0, half)))
    else:
        i_field = (v_i < 0).astype(np.int8)[..., None]
    q_field = (v_q < 0).astype(np.int8)[..., None]
    return np.concatenate([int_to_bits(r_i, nb), i_field, int_to_bits(r_q, nb), q_field], axis=-1)


# -- link --------------------------------------------------------------------

class RisLink:
    """Vectorised encode / channel / detect chain for one metasurface scheme."""

    def __init__(self, cfg):
        if not cfg.is_ris:
            raise ValueError(f"{cfg.scheme} is not a metasurface scheme")
        self.cfg = cfg
        self.se = spectral_efficiency(cfg)
        self.n_rx = cfg.n_r
        if cfg.detector == "ml" and self.se > 16:
            raise ValueError(f"ML search over 2^{self.se} hypotheses is not supported")
        self._bits = all_bit_strings(self.se) if cfg.detector == "ml" else None

    def draw_channel(self, rng, frames):
        cfg = self.cfg
        if cfg.scheme == "mbm":
            return sample_mbm(cfg.n, cfg.n_r, rng, frames), 0
        return sample_ris(cfg.n, cfg.n_r, cfg.n_g, rng, frames), 0

    def encode(self, bits, ch):
        """Reflection pattern (or MBM state) and RF carrier symbol."""
        cfg, s = self.cfg, self.cfg.scheme
        if s == "mbm":
            return mbm_encode(bits, cfg)
        if s == "ris-mimo":
            return ris_mimo_encode(bits, ch, cfg), 1.0
        if s == "ris-gsm":
            return ris_gsm_encode(bits, ch, cfg)
        if s == "ris-qsm":
            return ris_qsm_encode(bits, ch, cfg)
        if s == "ris-rsm":
            return ris_rsm_encode(bits, ch, cfg)
        return ris_rqsm_encode(bits, ch, cfg), 1.0

    def transmit(self, bits, ch):
        beta, carrier = self.encode(bits, ch)
        if self.cfg.scheme == "mbm":
            return mbm_receive(ch, beta, carrier)
        return receive(ch, beta, carrier)

    def _hypotheses(self, ch):
        s = self.cfg.scheme
        if s == "mbm":
            return mbm_hypotheses(ch, self.cfg)
        if s == "ris-mimo":
            return ch.group_size * (ch.groups @ _mimo_table(self.cfg))
        if s == "ris-rsm":
            return ris_rsm_hypotheses(ch, self.cfg)
        return _index_hypotheses(ch, self.cfg)

    def detect(self, y, ch):
        cfg = self.cfg
        if cfg.detector == "greedy":
            fn = ris_rsm_detect if cfg.scheme == "ris-rsm" else ris_rqsm_detect
            return fn(y, ch, cfg)
        frames = y.shape[0]
        width = max(cfg.n_r, cfg.n_g) << self.se
        step = max(1, _ML_BLOCK // width)
        out = np.empty((frames, self.se), dtype=np.int8)
        for a in range(0, frames, step):
            sl = slice(a, a + step)
            out[sl] = ml_detect(y[sl], self._hypotheses(_slice(ch, sl)), self._bits)
        return out


def _slice(ch, sl):
    if hasattr(ch, "states"):
        return type(ch)(ch.states[sl])
    return type(ch)(ch.groups[sl], ch.n)
