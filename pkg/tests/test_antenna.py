import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singlerf.antenna import (
    AntennaLink,
    gsm_encode,
    ml_detect,
    precode,
    qsm_encode,
    rqsm_detect,
    rqsm_encode,
    rsm_detect,
    rsm_encode,
    sm_encode,
)
from singlerf.config import SchemeConfig
from singlerf.mapping import all_bit_strings, legal_patterns, spectral_efficiency
from singlerf.numerics import awgn, make_rng

S2 = 1 / np.sqrt(2)

BUNDLE_6BPCU = {
    "sm": SchemeConfig("sm", n_t=4, n_r=4, m=16, kind="qam"),
    "gsm": SchemeConfig("gsm", n_t=6, n_a=2, n_r=4, m=8),
    "qsm": SchemeConfig("qsm", n_t=4, n_r=4, m=4),
    "rsm": SchemeConfig("rsm", n_t=4, n_r=4, m=16, kind="qam"),
    "rqsm": SchemeConfig("rqsm", n_t=4, n_r=4, m=4),
}


def random_bits(rng, frames, cfg):
    return rng.integers(0, 2, (frames, spectral_efficiency(cfg))).astype(np.int8)


def test_sm_two_antenna_rule():
    cfg = SchemeConfig("sm", n_t=2, m=2)
    assert np.allclose(sm_encode([0, 0], cfg), [1, 0])
    assert np.allclose(sm_encode([1, 1], cfg), [0, -1])


def test_sm_single_active_antenna():
    cfg = SchemeConfig("sm", n_t=4, m=16, kind="qam")
    x = sm_encode(random_bits(make_rng(0), 10**4, cfg), cfg)
    assert np.all(np.count_nonzero(x, axis=1) == 1)


@pytest.mark.parametrize("scheme", ["sm", "gsm", "qsm"])
def test_encoders_reject_wrong_bit_count(scheme):
    cfg = BUNDLE_6BPCU[scheme]
    enc = {"sm": sm_encode, "gsm": gsm_encode, "qsm": qsm_encode}[scheme]
    with pytest.raises(ValueError):
        enc(np.zeros(5, dtype=np.int8), cfg)
    with pytest.raises(ValueError):
        enc(np.zeros(7, dtype=np.int8), cfg)


def test_gsm_first_pattern():
    cfg = SchemeConfig("gsm", n_t=4, n_a=2, m=2)
    assert np.allclose(gsm_encode([0, 0, 0], cfg), [S2, S2, 0, 0])


def test_gsm_uses_8_of_15_patterns():
    cfg = BUNDLE_6BPCU["gsm"]
    assert spectral_efficiency(cfg) - 3 == 3
    assert len(legal_patterns(6, 2)) == 8
    x = gsm_encode(all_bit_strings(6), cfg)
    supports = {tuple(np.nonzero(row)[0]) for row in x}
    assert len(supports) == 8


def test_gsm_power_exact():
    cfg = BUNDLE_6BPCU["gsm"]
    x = gsm_encode(random_bits(make_rng(1), 10**4, cfg), cfg)
    assert np.allclose(np.sum(np.abs(x) ** 2, axis=1), 1.0, atol=1e-12)
    assert np.all(np.count_nonzero(x, axis=1) == 2)


def test_qsm_split_and_collapse():
    cfg = SchemeConfig("qsm", n_t=2, m=4)
    # QPSK label 00 is (1 + j)/sqrt(2)
    assert np.allclose(qsm_encode([0, 1, 0, 0], cfg), [S2, 1j * S2])
    assert np.allclose(qsm_encode([0, 0, 0, 0], cfg), [(1 + 1j) * S2, 0])


def test_qsm_power_exact():
    cfg = BUNDLE_6BPCU["qsm"]
    x = qsm_encode(random_bits(make_rng(2), 10**4, cfg), cfg)
    assert np.allclose(np.sum(np.abs(x) ** 2, axis=1), 1.0, atol=1e-12)
    assert np.all(np.count_nonzero(x, axis=1) <= 2)


def test_rsm_identity_channel():
    cfg = SchemeConfig("rsm", n_t=4, n_r=4, m=2)
    # r = 2 is '10', BPSK +1 is label 0
    assert np.allclose(rsm_encode([1, 0, 0], np.eye(4), cfg), [0, 0, 1, 0])


def test_rqsm_identity_channel():
    cfg = SchemeConfig("rqsm", n_t=2, n_r=2, m=4)
    x = rqsm_encode([0, 1, 0, 0], np.eye(2), cfg)
    assert np.allclose(np.eye(2) @ x, [S2, 1j * S2])


@pytest.mark.parametrize("scheme", ["rsm", "rqsm"])
def test_precoded_noiseless_receive(scheme):
    cfg = BUNDLE_6BPCU[scheme]
    link = AntennaLink(cfg)
    rng = make_rng(3)
    ch, _ = link.draw_channel(rng, 100)
    bits = random_bits(rng, 100, cfg)
    y = link.transmit(bits, ch)
    assert np.max(np.abs(y / ch.gain[:, None] - link._hyp.T[bits @ (1 << np.arange(5, -1, -1))])) < 1e-9


@pytest.mark.parametrize("scheme", list(BUNDLE_6BPCU))
def test_mean_transmit_power(scheme):
    cfg = BUNDLE_6BPCU[scheme]
    link = AntennaLink(cfg)
    rng = make_rng(4)
    ch, _ = link.draw_channel(rng, 10**5)
    x = link.encode(random_bits(rng, 10**5, cfg), ch)
    assert np.mean(np.sum(np.abs(x) ** 2, axis=1)) == pytest.approx(1.0, rel=0.01)


@pytest.mark.parametrize("scheme", list(BUNDLE_6BPCU))
def test_bit_consumption_matches_se(scheme):
    cfg = BUNDLE_6BPCU[scheme]
    link = AntennaLink(cfg)
    ch, _ = link.draw_channel(make_rng(0), 1)
    link.encode(np.zeros((1, 6), dtype=np.int8), ch)
    with pytest.raises(ValueError):
        link.encode(np.zeros((1, 7), dtype=np.int8), ch)


def test_ml_hand_example():
    cfg = SchemeConfig("sm", n_t=2, n_r=1, m=2)
    H = np.array([[1, 1j]])
    X = sm_encode(all_bit_strings(2), cfg).T
    assert list(ml_detect(np.array([1.0]), H @ X, all_bit_strings(2))) == [0, 0]


def test_ml_ties_go_to_lowest_ordinal():
    hyp = np.array([[1.0, -1.0, 1.0]])
    assert list(ml_detect(np.array([1.0]), hyp, np.array([[0, 0], [0, 1], [1, 0]]))) == [0, 0]


def test_ml_empty_hypotheses():
    with pytest.raises(ValueError):
        ml_detect(np.zeros(2), np.zeros((2, 0)), np.zeros((0, 1)))


@pytest.mark.parametrize("scheme", list(BUNDLE_6BPCU))
def test_ml_noiseless_exact(scheme):
    cfg = BUNDLE_6BPCU[scheme]
    link = AntennaLink(cfg)
    rng = make_rng(5)
    ch, _ = link.draw_channel(rng, 10**4)
    bits = random_bits(rng, 10**4, cfg)
    assert np.array_equal(link.detect(link.transmit(bits, ch), ch), bits)


def brute_force_ml(y, H, cfg):
    """Re-encode every bit string one frame at a time and keep the closest."""
    best, best_d = None, np.inf
    for bits in all_bit_strings(spectral_efficiency(cfg)):
        x = {"sm": sm_encode, "gsm": gsm_encode, "qsm": qsm_encode}.get(cfg.scheme)
        x = x(bits, cfg) if x else (rsm_encode if cfg.scheme == "rsm" else rqsm_encode)(bits, H, cfg)
        d = np.sum(np.abs(y - H @ x) ** 2)
        if d < best_d:
            best, best_d = bits, d
    return best


@pytest.mark.parametrize("cfg", list(BUNDLE_6BPCU.values()) + [
    SchemeConfig("gsm", n_t=5, n_a=3, n_r=2, m=4),
    SchemeConfig("qsm", n_t=8, n_r=2, m=4),
    SchemeConfig("sm", n_t=8, n_r=2, m=32),
], ids=lambda c: f"{c.scheme}-{c.n_t}x{c.n_r}-{c.m}")
def test_ml_matches_brute_force(cfg):
    link = AntennaLink(cfg)
    rng = make_rng(6)
    ch, _ = link.draw_channel(rng, 25)
    bits = random_bits(rng, 25, cfg)
    y = awgn(link.transmit(bits, ch), 0.3, rng)
    got = link.detect(y, ch)
    for f in range(25):
        assert np.array_equal(got[f], brute_force_ml(y[f], ch.H[f], cfg))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.01, 100))
def test_ml_scale_invariance(seed, scale):
    rng = make_rng(seed)
    hyp = rng.standard_normal((3, 16)) + 1j * rng.standard_normal((3, 16))
    y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    bits = all_bit_strings(4)
    assert np.array_equal(ml_detect(y, hyp, bits), ml_detect(scale * y, scale * hyp, bits))


def test_rsm_greedy_example():
    cfg = SchemeConfig("rsm", n_t=2, n_r=2, m=2)
    assert list(rsm_detect(np.array([0.1, 2.0]), 1.0, cfg)) == [1, 0]


def test_rqsm_greedy_example():
    cfg = SchemeConfig("rqsm", n_t=2, n_r=2, m=4)
    assert list(rqsm_detect(np.array([1, 1j]), 1.0, cfg)[:2]) == [0, 1]


@pytest.mark.parametrize("scheme", ["rsm", "rqsm"])
def test_greedy_noiseless_exact(scheme):
    cfg = BUNDLE_6BPCU[scheme].with_(detector="greedy")
    link = AntennaLink(cfg)
    rng = make_rng(7)
    ch, _ = link.draw_channel(rng, 10**4)
    bits = random_bits(rng, 10**4, cfg)
    assert np.array_equal(link.detect(link.transmit(bits, ch), ch), bits)


@pytest.mark.parametrize("scheme,n_t,n_r,m", [("rsm", 4, 4, 16), ("rqsm", 4, 4, 4), ("rsm", 4, 2, 4), ("rqsm", 8, 4, 16)])
def test_greedy_agrees_with_ml_at_25db(scheme, n_t, n_r, m):
    kind = "qam" if m == 16 else "psk"
    ml = AntennaLink(SchemeConfig(scheme, n_t=n_t, n_r=n_r, m=m, kind=kind, detector="ml"))
    greedy = AntennaLink(ml.cfg.with_(detector="greedy"))
    rng = make_rng(8)
    ch, _ = ml.draw_channel(rng, 2 * 10**4)
    bits = random_bits(rng, 2 * 10**4, ml.cfg)
    y = awgn(ml.transmit(bits, ch), 10 ** -2.5, rng)
    agree = np.all(ml.detect(y, ch) == greedy.detect(y, ch), axis=1).mean()
    assert agree >= 0.99


def test_singular_channels_are_redrawn():
    cfg = BUNDLE_6BPCU["rsm"]
    link = AntennaLink(cfg)

    class Rigged:
        """Serves an all-zero channel first, then real Gaussian draws."""

        def __init__(self):
            self.rng = make_rng(0)
            self.calls = 0

        def standard_normal(self, shape):
            self.calls += 1
            if self.calls <= 2:
                return np.zeros(shape)
            return self.rng.standard_normal(shape)

    ch, redraws = link.draw_channel(Rigged(), 3)
    assert redraws == 3
    assert np.max(np.abs(ch.H @ ch.precoder - np.eye(4))) < 1e-9


def test_precode_accepts_raw_matrix():
    P, gain = precode(np.eye(3))
    assert np.allclose(P, np.eye(3)) and gain == pytest.approx(1.0)
