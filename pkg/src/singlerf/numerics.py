"""Complex Gaussian sampling, AWGN, zero-forcing precoding and seeded RNG streams.

Every function accepts leading batch dimensions, so a whole chunk of
Monte Carlo frames is handled with one call.
"""
import numpy as np

# reciprocal condition number below which H H^H is treated as singular
RCOND_MIN = 1e-12


class SingularChannelError(ValueError):
    """H H^H is too ill-conditioned for zero-forcing; redraw the channel."""


def make_rng(seed, *stream):
    """Return a generator for the stream ``(seed, *stream)``.

    Streams with different keys are statistically independent and do not
    depend on the order in which they are created, which is what makes
    parallel sweeps reproducible.
    """
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.PCG64(ss))


def cgauss(rng, n):
    """Draw i.i.d. CN(0, 1) samples; ``n`` is a length or a shape tuple."""
    shape = (n,) if np.isscalar(n) else tuple(n)
    if len(shape) == 0 or min(shape) < 1:
        raise ValueError(f"invalid dimension {n!r}")
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) * np.sqrt(0.5)


def awgn(y, n0, rng):
    """Add CN(0, n0) noise to every entry of ``y``."""
    if not n0 >= 0:
        raise ValueError(f"noise spectral density must be >= 0, got {n0}")
    y = np.asarray(y, dtype=complex)
    if n0 == 0:
        return y.copy()
    return y + np.sqrt(n0) * cgauss(rng, y.shape)


def hermitian(a):
    return np.conj(np.swapaxes(a, -1, -2))


def rcond(a):
    """Reciprocal 2-norm condition number of (a batch of) square matrices."""
    s = np.linalg.svd(a, compute_uv=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = s[..., -1] / s[..., 0]
    return np.nan_to_num(r, nan=0.0)


def singular_mask(H):
    """True for every channel in the batch whose Gram matrix is rejected by ZF."""
    H = np.asarray(H, dtype=complex)
    return rcond(H @ hermitian(H)) < RCOND_MIN


def zf_precoder(H):
    """Zero-forcing precoder ``P = H^H (H H^H)^-1`` so that ``H P = I``.

    ``H`` has shape ``(..., n_r, n_t)`` with ``n_t >= n_r``; the result has
    shape ``(..., n_t, n_r)``. Raises :class:`SingularChannelError` if any
    matrix in the batch is numerically singular.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim < 2 or H.shape[-1] < H.shape[-2]:
        raise ValueError(f"zero-forcing needs n_t >= n_r, got shape {H.shape}")
    gram = H @ hermitian(H)
    if np.any(rcond(gram) < RCOND_MIN):
        raise SingularChannelError("channel Gram matrix is singular")
    return hermitian(np.linalg.solve(gram, H))
