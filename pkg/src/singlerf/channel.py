"""Flat Rayleigh fading channels for antenna and metasurface links.

All samplers take an optional ``frames`` count and then return one
independent realization per frame along a leading axis.
"""
from dataclasses import dataclass

import numpy as np

from .numerics import cgauss


@dataclass(frozen=True, eq=False)
class MimoChannel:
    """Antenna-array channel ``H`` of shape (..., n_r, n_t).

    ``precoder`` and ``gain`` are filled in for schemes with CSIT (RSM and
    RQSM): the zero-forcing matrix and the global power normalisation.
    """

    H: np.ndarray
    precoder: np.ndarray | None = None
    gain: np.ndarray | None = None

    @property
    def n_r(self):
        return self.H.shape[-2]

    @property
    def n_t(self):
        return self.H.shape[-1]


@dataclass(frozen=True, eq=False)
class RisChannel:
    """Element-to-receiver gains stored per group, shape (..., n_r, n_g).

    Elements are grouped in consecutive blocks of ``n // n_g``; every
    element of a block sees the same coefficient at a given receive antenna.
    """

    groups: np.ndarray
    n: int

    @property
    def n_r(self):
        return self.groups.shape[-2]

    @property
    def n_g(self):
        return self.groups.shape[-1]

    @property
    def group_size(self):
        return self.n // self.n_g

    @property
    def elements(self):
        """Per-element gains h[r, n], shape (..., n_r, n)."""
        return np.repeat(self.groups, self.group_size, axis=-1)


@dataclass(frozen=True, eq=False)
class MbmChannel:
    """One CN(0, 1) gain per mirror state and receive antenna, shape (..., n_r, 2**n)."""

    states: np.ndarray

    @property
    def n_r(self):
        return self.states.shape[-2]


def _lead(frames):
    return () if frames is None else (frames,)


def sample_mimo(n_r, n_t, rng, frames=None):
    if n_r < 1 or n_t < 1:
        raise ValueError(f"channel dimensions must be positive, got {n_r}x{n_t}")
    return MimoChannel(cgauss(rng, _lead(frames) + (n_r, n_t)))


def sample_ris(n, n_r, n_g, rng, frames=None):
    if n_r < 1 or n_g < 1 or n < 1:
        raise ValueError("n, n_r and n_g must be positive")
    if n % n_g:
        raise ValueError(f"group count {n_g} does not divide {n} elements")
    return RisChannel(cgauss(rng, _lead(frames) + (n_r, n_g)), n)


def sample_mbm(n_mirrors, n_r, rng, frames=None):
    if n_mirrors < 1 or n_r < 1:
        raise ValueError("n_mirrors and n_r must be positive")
    return MbmChannel(cgauss(rng, _lead(frames) + (n_r, 1 << n_mirrors)))


def snr_to_n0(snr_db):
    """Noise spectral density for Es/N0 = ``snr_db`` with unit symbol energy."""
    n0 = 10.0 ** (-np.asarray(snr_db, dtype=float) / 10.0)
    return float(n0) if n0.ndim == 0 else n0
