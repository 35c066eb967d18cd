"""Seeded Monte Carlo BER estimation over SNR sweeps.

Frames are simulated in fixed-size chunks.  Chunk ``c`` of SNR point ``i``
draws from the random stream ``(seed, i, c)``, and the stop rule is
evaluated on chunk boundaries in chunk order, so the result does not
depend on how many workers ran the chunks or in which order they finished.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .antenna import AntennaLink
from .channel import snr_to_n0
from .config import ConfigError, SchemeConfig
from .mapping import spectral_efficiency
from .numerics import awgn, make_rng
from .ris import RisLink


class SimulationError(RuntimeError):
    """A sweep point failed; ``snr_db`` names the offending point."""

    def __init__(self, snr_db, cause):
        super().__init__(f"SNR {snr_db} dB: {cause}")
        self.snr_db = snr_db


class NotBracketedError(ValueError):
    """A BER curve never crosses the requested target."""


@dataclass(frozen=True)
class StopRule:
    min_errors: int = 200
    max_bits: int = 2_000_000
    chunk_frames: int = 10_000

    def __post_init__(self):
        if self.min_errors < 1:
            raise ConfigError("min_errors must be >= 1")
        if self.max_bits < 1 or self.chunk_frames < 1:
            raise ConfigError("max_bits and chunk_frames must be >= 1")


@dataclass(frozen=True)
class SimSpec:
    scheme: SchemeConfig
    snr_db: tuple
    stop: StopRule = field(default_factory=StopRule)
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(s) for s in self.snr_db)
        object.__setattr__(self, "snr_db", grid)
        if not grid:
            raise ConfigError("SNR grid is empty")
        if not all(math.isfinite(s) for s in grid):
            raise ConfigError("SNR grid contains non-finite values")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("SNR grid must be strictly increasing")
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        make_link(self.scheme)

    @property
    def se(self):
        return spectral_efficiency(self.scheme)

    @property
    def max_frames(self):
        return -(-self.stop.max_bits // self.se)


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    bits: int
    errors: int
    frames: int
    seed: int
    redraws: int = 0

    @property
    def ber(self):
        return self.errors / self.bits if self.bits else 0.0


@lru_cache(maxsize=64)
def make_link(cfg):
    """Encoder / channel / detector chain for ``cfg``."""
    try:
        return RisLink(cfg) if cfg.is_ris else AntennaLink(cfg)
    except ValueError as e:
        raise ConfigError(str(e)) from e


def run_chunk(cfg, snr_db, seed, snr_index, chunk_index, frames):
    """Simulate one chunk; returns ``(bit_errors, singular_redraws)``."""
    link = make_link(cfg)
    rng = make_rng(seed, snr_index, chunk_index)
    ch, redraws = link.draw_channel(rng, frames)
    bits = rng.integers(0, 2, size=(frames, link.se), dtype=np.int8)
    y = awgn(link.transmit(bits, ch), snr_to_n0(snr_db), rng)
    errors = int(np.count_nonzero(link.detect(y, ch) != bits))
    return errors, redraws


class _Point:
    """Accumulator for one SNR point; merges chunks strictly in index order."""

    def __init__(self, spec, index):
        self.spec, self.index = spec, index
        self.snr = spec.snr_db[index]
        self.errors = self.frames = self.redraws = 0
        self.next_chunk = 0
        self.done = False

    def chunk_sizes(self, count):
        cf, cap = self.spec.stop.chunk_frames, self.spec.max_frames
        out = []
        for c in range(self.next_chunk, self.next_chunk + count):
            start = c * cf
            if start >= cap:
                break
            out.append((c, min(cf, cap - start)))
        return out

    def merge(self, sized, results):
        for (c, frames), (errors, redraws) in zip(sized, results):
            self.errors += errors
            self.frames += frames
            self.redraws += redraws
            self.next_chunk = c + 1
            if self.errors >= self.spec.stop.min_errors or self.frames >= self.spec.max_frames:
                self.done = True
                return

    def result(self):
        return BerPoint(self.snr, self.frames * self.spec.se, self.errors, self.frames, self.spec.seed, self.redraws)


def _simulate(spec, indices, workers):
    points = [_Point(spec, i) for i in indices]
    wave = max(1, workers)
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while not all(p.done for p in points):
            jobs = []
            for p in points:
                if p.done:
                    continue
                sized = p.chunk_sizes(wave)
                args = [(spec.scheme, p.snr, spec.seed, p.index, c, f) for c, f in sized]
                if pool is None:
                    futures = args
                else:
                    futures = [pool.submit(run_chunk, *a) for a in args]
                jobs.append((p, sized, futures))
            for p, sized, futures in jobs:
                try:
                    if pool is None:
                        results = [run_chunk(*a) for a in futures]
                    else:
                        results = [f.result() for f in futures]
                except Exception as e:
                    raise SimulationError(p.snr, e) from e
                p.merge(sized, results)
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    return [p.result() for p in points]


def run_point(spec, snr_db, workers=1):
    """BER at one SNR of ``spec.snr_db`` (the grid position fixes the seed stream)."""
    try:
        index = spec.snr_db.index(float(snr_db))
    except ValueError:
        raise ConfigError(f"{snr_db} dB is not on the SNR grid") from None
    return _simulate(spec, [index], workers)[0]


def run_sweep(spec, workers=1):
    """One :class:`BerPoint` per grid SNR, in grid order."""
    return _simulate(spec, range(len(spec.snr_db)), workers)


def _curve(curve):
    pairs = [(p.snr_db, p.ber) if isinstance(p, BerPoint) else (float(p[0]), float(p[1])) for p in curve]
    return sorted(pairs)


def snr_at_ber(curve, target):
    """SNR where the log-linear interpolation of ``curve`` first reaches ``target``.

    Zero-BER points are skipped since they have no logarithm.
    """
    pts = [(s, b) for s, b in _curve(curve) if b > 0]
    for (s0, b0), (s1, b1) in zip(pts, pts[1:]):
        if b0 >= target >= b1:
            if b0 == b1:
                return s0
            t = (math.log10(b0) - math.log10(target)) / (math.log10(b0) - math.log10(b1))
            return s0 + t * (s1 - s0)
    if pts and pts[-1][1] == target:
        return pts[-1][0]
    raise NotBracketedError(f"curve does not cross BER {target:g}")


def gain_at_ber(curve_a, curve_b, target_ber):
    """SNR saved by curve ``a`` relative to curve ``b`` at ``target_ber`` (dB)."""
    return snr_at_ber(curve_b, target_ber) - snr_at_ber(curve_a, target_ber)
