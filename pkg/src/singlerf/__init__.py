"""Link-level simulation of single-RF MIMO: spatial modulation variants and
metasurface-based modulation, with a seeded Monte Carlo BER engine."""
from .config import ConfigError, SchemeConfig
from .engine import BerPoint, SimSpec, StopRule, gain_at_ber, run_point, run_sweep
from .mapping import spectral_efficiency

__all__ = [
    "BerPoint",
    "ConfigError",
    "SchemeConfig",
    "SimSpec",
    "StopRule",
    "gain_at_ber",
    "run_point",
    "run_sweep",
    "spectral_efficiency",
]
