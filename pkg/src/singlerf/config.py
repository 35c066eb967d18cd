"""Scheme selection: one frozen config type tagged by scheme name."""
from dataclasses import dataclass, replace

ANTENNA_SCHEMES = ("sm", "gsm", "qsm", "rsm", "rqsm")
RIS_SCHEMES = ("mbm", "ris-mimo", "ris-gsm", "ris-qsm", "ris-rsm", "ris-rqsm")
SCHEMES = ANTENNA_SCHEMES + RIS_SCHEMES
ALIASES = {"ris-sm": "ris-gsm", "single-rf-gsm": "gsm"}

_GREEDY_CAPABLE = ("rsm", "rqsm", "ris-rsm", "ris-rqsm")
_ML_CAPABLE = tuple(s for s in SCHEMES if s != "ris-rqsm")


class ConfigError(ValueError):
    """A scheme configuration is dimensionally or semantically invalid."""


def _is_pow2(x):
    return x >= 1 and x & (x - 1) == 0


@dataclass(frozen=True)
class SchemeConfig:
    """Parameters of one of the eleven single-RF schemes.

    Only the fields that the selected ``scheme`` uses are meaningful:

    - antenna schemes: ``n_t``, ``n_r``, ``n_a`` (GSM), ``m``, ``kind``
    - metasurface schemes: ``n`` (mirrors or elements), ``n_g`` (groups,
      0 means one group per element), ``n_a`` (active groups for RIS-GSM
      and RIS-QSM), ``n_r``, ``m``, ``kind``, ``pam`` (RIS-RQSM)

    ``m = 1`` means no M-ary symbol (RIS-RSM only). ``detector`` is
    ``"ml"`` or ``"greedy"``; ``None`` picks the default for the scheme.
    """

    scheme: str
    n_t: int = 1
    n_r: int = 1
    n_a: int = 1
    n: int = 0
    n_g: int = 0
    m: int = 2
    kind: str = "psk"
    pam: bool = False
    detector: str | None = None

    def __post_init__(self):
        scheme = ALIASES.get(self.scheme, self.scheme)
        object.__setattr__(self, "scheme", scheme)
        if scheme in ("ris-rsm", "ris-rqsm", "ris-mimo", "ris-gsm", "ris-qsm") and self.n_g == 0:
            object.__setattr__(self, "n_g", self.n)
        if scheme == "ris-rqsm" and self.pam:
            object.__setattr__(self, "kind", "pam")
        if self.detector is None:
            default = "greedy" if scheme in ("ris-rsm", "ris-rqsm") else "ml"
            object.__setattr__(self, "detector", default)
        self.validate()

    @property
    def is_ris(self):
        return self.scheme in RIS_SCHEMES

    @property
    def group_size(self):
        return self.n // self.n_g

    def with_(self, **changes):
        return replace(self, **changes)

    def validate(self):
        s = self.scheme
        if s not in SCHEMES:
            raise ConfigError(f"unknown scheme {s!r}; valid: {', '.join(SCHEMES)}")
        if self.kind not in ("psk", "qam", "pam"):
            raise ConfigError(f"unknown constellation kind {self.kind!r}")
        if self.detector not in ("ml", "greedy"):
            raise ConfigError(f"unknown detector {self.detector!r}")
        if self.detector == "greedy" and s not in _GREEDY_CAPABLE:
            raise ConfigError(f"{s} has no greedy detector")
        if self.detector == "ml" and s not in _ML_CAPABLE:
            raise ConfigError(f"{s} only supports greedy detection")
        if self.n_r < 1:
            raise ConfigError("n_r must be >= 1")
        symbol_free = s == "ris-rsm" or (s == "ris-rqsm" and not self.pam)
        if self.m < (1 if symbol_free else 2) or not _is_pow2(self.m):
            raise ConfigError(f"constellation order m={self.m} must be a power of two >= 2")

        if s in ANTENNA_SCHEMES:
            if self.n_t < 1:
                raise ConfigError("n_t must be >= 1")
            if s == "gsm" and not 2 <= self.n_a <= self.n_t - 1:
                raise ConfigError(f"GSM needs 2 <= n_a <= n_t - 1, got n_a={self.n_a}, n_t={self.n_t}")
            if s in ("rsm", "rqsm") and self.n_t < self.n_r:
                raise ConfigError(f"{s} zero-forcing needs n_t >= n_r, got n_t={self.n_t}, n_r={self.n_r}")
            if s in ("rsm", "rqsm") and self.n_r < 2:
                raise ConfigError(f"{s} needs n_r >= 2 receive antennas")
            return

        if self.n < 1:
            raise ConfigError("n (mirrors / elements) must be >= 1")
        if s == "mbm":
            if self.n > 16:
                raise ConfigError("MBM with more than 16 mirrors is not supported (2^n channel states)")
            return
        if self.n_g < 1 or self.n % self.n_g:
            raise ConfigError(f"n_g={self.n_g} must divide n={self.n}")
        if s in ("ris-gsm", "ris-qsm") and not 1 <= self.n_a <= self.n_g - 1:
            raise ConfigError(f"{s} needs 1 <= n_a <= n_g - 1, got n_a={self.n_a}, n_g={self.n_g}")
        if s == "ris-qsm" and self.n_r != 1:
            raise ConfigError("RIS-QSM uses a single receive antenna")
        if s in ("ris-rsm", "ris-rqsm") and (self.n_r < 2 or not _is_pow2(self.n_r)):
            raise ConfigError(f"{s} needs n_r a power of two >= 2, got {self.n_r}")
        if s == "ris-rqsm" and self.n_g % 2:
            raise ConfigError("RIS-RQSM splits the surface into two halves; n_g must be even")
