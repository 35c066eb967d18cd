"""Scenario files: INI-style text with a ``[simulation]`` section and exactly
one section named after the scheme tag, e.g.::

    [simulation]
    seed = 1
    snr = 0:30:2          ; start:stop:step in dB (stop inclusive)
    min_errors = 200
    max_bits = 2000000
    output = sm_6bpcu.csv

    [sm]
    n_t = 4
    n_r = 4
    m = 16
    kind = qam

Unknown sections and keys are errors.
"""
import configparser
import math
import re

from .config import SCHEMES, ALIASES, SchemeConfig
from .engine import SimSpec, StopRule

SIM_KEYS = {"seed": int, "snr": str, "min_errors": int, "max_bits": int, "chunk_frames": int, "output": str}
SCHEME_KEYS = {
    "n_t": int, "n_r": int, "n_a": int, "n": int, "n_g": int, "m": int,
    "kind": str, "pam": "bool", "detector": str,
}


class ScenarioParseError(ValueError):
    def __init__(self, msg, line=None, column=None):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + msg)
        self.line, self.column = line, column


def parse_snr_grid(text):
    """``"a:b:step"`` (inclusive), ``"a,b,c"`` or a single value, in dB."""
    text = text.strip()
    try:
        if ":" in text:
            a, b, step = (float(t) for t in text.split(":"))
            if step <= 0 or b < a:
                raise ValueError("need step > 0 and stop >= start")
            n = int(math.floor((b - a) / step + 1e-9))
            return tuple(round(a + i * step, 9) for i in range(n + 1))
        return tuple(float(t) for t in text.split(","))
    except ValueError as e:
        raise ValueError(f"bad SNR grid {text!r}: {e}") from None


def _locate(text, section, key=None):
    """1-based (line, column) of a section header or of ``key`` inside it."""
    current = None
    for i, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        m = re.match(r"\[([^\]]*)\]", stripped)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return i, raw.index("[") + 1
            continue
        if key is not None and current == section:
            m = re.match(r"\s*([^=:\s]+)\s*[=:]", raw)
            if m and m.group(1).lower() == key:
                return i, m.start(1) + 1
    return None, None


def _convert(parser, text, section, key, kind):
    try:
        if kind == "bool":
            return parser.getboolean(section, key)
        if kind is int:
            return parser.getint(section, key)
        return parser.get(section, key)
    except ValueError:
        line, col = _locate(text, section, key)
        raise ScenarioParseError(f"[{section}] {key}: expected {getattr(kind, '__name__', kind)}, "
                                 f"got {parser.get(section, key)!r}", line, col) from None


def loads(text):
    """Parse scenario text into ``(SimSpec, output_path_or_None)``.

    Raises :class:`ScenarioParseError` for syntax problems and
    :class:`~singlerf.config.ConfigError` for invalid parameter combinations.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as e:
        raise ScenarioParseError("content before the first [section]", e.lineno, 1) from None
    except configparser.ParsingError as e:
        lineno = e.errors[0][0] if e.errors else None
        raise ScenarioParseError("malformed line", lineno, 1) from None
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as e:
        raise ScenarioParseError(e.message.split(": ", 1)[-1], e.lineno, 1) from None

    sections = parser.sections()
    valid = set(SCHEMES) | set(ALIASES)
    for name in sections:
        if name != "simulation" and name not in valid:
            line, col = _locate(text, name)
            raise ScenarioParseError(f"unknown section [{name}]; expected [simulation] or one of "
                                     f"{', '.join(SCHEMES)}", line, col)
    if "simulation" not in sections:
        raise ScenarioParseError("missing [simulation] section")
    schemes = [s for s in sections if s != "simulation"]
    if len(schemes) != 1:
        raise ScenarioParseError(f"expected exactly one scheme section, found {len(schemes)}")
    tag = schemes[0]

    values = {}
    for section, allowed in (("simulation", SIM_KEYS), (tag, SCHEME_KEYS)):
        values[section] = {}
        for key in parser.options(section):
            if key not in allowed:
                line, col = _locate(text, section, key)
                raise ScenarioParseError(f"unknown key {key!r} in [{section}]", line, col)
            values[section][key] = _convert(parser, text, section, key, allowed[key])

    sim = values["simulation"]
    if "snr" not in sim:
        raise ScenarioParseError("[simulation] needs an snr grid")
    try:
        grid = parse_snr_grid(sim["snr"])
    except ValueError as e:
        line, col = _locate(text, "simulation", "snr")
        raise ScenarioParseError(str(e), line, col) from None
    stop = StopRule(**{k: sim[k] for k in ("min_errors", "max_bits", "chunk_frames") if k in sim})
    cfg = SchemeConfig(tag, **values[tag])
    spec = SimSpec(cfg, grid, stop, sim.get("seed", 0))
    return spec, sim.get("output")


def load(path):
    with open(path, encoding="utf-8") as f:
        return loads(f.read())
