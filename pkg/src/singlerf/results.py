"""BER sweep CSV files.

Layout (UTF-8, ``,`` separator, ``.`` decimal point)::

    # scheme=<tag> se=<bpcu> seed=<seed>
    # <key>=<value> ...              scheme parameters, SNR convention
    snr_db,bits,errors,ber,frames
    <row per SNR point>

Any further line starting with ``#`` is a comment.  Floats use Python's
shortest round-trip representation, so identical runs give identical bytes.
"""
from dataclasses import asdict, dataclass, field

SNR_CONVENTION = "Es/N0 in dB with unit average radiated energy per channel use"
COLUMNS = ("snr_db", "bits", "errors", "ber", "frames")


@dataclass
class BerCurve:
    scheme: str
    se: int
    seed: int
    snr_db: list = field(default_factory=list)
    bits: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    ber: list = field(default_factory=list)
    frames: list = field(default_factory=list)

    def pairs(self):
        return list(zip(self.snr_db, self.ber))


class CsvFormatError(ValueError):
    pass


def format_csv(spec, points):
    cfg = asdict(spec.scheme)
    scheme = cfg.pop("scheme")
    lines = [
        f"# scheme={scheme} se={spec.se} seed={spec.seed}",
        "# " + " ".join(f"{k}={v}" for k, v in cfg.items()),
        f"# snr={SNR_CONVENTION}",
        f"# stop: min_errors={spec.stop.min_errors} max_bits={spec.stop.max_bits} chunk_frames={spec.stop.chunk_frames}",
        ",".join(COLUMNS),
    ]
    for p in points:
        lines.append(f"{p.snr_db!r},{p.bits},{p.errors},{p.ber!r},{p.frames}")
    redraws = [p.redraws for p in points]
    if any(redraws):
        lines.append("# singular_channel_redraws=" + ";".join(map(str, redraws)))
    return "\n".join(lines) + "\n"


def write_csv(path, spec, points):
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(format_csv(spec, points))


def parse_csv(text, name="<csv>"):
    curve = None
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if curve is None:
                meta = dict(tok.split("=", 1) for tok in line[1:].split() if "=" in tok)
                try:
                    curve = BerCurve(meta["scheme"], int(meta["se"]), int(meta["seed"]))
                except (KeyError, ValueError):
                    raise CsvFormatError(f"{name}:{lineno}: missing '# scheme=... se=... seed=...' header") from None
            continue
        if curve is None:
            raise CsvFormatError(f"{name}:{lineno}: data before the '# scheme=...' header")
        if not header_seen:
            if tuple(c.strip() for c in line.split(",")) != COLUMNS:
                raise CsvFormatError(f"{name}:{lineno}: expected column line {','.join(COLUMNS)}")
            header_seen = True
            continue
        cells = line.split(",")
        if len(cells) != len(COLUMNS):
            raise CsvFormatError(f"{name}:{lineno}: expected {len(COLUMNS)} fields, got {len(cells)}")
        try:
            snr, bits, errors, ber, frames = float(cells[0]), int(cells[1]), int(cells[2]), float(cells[3]), int(cells[4])
        except ValueError:
            raise CsvFormatError(f"{name}:{lineno}: malformed row {line!r}") from None
        if not 0 <= ber <= 1 or errors > bits:
            raise CsvFormatError(f"{name}:{lineno}: inconsistent counts in row {line!r}")
        curve.snr_db.append(snr)
        curve.bits.append(bits)
        curve.errors.append(errors)
        curve.ber.append(ber)
        curve.frames.append(frames)
    if curve is None or not header_seen:
        raise CsvFormatError(f"{name}: not a BER sweep file")
    return curve


def read_csv(path):
    with open(path, encoding="utf-8") as f:
        return parse_csv(f.read(), str(path))
