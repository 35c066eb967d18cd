"""Command-line front end.

Exit codes: 0 ok, 2 usage or parse error, 3 semantic config error, 4 I/O error.
"""
import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import ALIASES, SCHEMES, ConfigError, SchemeConfig
from .engine import NotBracketedError, SimulationError, gain_at_ber, run_sweep
from .mapping import spectral_efficiency
from .results import SNR_CONVENTION, CsvFormatError, read_csv, write_csv
from .scenario import ScenarioParseError, load, parse_snr_grid
from .svg import semilogy

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_IO = 0, 2, 3, 4

# Qualitative columns of the antenna- vs metasurface-based comparison table:
# (display name, RF chains / transmit antennas, SE class, TX/RX complexity, CSIT/CSIR)
CATALOG = {
    "sm": ("SM", "1/N_T", "Low", "Low/low", "No/yes"),
    "gsm": ("Single-RF GSM", "1/N_T", "Medium", "Low/medium", "No/yes"),
    "qsm": ("QSM", "1/N_T", "Medium", "Low/low", "No/yes"),
    "rsm": ("RSM", "N_T/N_T", "Low", "High/low", "Yes/yes"),
    "rqsm": ("RQSM", "N_T/N_T", "Medium", "High/low", "Yes/yes"),
    "ris-mimo": ("RIS-MIMO", "1/1", "High", "Low/high", "No/yes"),
    "mbm": ("MBM", "1/1", "Medium", "Low/medium", "No/yes"),
    "ris-gsm": ("RIS-SM/GSM", "1/1", "Medium", "Low/medium", "Yes/yes"),
    "ris-qsm": ("RIS-QSM", "1/1", "Medium", "Low/medium", "Yes/yes"),
    "ris-rsm": ("RIS-RSM", "1/1", "Low", "Low/low", "Yes/yes"),
    "ris-rqsm": ("RIS-RQSM", "1/1", "Medium", "Low/low", "Yes/yes"),
}


def _fail(code, msg):
    print(f"error: {msg}", file=sys.stderr)
    return code


def cmd_simulate(args):
    try:
        spec, output = load(args.scenario)
    except OSError as e:
        return _fail(EXIT_IO, f"cannot read {args.scenario}: {e.strerror or e}")
    except ScenarioParseError as e:
        return _fail(EXIT_USAGE, f"{args.scenario}: {e}")
    except ConfigError as e:
        return _fail(EXIT_CONFIG, f"{args.scenario}: {e}")
    try:
        if args.snr is not None:
            spec = replace(spec, snr_db=parse_snr_grid(args.snr))
        if args.seed is not None:
            spec = replace(spec, seed=args.seed)
    except ValueError as e:
        code = EXIT_CONFIG if isinstance(e, ConfigError) else EXIT_USAGE
        return _fail(code, str(e))
    out = Path(args.out or output or Path(args.scenario).with_suffix(".csv").name)
    try:
        points = run_sweep(spec, workers=args.workers)
    except (ConfigError, SimulationError) as e:
        return _fail(EXIT_CONFIG, str(e))
    try:
        write_csv(out, spec, points)
    except OSError as e:
        return _fail(EXIT_IO, f"cannot write {out}: {e.strerror or e}")
    if not args.quiet:
        print(f"{spec.scheme.scheme}: {len(points)} points, {spec.se} bpcu, SNR = {SNR_CONVENTION} -> {out}",
              file=sys.stderr)
        redraws = sum(p.redraws for p in points)
        if redraws:
            print(f"note: {redraws} singular channel draws were replaced", file=sys.stderr)
    return EXIT_OK


def _se_config(args):
    scheme = ALIASES.get(args.scheme, args.scheme)
    n_r = args.nr if args.nr is not None else (2 if scheme in ("ris-rsm", "ris-rqsm", "rsm", "rqsm") else 1)
    n_t = args.nt if args.nt is not None else max(n_r, 2)
    n = args.n if args.n is not None else (2 if scheme == "mbm" else 128)
    n_a = args.na if args.na is not None else (2 if scheme == "gsm" else 1)
    m = args.m if args.m is not None else 2
    kind = args.kind or ("pam" if args.pam else "psk")
    return SchemeConfig(scheme, n_t=n_t, n_r=n_r, n_a=n_a, n=n, n_g=args.ng or 0, m=m, kind=kind, pam=args.pam)


def cmd_se(args):
    try:
        cfg = _se_config(args)
        se = spectral_efficiency(cfg)
    except (ConfigError, ValueError) as e:
        return _fail(EXIT_CONFIG, str(e))
    name, chains, se_class, complexity, csi = CATALOG[cfg.scheme]
    if "N_T" in chains:
        chains = f"{chains} = {chains.replace('N_T', str(cfg.n_t))}"
    rows = [
        ("scheme", name),
        ("class", "metasurface-based" if cfg.is_ris else "antenna-based"),
        ("rf_chains/tx_antennas", chains),
        ("se_bpcu", str(se)),
        ("se_class", se_class),
        ("tx/rx_complexity", complexity),
        ("csit/csir", csi),
    ]
    for k, v in rows:
        print(f"{k:<22} {v}")
    return EXIT_OK


def _read_curves(paths):
    return [read_csv(p) for p in paths]


def cmd_plot(args):
    try:
        curves = _read_curves(args.csv)
    except CsvFormatError as e:
        return _fail(EXIT_USAGE, str(e))
    except OSError as e:
        return _fail(EXIT_IO, f"cannot read {e.filename}: {e.strerror}")
    series = []
    for path, c in zip(args.csv, curves):
        zeros = sum(1 for b in c.ber if b <= 0)
        if zeros:
            print(f"note: {path}: {zeros} zero-BER point(s) omitted from the log plot", file=sys.stderr)
        series.append((c.scheme, c.snr_db, c.ber))
    try:
        Path(args.out).write_text(semilogy(series), encoding="utf-8")
    except OSError as e:
        return _fail(EXIT_IO, f"cannot write {args.out}: {e.strerror}")
    return EXIT_OK


def cmd_compare(args):
    try:
        a, b = _read_curves([args.a, args.b])
    except CsvFormatError as e:
        return _fail(EXIT_USAGE, str(e))
    except OSError as e:
        return _fail(EXIT_IO, f"cannot read {e.filename}: {e.strerror}")
    try:
        gain = gain_at_ber(a.pairs(), b.pairs(), args.ber)
    except NotBracketedError as e:
        return _fail(EXIT_CONFIG, str(e))
    print(f"{a.scheme} gains {gain:.2f} dB over {b.scheme} at BER {args.ber:g}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="singlerf", description="Single-RF MIMO link-level BER simulator.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a BER sweep from a scenario file",
                       description=f"Run a BER sweep. SNR axis: {SNR_CONVENTION}.")
    s.add_argument("scenario")
    s.add_argument("--snr", help="override grid: start:stop:step, a,b,c or a single value (dB)")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", help="output CSV path")
    s.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on it)")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("se", help="spectral efficiency and catalog entry of a scheme")
    s.add_argument("scheme", choices=list(SCHEMES) + list(ALIASES), metavar="scheme",
                   help="one of: " + ", ".join(SCHEMES))
    s.add_argument("--nt", type=int)
    s.add_argument("--nr", type=int)
    s.add_argument("--na", type=int)
    s.add_argument("--n", type=int, help="RF mirrors (MBM) or RIS elements")
    s.add_argument("--ng", type=int, help="RIS element groups")
    s.add_argument("--m", type=int, help="constellation order (1 = no symbol, RIS-RSM)")
    s.add_argument("--kind", choices=("psk", "qam", "pam"))
    s.add_argument("--pam", action="store_true", help="RIS-RQSM with an M-PAM modulator")
    s.set_defaults(func=cmd_se)

    s = sub.add_parser("plot", help="semilog SVG of one or more sweep CSVs")
    s.add_argument("csv", nargs="+")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_plot)

    s = sub.add_parser("compare", help="SNR gain of curve A over curve B at a target BER")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--ber", type=float, default=1e-3)
    s.set_defaults(func=cmd_compare)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
