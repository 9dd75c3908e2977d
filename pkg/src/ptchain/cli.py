"""Command-line front end.

    ptchain spectrum  [--config FILE] [flags] [--out FILE]   # long-format CSV
    ptchain analyze   [--config FILE] [flags] [--out FILE]   # feature report
    ptchain reproduce FIG-ID [--out FILE]                    # preset sweep as CSV
    ptchain verify                                           # self-checks

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 energy outside the lead band.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from contextlib import contextmanager

from . import analysis, presets, verify
from .config import RunConfig, load, parse_float_list, parse_omega_range
from .errors import ConfigError, InvalidSpec, OmegaOutsideBand

log = logging.getLogger("ptchain")

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_BAND = 0, 1, 2, 3
CSV_HEADER = ("gamma", "phi", "omega", "T", "re_tau", "im_tau", "phase")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def write_csv(series_list, fh) -> int:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    rows = 0
    for s in series_list:
        g, p = _fmt(s.gamma), _fmt(s.phi)
        for w, t, re, im, ph in s.samples():
            writer.writerow((g, p, _fmt(w), _fmt(t), _fmt(re), _fmt(im), _fmt(ph)))
            rows += 1
    return rows


def _short(x: float) -> str:
    # round away solver noise so exact positions print as 0.5, 0.0, ...
    return repr(round(float(x), 8) + 0.0)


def write_report(reports, fh) -> None:
    fh.write("kind,omega,value,nearest_level,distance\n")
    for r in reports:
        fh.write(f"# gamma={_fmt(r.gamma)},phi={_fmt(r.phi)}\n")
        for c in r.level_correlation:
            value = "" if math.isnan(c.value) else format(c.value, ".6g")
            level = "" if c.nearest_level is None else _short(c.nearest_level)
            dist = "" if c.distance is None else format(c.distance, ".3e")
            fh.write(f"{c.kind},{_short(c.omega)},{value},{level},{dist}\n")


def _sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="INI file; command-line flags override its values")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--n", type=int, help="number of dots")
    p.add_argument("--tc", type=float, help="inter-dot hopping t_c")
    p.add_argument("--gamma", help="comma-separated gain/loss values")
    p.add_argument("--phi", help="comma-separated fluxes, e.g. 0,pi,2pi")
    p.add_argument("--delta", type=float, help="centre-dot detuning (odd n)")
    p.add_argument("--v0", type=float, help="dot-lead coupling")
    p.add_argument("--t0", type=float, help="lead hopping")
    p.add_argument("--omega-range", help="a:b:points")
    p.add_argument("--threads", type=int, help="worker threads for the sweep")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptchain", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)
    _sweep_flags(sub.add_parser("spectrum", help="transmission and amplitude over a sweep"))
    _sweep_flags(sub.add_parser("analyze", help="peaks, antiresonances and phase features"))
    rep = sub.add_parser("reproduce", help="sweep of a published figure preset")
    rep.add_argument("figure", help=", ".join(presets.PRESETS))
    rep.add_argument("--out", help="output file (default: stdout)")
    rep.add_argument("--threads", type=int, default=1)
    ver = sub.add_parser("verify", help="run the oracle and invariant checks")
    ver.add_argument("--only", action="append", choices=sorted(verify.CHECKS), help="run a subset")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = load(args.config) if args.config else RunConfig()
    changes = dict(n=args.n, t_c=args.tc, delta=args.delta, v0=args.v0, t0=args.t0,
                   threads=args.threads, out=args.out)
    if args.gamma is not None:
        changes["gammas"] = parse_float_list(args.gamma)
    if args.phi is not None:
        changes["phis"] = parse_float_list(args.phi, angle=True)
    if args.omega_range is not None:
        changes["omega_min"], changes["omega_max"], changes["omega_points"] = parse_omega_range(args.omega_range)
    return cfg.override(**changes).validate()


def _run_sweep(cfg: RunConfig):
    return analysis.sweep(cfg.template(), cfg.gammas, cfg.phis, cfg.omega_grid(), threads=cfg.threads)


def cmd_spectrum(cfg: RunConfig) -> int:
    series = _run_sweep(cfg)
    with _output(cfg.out) as fh:
        rows = write_csv(series, fh)
    log.info("wrote %d rows", rows)
    return EXIT_OK


def cmd_analyze(cfg: RunConfig) -> int:
    reports = [analysis.analyze(s, cfg.antiresonance_threshold, cfg.peak_prominence, cfg.phase_window)
               for s in _run_sweep(cfg)]
    with _output(cfg.out) as fh:
        write_report(reports, fh)
    return EXIT_OK


def cmd_reproduce(figure: str, out: str | None, threads: int = 1) -> int:
    preset = presets.get(figure)
    series = analysis.sweep(preset.template(), preset.gammas, [preset.phi], preset.omega_grid(), threads)
    with _output(out) as fh:
        write_csv(series, fh)
    return EXIT_OK


def cmd_verify(only=None) -> int:
    results = verify.run_all(only)
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "verify":
            return cmd_verify(args.only)
        if args.command == "reproduce":
            return cmd_reproduce(args.figure, args.out, args.threads)
        cfg = config_from_args(args)
        return cmd_spectrum(cfg) if args.command == "spectrum" else cmd_analyze(cfg)
    except OmegaOutsideBand as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAND
    except (ConfigError, InvalidSpec, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
