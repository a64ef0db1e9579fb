"""Command-line interface.

Subcommands::

    fuzzyent fermi-fuzzy            # default: p_f=1, sigma in {1,2,4}, d in [0,10] x 400
    fuzzyent fermi-ideal --d 0:5:100
    fuzzyent boson --sigma 1 --tau 0:3:300
    fuzzyent threshold --model fermi-ideal --pf 1
    fuzzyent verify wick --modes 512

Exit codes: 0 success, 1 usage/IO error, 2 verification failure,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import boson
from .errors import FuzzyEntError, InvalidSpec, NoBracket, NonConvergence
from .quadrature import QuadratureConfig
from .sweep import SweepSpec, emit, find_threshold, parse_grid, run_sweep
from .verify import SUITES, verify

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "fermi-ideal": {"pf": "1", "d": "0:5:100"},
    "fermi-fuzzy": {"pf": "1", "sigma": "1,2,4", "d": "0:10:400"},
    "boson": {"sigma": "1", "tau": "0:3:300", "amplitude": "constant", "pbs": "ideal"},
    "threshold": {"model": "fermi-ideal", "pf": "1", "d_max": 20.0},
    "verify": {},
}
COMMON = {"format": "csv", "out": None, "workers": 1}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fuzzyent", description="Entanglement of identical-particle pairs seen by fuzzy detectors.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, sweep=True):
        sp.add_argument("--config", help="JSON file with the same keys as the flags")
        sp.add_argument("--pf", help="Fermi momentum grid (min:max:steps or comma list)")
        sp.add_argument("--sigma", help="detector spread grid")
        sp.add_argument("--tol", type=float, help="quadrature rel. tolerance (sweeps) or pass tolerance (verify)")
        if sweep:
            sp.add_argument("--format", choices=("csv", "json"))
            sp.add_argument("--out", help="output path (default: stdout)")
            sp.add_argument("--workers", type=int, help="worker threads for sweep evaluation")

    sp = sub.add_parser("fermi-ideal", help="ideal point detectors in a free Fermi gas")
    common(sp)
    sp.add_argument("--d", help="separation grid")

    sp = sub.add_parser("fermi-fuzzy", help="Gaussian detectors in a free Fermi gas")
    common(sp)
    sp.add_argument("--d", help="separation grid")

    sp = sub.add_parser("boson", help="photon pairs behind a polarizing beam splitter")
    common(sp)
    sp.add_argument("--tau", help="delay grid")
    sp.add_argument("--general", action="store_true", help="integrate the full coefficient formula")
    sp.add_argument("--amplitude", choices=("constant", "gaussian-correlated"))
    sp.add_argument("--g-hh", dest="g_hh", type=float, default=None)
    sp.add_argument("--g-vv", dest="g_vv", type=float, default=None)
    sp.add_argument("--width", type=float, default=None, help="gaussian-correlated spectral width")
    sp.add_argument("--correlation", type=float, default=None, help="gaussian-correlated coefficient")
    sp.add_argument("--pbs", choices=("ideal", "balanced"))

    sp = sub.add_parser("threshold", help="separation at which entanglement disappears")
    common(sp, sweep=False)
    sp.add_argument("--model", choices=("fermi-ideal", "fermi-fuzzy", "boson-hom"))
    sp.add_argument("--d-max", dest="d_max", type=float)

    sp = sub.add_parser("verify", help="run an oracle verification suite")
    sp.add_argument("suite", choices=SUITES + ("all",))
    sp.add_argument("--config")
    sp.add_argument("--modes", type=int, help="momentum modes M for Fermi oracles")
    sp.add_argument("--bins", type=int, help="frequency bins B for the photon oracle")
    sp.add_argument("--tol", type=float)
    return p


def _resolve(args) -> dict:
    """Merge hard defaults < config file < explicit flags."""
    opts = dict(COMMON)
    opts.update(DEFAULTS[args.command])
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise InvalidSpec("config file must hold a JSON object")
        opts.update({k.replace("-", "_"): v for k, v in cfg.items()})
    for k, v in vars(args).items():
        if v is not None and k not in ("command", "config", "verbose"):
            opts[k] = v
    return opts


def _amplitude(opts):
    g_hh = float(opts.get("g_hh") or 1.0)
    g_vv = float(opts.get("g_vv") or 1.0)
    if opts.get("amplitude") == "gaussian-correlated":
        return boson.SpectralAmplitude.gaussian_correlated(
            width=float(opts.get("width") or 1.0), correlation=float(opts.get("correlation") or 0.0),
            g_hh=g_hh, g_vv=g_vv)
    return boson.SpectralAmplitude.constant(g_hh=g_hh, g_vv=g_vv)


def _sweep(command, opts) -> int:
    quad = QuadratureConfig(rel_tol=float(opts["tol"])) if opts.get("tol") else QuadratureConfig()
    kw = dict(quad=quad, workers=int(opts["workers"]))
    if command == "fermi-ideal":
        spec = SweepSpec("fermi-ideal", p_f=parse_grid(opts["pf"]), d=parse_grid(opts["d"]), **kw)
    elif command == "fermi-fuzzy":
        spec = SweepSpec("fermi-fuzzy", p_f=parse_grid(opts["pf"]), sigma=parse_grid(opts["sigma"]),
                         d=parse_grid(opts["d"]), **kw)
    else:
        general = bool(opts.get("general")) or opts.get("amplitude") != "constant" \
            or opts.get("pbs") != "ideal" or opts.get("g_hh") is not None or opts.get("g_vv") is not None
        pbs = boson.PBSCoefficients.balanced() if opts.get("pbs") == "balanced" else boson.PBSCoefficients.ideal()
        spec = SweepSpec("boson-general" if general else "boson-hom", sigma=parse_grid(opts["sigma"]),
                         tau=parse_grid(opts["tau"]), amplitude=_amplitude(opts), pbs=pbs, **kw)
    rows = run_sweep(spec)
    out = opts.get("out")
    try:
        emit(rows, opts["format"], out if out else sys.stdout)
    except OSError as exc:
        print(f"fuzzyent: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failed = [r for r in rows if r.get("error")]
    if failed:
        print(f"fuzzyent: {len(failed)} of {len(rows)} points failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _threshold(opts) -> int:
    sigma = parse_grid(opts["sigma"])[0] if opts.get("sigma") is not None else None
    cfg = QuadratureConfig(rel_tol=float(opts["tol"])) if opts.get("tol") else None
    try:
        d = find_threshold(opts["model"], p_f=parse_grid(opts["pf"])[0], sigma=sigma,
                           d_max=float(opts["d_max"]), cfg=cfg)
    except NoBracket as exc:
        print(f"fuzzyent: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(format(d, ".17g"))
    return EXIT_OK


def _verify(opts) -> int:
    suites = SUITES if opts["suite"] == "all" else (opts["suite"],)
    ok = True
    for suite in suites:
        rep = verify(suite, modes=opts.get("modes"), bins=opts.get("bins"), tol=opts.get("tol"))
        print(rep.line())
        ok = ok and rep.passed
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        opts = _resolve(args)
        if args.command == "threshold":
            return _threshold(opts)
        if args.command == "verify":
            return _verify(opts)
        return _sweep(args.command, opts)
    except NonConvergence as exc:
        print(f"fuzzyent: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InvalidSpec, ValueError, OSError) as exc:
        print(f"fuzzyent: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FuzzyEntError as exc:
        print(f"fuzzyent: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
