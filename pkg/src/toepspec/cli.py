"""Command-line front end.

Subcommands: ``spectrum`` (eigenvalues of one realization), ``pseudospectrum``
(smallest-singular-value field plus contour lines), ``run`` (experiment config
file), ``list`` (scenario registry).  Exit codes: 0 success, 1 configuration
error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import experiments, linalg, matrixgen, measures, pseudospec
from .errors import ConfigError, ToepspecError
from .matrixgen import NoiseSpec, PerturbationSpec
from .svgplot import render_svg  # re-exported: the plotting entry point
from .symbol import curve_samples, parse_symbol

__all__ = ["main", "render_svg"]


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; the CLI contract wants 1
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="toepspec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="eigenvalues of one noisy realization")
    sp.add_argument("--symbol", required=True, help='coefficients, e.g. "-1:1;1:1"')
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--pert", default="none", help="poly:<g> | exp:<r> | superexp:<c> | macro:<s> | none")
    sp.add_argument("--noise", default="complex_gaussian", choices=matrixgen.NOISE_KINDS)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", help="eigenvalues CSV path")
    sp.add_argument("--plot", help="scatter SVG path")

    ps = sub.add_parser("pseudospectrum", help="s_min field over a grid, with contours")
    ps.add_argument("--symbol", required=True)
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--matrix", default="toeplitz", choices=["toeplitz", "circulant", "perturbed"])
    ps.add_argument("--pert", default="none")
    ps.add_argument("--noise", default="complex_gaussian", choices=matrixgen.NOISE_KINDS)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--re-min", type=float, default=-2.0)
    ps.add_argument("--re-max", type=float, default=2.0)
    ps.add_argument("--im-min", type=float, default=-2.0)
    ps.add_argument("--im-max", type=float, default=2.0)
    ps.add_argument("--nx", type=int, default=101)
    ps.add_argument("--ny", type=int, default=101)
    ps.add_argument("--levels", default="0.01,0.1", help="comma-separated ascending levels")
    ps.add_argument("--out", help="field CSV path")
    ps.add_argument("--plot", help="contour SVG path")

    rn = sub.add_parser("run", help="run an experiment config file")
    rn.add_argument("config", help="JSON config path")
    rn.add_argument("--out-dir", default="results", help="report and artifact directory")

    sub.add_parser("list", help="list experiment scenarios")
    return parser


def _cmd_spectrum(args) -> int:
    sym = parse_symbol(args.symbol)
    pert = PerturbationSpec.parse(args.pert)
    noise = NoiseSpec(args.noise)
    m = matrixgen.perturbed(sym, args.n, pert, noise, args.seed)
    eigs = linalg.eigenvalues(m)
    sample = measures.SpectralSample(
        points=eigs,
        meta={
            "symbol": args.symbol,
            "n": args.n,
            "pert": pert.to_dict(),
            "noise": noise.kind,
            "seed": args.seed,
        },
    )
    if args.out:
        measures.write_sample_csv(sample, args.out)
        print(f"wrote {args.out}")
    if args.plot:
        svg = render_svg(
            "scatter",
            {"points": eigs, "curve": curve_samples(sym, 720)},
            {"title": f"spectrum n={args.n} pert={args.pert}"},
        )
        Path(args.plot).write_text(svg, encoding="utf-8")
        print(f"wrote {args.plot}")
    if not args.out and not args.plot:
        for lam in eigs:
            print(f"{float(lam.real)!r},{float(lam.imag)!r}")
    return 0


def _cmd_pseudospectrum(args) -> int:
    sym = parse_symbol(args.symbol)
    if args.matrix == "circulant":
        m = matrixgen.circulant(sym, args.n)
    elif args.matrix == "perturbed":
        m = matrixgen.perturbed(
            sym, args.n, PerturbationSpec.parse(args.pert), NoiseSpec(args.noise), args.seed
        )
    else:
        m = matrixgen.toeplitz(sym, args.n)
    grid = pseudospec.GridSpec(
        re_min=args.re_min,
        re_max=args.re_max,
        im_min=args.im_min,
        im_max=args.im_max,
        nx=args.nx,
        ny=args.ny,
    )
    field = pseudospec.smin_field(m, grid)
    levels = sorted(float(x) for x in args.levels.split(",") if x.strip())
    if args.out:
        pseudospec.write_field_csv(field, args.out)
        print(f"wrote {args.out}")
    if args.plot:
        lines = []
        for level, polys in zip(levels, pseudospec.contour_lines(field, levels)):
            lines.extend((level, poly) for poly in polys)
        svg = render_svg("contour", {"lines": lines}, {"title": "pseudospectral level lines"})
        Path(args.plot).write_text(svg, encoding="utf-8")
        print(f"wrote {args.plot}")
    if not args.out and not args.plot:
        print(f"s_min range: [{float(field.values.min())!r}, {float(field.values.max())!r}]")
    return 0


def _cmd_run(args) -> int:
    path = Path(args.config)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    config = experiments.ExperimentConfig.from_dict(raw)
    report = experiments.run(config, out_dir=args.out_dir)
    print(json.dumps(report.passed, sort_keys=True))
    print(f"wrote {Path(args.out_dir) / 'report.json'}")
    return 0


def _cmd_list() -> int:
    for name in experiments.scenario_names():
        print(name)
    return 0


def _join_dash_values(argv: list[str]) -> list[str]:
    """Fold `--symbol -1:1` into `--symbol=-1:1` so argparse does not read
    the leading-dash coefficient string as an option."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--symbol" and i + 1 < len(argv):
            out.append(f"--symbol={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_dash_values(list(argv)))
        if args.command == "spectrum":
            return _cmd_spectrum(args)
        if args.command == "pseudospectrum":
            return _cmd_pseudospectrum(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_list()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("run `toepspec --help` for usage", file=sys.stderr)
        return 1
    except (ToepspecError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
