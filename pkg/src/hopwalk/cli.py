"""Command-line interface.

Subcommands: sample, spectrum, cheeger, profile, mix, perc, scaling,
transition, a2check.  Exit codes: 0 success, 1 usage error, 2 runtime
error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import experiments, isoperimetry, percolation, pointprocess, spectral, walk


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _build_parser() -> _Parser:
    parser = _Parser(prog="hopwalk",
                     description="Random walks on random point sets: "
                                 "conductance, spectra and mixing times.")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("sample", help="sample a point set and write it to CSV")
    p.add_argument("--process", default="poisson",
                   choices=["poisson", "thinned_lattice", "inhomogeneous"])
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--side", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--keep-prob", type=float, default=0.5)
    p.add_argument("--out", required=True)

    for name in ("spectrum", "cheeger", "profile", "mix"):
        p = sub.add_parser(name)
        p.add_argument("--points", required=True, help="point-set CSV file")
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--model", type=int, default=1, choices=[1, 2, 3])
        p.add_argument("--cutoff", type=float, default=walk.DEFAULT_CUTOFF)
        if name == "profile":
            p.add_argument("--grid", default="0.1,0.2,0.3,0.4,0.5")
            p.add_argument("--hybrid", action="store_true")
            p.add_argument("--out", required=True)

    p = sub.add_parser("perc", help="site-percolation diagnostics of one field")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kappa", type=float, default=0.8)
    p.add_argument("--cube-side", type=int, default=0,
                   help="cube side for the density statistic (0 = n)")

    for name in ("scaling", "transition", "a2check"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True)

    return parser


def _load_generator(args):
    xi = pointprocess.PointSet.from_csv(args.points)
    return xi, walk.build_generator(xi, args.alpha, args.model, args.cutoff)


def _cmd_sample(args) -> int:
    if args.process == "poisson":
        xi = pointprocess.sample_poisson(args.rho, args.dim, args.side, args.seed)
    elif args.process == "thinned_lattice":
        xi = pointprocess.sample_thinned_lattice(args.spacing, args.keep_prob,
                                                 args.dim, args.side, args.seed)
    else:
        cfg = experiments.ExperimentConfig(dim=args.dim, rho=args.rho,
                                           process="inhomogeneous",
                                           L_list=(1,), seeds=(0,))
        xi = experiments._sample(cfg, args.side, args.seed)
    xi.to_csv(args.out)
    print(f"wrote {len(xi)} points to {args.out}")
    return 0


def _cmd_spectrum(args) -> int:
    _, gen = _load_generator(args)
    print(spectral.spectral_report(gen).to_json())
    return 0


def _cmd_cheeger(args) -> int:
    xi, gen = _load_generator(args)
    if gen.n <= isoperimetry.ENUMERATION_LIMIT:
        phi, cut = isoperimetry.cheeger_exact(gen)
        print(f"Phi = {phi:.12g}")
        print(f"argmin = {list(cut)}")
    else:
        sweep, _ = isoperimetry.cheeger_sweep_upper(gen)
        trap, _ = isoperimetry.trap_upper_bound(xi, gen)
        print(f"Phi <= {min(sweep, trap):.12g} (sweep {sweep:.12g}, trap {trap:.12g})")
    return 0


def _cmd_profile(args) -> int:
    _, gen = _load_generator(args)
    grid = [float(t) for t in args.grid.split(",")]
    if args.hybrid:
        prof = isoperimetry.hybrid_profile_exact(gen, grid)
    else:
        prof = isoperimetry.iso_profile_exact(gen, grid)
    prof.to_csv(args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_mix(args) -> int:
    _, gen = _load_generator(args)
    tau = spectral.mixing_time_exact(gen)
    gap, _ = spectral.spectral_gap(gen)
    bound = spectral.mixing_bound_simple(1.0 / gap, gen.nu_star)
    print(f"tau = {tau:.12g}")
    print(f"bound_simple = {bound:.12g}")
    return 0


def _cmd_perc(args) -> int:
    field = percolation.sample_site_field(args.n, args.dim, args.p, args.seed)
    lab = percolation.label_clusters(field)
    a, b, c = percolation.evaluate_events(field, args.kappa)
    cube = args.cube_side if args.cube_side > 0 else args.n
    dens = percolation.cluster_cube_density(field, lab, cube)
    max_size = int(lab.sizes.max()) if lab.max_label else 0
    max_diam = int(lab.diameters.max()) if lab.max_label else 0
    print("n,p,seed,A,B,C,max_size,max_diam,min_cube_density")
    print(f"{args.n},{args.p!r},{args.seed},{int(a)},{int(b)},{int(c)},"
          f"{max_size},{max_diam},{dens:.17g}")
    return 0


def _cmd_scaling(args) -> int:
    cfg = experiments.load_config(args.config)
    rows = experiments.run_scaling(cfg)
    print(f"wrote {len(rows)} rows to {cfg.output_path}")
    try:
        fit = experiments.fit_exponent(rows, "poincare")
        print(f"poincare fit: slope={fit.slope:.4f} r2={fit.r_squared:.4f}")
    except experiments.InsufficientDataError as exc:
        print(f"poincare fit unavailable: {exc}")
    return 0


def _cmd_transition(args) -> int:
    cfg = experiments.load_config(args.config)
    rows, verdict = experiments.transition_scan(cfg)
    print(f"wrote {len(rows)} rows to {cfg.output_path}")
    print(json.dumps(verdict))
    return 0


def _cmd_a2check(args) -> int:
    cfg = experiments.load_config(args.config)
    rows, summary = experiments.a2_check(cfg)
    print(f"wrote {len(rows)} rows to {cfg.output_path}")
    print(json.dumps({str(k): v for k, v in summary.items()}, default=str))
    return 0


_COMMANDS = {
    "sample": _cmd_sample,
    "spectrum": _cmd_spectrum,
    "cheeger": _cmd_cheeger,
    "profile": _cmd_profile,
    "mix": _cmd_mix,
    "perc": _cmd_perc,
    "scaling": _cmd_scaling,
    "transition": _cmd_transition,
    "a2check": _cmd_a2check,
}


def cli_dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit:
        # argparse handled --help itself
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
