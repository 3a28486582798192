"""Experiment runner: emits figure curve data, parameter sweeps,
propagator decompositions, and tomography reports as deterministic
CSV/JSON files.

Exit codes: 0 success, 2 validation error, 3 numerical error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dynamics import (IDENTITY, DegenerateNormError, EvolutionSpec,
                       IdentityEvolution, bell_state, evolve_state, run)
from .entanglement import concurrence
from .model import AptParams, Family
from .optics import DecompositionError, decompose
from .tomography import MleConvergenceError, mle_reconstruct, simulate_counts

FIGURE_IDS = ("2a", "2b", "3a", "3b", "4a", "4b", "4c", "4d", "A4", "A5")

_SWEEP_A2_GRID = tuple(np.round(np.arange(5, 26) * 0.1, 10))


def _apt(a):
    return AptParams(a=float(a))


def _pt(a):
    return AptParams(a=float(a), family=Family.PT)


def _pt_partner(a):
    # equal |a^2 - 1|, hence equal oscillation period / decay rate
    return float(np.sqrt(2.0 - a * a))


def figure_curves(figure_id):
    """Parameter sets and default time range for one figure id."""
    if figure_id == "2a":
        return [(_apt(1.2), _apt(1.2)), (_apt(1.8), _apt(1.8))], 14.0
    if figure_id == "2b":
        return [(_apt(1.01), _apt(1.01))], 70.0
    if figure_id == "3a":
        return [(_apt(1.2), _apt(1.3)), (_apt(1.5), _apt(1.6))], 14.0
    if figure_id == "3b":
        return [(_apt(1.01), _apt(1.03))], 70.0
    if figure_id == "4a":
        return [(_apt(0.8), _apt(a2)) for a2 in _SWEEP_A2_GRID], 10.0
    if figure_id == "4b":
        return [(_apt(0.8), _apt(0.8)), (_apt(0.8), _apt(1.0)), (_apt(0.8), _apt(2.0))], 10.0
    if figure_id == "4c":
        return [(_apt(1.0), _apt(a2)) for a2 in _SWEEP_A2_GRID], 10.0
    if figure_id == "4d":
        return [(_apt(1.0), _apt(0.8)), (_apt(1.0), _apt(1.0)), (_apt(1.0), _apt(2.0))], 10.0
    if figure_id == "A4":
        return [(_apt(1.2), _apt(1.2)),
                (_pt(_pt_partner(1.2)), _pt(_pt_partner(1.2))),
                (_apt(0.8), _apt(0.8)),
                (_pt(_pt_partner(0.8)), _pt(_pt_partner(0.8)))], 14.0
    if figure_id == "A5":
        return [(_apt(1.2), IDENTITY), (_apt(0.8), IDENTITY)], 14.0
    raise ValueError(f"unknown figure id {figure_id!r}, expected one of {FIGURE_IDS}")


def _param_token(p):
    if isinstance(p, IdentityEvolution):
        return "id"
    if p.family is Family.PT:
        return f"pt{p.a:g}"
    return f"{p.a:g}"


def _fmt(x):
    return f"{x:.6g}"


def _curve_csv(traj):
    lines = ["t,concurrence,norm"]
    for t, c, n in zip(traj.times, traj.concurrence, traj.unnormalized_norm):
        lines.append(f"{_fmt(t)},{_fmt(c)},{_fmt(n)}")
    return "\n".join(lines) + "\n"


def run_figure(args):
    curves, default_t_max = figure_curves(args.figure)
    t_max = default_t_max if args.t_max is None else args.t_max
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    written = []
    payload = []
    for p1, p2 in curves:
        traj = run(EvolutionSpec(p1=p1, p2=p2, t_max=t_max, dt=args.dt))
        tok1, tok2 = _param_token(p1), _param_token(p2)
        if args.format == "json":
            payload.append({
                "a1": tok1, "a2": tok2,
                "t": [float(x) for x in traj.times],
                "concurrence": [float(x) for x in traj.concurrence],
                "norm": [float(x) for x in traj.unnormalized_norm],
            })
        else:
            path = out_dir / f"fig{args.figure}_{tok1}_{tok2}.csv"
            path.write_text(_curve_csv(traj))
            written.append(path)
    if args.format == "json":
        path = out_dir / f"fig{args.figure}.json"
        path.write_text(json.dumps({"figure": args.figure, "curves": payload},
                                   indent=2, sort_keys=True) + "\n")
        written.append(path)
    return written


def run_sweep(args):
    if args.a2_step <= 0:
        raise ValueError(f"--a2-step must be > 0, got {args.a2_step}")
    if args.a2_max < args.a2_min:
        raise ValueError("--a2-max must be >= --a2-min")
    n = int(np.floor((args.a2_max - args.a2_min) / args.a2_step + 1e-9))
    a2_values = [round(args.a2_min + i * args.a2_step, 12) for i in range(n + 1)]

    lines = ["a1,a2,t,concurrence"]
    for a2 in a2_values:
        traj = run(EvolutionSpec(p1=_apt(args.a1), p2=_apt(a2),
                                 t_max=args.t_max, dt=args.dt))
        for t, c in zip(traj.times, traj.concurrence):
            lines.append(f"{_fmt(args.a1)},{_fmt(a2)},{_fmt(t)},{_fmt(c)}")
    path = Path(args.out)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return [path]


def run_decompose(args):
    p = _apt(args.a1)
    spec = EvolutionSpec(p1=p, p2=p, t_max=args.t_max, dt=args.dt)
    lines = ["a,t,theta1_deg,theta2_deg,xi1_deg,xi2_deg,k,c"]
    for t in spec.time_grid():
        d = decompose(p, float(t))
        lines.append(",".join([
            _fmt(args.a1), _fmt(t), _fmt(d.theta1_deg), _fmt(d.theta2_deg),
            _fmt(d.xi1_deg), _fmt(d.xi2_deg), str(d.k), _fmt(d.c),
        ]))
    path = Path(args.out)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n")
    return [path]


def run_tomography(args):
    if args.total <= 0:
        raise ValueError(f"--total must be > 0, got {args.total}")
    p1 = _apt(args.a1)
    p2 = IDENTITY if args.identity_qubit2 else _apt(args.a2)
    spec = EvolutionSpec(p1=p1, p2=p2, t_max=args.t_max, dt=args.dt)
    rho0 = bell_state()

    points = []
    for i, t in enumerate(spec.time_grid()):
        truth = evolve_state(rho0, p1, p2, float(t))
        counts = simulate_counts(truth, total=args.total,
                                 seed=args.seed + i, noiseless=args.noiseless)
        try:
            result = mle_reconstruct(counts, truth=truth)
        except MleConvergenceError as exc:
            raise MleConvergenceError(f"t={float(t):g}: {exc}") from exc
        points.append({
            "t": float(t),
            "fidelity": result.fidelity_vs_truth,
            "concurrence_theory": concurrence(truth).value,
            "concurrence_mle": concurrence(result.rho_hat).value,
            "log_likelihood": result.log_likelihood,
            "iterations": result.iterations,
        })

    report = {
        "a1": args.a1,
        "a2": "id" if args.identity_qubit2 else args.a2,
        "dt": args.dt,
        "t_max": args.t_max,
        "total": args.total,
        "seed": args.seed,
        "noiseless": args.noiseless,
        "points": points,
    }
    path = Path(args.out)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return [path]


def build_parser():
    parser = argparse.ArgumentParser(
        prog="aptsim",
        description="Two-qubit entanglement dynamics under anti-PT-symmetric "
                    "Hamiltonians: figure data, sweeps, decompositions, tomography.")
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="emit curve data for one figure id")
    fig.add_argument("--figure", required=True, choices=FIGURE_IDS, metavar="ID")
    fig.add_argument("--t-max", type=float, default=None,
                     help="override the figure's default time range")
    fig.add_argument("--dt", type=float, default=0.01)
    fig.add_argument("--out", default=".", help="output directory")
    fig.add_argument("--format", choices=("csv", "json"), default="csv")

    sweep = sub.add_parser("sweep", help="concurrence over an (a2, t) grid")
    sweep.add_argument("--a1", type=float, default=0.8)
    sweep.add_argument("--a2-min", type=float, default=0.5)
    sweep.add_argument("--a2-max", type=float, default=2.5)
    sweep.add_argument("--a2-step", type=float, default=0.1)
    sweep.add_argument("--t-max", type=float, default=10.0)
    sweep.add_argument("--dt", type=float, default=0.01)
    sweep.add_argument("--out", default="sweep.csv", help="output CSV path")

    dec = sub.add_parser("decompose", help="wave-plate decomposition table")
    dec.add_argument("--a1", type=float, required=True)
    dec.add_argument("--t-max", type=float, default=5.0)
    dec.add_argument("--dt", type=float, default=0.1)
    dec.add_argument("--out", default="decomposition.csv", help="output CSV path")

    tomo = sub.add_parser("tomography", help="counts + MLE loop over a time grid")
    tomo.add_argument("--a1", type=float, default=1.2)
    tomo.add_argument("--a2", type=float, default=1.2)
    tomo.add_argument("--identity-qubit2", action="store_true",
                      help="leave qubit 2 unevolved")
    tomo.add_argument("--t-max", type=float, default=4.5)
    tomo.add_argument("--dt", type=float, default=0.5)
    tomo.add_argument("--seed", type=int, default=0)
    tomo.add_argument("--total", type=int, default=10000,
                      help="photon counts per basis")
    tomo.add_argument("--noiseless", action="store_true",
                      help="use rounded expected counts instead of Poisson draws")
    tomo.add_argument("--out", default="tomography.json", help="output JSON path")

    return parser


_COMMANDS = {
    "figure": run_figure,
    "sweep": run_sweep,
    "decompose": run_decompose,
    "tomography": run_tomography,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        written = _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateNormError, MleConvergenceError, DecompositionError,
            OverflowError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error on {getattr(exc, 'filename', None)!r}: {exc}",
              file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
