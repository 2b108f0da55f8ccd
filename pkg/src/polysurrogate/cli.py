"""Command-line experiments.

Exit codes: 0 success, 2 bad flags or inputs, 3 numerical solver failure,
4 property violation (a calibration or hallucination check failed).
"""

from __future__ import annotations

import argparse
import contextlib
import json
import shlex
import sys

import numpy as np

from . import hamming, io, links, multi_instance, regions, surrogate, trainer
from .embedding import (
    default_labels,
    embed,
    load_distribution,
    make_embedding,
    mode,
    sample_low_noise,
    sample_simplex,
)
from .errors import InputError, SolverError, TrainingError
from .polytope import build

EXIT_OK, EXIT_USAGE, EXIT_SOLVER, EXIT_PROPERTY = 0, 2, 3, 4


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _embedding(args):
    P = build(args.polytope, args.dim)
    labels = None
    if getattr(args, "dist", None):
        labels, _ = load_distribution(args.dist)
        if len(labels) != P.n:
            raise InputError(f"distribution has {len(labels)} outcomes, polytope has {P.n} vertices")
    return make_embedding(P, labels)


def _dump(obj, fh):
    fh.write(json.dumps(obj, indent=1) + "\n")


def cmd_regions(args, invocation):
    E = _embedding(args)
    if E.dim not in (2, 3):
        raise InputError("regions needs --dim 2 or 3")
    grid = regions.make_grid(E.polytope, args.grid)
    table = regions.map_regions(E, grid, workers=args.workers)
    with _output(args.out) as fh:
        io.write_region_csv(table, fh, invocation)
    if args.svg:
        if E.dim != 2:
            raise InputError("--svg is only available for two-dimensional polytopes")
        with open(args.svg, "w") as fh:
            fh.write(io.region_svg(table, invocation=invocation))
    counts = {c.value: k for c, k in table.counts().items()}
    print(json.dumps(counts), file=sys.stderr)
    return EXIT_OK


def cmd_witness(args, invocation):
    E = _embedding(args)
    w = regions.hallucination_witness(E)
    linked = links.map_link(E, w.point).outcome
    label = E.labels[linked]
    ok = w.witnesses[label][linked] == 0 and np.allclose(embed(E, w.witnesses[label]), w.point, atol=1e-8)
    with _output(args.out) as fh:
        _dump(
            {
                "invocation": invocation,
                "point": w.point.tolist(),
                "linked_outcome": label,
                "witnesses": {k: v.tolist() for k, v in w.witnesses.items()},
                "verified": bool(ok),
            },
            fh,
        )
    return EXIT_OK if ok else EXIT_PROPERTY


def cmd_low_noise(args, invocation):
    E = _embedding(args)
    F = links.scaled_family(E, args.alpha)
    rows = links.pairwise_distances(F)
    y0, y1, min_dist = min(rows, key=lambda r: r[2])
    disjoint = min_dist > links.DISJOINT_TOL
    if args.out:
        with _output(args.out) as fh:
            io.write_pairwise_csv(rows, E.labels, fh, invocation)
    rng = np.random.default_rng(args.seed)
    unique = correct = 0
    for _ in range(args.trials):
        y = int(rng.integers(E.n))
        p = sample_low_noise(E.n, args.alpha, y, rng)
        m = mode(p)
        if len(m) != 1:
            continue
        unique += 1
        correct += links.low_noise_link(F, embed(E, p)).outcome in m
    report = {
        "invocation": invocation,
        "alpha": args.alpha,
        "min_distance": min_dist,
        "closest_pair": [E.labels[y0], E.labels[y1]],
        "disjoint": bool(disjoint),
        "claim": "calibrated" if disjoint else "hypothesis violated: scaled regions intersect",
        "trials": args.trials,
        "unique_mode_draws": unique,
        "correct_links": correct,
        "rate": correct / unique if unique else None,
    }
    _dump(report, sys.stdout)
    return EXIT_OK if correct == unique else EXIT_PROPERTY


def cmd_alpha_search(args, invocation):
    E = _embedding(args)
    alpha = links.alpha_threshold(E, args.tol)
    _dump({"invocation": invocation, "alpha_threshold": alpha, "tol": args.tol}, sys.stdout)
    return EXIT_OK


def cmd_multi_instance(args, invocation):
    if args.dist:
        labels, p = load_distribution(args.dist)
    else:
        labels, p = default_labels(4), np.array([0.4, 0.4, 0.1, 0.1])
    plan = multi_instance.round_robin_plan(len(p), labels)
    result = multi_instance.elicit_mode_end_to_end(p, plan, noise=args.noise, tau=args.tau, rng=args.seed)
    with _output(args.out) as fh:
        fh.write(f"# {invocation}\n")
        fh.write(json.dumps({"plan": [[[labels[a], labels[b]] for a, b in m] for m in plan.pairings]}) + "\n")
        for r in result.diagnostics["reports"]:
            fh.write(r.to_json(labels) + "\n")
        fh.write(
            json.dumps(
                {
                    "mode": sorted(labels[k] for k in result.mode),
                    "path": result.diagnostics["path"],
                    "instances": plan.m,
                }
            )
            + "\n"
        )
    return EXIT_OK


def cmd_train(args, invocation):
    E = _embedding(args)
    if args.dist:
        _, p = load_distribution(args.dist)
    else:
        p = sample_simplex(E.n, args.seed)
    L = surrogate.InducedLoss(surrogate.parse_generator(args.generator, E.dim), E)
    cfg = trainer.TrainConfig(
        steps=args.steps, learning_rate=args.lr, seed=args.seed, batch=args.batch, n_samples=args.samples
    )
    trace = trainer.sgd_minimize(L, p, cfg)
    if args.out:
        with _output(args.out) as fh:
            io.write_trace_csv(trace, fh, invocation)
    target = embed(E, trace.empirical)
    linked = links.map_link(E, trace.final_report).outcome
    _dump(
        {
            "invocation": invocation,
            "final_report": trace.final_report.tolist(),
            "embedded_empirical": target.tolist(),
            "distance": float(np.linalg.norm(trace.final_report - target)),
            "linked_outcome": E.labels[linked],
            "final_loss": float(trace.loss_curve[-1]),
            "final_grad_norm": float(trace.grad_norm_curve[-1]),
        },
        sys.stdout,
    )
    return EXIT_OK


def cmd_hamming(args, invocation):
    ex = hamming.hamming_example(args.epsilon)
    print(f"# {invocation}")
    print("outcome,vector,p,expected_loss")
    for k, (v, pk, e) in enumerate(zip(hamming.OUTCOMES, ex.p, ex.expected_losses), start=1):
        print(f"y{k},\"({','.join(str(int(x)) for x in v)})\",{pk:.12g},{e:.12g}")
    print(f"minimizer: y{ex.minimizer + 1} with p = {ex.p[ex.minimizer]:.12g}")
    print(f"hallucination: {'yes' if ex.hallucination else 'no'}")
    return EXIT_OK if ex.hallucination and ex.minimizer == 0 else EXIT_PROPERTY


def _polytope_flags(parser, dim_default=2):
    parser.add_argument("--polytope", default="cube", help="cube | permutahedron | cross | file:PATH")
    parser.add_argument("--dim", type=int, default=dim_default)


def build_parser():
    parser = argparse.ArgumentParser(prog="polysurrogate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regions", help="classify a grid of polytope points")
    _polytope_flags(p)
    p.add_argument("--grid", type=int, default=101, help="points per axis")
    p.add_argument("--svg", help="also write a color-coded SVG (d = 2 only)")
    p.add_argument("--out", help="CSV destination (default stdout)")
    p.add_argument("--dist", help="distribution file whose labels name the outcomes")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("hallucination-witness", help="find a point where every outcome can be hallucinated")
    _polytope_flags(p)
    p.add_argument("--dist")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("low-noise", help="disjointness table and Monte Carlo calibration of the low-noise link")
    _polytope_flags(p)
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--dist")
    p.add_argument("--out", help="pairwise distance CSV destination")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_low_noise)

    p = sub.add_parser("alpha-search", help="bisection for the largest disjoint low-noise alpha")
    _polytope_flags(p)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--dist")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_alpha_search)

    p = sub.add_parser("multi-instance", help="elicit the mode from round-robin cross-polytope instances")
    p.add_argument("--dist", help="distribution file (default: p = (0.4, 0.4, 0.1, 0.1))")
    p.add_argument("--noise", type=float, default=0.0, help="report perturbation radius")
    p.add_argument("--tau", type=float, default=multi_instance.TAU)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_multi_instance)

    p = sub.add_parser("train", help="stochastic minimization of the induced loss")
    _polytope_flags(p)
    p.add_argument("--dist")
    p.add_argument("--generator", default="sqeuclid", help="sqeuclid | diagquad:a1,...,ad")
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--lr", type=float, default=0.5)
    p.add_argument("--batch", type=int, default=1)
    p.add_argument("--samples", type=int, default=None, help="fixed sample pool size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="trace CSV destination")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("hamming-example", help="Hamming-loss hallucination on {-1,1}^3")
    p.add_argument("--epsilon", type=float, default=0.05)
    p.set_defaults(func=cmd_hamming)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    invocation = "polysurrogate " + shlex.join(argv)
    try:
        return args.func(args, invocation)
    except InputError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, TrainingError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
