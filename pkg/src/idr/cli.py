"""Command-line front end: data generation, single solves, sweeps, scoring
and residual traces.

Exit codes: 0 on success, 1 on validation errors, 2 on I/O errors.
"""

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .errors import InvalidSpec, ValidationError
from .io import dump_labels, dump_matrix, load_labels, load_matrix
from .lsr import lsr_solve
from .metrics import segmentation_accuracy, segmentation_error
from .solver import SolverConfig, solve_idr
from .spectral import build_affinity, cluster_from_solver, spectral_partition
from .sweep import ExperimentConfig, emit_traces, run_sweep
from .synth import SynthSpec, generate


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; we reserve 2 for I/O problems.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _synth_spec_from_args(args):
    raw = {}
    if args.spec:
        raw = _load_json(args.spec)
    for name in ("num_subspaces", "subspace_dim", "ambient_dim", "points_per",
                 "corruption_fraction", "noise_scale", "seed"):
        value = getattr(args, name)
        if value is not None:
            raw[name] = value
    try:
        return SynthSpec(**raw)
    except TypeError as exc:
        raise InvalidSpec(f"bad generator spec: {exc}") from None


def cmd_generate(args):
    spec = _synth_spec_from_args(args)
    X, labels = generate(spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dump_matrix(X, out / "X.csv")
    dump_labels(labels, out / "labels.csv")
    meta = dataclasses.asdict(spec)
    meta["renormalized_after_noise"] = True
    with open(out / "meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    print(f"wrote {out / 'X.csv'} ({X.shape[0]}x{X.shape[1]}) and labels")
    return 0


def _solve_from_args(args):
    X = load_matrix(args.data)
    cfg = SolverConfig(
        gamma=args.gamma,
        lam=getattr(args, "lambda"),
        k=args.k,
        maxiter=args.maxiter,
        normalize=args.normalize,
    )
    return X, solve_idr(X, cfg)


def cmd_solve(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    truth = load_labels(args.truth) if args.truth else None
    info = {"method": args.method, "k": args.k, "lambda": getattr(args, "lambda")}
    if args.method == "idr":
        X, result = _solve_from_args(args)
        dump_matrix(result.Z, out / "Z.csv")
        dump_matrix(result.S, out / "S.csv")
        dump_matrix(result.E, out / "E.csv")
        emit_traces(result, out / "trace.csv")
        sel = cluster_from_solver(result, args.k, seed=args.seed, ground_truth=truth)
        dump_labels(sel.labels_Z, out / "labels_Z.csv")
        dump_labels(sel.labels_S, out / "labels_S.csv")
        info.update(
            gamma=args.gamma,
            iterations=result.iterations,
            converged=result.converged,
            chosen=sel.chosen,
            ncut_Z=sel.ncut_Z,
            ncut_S=sel.ncut_S,
        )
        if truth is not None:
            info.update(sa_Z=sel.sa_Z, sa_S=sel.sa_S)
    else:
        X = load_matrix(args.data)
        Z = lsr_solve(X, getattr(args, "lambda"), zero_diag=not args.keep_diag)
        dump_matrix(Z, out / "Z.csv")
        labels = spectral_partition(build_affinity(Z), args.k, seed=args.seed)
        dump_labels(labels, out / "labels_Z.csv")
        if truth is not None:
            info["sa_Z"] = segmentation_accuracy(truth, labels)
    with open(out / "solve.json", "w") as fh:
        json.dump(info, fh, indent=2)
        fh.write("\n")
    print(json.dumps(info))
    return 0


def cmd_trace(args):
    _, result = _solve_from_args(args)
    emit_traces(result, args.out)
    print(f"wrote {args.out} ({result.iterations} iterations, converged={result.converged})")
    return 0


def cmd_evaluate(args):
    truth = load_labels(args.truth)
    pred = load_labels(args.pred)
    sa = segmentation_accuracy(truth, pred)
    print(json.dumps({"sa": sa, "se": segmentation_error(truth, pred)}))
    return 0


def _float_list(text):
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _int_list(text):
    return [int(tok) for tok in text.split(",") if tok.strip() != ""]


def cmd_sweep(args):
    raw = _load_json(args.config) if args.config else {}
    config = ExperimentConfig.from_dict(raw)
    overrides = {
        "method": args.method,
        "k": args.k,
        "trials": args.trials,
        "output_dir": args.output_dir,
        "gamma_grid": args.gamma_grid,
        "lambda_grid": args.lambda_grid,
        "corruption_levels": args.corruption_levels,
        "seeds": args.seeds,
        "kmeans_seed": args.kmeans_seed,
    }
    for name, value in overrides.items():
        if value is not None:
            setattr(config, name, value)
    if args.no_resume:
        config.resume = False
    records = run_sweep(config)
    ok = sum(1 for r in records if r.status == "ok")
    print(f"wrote {Path(config.output_dir) / 'results.csv'}: {len(records)} cells, {ok} ok")
    return 0


def build_parser():
    parser = _Parser(prog="idr-bench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("generate", help="write synthetic data and labels as CSV")
    p_gen.add_argument("--spec", help="JSON file with SynthSpec fields")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--num-subspaces", dest="num_subspaces", type=int)
    p_gen.add_argument("--subspace-dim", dest="subspace_dim", type=int)
    p_gen.add_argument("--ambient-dim", dest="ambient_dim", type=int)
    p_gen.add_argument("--points-per", dest="points_per", type=int)
    p_gen.add_argument("--corruption-fraction", dest="corruption_fraction", type=float)
    p_gen.add_argument("--noise-scale", dest="noise_scale", type=float)
    p_gen.add_argument("--seed", type=int)
    p_gen.set_defaults(func=cmd_generate)

    def add_solver_args(p, with_method=False):
        p.add_argument("--data", required=True, help="data CSV (ambient_dim rows, n columns)")
        if with_method:
            p.add_argument("--method", choices=("idr", "lsr"), default="idr")
        p.add_argument("--gamma", type=float, default=0.05)
        p.add_argument("--lambda", type=float, default=0.05)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--maxiter", type=int, default=500)
        p.add_argument("--normalize", choices=("auto", "strict"), default="auto")
        p.add_argument("--seed", type=int, default=0, help="k-means seed")

    p_solve = sub.add_parser("solve", help="solve one instance and write coefficients/labels")
    add_solver_args(p_solve, with_method=True)
    p_solve.add_argument("--keep-diag", action="store_true",
                         help="lsr only: skip the zero-diagonal constraint")
    p_solve.add_argument("--truth", help="ground-truth labels CSV for scoring")
    p_solve.add_argument("--out", required=True, help="output directory")
    p_solve.set_defaults(func=cmd_solve)

    p_trace = sub.add_parser("trace", help="solve one instance and write only the residual trace")
    add_solver_args(p_trace)
    p_trace.add_argument("--out", required=True, help="output CSV path")
    p_trace.set_defaults(func=cmd_trace)

    p_eval = sub.add_parser("evaluate", help="print segmentation accuracy/error as JSON")
    p_eval.add_argument("--truth", required=True)
    p_eval.add_argument("--pred", required=True)
    p_eval.set_defaults(func=cmd_evaluate)

    p_sweep = sub.add_parser("sweep", help="run a parameter sweep and write results/summary CSVs")
    p_sweep.add_argument("--config", help="JSON experiment config")
    p_sweep.add_argument("--method", choices=("idr", "lsr"))
    p_sweep.add_argument("--k", type=int)
    p_sweep.add_argument("--trials", type=int)
    p_sweep.add_argument("--output-dir", dest="output_dir")
    p_sweep.add_argument("--gamma-grid", dest="gamma_grid", type=_float_list)
    p_sweep.add_argument("--lambda-grid", dest="lambda_grid", type=_float_list)
    p_sweep.add_argument("--corruption-levels", dest="corruption_levels", type=_float_list)
    p_sweep.add_argument("--seeds", type=_int_list)
    p_sweep.add_argument("--kmeans-seed", dest="kmeans_seed", type=int)
    p_sweep.add_argument("--no-resume", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
