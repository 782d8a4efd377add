"""Command-line front end.

Subcommands: detect (known-k pipeline), stability (selection profile),
simulate (replicated scenario tables), evaluate (partition agreement),
bounds (error-rate bound calculator).  Exit codes: 0 success, 2 config
error, 3 data error, 4 numerical failure.
"""

import argparse
import sys
import time

import numpy as np

from . import fileio
from .errors import (
    AllZeros,
    BadCovariance,
    BadThresholds,
    BernsegError,
    DegenerateCounts,
    DegenerateData,
    DimMismatch,
    EmptyFile,
    InvalidChangePoints,
    InvalidRegime,
    KTooLarge,
    LengthMismatch,
    ParseError,
    PatternLongerThanSeries,
    RaggedRows,
)
from .pipeline import detect_known_k, stability_detect
from .simulate import (
    ExperimentCell,
    ari,
    labels_from_change_points,
    run_experiment,
)
from .stability import (
    ErrorBoundInputs,
    bin_profile,
    connected_windows,
    default_smooth_window,
    local_maxima,
    theorem3_bounds,
    threshold_select,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_DATA_ERRORS = (ParseError, RaggedRows, EmptyFile, DegenerateData, LengthMismatch)
_CONFIG_ERRORS = (
    BadThresholds,
    PatternLongerThanSeries,
    KTooLarge,
    DimMismatch,
    InvalidChangePoints,
    InvalidRegime,
    ValueError,
)
_NUMERIC_ERRORS = (AllZeros, DegenerateCounts, BadCovariance)


def _penalty(text):
    if text.lower() in ("aic", "bic"):
        return text.lower()
    return float(text)


def _add_common(parser):
    parser.add_argument("--config", help="key=value file; flags override it")
    parser.add_argument("--V", type=int, default=50, dest="v",
                        help="number of encoded sequences (default 50)")
    parser.add_argument("--fraction", type=float, default=0.1,
                        help="subsample fraction M/N (default 0.1)")
    parser.add_argument("--penalty", type=_penalty, default="aic",
                        help="aic, bic, or an explicit coefficient (default aic)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--encoder", default="kmeans",
                        choices=["kmeans", "quantile", "pattern"])
    parser.add_argument("--alpha", type=float, help="lower threshold (quantile encoder)")
    parser.add_argument("--beta", type=float, help="upper threshold (quantile encoder)")
    parser.add_argument("--quantile-levels", action="store_true",
                        help="treat --alpha/--beta as quantile levels")
    parser.add_argument("--pattern", help="symbol pattern, e.g. CG (pattern encoder)")


def _encoder_kwargs(args):
    thresholds = None
    if args.alpha is not None or args.beta is not None:
        thresholds = (args.alpha, args.beta)
    return {
        "v": args.v,
        "subsample_fraction": args.fraction,
        "penalty": args.penalty,
        "seed": args.seed,
        "encoder": args.encoder,
        "thresholds": thresholds,
        "thresholds_are_quantiles": args.quantile_levels,
        "pattern": tuple(args.pattern) if args.pattern else None,
    }


def _apply_config_file(args):
    if not args.config:
        return
    values = fileio.parse_config_file(args.config)
    casts = {
        "v": int, "V": int, "k": int, "seed": int, "bins": int,
        "replicates": int, "workers": int, "n": int, "d": int,
        "fraction": float, "pi": float, "alpha": float, "beta": float,
        "sigma": float, "df": float, "rho": float,
        "penalty": _penalty,
    }
    for key, raw in values.items():
        dest = {"V": "v"}.get(key, key)
        if not hasattr(args, dest) or f"--{key}" in sys.argv or f"--{dest}" in sys.argv:
            continue  # unknown key or explicitly overridden on the command line
        cast = casts.get(key, str)
        setattr(args, dest, cast(raw))


def _echo_config(args, fields):
    return {name: getattr(args, name) for name in fields if getattr(args, name) is not None}


def cmd_detect(args):
    series = fileio.ingest_csv(args.input)
    if args.k is None:
        raise ValueError("detect needs --k (use the stability command otherwise)")
    start = time.perf_counter()
    result = detect_known_k(series, args.k, weighting=args.weighting,
                            **_encoder_kwargs(args))
    elapsed = time.perf_counter() - start
    doc = {
        "result": {
            "change_points": result.change_points,
            "g_value": result.g_value,
            "weighting": result.weighting,
        },
        "config": _echo_config(args, [
            "input", "k", "weighting", "v", "fraction", "penalty", "seed",
            "encoder", "alpha", "beta", "pattern",
        ]),
    }
    if result.weights is not None:
        doc["result"]["weights"] = result.weights
    if args.weighting == "iterative":
        doc["result"]["iterations"] = result.iterations
        doc["result"]["converged"] = result.converged
    if args.per_sequence:
        doc["sequences"] = {
            f"seq_{j:03d}": {
                "change_points": seg.change_points,
                "rates": seg.rates,
                "loss": seg.loss,
            }
            for j, seg in enumerate(result.segmentations)
        }
    if args.timings:
        doc["timings"] = {"total_s": round(elapsed, 3)}
    if args.out:
        fileio.write_result_document(args.out, doc)
    else:
        print(fileio.render_document(doc))
    return EXIT_OK


def cmd_stability(args):
    series = fileio.ingest_csv(args.input)
    result = stability_detect(series, weighted=not args.unweighted,
                              expand=not args.no_expand, **_encoder_kwargs(args))
    profile = result.profile
    n = profile.n
    bin_width = max(1, (n + args.bins - 1) // args.bins)
    smooth = args.smooth_window or default_smooth_window(n)
    if args.out:
        fileio.emit_profile_plotdata(profile, args.out, bin_width=bin_width,
                                     smooth_window=smooth)
    selected = threshold_select(profile, args.pi)
    windows = connected_windows(selected)
    peaks = local_maxima(profile, smooth_window=smooth, top_k=args.top_k)
    doc = {
        "result": {
            "n": n,
            "threshold": args.pi,
            "selected_count": int(selected.size),
            "windows": [f"{a}-{b}" for a, b in windows],
            "local_maxima": peaks,
            "top_bins": np.argsort(-bin_profile(profile, bin_width).values)[:4] + 1,
        },
        "config": _echo_config(args, [
            "input", "pi", "bins", "v", "fraction", "penalty", "seed", "encoder",
        ]),
    }
    print(fileio.render_document(doc))
    return EXIT_OK


def cmd_simulate(args):
    cell = ExperimentCell(
        scenario=args.scenario, method=args.method, n=args.n,
        sigma=args.sigma, df=args.df, rho=args.rho, d=args.d,
        structure=args.structure,
    )
    results = run_experiment([cell], replicates=args.replicates,
                             master_seed=args.seed, workers=args.workers)
    header = "scenario,method,n,sigma,df,rho,d,structure,mean_ari,sd_ari,replicates,failures"
    lines = [header]
    for res in results:
        c = res.cell
        lines.append(
            f"{c.scenario},{c.method},{c.n},{c.sigma},{c.df},{c.rho},{c.d},"
            f"{c.structure},{res.mean_ari!r},{res.sd_ari!r},"
            f"{res.replicates},{res.failures}"
        )
    if args.out:
        fileio._atomic_write(args.out, "\n".join(lines) + "\n")
    print(f"{'scenario':<12}{'method':<11}{'n':>5}  {'mean ARI':>9}  {'sd':>7}")
    for res in results:
        print(f"{res.cell.scenario:<12}{res.cell.method:<11}{res.cell.n:>5}  "
              f"{res.mean_ari:9.4f}  {res.sd_ari:7.4f}"
              + ("  FAILED" if res.failed else ""))
    return EXIT_OK


def _parse_cps(text):
    if not text:
        return np.array([], dtype=np.int64)
    return np.array([int(tok) for tok in text.split(",") if tok.strip()], dtype=np.int64)


def cmd_evaluate(args):
    truth = _parse_cps(args.truth)
    pred = _parse_cps(args.pred)
    value = ari(
        labels_from_change_points(pred, args.n),
        labels_from_change_points(truth, args.n),
    )
    print(f"ari: {value!r}")
    return EXIT_OK


def cmd_bounds(args):
    inputs = ErrorBoundInputs(pn=args.pn, pa=args.pa, xi=args.xi,
                              pi_threshold=args.pi, v=args.v)
    fpr, fnr = theorem3_bounds(inputs)
    print(f"fpr_bound: {'n/a' if fpr is None else repr(float(fpr))}")
    print(f"fnr_bound: {'n/a' if fnr is None else repr(float(fnr))}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bernseg",
        description="Nonparametric change-point detection via Bernoulli encoding",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect k change points in a CSV series")
    p.add_argument("--input", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--weighting", default="simple",
                   choices=["none", "simple", "iterative"])
    p.add_argument("--out")
    p.add_argument("--per-sequence", action="store_true",
                   help="include per-sequence segmentations in the document")
    p.add_argument("--timings", action="store_true",
                   help="include wall-clock timings (breaks byte-identical reruns)")
    _add_common(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("stability", help="selection-probability profile")
    p.add_argument("--input", required=True)
    p.add_argument("--pi", type=float, default=0.1)
    p.add_argument("--bins", type=int, default=30)
    p.add_argument("--top-k", type=int)
    p.add_argument("--smooth-window", type=int)
    p.add_argument("--unweighted", action="store_true")
    p.add_argument("--no-expand", action="store_true")
    p.add_argument("--out")
    _add_common(p)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("simulate", help="replicated synthetic experiment")
    p.add_argument("--scenario", required=True,
                   choices=["table1", "table2", "table3", "table4",
                            "stability1", "stability2"])
    p.add_argument("--method", default="simple",
                   choices=["simple", "iterative", "stability", "none"])
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--sigma", type=float)
    p.add_argument("--df", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--structure", default="full_offdiag",
                   choices=["full_offdiag", "band1_offdiag"])
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="ARI between two change-point sets")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--truth", required=True, help="comma-separated change points")
    p.add_argument("--pred", required=True, help="comma-separated change points")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bounds", help="expected error-rate bound calculator")
    p.add_argument("--pn", type=float, required=True)
    p.add_argument("--pa", type=float, required=True)
    p.add_argument("--xi", type=float, required=True)
    p.add_argument("--pi", type=float, required=True)
    p.add_argument("--V", type=int, required=True, dest="v")
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "config"):
        try:
            _apply_config_file(args)
        except (ParseError, OSError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except _CONFIG_ERRORS as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except BernsegError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
