"""Command line surface: fit, describe, eval, grid, infer.

Artifacts are plain text and deterministic: rerunning a command on the same
inputs reproduces every byte except the single ``created_utc`` line in each
manifest. Exit codes: 0 on success, 1 for runtime errors (bad data, failed
numerics), 2 for usage and validation problems.
"""

import argparse
import os
import sys
from datetime import datetime, timezone

from . import __version__
from .corpus import fingerprint, load_corpus, read_dense_file, read_matrix, write_dense_file
from .descriptors import DescriptorConfig, extract_descriptors
from .discovery import discover
from .errors import FormatError, SimtopicsError
from .inference import affinity_matrix
from .metrics import MetricConfig, evaluate, load_embedding_store
from .model import (
    TopicModel,
    load_model,
    read_manifest,
    read_membership,
    save_model,
    write_manifest,
    write_membership,
)
from .schedule import ThresholdSchedule
from .tuning import DEFAULT_ALPHAS, DEFAULT_BETAS, GridSpec, run_grid


class UsageError(Exception):
    """Flag or file validation failure; maps to exit code 2."""


def _now_utc() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _fmt(value) -> str:
    if value is None:
        return "na"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _require_file(path, what):
    if not os.path.isfile(path):
        raise UsageError(f"{what} file not found: {path}")


def _require_dir(path, what):
    if not os.path.isdir(path):
        raise UsageError(f"{what} directory not found: {path}")


def _check_range(ok, message):
    if not ok:
        raise UsageError(message)


# ---------------------------------------------------------------------------
# fit


def cmd_fit(args) -> int:
    _require_file(args.matrix, "matrix")
    _require_file(args.tokens, "tokens")
    _check_range(0.0 < args.alpha < 1.0, f"--alpha must lie in (0, 1), got {args.alpha}")
    _check_range(args.max_iters >= 1, "--max-iters must be >= 1")
    _check_range(args.threads >= 1, "--threads must be >= 1")
    bundle = load_corpus(args.matrix, args.tokens)
    trace = discover(
        bundle.matrix,
        ThresholdSchedule(args.alpha, args.max_iters),
        threads=args.threads,
    )
    os.makedirs(args.out, exist_ok=True)
    entries = [
        ("artifact", "trace"),
        ("version", __version__),
        ("fingerprint", fingerprint(bundle)),
        ("alpha", repr(args.alpha)),
        ("max_iters", args.max_iters),
        ("converged", "true" if trace.converged else "false"),
        ("termination", trace.termination),
        ("centroid_dedup", "per-iteration"),
        ("pair_dot_products", trace.pair_dot_products),
        ("snapshots", len(trace.snapshots)),
    ]
    for pos, snapshot in enumerate(trace.snapshots, start=1):
        tag = f"snapshot_{pos:03d}"
        entries.append((f"{tag}.iteration", snapshot.iteration))
        entries.append((f"{tag}.threshold", repr(snapshot.threshold)))
        entries.append((f"{tag}.k", snapshot.k))
        write_dense_file(
            snapshot.centroids, os.path.join(args.out, f"{tag}.centroids.txt")
        )
        write_membership(
            snapshot.membership, os.path.join(args.out, f"{tag}.membership.txt")
        )
    entries.append(("created_utc", _now_utc()))
    write_manifest(os.path.join(args.out, "trace_manifest.txt"), entries)
    return 0


# ---------------------------------------------------------------------------
# describe


def _load_trace_snapshot(trace_dir, k):
    manifest = read_manifest(os.path.join(trace_dir, "trace_manifest.txt"))
    if manifest.get("artifact") != "trace":
        raise FormatError(f"{trace_dir}: not a trace directory")
    count = int(manifest["snapshots"])
    for pos in range(1, count + 1):
        tag = f"snapshot_{pos:03d}"
        if int(manifest[f"{tag}.k"]) == k:
            centroids = read_dense_file(
                os.path.join(trace_dir, f"{tag}.centroids.txt")
            )
            membership = read_membership(
                os.path.join(trace_dir, f"{tag}.membership.txt")
            )
            return manifest, centroids, membership
    available = [int(manifest[f"snapshot_{p:03d}.k"]) for p in range(1, count + 1)]
    raise FormatError(
        f"{trace_dir}: no snapshot with k={k}; trace holds k values {available}"
    )


def cmd_describe(args) -> int:
    _require_dir(args.trace, "trace")
    _require_file(os.path.join(args.trace, "trace_manifest.txt"), "trace manifest")
    _require_file(args.matrix, "matrix")
    _require_file(args.tokens, "tokens")
    _check_range(args.k >= 1, "--k must be >= 1")
    _check_range(0.0 < args.beta <= 1.0, f"--beta must lie in (0, 1], got {args.beta}")
    _check_range(args.top_n >= 1, "--top-n must be >= 1")
    _check_range(args.threads >= 1, "--threads must be >= 1")
    manifest, centroids, membership = _load_trace_snapshot(args.trace, args.k)
    bundle = load_corpus(args.matrix, args.tokens)
    desc = extract_descriptors(
        bundle,
        centroids,
        DescriptorConfig(beta=args.beta, top_n=args.top_n),
        threads=args.threads,
    )
    model = TopicModel(
        centroids=centroids,
        membership=membership,
        descriptors=desc.per_topic_words,
        ig_table=desc.ig_table,
        vocabulary=bundle.vocabulary,
        alpha=float(manifest["alpha"]),
        beta=args.beta,
        top_n=args.top_n,
        k=args.k,
        ranking=desc.ranking,
        fingerprint=fingerprint(bundle),
    )
    save_model(model, args.out, _now_utc(), __version__)
    return 0


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    _require_dir(args.model, "model")
    _require_file(args.matrix, "matrix")
    _require_file(args.tokens, "tokens")
    if args.embeddings is not None:
        _require_file(args.embeddings, "embeddings")
    _check_range(args.threads >= 1, "--threads must be >= 1")
    model = load_model(args.model)
    bundle = load_corpus(args.matrix, args.tokens)
    store = (
        load_embedding_store(args.embeddings) if args.embeddings is not None else None
    )
    report = evaluate(
        bundle,
        model.centroids,
        model.topics,
        model.beta,
        MetricConfig(),
        store=store,
        threads=args.threads,
    )
    entries = [
        ("artifact", "metric-report"),
        ("version", __version__),
        ("fingerprint", fingerprint(bundle)),
        ("model_fingerprint", model.fingerprint),
        ("k", model.k),
        ("beta", repr(model.beta)),
        ("cv", _fmt(report.cv)),
        ("npmi", _fmt(report.npmi)),
        ("irbo", _fmt(report.irbo)),
        ("weco", _fmt(report.weco)),
        ("ts", _fmt(report.ts)),
        ("td", _fmt(report.td)),
    ]
    for name in ("cv", "npmi", "weco"):
        values = report.per_topic.get(name)
        if values is None:
            continue
        for t, value in enumerate(values):
            entries.append((f"{name}.topic.{t:03d}", _fmt(value)))
    for i, note in enumerate(report.notes):
        entries.append((f"note.{i:03d}", note))
    entries.append(("created_utc", _now_utc()))
    write_manifest(args.out, entries)
    return 0


# ---------------------------------------------------------------------------
# grid


def _read_grid_config(path):
    raw = read_manifest(path)
    out = {}
    try:
        if "alphas" in raw:
            out["alphas"] = tuple(float(x) for x in raw["alphas"].split())
        if "betas" in raw:
            out["betas"] = tuple(float(x) for x in raw["betas"].split())
        for key in ("k_min", "k_max", "top_n", "max_iters"):
            if key in raw:
                out[key] = int(raw[key])
    except ValueError as exc:
        raise UsageError(f"{path}: bad grid config value: {exc}") from None
    return out


def cmd_grid(args) -> int:
    _require_file(args.matrix, "matrix")
    _require_file(args.tokens, "tokens")
    if args.embeddings is not None:
        _require_file(args.embeddings, "embeddings")
    _check_range(args.threads >= 1, "--threads must be >= 1")
    config = {}
    if args.config is not None:
        _require_file(args.config, "grid config")
        config = _read_grid_config(args.config)
    k_min = args.k_min if args.k_min is not None else config.get("k_min", 5)
    k_max = args.k_max if args.k_max is not None else config.get("k_max", 25)
    top_n = args.top_n if args.top_n is not None else config.get("top_n", 10)
    _check_range(1 <= k_min <= k_max, f"need 1 <= k-min <= k-max, got [{k_min}, {k_max}]")
    _check_range(top_n >= 1, "--top-n must be >= 1")
    spec = GridSpec(
        alphas=config.get("alphas", DEFAULT_ALPHAS),
        betas=config.get("betas", DEFAULT_BETAS),
        k_min=k_min,
        k_max=k_max,
        top_n=top_n,
        max_iters=config.get("max_iters", 1000),
    )
    for alpha in spec.alphas:
        _check_range(0.0 < alpha < 1.0, f"grid alpha must lie in (0, 1), got {alpha}")
    for beta in spec.betas:
        _check_range(0.0 < beta <= 1.0, f"grid beta must lie in (0, 1], got {beta}")
    bundle = load_corpus(args.matrix, args.tokens)
    store = (
        load_embedding_store(args.embeddings) if args.embeddings is not None else None
    )
    result = run_grid(bundle, spec, MetricConfig(), store=store, threads=args.threads)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "grid_report.txt"), "w", encoding="utf-8") as fh:
        for cell in result.cells:
            fh.write(
                " ".join(
                    [
                        repr(cell.alpha),
                        repr(cell.beta),
                        str(cell.k),
                        _fmt(cell.cv),
                        _fmt(cell.npmi),
                        _fmt(cell.irbo),
                        _fmt(cell.weco),
                        _fmt(cell.ts),
                        _fmt(cell.td),
                        cell.status,
                    ]
                )
            )
            fh.write("\n")
    with open(os.path.join(args.out, "winners.txt"), "w", encoding="utf-8") as fh:
        for k in sorted(result.winners):
            cell = result.winners[k]
            fh.write(
                " ".join(
                    [
                        str(k),
                        repr(cell.alpha),
                        repr(cell.beta),
                        _fmt(cell.cv),
                        _fmt(cell.npmi),
                        _fmt(cell.irbo),
                        _fmt(cell.weco),
                        _fmt(cell.ts),
                        _fmt(cell.td),
                    ]
                )
            )
            fh.write("\n")
    entries = [
        ("artifact", "grid"),
        ("version", __version__),
        ("fingerprint", fingerprint(bundle)),
        ("alphas", " ".join(repr(a) for a in spec.alphas)),
        ("betas", " ".join(repr(b) for b in spec.betas)),
        ("k_min", spec.k_min),
        ("k_max", spec.k_max),
        ("top_n", spec.top_n),
        ("max_iters", spec.max_iters),
        ("cells", len(result.cells)),
        ("winners", len(result.winners)),
    ]
    for i, note in enumerate(result.notes):
        entries.append((f"note.{i:03d}", note))
    entries.append(("created_utc", _now_utc()))
    write_manifest(os.path.join(args.out, "grid_manifest.txt"), entries)
    return 0


# ---------------------------------------------------------------------------
# infer


def cmd_infer(args) -> int:
    _require_dir(args.model, "model")
    _require_file(args.matrix, "matrix")
    _check_range(args.temperature > 0.0, "--temperature must be positive")
    _check_range(args.threads >= 1, "--threads must be >= 1")
    model = load_model(args.model)
    matrix = read_matrix(args.matrix)
    probs = affinity_matrix(
        model.centroids,
        matrix.to_dense(),
        temperature=args.temperature,
        threads=args.threads,
    )
    tmp = f"{args.out}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        for row in probs:
            fh.write(" ".join(repr(v) for v in row.tolist()))
            fh.write("\n")
    os.replace(tmp, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simtopics",
        description="Deterministic topic discovery by progressive similarity thresholds",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="discover topics and write a trace directory")
    p_fit.add_argument("--matrix", required=True)
    p_fit.add_argument("--tokens", required=True)
    p_fit.add_argument("--alpha", type=float, default=0.02)
    p_fit.add_argument("--max-iters", type=int, default=1000, dest="max_iters")
    p_fit.add_argument("--threads", type=int, default=1)
    p_fit.add_argument("--out", required=True)
    p_fit.set_defaults(func=cmd_fit)

    p_desc = sub.add_parser("describe", help="extract descriptors into a model directory")
    p_desc.add_argument("--trace", required=True)
    p_desc.add_argument("--matrix", required=True)
    p_desc.add_argument("--tokens", required=True)
    p_desc.add_argument("--k", type=int, required=True)
    p_desc.add_argument("--beta", type=float, default=0.2)
    p_desc.add_argument("--top-n", type=int, default=10, dest="top_n")
    p_desc.add_argument("--threads", type=int, default=1)
    p_desc.add_argument("--out", required=True)
    p_desc.set_defaults(func=cmd_describe)

    p_eval = sub.add_parser("eval", help="score a model against a reference corpus")
    p_eval.add_argument("--model", required=True)
    p_eval.add_argument("--matrix", required=True)
    p_eval.add_argument("--tokens", required=True)
    p_eval.add_argument("--embeddings", default=None)
    p_eval.add_argument("--threads", type=int, default=1)
    p_eval.add_argument("--out", required=True)
    p_eval.set_defaults(func=cmd_eval)

    p_grid = sub.add_parser("grid", help="run the alpha/beta grid search")
    p_grid.add_argument("--matrix", required=True)
    p_grid.add_argument("--tokens", required=True)
    p_grid.add_argument("--config", default=None)
    p_grid.add_argument("--k-min", type=int, default=None, dest="k_min")
    p_grid.add_argument("--k-max", type=int, default=None, dest="k_max")
    p_grid.add_argument("--top-n", type=int, default=None, dest="top_n")
    p_grid.add_argument("--embeddings", default=None)
    p_grid.add_argument("--threads", type=int, default=1)
    p_grid.add_argument("--out", required=True)
    p_grid.set_defaults(func=cmd_grid)

    p_infer = sub.add_parser("infer", help="softmax topic affinity for unseen documents")
    p_infer.add_argument("--model", required=True)
    p_infer.add_argument("--matrix", required=True)
    p_infer.add_argument("--temperature", type=float, default=1.0)
    p_infer.add_argument("--threads", type=int, default=1)
    p_infer.add_argument("--out", required=True)
    p_infer.set_defaults(func=cmd_infer)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"simtopics: {exc}", file=sys.stderr)
        return 2
    except SimtopicsError as exc:
        print(f"simtopics: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
