"""Command-line pipeline: validate, eda, train, evaluate, predict, rank, serve.

Exit codes: 0 success, 1 domain failure (bad data, unmet preconditions),
2 usage or I/O errors (unknown flags, out-of-range options, missing files).
Machine-readable output goes to stdout; logs and warnings go to stderr.
Options may also come from a JSON config file (--config); explicit flags
win over config values.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .eda import (
    DEFAULT_CORRELATION_THRESHOLD,
    DEFAULT_IQR_MULTIPLIER,
    correlation_matrix,
    remove_outliers,
    threshold_pairs,
)
from .ensemble import BoostParams, ForestParams
from .errors import ParameterError, ProfileMismatchError, TubepulseError
from .evaluation import (
    render_reports,
    score_model,
    train_and_score,
    train_test_split,
)
from .features import Draft, build_matrix, infer_profile, featurize, profile_by_name
from .ingest import parse_csv
from .model import KIND_BOOSTED, KIND_FOREST, KIND_TREE, load_model, predict, save_model
from .server import build_state, run as run_server
from .trees import TreeParams
from .trendrank import (
    DEFAULT_BOOST,
    load_embeddings,
    load_topics,
    match_score,
    rank_score,
)

log = logging.getLogger("tubepulse")

ALGO_KINDS = {"tree": KIND_TREE, "forest": KIND_FOREST, "gbt": KIND_BOOSTED}
OUTLIER_COLUMNS = ("view_count", "likes", "dislikes", "comment_count")


def _unit_interval(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {text}")
    return v


def _open_unit(text: str) -> float:
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {text}")
    return v


def _half_open_unit(text: str) -> float:
    v = float(text)
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1], got {text}")
    return v


def _nonneg(text: str) -> float:
    v = float(text)
    if v < 0.0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return v


def _pos_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return v


def _get(args, name: str, default=None):
    """Flag value if given, else config-file value, else default."""
    val = getattr(args, name, None)
    if val is None:
        cfg = getattr(args, "_config", {})
        val = cfg.get(name, cfg.get(name.replace("_", "-")))
    return default if val is None else val


def _emit(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _read_json_input(args):
    source = _get(args, "input")
    if source:
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"input is not valid JSON: {exc}")


def _draft_from_payload(payload: dict) -> Draft:
    try:
        return Draft.from_dict(payload)
    except KeyError as exc:
        raise ParameterError(f"input is missing required field {exc.args[0]!r}")


def cmd_validate(args) -> int:
    all_clean = True
    results = []
    for path in args.csv:
        records, report = parse_csv(path)
        results.append({"file": str(path), **report.to_dict()})
        if report.rejected:
            all_clean = False
            log.warning("%s: %d row(s) rejected", path, report.rejected)
    _emit({"files": results, "ok": all_clean})
    return 0 if all_clean else 1


def cmd_eda(args) -> int:
    threshold = _get(args, "threshold", DEFAULT_CORRELATION_THRESHOLD)
    k = _get(args, "k", DEFAULT_IQR_MULTIPLIER)
    out_dir = Path(_get(args, "out", "eda_out"))
    records, report = parse_csv(args.csv)
    if report.rejected:
        log.warning("%d row(s) rejected during ingest", report.rejected)
    if not records:
        raise TubepulseError("no valid rows to analyze")

    matrix = build_matrix(records, profile_by_name("post"))
    cm = correlation_matrix(matrix)
    pairs = threshold_pairs(cm, threshold)
    _, outlier_reports = remove_outliers(records, OUTLIER_COLUMNS, k=k)

    out_dir.mkdir(parents=True, exist_ok=True)
    corr_path = out_dir / "correlation.csv"
    with corr_path.open("w", encoding="utf-8") as fh:
        fh.write("," + ",".join(cm.labels) + "\n")
        for label, row in zip(cm.labels, cm.values):
            fh.write(label + "," + ",".join(f"{v:.10g}" for v in row) + "\n")
    pairs_path = out_dir / "threshold_pairs.json"
    pairs_path.write_text(json.dumps({
        "threshold": threshold,
        "pairs": [{"a": a, "b": b, "r": r} for a, b, r in pairs],
    }, indent=2), encoding="utf-8")
    outliers_path = out_dir / "outliers.json"
    outliers_path.write_text(json.dumps({
        "k": k,
        "columns": [rep.to_dict() for rep in outlier_reports],
    }, indent=2), encoding="utf-8")

    _emit({
        "artifacts": {
            "correlation": str(corr_path),
            "threshold_pairs": str(pairs_path),
            "outliers": str(outliers_path),
        },
        "rows": len(records),
        "pairs_over_threshold": len(pairs),
        "outlier_rows_flagged": sorted(
            {i for rep in outlier_reports for i in rep.outlier_row_indices}),
        "warnings": {
            "degenerate_columns": list(cm.degenerate),
        },
    })
    return 0


def _tree_params(args) -> TreeParams:
    return TreeParams(
        max_depth=int(_get(args, "max_depth", 8)),
        min_samples_leaf=int(_get(args, "min_samples_leaf", 5)),
        min_gain=float(_get(args, "min_gain", 0.0)),
    )


def _build_params(algo: str, args, seed: int):
    if algo == "tree":
        return _tree_params(args)
    if algo == "forest":
        return ForestParams(
            n_trees=int(_get(args, "n_trees", 100)),
            feature_fraction=float(_get(args, "feature_fraction", 1.0 / 3.0)),
            bootstrap=not bool(_get(args, "no_bootstrap", False)),
            seed=seed,
            tree=_tree_params(args),
        )
    # boosting wants shallow trees unless told otherwise
    tree = TreeParams(
        max_depth=int(_get(args, "max_depth", 4)),
        min_samples_leaf=int(_get(args, "min_samples_leaf", 5)),
        min_gain=float(_get(args, "min_gain", 0.0)),
    )
    return BoostParams(
        n_rounds=int(_get(args, "n_rounds", 200)),
        eta=float(_get(args, "eta", 0.1)),
        leaf_l2=float(_get(args, "leaf_l2", 1.0)),
        tree=tree,
    )


def cmd_train(args) -> int:
    algo = _get(args, "algo")
    if algo not in ALGO_KINDS:
        log.error("unknown algorithm %r; valid: %s", algo, "/".join(sorted(ALGO_KINDS)))
        return 2
    seed = int(_get(args, "seed", 0))
    ratio = float(_get(args, "ratio", 0.7))
    transform = _get(args, "transform", "log1p")
    profile = profile_by_name(_get(args, "profile", "post"))
    out_path = _get(args, "out", "model.json")
    keep_outliers = bool(_get(args, "keep_outliers", False))
    k = float(_get(args, "k", DEFAULT_IQR_MULTIPLIER))

    records, report = parse_csv(args.csv)
    if report.rejected:
        log.warning("%d row(s) rejected during ingest", report.rejected)

    extra_meta = {"outlier_k": None if keep_outliers else k,
                  "outlier_columns": list(OUTLIER_COLUMNS)}
    if not keep_outliers:
        records, outlier_reports = remove_outliers(records, OUTLIER_COLUMNS, k=k)
        dropped = sum(len(r.outlier_row_indices) for r in outlier_reports)
        log.info("outlier removal dropped up to %d row(s); %d remain",
                 dropped, len(records))

    matrix = build_matrix(records, profile)
    params = _build_params(algo, args, seed)
    model, score = train_and_score(ALGO_KINDS[algo], matrix, params=params,
                                   seed=seed, ratio=ratio, transform=transform,
                                   extra_meta=extra_meta)
    save_model(model, out_path)
    log.info("model written to %s", out_path)
    print(render_reports([score]), file=sys.stderr)
    _emit({"model_path": str(out_path), "report": score.to_dict()})
    return 0


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    records, report = parse_csv(args.csv)
    if report.rejected:
        log.warning("%d row(s) rejected during ingest", report.rejected)
    meta = model.training_meta or {}
    k = meta.get("outlier_k")
    if k is not None:
        records, _ = remove_outliers(records, meta.get("outlier_columns",
                                                       OUTLIER_COLUMNS), k=k)
    matrix = build_matrix(records, model.profile)
    seed = int(_get(args, "seed", meta.get("seed", 0)))
    ratio = float(_get(args, "ratio", meta.get("ratio", 0.7)))
    split = train_test_split(matrix.n_rows, ratio=ratio, seed=seed)
    score = score_model(model, matrix, split)
    print(render_reports([score]), file=sys.stderr)
    _emit({"model_path": str(args.model), "model_version": model.version,
           "report": score.to_dict()})
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    payload = _read_json_input(args)
    if not isinstance(payload, dict):
        raise ParameterError("predict expects a single JSON object")
    draft = _draft_from_payload(payload)
    override = _get(args, "profile")
    inferred = (profile_by_name(override) if override
                else infer_profile(draft.likes, draft.dislikes, draft.comment_count))
    if inferred.name != model.profile.name:
        raise ProfileMismatchError(
            f"input resolves to profile {inferred.name!r} but the model was "
            f"trained with {model.profile.name!r}")
    fv = featurize(draft, draft.as_of, model.profile)
    raw = predict(model, fv)
    print(int(raw + 0.5))
    _emit({
        "predicted_views": int(raw + 0.5),
        "predicted_views_raw": raw,
        "profile_used": model.profile.name,
        "model_version": model.version,
    })
    return 0


def cmd_rank(args) -> int:
    model = load_model(args.model)
    table = load_embeddings(args.embeddings)
    topics = load_topics(args.topics)
    beta = float(_get(args, "beta", DEFAULT_BOOST))
    payload = _read_json_input(args)
    if not isinstance(payload, list):
        raise ParameterError("rank expects a JSON array of drafts")
    if not payload:
        raise TubepulseError("no drafts to rank")

    rows = []
    for i, entry in enumerate(payload):
        draft = _draft_from_payload(entry)
        draft_id = draft.draft_id or f"draft-{i + 1}"
        fv = featurize(draft, draft.as_of, model.profile)
        raw = predict(model, fv)
        match = match_score(draft, topics, table)
        ranked = rank_score(raw, match, beta)
        rows.append({
            "id": draft_id,
            "predicted_views": int(raw + 0.5),
            "match_score": match.match_score,
            "best_topic": match.best_topic or "-",
            "rank_score": ranked.rank_score,
        })
    rows.sort(key=lambda r: -r["rank_score"])

    header = (f"{'id':<16} {'predicted_views':>15} {'match_score':>12} "
              f"{'best_topic':<24} {'rank_score':>14}")
    print(header)
    print("-" * len(header))
    for row in rows:
        print(f"{row['id']:<16} {row['predicted_views']:>15d} "
              f"{row['match_score']:>12.4f} {row['best_topic']:<24} "
              f"{row['rank_score']:>14.1f}")
    json_out = _get(args, "json_out")
    if json_out:
        Path(json_out).write_text(json.dumps({"ranking": rows}, indent=2),
                                  encoding="utf-8")
    return 0


def cmd_serve(args) -> int:
    model_paths = args.model or _get(args, "models", [])
    if isinstance(model_paths, str):
        model_paths = [model_paths]
    state = build_state(
        model_paths=model_paths,
        embeddings_path=_get(args, "embeddings"),
        topics_path=_get(args, "topics"),
        beta=float(_get(args, "beta", DEFAULT_BOOST)),
        cors_origins=tuple(_get(args, "cors_origin", ["*"])),
        auth_token=_get(args, "token"),
        max_concurrent=(None if _get(args, "max_concurrent") is None
                        else int(_get(args, "max_concurrent"))),
        admin_reload=bool(_get(args, "admin_reload", False)),
    )
    host = _get(args, "host", "127.0.0.1")
    port = int(_get(args, "port", 8000))
    try:
        run_server(state, host=host, port=port)
    except OSError as exc:
        log.error("cannot serve on %s:%d: %s", host, port, exc)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tubepulse",
        description="Trending-video view prediction and trend-boosted ranking.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file; flags override it")

    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("validate", parents=[common],
                       help="check CSV files against the dataset schema")
    p.add_argument("csv", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eda", parents=[common],
                       help="correlation screen and outlier report")
    p.add_argument("csv")
    p.add_argument("--threshold", type=_unit_interval,
                   help="absolute correlation cutoff (default 0.5)")
    p.add_argument("--k", type=_nonneg, help="IQR fence multiplier (default 1.5)")
    p.add_argument("--out", help="artifact directory (default eda_out)")
    p.set_defaults(func=cmd_eda)

    p = sub.add_parser("train", parents=[common],
                       help="fit a model and report holdout scores")
    p.add_argument("csv")
    p.add_argument("--algo", choices=sorted(ALGO_KINDS))
    p.add_argument("--profile", choices=["pre", "post"])
    p.add_argument("--seed", type=int)
    p.add_argument("--ratio", type=_open_unit)
    p.add_argument("--transform", choices=["log1p", "identity"])
    p.add_argument("--out", help="model output path (default model.json)")
    p.add_argument("--k", type=_nonneg, help="outlier fence multiplier")
    p.add_argument("--keep-outliers", action="store_true", default=None)
    p.add_argument("--max-depth", type=_pos_int)
    p.add_argument("--min-samples-leaf", type=_pos_int)
    p.add_argument("--min-gain", type=_nonneg)
    p.add_argument("--n-trees", type=_pos_int)
    p.add_argument("--feature-fraction", type=_half_open_unit)
    p.add_argument("--no-bootstrap", action="store_true", default=None)
    p.add_argument("--n-rounds", type=_pos_int)
    p.add_argument("--eta", type=_half_open_unit)
    p.add_argument("--leaf-l2", type=_nonneg)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", parents=[common],
                       help="score a saved model with its split protocol")
    p.add_argument("csv")
    p.add_argument("--model", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--ratio", type=_open_unit)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", parents=[common],
                       help="predict views for one video JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--input", help="JSON file (default: stdin)")
    p.add_argument("--profile", choices=["pre", "post"])
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("rank", parents=[common],
                       help="score and rank a JSON array of drafts")
    p.add_argument("--model", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--topics", required=True)
    p.add_argument("--beta", type=_nonneg)
    p.add_argument("--input", help="JSON file (default: stdin)")
    p.add_argument("--json-out", help="also write the ranking as JSON here")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--model", action="append")
    p.add_argument("--embeddings")
    p.add_argument("--topics")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--beta", type=_nonneg)
    p.add_argument("--token", help="require this bearer token on /api/*")
    p.add_argument("--cors-origin", action="append")
    p.add_argument("--max-concurrent", type=_pos_int)
    p.add_argument("--admin-reload", action="store_true", default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return 2

    config = {}
    if getattr(args, "config", None):
        try:
            config = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            log.error("cannot read config: %s", exc)
            return 2
        except json.JSONDecodeError as exc:
            log.error("config is not valid JSON: %s", exc)
            return 2
        if not isinstance(config, dict):
            log.error("config must be a JSON object")
            return 2
    args._config = config

    try:
        return args.func(args)
    except TubepulseError as exc:
        log.error("%s", exc)
        return 1
    except OSError as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
