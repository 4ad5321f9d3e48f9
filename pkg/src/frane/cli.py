"""Command-line client for ranking and evaluation.

The CLI is a thin client over the service API: it reads the input file,
builds the request model, and formats the response.  By default requests
are executed in-process; ``--server URL`` sends them to a running service
instead, with identical results either way.

Exit codes: 0 success, 1 pipeline error (bad data, unreachable server),
2 flag misuse.
"""

import argparse
import json
import sys

import httpx
from pydantic import ValidationError

from .service import handlers, models
from .similarity import MEASURES
from .thresholds import PROGRESSIONS


class CliError(Exception):
    def __init__(self, message, code=1):
        super().__init__(message)
        self.code = code


_LOCAL_HANDLERS = {
    "/rank": (handlers.rank, models.RankResponse),
    "/evaluate": (handlers.evaluate, models.EvaluateResponse),
    "/curve": (handlers.curve, models.EvaluateResponse),
    "/sweep": (handlers.sweep, models.SweepResponse),
}


def _call(server, path, request):
    """Run one service request locally or against a remote server."""
    handler, response_cls = _LOCAL_HANDLERS[path]
    if server is None:
        return handler(request)
    try:
        resp = httpx.post(server.rstrip("/") + path, json=request.model_dump(), timeout=None)
    except httpx.HTTPError as exc:
        raise CliError(f"request to {server} failed: {exc}") from exc
    if resp.status_code == 200:
        return response_cls.model_validate(resp.json())
    try:
        detail = resp.json().get("detail", resp.text)
    except ValueError:
        detail = resp.text
    code = 2 if resp.status_code == 422 else 1
    raise CliError(f"server rejected request ({resp.status_code}): {detail}", code)


def _read_input(path) -> str:
    try:
        with open(path, newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read input: {exc}") from exc


def _write_output(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _common_payload(args) -> dict:
    ignore = [c for c in (args.ignore_columns or "").split(",") if c]
    return {
        "ignore_columns": ignore,
        "iterations": args.iterations,
        "min_avg_degree": args.min_avg_degree,
        "damping": args.damping,
        "selection": args.selection,
        "seed": args.seed,
        "threads": args.threads,
    }


def _eval_csv(resp, prefix="") -> str:
    lines = []
    for row in resp.rows:
        lines.append(f"{prefix}{row.fold},{row.n_prime},{repr(row.rmae)}")
    for row in resp.summary:
        lines.append(f"{prefix}mean,{row.n_prime},{repr(row.mean_rmae)}")
    return "\n".join(lines)


def cmd_rank(args) -> int:
    request = models.RankRequest(
        csv_text=_read_input(args.input),
        similarity=args.similarity,
        progression=args.progression,
        include_candidates=args.candidates,
        include_graph=args.dump_graph is not None,
        include_weights=args.save_weights is not None,
        weights_text=_read_input(args.weights) if args.weights else None,
        **_common_payload(args),
    )
    resp = _call(args.server, "/rank", request)
    if args.dump_graph:
        _write_output(resp.graph_edges, args.dump_graph)
    if args.save_weights:
        _write_output(resp.weights_text, args.save_weights)
    if args.format == "csv":
        lines = ["rank,feature,importance"]
        lines += [f"{r.rank},{r.feature},{repr(r.importance)}" for r in resp.ranking]
        out = "\n".join(lines) + "\n"
    else:
        data = resp.model_dump(exclude_none=True)
        data.pop("graph_edges", None)
        data.pop("weights_text", None)
        out = json.dumps(data, indent=2) + "\n"
    _write_output(out, args.output)
    return 0


def cmd_evaluate(args) -> int:
    request = models.EvaluateRequest(
        csv_text=_read_input(args.input),
        similarity=args.similarity,
        progression=args.progression,
        folds=args.folds,
        k_neighbors=args.k,
        n_prime=args.n_prime,
        **_common_payload(args),
    )
    resp = _call(args.server, "/evaluate", request)
    _write_eval(resp, args)
    return 0


def cmd_curve(args) -> int:
    request = models.CurveRequest(
        csv_text=_read_input(args.input),
        similarity=args.similarity,
        progression=args.progression,
        folds=args.folds,
        k_neighbors=args.k,
        **_common_payload(args),
    )
    resp = _call(args.server, "/curve", request)
    _write_eval(resp, args)
    return 0


def _write_eval(resp, args):
    if args.format == "json":
        out = json.dumps(resp.model_dump(), indent=2) + "\n"
    else:
        out = "fold,n_prime,rmae\n" + _eval_csv(resp) + "\n"
    _write_output(out, args.output)


def cmd_sweep(args) -> int:
    request = models.SweepRequest(
        csv_text=_read_input(args.input),
        similarities=args.similarities,
        progressions=args.progressions,
        folds=args.folds,
        k_neighbors=args.k,
        n_prime=args.n_prime,
        **_common_payload(args),
    )
    resp = _call(args.server, "/sweep", request)
    if args.format == "json":
        out = json.dumps(resp.model_dump(), indent=2) + "\n"
    else:
        lines = ["similarity,progression,fold,n_prime,rmae"]
        for block in resp.blocks:
            lines.append(_eval_csv(block, prefix=f"{block.similarity},{block.progression},"))
        out = "\n".join(lines) + "\n"
    _write_output(out, args.output)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def _add_common(parser, default_format):
    parser.add_argument("-i", "--input", required=True, help="input CSV file (header row required)")
    parser.add_argument(
        "--ignore-columns",
        default="",
        metavar="NAMES",
        help="comma-separated column names to drop, e.g. class labels",
    )
    parser.add_argument("--similarity", choices=MEASURES, default="pearson")
    parser.add_argument("--progression", choices=PROGRESSIONS, default="geometric")
    parser.add_argument("--iterations", type=int, default=100, help="number of thresholds (default 100)")
    parser.add_argument("--min-avg-degree", type=float, default=1.0, help="sparsity gate (default 1)")
    parser.add_argument("--damping", type=float, default=0.85, help="PageRank damping (default 0.85)")
    parser.add_argument("--selection", choices=("rqh", "random"), default="rqh")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
    parser.add_argument("--server", default=None, metavar="URL", help="send the request to a running service")
    parser.add_argument("-o", "--output", default=None, help="output file (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default=default_format)


def _add_eval_flags(parser):
    parser.add_argument("--folds", type=int, default=10, help="cross-validation folds (default 10)")
    parser.add_argument("--k", type=int, default=5, help="nearest neighbors (default 5)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frane",
        description="Unsupervised feature ranking via attribute networks and weighted PageRank.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank the features of a CSV dataset")
    _add_common(p, default_format="json")
    p.add_argument("--candidates", action="store_true", help="include all candidate rankings in JSON output")
    p.add_argument("--dump-graph", metavar="PATH", help="write the chosen graph as 'j k w' lines")
    p.add_argument("--save-weights", metavar="PATH", help="cache the similarity matrix to a file")
    p.add_argument("--weights", metavar="PATH", help="reuse a similarity matrix cached by --save-weights")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("evaluate", help="score a ranking by cross-validated kNN reconstruction")
    _add_common(p, default_format="csv")
    _add_eval_flags(p)
    p.add_argument("--n-prime", type=int, nargs="+", default=[16], help="top-feature counts to evaluate")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("curve", help="evaluate over the full error-curve n' grid")
    _add_common(p, default_format="csv")
    _add_eval_flags(p)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("sweep", help="evaluate a grid of similarity measures and progressions")
    _add_common(p, default_format="csv")
    _add_eval_flags(p)
    p.add_argument("--n-prime", type=int, nargs="+", default=[16])
    p.add_argument("--similarities", nargs="+", choices=MEASURES, default=list(MEASURES))
    p.add_argument("--progressions", nargs="+", choices=PROGRESSIONS, default=list(PROGRESSIONS))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def _validate(parser, args):
    if getattr(args, "iterations", 2) < 2:
        parser.error("--iterations must be >= 2")
    if not 0 < getattr(args, "damping", 0.5) < 1:
        parser.error("--damping must be in (0, 1)")
    if getattr(args, "min_avg_degree", 0) < 0:
        parser.error("--min-avg-degree must be >= 0")
    if getattr(args, "threads", None) is not None and args.threads < 1:
        parser.error("--threads must be >= 1")
    if getattr(args, "folds", 2) < 2:
        parser.error("--folds must be >= 2")
    if getattr(args, "k", 1) < 1:
        parser.error("--k must be >= 1")
    if min(getattr(args, "n_prime", [1])) < 1:
        parser.error("--n-prime values must be >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ValidationError as exc:
        print(f"error: invalid request: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
