"""Endpoint logic, independent of the HTTP transport.

Each handler maps a request model to a response model.  The FastAPI app
routes to these functions; the CLI calls them directly in local mode, so
both surfaces share one code path and produce identical results.
"""

from ..dataset import DataMatrix, parse_csv_text
from ..evalharness import EvalConfig, error_curve_points, evaluate_ranking
from ..graph_rank import ThresholdGraph, build_edge_list, dump_edges
from ..ranking import FraneConfig, run_frane
from ..similarity import feature_similarity, weights_from_text, weights_to_text
from . import models


def _frane_config(req, similarity=None, progression=None) -> FraneConfig:
    return FraneConfig(
        similarity=similarity or req.similarity,
        progression=progression or req.progression,
        iterations=req.iterations,
        min_avg_degree=req.min_avg_degree,
        damping=req.damping,
        selection=req.selection,
        seed=req.seed,
    )


def rank(req: models.RankRequest) -> models.RankResponse:
    X = parse_csv_text(req.csv_text, req.ignore_columns)
    config = _frane_config(req)
    weights = None
    if req.weights_text is not None:
        weights = weights_from_text(req.weights_text)
    elif req.include_graph or req.include_weights:
        # computed here so the chosen graph can be rebuilt for the dump
        weights = feature_similarity(X, config.similarity, threads=req.threads)
    ranking, candidates = run_frane(X, config, threads=req.threads, weights=weights)

    graph_edges = None
    if req.include_graph:
        graph = ThresholdGraph(build_edge_list(weights))
        graph.advance_to(ranking.chosen_threshold)
        graph_edges = dump_edges(graph)

    return models.RankResponse(
        ranking=[
            models.RankedFeature(
                feature=ranking.feature_names[j],
                importance=float(ranking.importances[j]),
                rank=r + 1,
            )
            for r, j in enumerate(ranking.order)
        ],
        threshold=ranking.chosen_threshold,
        rqh=ranking.chosen_rqh,
        similarity=config.similarity,
        progression=config.progression,
        candidates=[
            models.CandidateInfo(
                schedule_index=c.schedule_index,
                threshold=c.threshold,
                avg_degree=c.avg_degree,
                rqh=c.rqh,
                converged=c.scores.converged,
            )
            for c in candidates
        ]
        if req.include_candidates
        else None,
        graph_edges=graph_edges,
        weights_text=weights_to_text(weights) if req.include_weights else None,
    )


def _evaluate(X: DataMatrix, req, config: FraneConfig, n_prime) -> models.EvaluateResponse:
    eval_config = EvalConfig(
        folds=req.folds,
        k_neighbors=req.k_neighbors,
        n_prime_list=tuple(n_prime),
        seed=req.seed,
    )
    ranker = lambda train: run_frane(train, config, threads=req.threads)[0]
    report = evaluate_ranking(X, ranker, eval_config)
    return models.EvaluateResponse(
        similarity=config.similarity,
        progression=config.progression,
        rows=[
            models.EvalRow(
                fold=fold,
                n_prime=report.n_prime_list[col],
                rmae=float(report.per_fold_rmae[fold, col]),
            )
            for fold in range(report.folds)
            for col in range(len(report.n_prime_list))
        ],
        summary=[
            models.MeanRow(n_prime=n, mean_rmae=float(v))
            for n, v in zip(report.n_prime_list, report.mean_rmae)
        ],
        zero_variance_excluded=list(report.excluded_per_fold),
    )


def evaluate(req: models.EvaluateRequest) -> models.EvaluateResponse:
    X = parse_csv_text(req.csv_text, req.ignore_columns)
    return _evaluate(X, req, _frane_config(req), req.n_prime)


def curve(req: models.CurveRequest) -> models.EvaluateResponse:
    X = parse_csv_text(req.csv_text, req.ignore_columns)
    return _evaluate(X, req, _frane_config(req), error_curve_points(X.n))


def sweep(req: models.SweepRequest) -> models.SweepResponse:
    X = parse_csv_text(req.csv_text, req.ignore_columns)
    blocks = []
    for similarity in req.similarities:
        for progression in req.progressions:
            config = _frane_config(req, similarity=similarity, progression=progression)
            blocks.append(_evaluate(X, req, config, req.n_prime))
    return models.SweepResponse(blocks=blocks)
