"""FastAPI application wiring the handlers to HTTP routes."""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import handlers, models


def create_app() -> FastAPI:
    from .. import __version__

    app = FastAPI(
        title="frane",
        version=__version__,
        description=(
            "Unsupervised feature ranking via attribute networks and weighted "
            "PageRank, with a cross-validated kNN-reconstruction evaluator."
        ),
    )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        # bad data or bad parameters, not a server fault
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=models.HealthResponse)
    def health():
        return models.HealthResponse(status="ok", version=__version__)

    @app.post("/rank", response_model=models.RankResponse, response_model_exclude_none=True)
    def rank(req: models.RankRequest):
        return handlers.rank(req)

    @app.post("/evaluate", response_model=models.EvaluateResponse)
    def evaluate(req: models.EvaluateRequest):
        return handlers.evaluate(req)

    @app.post("/curve", response_model=models.EvaluateResponse)
    def curve(req: models.CurveRequest):
        return handlers.curve(req)

    @app.post("/sweep", response_model=models.SweepResponse)
    def sweep(req: models.SweepRequest):
        return handlers.sweep(req)

    return app
