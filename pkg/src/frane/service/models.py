"""Request and response schemas of the ranking service.

Datasets travel as CSV text inside the JSON body, so the service never
touches the client's filesystem.  Numeric defaults are the recommended
pipeline settings.
"""

from typing import Annotated, Literal, Optional

from pydantic import BaseModel, Field

Similarity = Literal["pearson", "canberra", "chebyshev", "manhattan", "euclidean"]
Progression = Literal["geometric", "linear_min", "linear_mean", "linear_median", "quantile"]
Selection = Literal["rqh", "random"]

PositiveCount = Annotated[int, Field(ge=1)]


class CommonOptions(BaseModel):
    """Pipeline flags shared by every endpoint."""

    ignore_columns: list[str] = []
    iterations: int = Field(100, ge=2)
    min_avg_degree: float = Field(1.0, ge=0)
    damping: float = Field(0.85, gt=0, lt=1)
    selection: Selection = "rqh"
    seed: int = 0
    threads: Optional[int] = Field(None, ge=1)


class RankOptions(CommonOptions):
    similarity: Similarity = "pearson"
    progression: Progression = "geometric"


class RankRequest(RankOptions):
    csv_text: str
    include_candidates: bool = False
    include_graph: bool = False
    include_weights: bool = False
    weights_text: Optional[str] = None


class RankedFeature(BaseModel):
    feature: str
    importance: float
    rank: int


class CandidateInfo(BaseModel):
    schedule_index: int
    threshold: float
    avg_degree: float
    rqh: float
    converged: bool


class RankResponse(BaseModel):
    ranking: list[RankedFeature]
    threshold: float
    rqh: float
    similarity: str
    progression: str
    candidates: Optional[list[CandidateInfo]] = None
    graph_edges: Optional[str] = None
    weights_text: Optional[str] = None


class EvaluateRequest(RankOptions):
    csv_text: str
    folds: int = Field(10, ge=2)
    k_neighbors: int = Field(5, ge=1)
    n_prime: list[PositiveCount] = [16]


class CurveRequest(RankOptions):
    """Like EvaluateRequest but the n' grid is derived from the data."""

    csv_text: str
    folds: int = Field(10, ge=2)
    k_neighbors: int = Field(5, ge=1)


class EvalRow(BaseModel):
    fold: int
    n_prime: int
    rmae: float


class MeanRow(BaseModel):
    n_prime: int
    mean_rmae: float


class EvaluateResponse(BaseModel):
    similarity: str
    progression: str
    rows: list[EvalRow]
    summary: list[MeanRow]
    zero_variance_excluded: list[int]


class SweepRequest(CommonOptions):
    """Evaluate every (similarity, progression) combination."""

    csv_text: str
    similarities: list[Similarity] = Field(min_length=1)
    progressions: list[Progression] = Field(min_length=1)
    folds: int = Field(10, ge=2)
    k_neighbors: int = Field(5, ge=1)
    n_prime: list[PositiveCount] = [16]


class SweepResponse(BaseModel):
    blocks: list[EvaluateResponse]


class HealthResponse(BaseModel):
    status: str
    version: str
