"""Pydantic request/response models for the vecdep service (schema vecdep/1)."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = "vecdep/1"


class Matrix(BaseModel):
    columns: list[str]
    rows: list[list[float]]


class GroupDef(BaseModel):
    name: str
    columns: list[str]


class GroupsConfig(BaseModel):
    groups: list[GroupDef]


class CollapseModel(BaseModel):
    kind: Literal[
        "weighted-average",
        "extreme-average",
        "maximum",
        "minimum",
        "distance",
        "kernel",
        "multivariate-rank",
        "pit",
    ]
    weights: Optional[list[float]] = None
    m: int = 1
    direction: Literal["largest", "smallest"] = "largest"
    metric: Literal["euclidean", "manhattan", "canberra", "minkowski"] = "euclidean"
    order: float = 3.0
    kernel: Literal["linear", "polynomial", "gaussian", "von-mises"] = "gaussian"
    degree: int = 2
    sigma: Optional[float] = None
    kappa: Optional[list[float]] = None
    rank_on_margins: bool = False


class MeasureModel(BaseModel):
    kind: Literal["pearson", "spearman", "tau", "tail-upper", "tail-lower"] = "pearson"
    tail_k: Optional[int] = None


class SimulateRequest(BaseModel):
    family: Literal[
        "clayton", "gumbel", "independence", "comonotone", "countermonotone", "independent-groups"
    ]
    theta: Optional[float] = None
    tau: Optional[float] = None
    dims: list[int] = Field(min_length=1, max_length=2)
    n: int = Field(ge=1)
    seed: int


class SimulateResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    columns: list[str]
    rows: list[list[float]]

    model_config = {"populate_by_name": True}


class MeasureRequest(BaseModel):
    data: Matrix
    groups: GroupsConfig
    group_a: str
    group_b: str
    collapse: CollapseModel
    measure: MeasureModel = MeasureModel()
    ci: Literal["none", "asymptotic", "bootstrap"] = "none"
    level: float = 0.95
    bootstrap_samples: int = 1000
    seed: int = 0


class MeasureResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    measure: str
    collapse: str
    groups: list[str]
    estimate: float
    std_error: Optional[float] = None
    ci: Optional[tuple[float, float]] = None
    method: str
    n: int
    k: int
    degenerate_variance: bool = False

    model_config = {"populate_by_name": True}


class CollapseRequest(BaseModel):
    data: Matrix
    groups: GroupsConfig
    group: str
    collapse: CollapseModel


class CollapseResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    group: str
    collapse: str
    arity: str
    n: int
    k: int
    values: list[float]

    model_config = {"populate_by_name": True}


class AssessRequest(BaseModel):
    data: Matrix
    groups: GroupsConfig
    collapse: CollapseModel
    seed: int = 0


class PanelModel(BaseModel):
    group_a: str
    group_b: str
    u_a: list[float]
    u_b: list[float]
    spearman_rho: Optional[float]
    kendall_tau: Optional[float]
    tail_upper: Optional[float]


class AssessResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    k: int
    arity: str
    panels: list[PanelModel]

    model_config = {"populate_by_name": True}


class KendallRequest(BaseModel):
    family: Literal["clayton", "gumbel", "independence"]
    theta: Optional[float] = None
    tau: Optional[float] = None
    dims: list[int] = Field(min_length=1, max_length=2)
    mode: Literal["univariate", "joint", "copula", "sample"]
    grid: Optional[list[float]] = None
    n: Optional[int] = None
    seed: Optional[int] = None


class KendallUnivariatePoint(BaseModel):
    t: float
    value: float


class KendallGridPoint(BaseModel):
    t1: float
    t2: float
    value: float


class KendallResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    mode: str
    family: str
    theta: float
    dims: list[int]
    univariate: Optional[list[KendallUnivariatePoint]] = None
    grid: Optional[list[KendallGridPoint]] = None
    sample: Optional[list[list[float]]] = None

    model_config = {"populate_by_name": True}


class RollingRequest(BaseModel):
    data: Matrix
    groups: GroupsConfig
    group_a: str
    group_b: str
    collapse: CollapseModel
    measure: MeasureModel = MeasureModel()
    window: int
    step: int = 1
    ci: Literal["none", "asymptotic", "bootstrap"] = "none"
    level: float = 0.95
    bootstrap_samples: int = 200
    seed: int = 0


class RollingRowModel(BaseModel):
    window_end: int
    estimate: float
    std_error: Optional[float] = None
    ci_lo: Optional[float] = None
    ci_hi: Optional[float] = None


class RollingResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA_VERSION, alias="schema")
    window: int
    step: int
    rows: list[RollingRowModel]

    model_config = {"populate_by_name": True}


class ErrorDetail(BaseModel):
    code: Literal["usage", "data", "degenerate", "internal"]
    message: str
