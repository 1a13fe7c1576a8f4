"""FastAPI application wrapping the vecdep library."""

from __future__ import annotations

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..archimedean import ArchimedeanGenerator, ScenarioSpec, sample_archimedean, sample_scenario, tau_to_theta
from ..assess import assess_independence
from ..collapse import CollapseSpec, collapse_group
from ..core import GroupedData
from ..errors import DataError, DegenerateError, UsageError, VecdepError
from ..kendall import JointKendallModel, kendall_copula_eval, kendall_joint, kendall_univariate, sample_kendall_copula
from ..measures import MeasureSpec
from ..pipeline import estimate_dependence
from ..rolling import rolling_dependence
from . import schemas as sch

__all__ = ["create_app"]


def _error_code(exc: VecdepError) -> str:
    if isinstance(exc, UsageError):
        return "usage"
    if isinstance(exc, DataError):
        return "data"
    if isinstance(exc, DegenerateError):
        return "degenerate"
    return "internal"


def _collapse_spec(model: sch.CollapseModel) -> CollapseSpec:
    return CollapseSpec(
        kind=model.kind,
        weights=None if model.weights is None else tuple(model.weights),
        m=model.m,
        direction=model.direction,
        metric=model.metric,
        order=model.order,
        kernel=model.kernel,
        degree=model.degree,
        sigma=model.sigma,
        kappa=None if model.kappa is None else tuple(model.kappa),
        rank_on_margins=model.rank_on_margins,
    )


def _grouped_data(data: sch.Matrix, groups: sch.GroupsConfig) -> GroupedData:
    col_index = {name: i for i, name in enumerate(data.columns)}
    parsed = []
    for g in groups.groups:
        idx = []
        for col in g.columns:
            if col not in col_index:
                raise DataError(f"group {g.name!r} references unknown column {col!r}")
            idx.append(col_index[col])
        parsed.append((g.name, idx))
    values = np.asarray(data.rows, dtype=float)
    if values.ndim != 2 or values.shape[1] != len(data.columns):
        raise DataError("row width does not match the column list")
    return GroupedData(values=values, groups=parsed, column_names=list(data.columns))


def _resolve_generator(family: str, theta: float | None, tau: float | None) -> ArchimedeanGenerator:
    if family == "independence":
        if theta is not None:
            raise UsageError("independence takes no theta")
        return ArchimedeanGenerator("independence")
    if theta is not None and tau is not None:
        raise UsageError("give either theta or tau, not both")
    if theta is None:
        if tau is None:
            raise UsageError(f"{family} needs theta or tau")
        theta = tau_to_theta(family, tau)
    return ArchimedeanGenerator(family, theta)


def create_app() -> FastAPI:
    app = FastAPI(title="vecdep", version="0.1.0")

    @app.exception_handler(VecdepError)
    async def vecdep_error_handler(_request: Request, exc: VecdepError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"detail": {"code": _error_code(exc), "message": str(exc)}},
        )

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok", "schema": sch.SCHEMA_VERSION}

    @app.post("/v1/simulate", response_model=sch.SimulateResponse, response_model_by_alias=True)
    def simulate(req: sch.SimulateRequest) -> sch.SimulateResponse:
        scenario_kinds = {"comonotone", "countermonotone", "independent-groups"}
        if req.family in scenario_kinds:
            if req.theta is not None or req.tau is not None:
                raise UsageError(f"{req.family} takes neither theta nor tau")
            if len(req.dims) != 2:
                raise UsageError(f"{req.family} needs two group dimensions")
            p, q = req.dims
            data = sample_scenario(ScenarioSpec(kind=req.family, p=p, q=q), req.n, req.seed)
            return sch.SimulateResponse(columns=data.column_names, rows=data.values.tolist())
        gen = _resolve_generator(req.family, req.theta, req.tau)
        if len(req.dims) == 2:
            p, q = req.dims
            columns = [f"x{j + 1}" for j in range(p)] + [f"y{j + 1}" for j in range(q)]
            d = p + q
        else:
            d = req.dims[0]
            columns = [f"x{j + 1}" for j in range(d)]
        rows = sample_archimedean(gen, d, req.n, req.seed)
        return sch.SimulateResponse(columns=columns, rows=rows.tolist())

    @app.post("/v1/measure", response_model=sch.MeasureResponse, response_model_by_alias=True)
    def measure(req: sch.MeasureRequest) -> sch.MeasureResponse:
        data = _grouped_data(req.data, req.groups)
        cspec = _collapse_spec(req.collapse)
        mspec = MeasureSpec(kind=req.measure.kind, tail_k=req.measure.tail_k)
        est = estimate_dependence(
            data,
            req.group_a,
            req.group_b,
            cspec,
            mspec,
            ci=req.ci,
            level=req.level,
            n_boot=req.bootstrap_samples,
            seed=req.seed,
        )
        return sch.MeasureResponse(
            measure=mspec.kind,
            collapse=cspec.kind,
            groups=[req.group_a, req.group_b],
            estimate=est.value,
            std_error=est.std_error,
            ci=est.ci,
            method=est.method,
            n=est.n,
            k=est.k,
            degenerate_variance=est.degenerate_variance,
        )

    @app.post("/v1/collapse", response_model=sch.CollapseResponse, response_model_by_alias=True)
    def collapse(req: sch.CollapseRequest) -> sch.CollapseResponse:
        data = _grouped_data(req.data, req.groups)
        cspec = _collapse_spec(req.collapse)
        sample = collapse_group(data, req.group, cspec)
        return sch.CollapseResponse(
            group=req.group,
            collapse=cspec.kind,
            arity=sample.arity,
            n=sample.source_n,
            k=sample.values.size,
            values=sample.values.tolist(),
        )

    @app.post("/v1/assess", response_model=sch.AssessResponse, response_model_by_alias=True)
    def assess(req: sch.AssessRequest) -> sch.AssessResponse:
        data = _grouped_data(req.data, req.groups)
        result = assess_independence(data, _collapse_spec(req.collapse), seed=req.seed)
        panels = [
            sch.PanelModel(
                group_a=p.group_a,
                group_b=p.group_b,
                u_a=p.u_a.tolist(),
                u_b=p.u_b.tolist(),
                spearman_rho=p.spearman_rho,
                kendall_tau=p.kendall_tau,
                tail_upper=p.tail_upper,
            )
            for p in result.panels
        ]
        return sch.AssessResponse(k=result.k, arity=result.arity, panels=panels)

    @app.post("/v1/kendall", response_model=sch.KendallResponse, response_model_by_alias=True)
    def kendall(req: sch.KendallRequest) -> sch.KendallResponse:
        gen = _resolve_generator(req.family, req.theta, req.tau)
        grid = req.grid if req.grid is not None else [i / 100.0 for i in range(101)]
        if req.mode == "univariate":
            if len(req.dims) != 1:
                raise UsageError("univariate mode takes a single dimension")
            p = req.dims[0]
            pts = [
                sch.KendallUnivariatePoint(t=t, value=float(kendall_univariate(gen, p, t))) for t in grid
            ]
            return sch.KendallResponse(
                mode=req.mode, family=gen.family, theta=gen.theta, dims=req.dims, univariate=pts
            )
        if len(req.dims) != 2:
            raise UsageError(f"{req.mode} mode needs two dimensions p,q")
        model = JointKendallModel(gen=gen, p=req.dims[0], q=req.dims[1])
        if req.mode == "joint":
            pts = [
                sch.KendallGridPoint(t1=t1, t2=t2, value=float(kendall_joint(model, t1, t2)))
                for t1 in grid
                for t2 in grid
            ]
            return sch.KendallResponse(
                mode=req.mode, family=gen.family, theta=gen.theta, dims=req.dims, grid=pts
            )
        if req.mode == "copula":
            pts = [
                sch.KendallGridPoint(t1=u1, t2=u2, value=float(kendall_copula_eval(model, u1, u2)))
                for u1 in grid
                for u2 in grid
            ]
            return sch.KendallResponse(
                mode=req.mode, family=gen.family, theta=gen.theta, dims=req.dims, grid=pts
            )
        if req.n is None or req.seed is None:
            raise UsageError("sample mode needs n and seed")
        sample = sample_kendall_copula(model, req.n, req.seed)
        return sch.KendallResponse(
            mode=req.mode, family=gen.family, theta=gen.theta, dims=req.dims, sample=sample.tolist()
        )

    @app.post("/v1/rolling", response_model=sch.RollingResponse, response_model_by_alias=True)
    def rolling(req: sch.RollingRequest) -> sch.RollingResponse:
        data = _grouped_data(req.data, req.groups)
        cspec = _collapse_spec(req.collapse)
        mspec = MeasureSpec(kind=req.measure.kind, tail_k=req.measure.tail_k)
        rows = rolling_dependence(
            data,
            req.group_a,
            req.group_b,
            cspec,
            mspec,
            window=req.window,
            step=req.step,
            ci=req.ci,
            level=req.level,
            n_boot=req.bootstrap_samples,
            seed=req.seed,
        )
        return sch.RollingResponse(
            window=req.window,
            step=req.step,
            rows=[
                sch.RollingRowModel(
                    window_end=r.window_end,
                    estimate=r.estimate,
                    std_error=r.std_error,
                    ci_lo=r.ci_lo,
                    ci_hi=r.ci_hi,
                )
                for r in rows
            ],
        )

    return app
