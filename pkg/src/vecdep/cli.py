"""Command-line interface: a thin client over the vecdep service.

By default the service runs in-process; --server points the client at a
remote instance instead. Exit codes: 0 success, 2 usage error, 3 data error,
4 numeric degeneracy.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .errors import DataError, DegenerateError, UsageError, VecdepError
from .io import format_float, matrix_to_csv, parse_groups_config, read_csv_matrix

_EXIT_CODES = {"usage": 2, "data": 3, "degenerate": 4}


class ServiceClient:
    """HTTP client against a remote server, or the in-process ASGI app."""

    def __init__(self, server: str | None = None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)
        else:
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from starlette.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app(), raise_server_exceptions=False)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code == 422:
            raise UsageError(f"invalid request: {resp.text}")
        body = resp.json()
        if resp.status_code != 200:
            detail = body.get("detail", {})
            code = detail.get("code", "data") if isinstance(detail, dict) else "data"
            message = detail.get("message", str(detail)) if isinstance(detail, dict) else str(detail)
            exc = {"usage": UsageError, "data": DataError, "degenerate": DegenerateError}.get(
                code, VecdepError
            )
            raise exc(message)
        return body


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _stable_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _parse_dims(dims: str) -> list[int]:
    try:
        parts = [int(v) for v in dims.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse dimensions {dims!r}") from None
    if not 1 <= len(parts) <= 2 or any(v < 1 for v in parts):
        raise UsageError("dims must be one or two positive integers, e.g. '2,2'")
    return parts


def _collapse_payload(kind: str, params: str | None, rank_on_margins: bool) -> dict:
    payload = {"kind": kind, "rank_on_margins": rank_on_margins}
    if params:
        try:
            extra = json.loads(params)
        except json.JSONDecodeError as exc:
            raise UsageError(f"--collapse-params is not valid JSON: {exc}") from exc
        if not isinstance(extra, dict):
            raise UsageError("--collapse-params must be a JSON object")
        payload.update(extra)
    return payload


def _load_matrix_payload(input_path: str, groups_path: str) -> tuple[dict, dict]:
    columns, values = read_csv_matrix(input_path)
    groups_doc = json.loads(Path(groups_path).read_text(encoding="utf-8"))
    parse_groups_config(groups_doc, columns)  # validate early, with file-level diagnostics
    data = {"columns": columns, "rows": values.tolist()}
    return data, groups_doc


_COLLAPSE_KINDS = [
    "weighted-average",
    "extreme-average",
    "maximum",
    "minimum",
    "distance",
    "kernel",
    "multivariate-rank",
    "pit",
]
_MEASURE_KINDS = ["pearson", "spearman", "tau", "tail-upper", "tail-lower"]


@click.group()
@click.option("--server", default=None, help="URL of a running vecdep service (default: in-process)")
@click.pass_context
def cli(ctx: click.Context, server: str | None) -> None:
    """Dependence between random vectors via collapsing functions."""
    ctx.obj = {"server": server}


@cli.command()
@click.option("--family", required=True,
              type=click.Choice(["clayton", "gumbel", "independence", "comonotone",
                                 "countermonotone", "independent-groups"]))
@click.option("--theta", type=float, default=None)
@click.option("--tau", type=float, default=None)
@click.option("--dims", default=None, help="group dimensions p,q")
@click.option("--dim", type=int, default=None, help="single total dimension d")
@click.option("--n", required=True, type=int)
@click.option("--seed", required=True, type=int)
@click.option("-o", "--output", default=None)
@click.pass_context
def simulate(ctx, family, theta, tau, dims, dim, n, seed, output):
    """Sample an Archimedean copula or a synthetic dependence scenario to CSV."""
    if (dims is None) == (dim is None):
        raise UsageError("give exactly one of --dims p,q or --dim d")
    dims_list = _parse_dims(dims) if dims is not None else [dim]
    payload = {"family": family, "theta": theta, "tau": tau, "dims": dims_list, "n": n, "seed": seed}
    body = ServiceClient(ctx.obj["server"]).post("/v1/simulate", payload)
    _emit(matrix_to_csv(body["columns"], np.asarray(body["rows"])), output)


@cli.command()
@click.option("--input", "input_path", required=True)
@click.option("--groups", "groups_path", required=True)
@click.option("--group", required=True)
@click.option("--kind", "collapse_kind", required=True, type=click.Choice(_COLLAPSE_KINDS))
@click.option("--collapse-params", default=None)
@click.option("--rank-on-margins", is_flag=True, default=False)
@click.option("-o", "--output", default=None)
@click.pass_context
def collapse(ctx, input_path, groups_path, group, collapse_kind, collapse_params,
             rank_on_margins, output):
    """Collapse one group to its scalar series, emitted as single-column CSV."""
    data, groups_doc = _load_matrix_payload(input_path, groups_path)
    payload = {
        "data": data,
        "groups": groups_doc,
        "group": group,
        "collapse": _collapse_payload(collapse_kind, collapse_params, rank_on_margins),
    }
    body = ServiceClient(ctx.obj["server"]).post("/v1/collapse", payload)
    values = np.asarray(body["values"])[:, None]
    _emit(matrix_to_csv([f"{group}_collapsed"], values), output)


@cli.command()
@click.option("--input", "input_path", required=True)
@click.option("--groups", "groups_path", required=True)
@click.option("--group-a", required=True)
@click.option("--group-b", required=True)
@click.option("--collapse", required=True, type=click.Choice(_COLLAPSE_KINDS))
@click.option("--collapse-params", default=None)
@click.option("--rank-on-margins", is_flag=True, default=False)
@click.option("--measure", default="pearson", type=click.Choice(_MEASURE_KINDS))
@click.option("--ci", default="none", type=click.Choice(["none", "asymptotic", "bootstrap"]))
@click.option("--level", type=float, default=0.95)
@click.option("--bootstrap-samples", type=int, default=1000)
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", default=None)
@click.pass_context
def measure(ctx, input_path, groups_path, group_a, group_b, collapse, collapse_params,
            rank_on_margins, measure, ci, level, bootstrap_samples, seed, output):
    """Collapsed dependence estimate between two groups, with optional CI."""
    data, groups_doc = _load_matrix_payload(input_path, groups_path)
    payload = {
        "data": data,
        "groups": groups_doc,
        "group_a": group_a,
        "group_b": group_b,
        "collapse": _collapse_payload(collapse, collapse_params, rank_on_margins),
        "measure": {"kind": measure},
        "ci": ci,
        "level": level,
        "bootstrap_samples": bootstrap_samples,
        "seed": seed,
    }
    body = ServiceClient(ctx.obj["server"]).post("/v1/measure", payload)
    _emit(_stable_json(body), output)


@cli.command()
@click.option("--input", "input_path", required=True)
@click.option("--groups", "groups_path", required=True)
@click.option("--collapse", required=True, type=click.Choice(_COLLAPSE_KINDS))
@click.option("--collapse-params", default=None)
@click.option("--rank-on-margins", is_flag=True, default=False)
@click.option("--format", "fmt", default="csv", type=click.Choice(["csv", "json", "svg"]))
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", default=None)
@click.pass_context
def assess(ctx, input_path, groups_path, collapse, collapse_params, rank_on_margins, fmt, seed, output):
    """Pairwise pseudo-observation panels for the graphical independence check."""
    data, groups_doc = _load_matrix_payload(input_path, groups_path)
    payload = {
        "data": data,
        "groups": groups_doc,
        "collapse": _collapse_payload(collapse, collapse_params, rank_on_margins),
        "seed": seed,
    }
    body = ServiceClient(ctx.obj["server"]).post("/v1/assess", payload)
    if fmt == "json":
        _emit(_stable_json(body), output)
        return
    if fmt == "csv":
        lines = ["group_a,group_b,index,u_a,u_b"]
        for panel in body["panels"]:
            for i, (ua, ub) in enumerate(zip(panel["u_a"], panel["u_b"]), start=1):
                lines.append(
                    f"{panel['group_a']},{panel['group_b']},{i},{format_float(ua)},{format_float(ub)}"
                )
        _emit("\n".join(lines) + "\n", output)
        return
    from .assess import AssessmentResult, Panel, render_svg

    panels = [
        Panel(
            group_a=p["group_a"],
            group_b=p["group_b"],
            u_a=np.asarray(p["u_a"]),
            u_b=np.asarray(p["u_b"]),
            spearman_rho=p["spearman_rho"],
            kendall_tau=p["kendall_tau"],
            tail_upper=p["tail_upper"],
        )
        for p in body["panels"]
    ]
    svg = render_svg(AssessmentResult(panels=panels, k=body["k"], arity=body["arity"]))
    _emit(svg + "\n", output)


@cli.command()
@click.option("--family", required=True, type=click.Choice(["clayton", "gumbel", "independence"]))
@click.option("--theta", type=float, default=None)
@click.option("--tau", type=float, default=None)
@click.option("--dims", required=True, help="p for univariate, p,q otherwise")
@click.option("--mode", required=True, type=click.Choice(["univariate", "joint", "copula", "sample"]))
@click.option("--grid", default=None, help="comma-separated evaluation points in [0,1]")
@click.option("--n", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--format", "fmt", default=None, type=click.Choice(["json", "csv"]))
@click.option("-o", "--output", default=None)
@click.pass_context
def kendall(ctx, family, theta, tau, dims, mode, grid, n, seed, fmt, output):
    """Evaluate or sample Kendall distributions and the Kendall copula."""
    grid_list = None
    if grid is not None:
        try:
            grid_list = [float(v) for v in grid.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse grid {grid!r}") from None
    payload = {
        "family": family,
        "theta": theta,
        "tau": tau,
        "dims": _parse_dims(dims),
        "mode": mode,
        "grid": grid_list,
        "n": n,
        "seed": seed,
    }
    body = ServiceClient(ctx.obj["server"]).post("/v1/kendall", payload)
    if fmt is None:
        fmt = "csv" if mode == "sample" else "json"
    if fmt == "json":
        _emit(_stable_json(body), output)
        return
    if mode == "sample":
        _emit(matrix_to_csv(["u1", "u2"], np.asarray(body["sample"])), output)
    elif mode == "univariate":
        lines = ["t,value"] + [
            f"{format_float(p['t'])},{format_float(p['value'])}" for p in body["univariate"]
        ]
        _emit("\n".join(lines) + "\n", output)
    else:
        lines = ["t1,t2,value"] + [
            f"{format_float(p['t1'])},{format_float(p['t2'])},{format_float(p['value'])}"
            for p in body["grid"]
        ]
        _emit("\n".join(lines) + "\n", output)


@cli.command()
@click.option("--input", "input_path", required=True)
@click.option("--groups", "groups_path", required=True)
@click.option("--group-a", required=True)
@click.option("--group-b", required=True)
@click.option("--collapse", required=True, type=click.Choice(_COLLAPSE_KINDS))
@click.option("--collapse-params", default=None)
@click.option("--rank-on-margins", is_flag=True, default=False)
@click.option("--measure", default="pearson", type=click.Choice(_MEASURE_KINDS))
@click.option("--window", required=True, type=int)
@click.option("--step", type=int, default=1)
@click.option("--ci", default="none", type=click.Choice(["none", "asymptotic", "bootstrap"]))
@click.option("--level", type=float, default=0.95)
@click.option("--bootstrap-samples", type=int, default=200)
@click.option("--seed", type=int, default=0)
@click.option("-o", "--output", default=None)
@click.pass_context
def rolling(ctx, input_path, groups_path, group_a, group_b, collapse, collapse_params,
            rank_on_margins, measure, window, step, ci, level, bootstrap_samples, seed, output):
    """Rolling-window dependence series over time-ordered rows, emitted as CSV."""
    data, groups_doc = _load_matrix_payload(input_path, groups_path)
    payload = {
        "data": data,
        "groups": groups_doc,
        "group_a": group_a,
        "group_b": group_b,
        "collapse": _collapse_payload(collapse, collapse_params, rank_on_margins),
        "measure": {"kind": measure},
        "window": window,
        "step": step,
        "ci": ci,
        "level": level,
        "bootstrap_samples": bootstrap_samples,
        "seed": seed,
    }
    body = ServiceClient(ctx.obj["server"]).post("/v1/rolling", payload)
    lines = ["window_end,estimate,std_error,ci_lo,ci_hi"]
    for row in body["rows"]:
        cells = [str(row["window_end"]), format_float(row["estimate"])]
        for key in ("std_error", "ci_lo", "ci_hi"):
            cells.append("" if row[key] is None else format_float(row[key]))
        lines.append(",".join(cells))
    _emit("\n".join(lines) + "\n", output)


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host: str, port: int) -> None:
    """Run the vecdep HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(2)
    except UsageError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except DataError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)
    except DegenerateError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(4)
    except VecdepError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
