"""HTTP service exposing the toolkit: generation, bounds, certificates,
construction, exact solving, and sweeps. All endpoints are stateless and
safe to serve concurrently; sweeps run synchronously (desk scale)."""

from __future__ import annotations

from dataclasses import asdict

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse, PlainTextResponse

from ..bounds import compute_regime, regime_bounds
from ..emit import emit_records, record_to_dict, summary_to_dict
from ..entropy import certify_md_lower_bound
from ..errors import (
    BudgetExhaustedError,
    CertificateInapplicableError,
    ConnectivityError,
    ConstructionFailureError,
    ConvergenceError,
    ParameterError,
)
from ..exact import exact_md, greedy_separator
from ..graph import GnpParams, Graph, generate_gnp, is_connected
from ..harness import ExperimentConfig, run_sweep
from ..separator import construct_separator
from .models import (
    BoundsRequest,
    BoundsResponse,
    CertifyRequest,
    CertifyResponse,
    ConstructRequest,
    ConstructResponse,
    ExactRequest,
    ExactResponse,
    GenResponse,
    GnpSpec,
    GraphSource,
    RegimeModel,
    SweepRequest,
    SweepResponse,
    ValidateRequest,
)

app = FastAPI(
    title="mdim",
    description="Metric-dimension bounds, certificates, and experiments",
    version="0.1.0",
)


@app.exception_handler(ParameterError)
@app.exception_handler(ConnectivityError)
@app.exception_handler(CertificateInapplicableError)
@app.exception_handler(ConvergenceError)
async def _domain_error(request, err):
    return JSONResponse(status_code=400, content={"detail": str(err)})


@app.exception_handler(ConstructionFailureError)
async def _construction_failed(request, err: ConstructionFailureError):
    return JSONResponse(
        status_code=409,
        content={
            "detail": str(err),
            "Z": err.z,
            "sigma": err.sigma,
            "sigma_exact": err.sigma_exact,
            "attempts": err.attempts,
        },
    )


def _build_graph(source: GraphSource) -> Graph:
    if source.edge_list is not None:
        return Graph.from_edge_list(source.edge_list)
    spec = source.gnp
    return generate_gnp(GnpParams(n=spec.n, d=spec.d, seed=spec.seed))


@app.get("/health")
async def health():
    return {"status": "ok"}


@app.post("/gen", response_model=GenResponse)
def gen(spec: GnpSpec):
    g = generate_gnp(GnpParams(n=spec.n, d=spec.d, seed=spec.seed))
    return GenResponse(
        n=g.n, m=g.m, connected=is_connected(g), edge_list=g.to_edge_list()
    )


@app.post("/bounds", response_model=BoundsResponse)
def bounds(req: BoundsRequest):
    regime = compute_regime(
        req.n,
        req.d,
        gamma_threshold=req.gamma_threshold,
        force_unit_alpha_beta=req.force_unit_alpha_beta,
    )
    report = regime_bounds(regime, diam=req.diameter)
    return BoundsResponse(
        regime=RegimeModel(**asdict(regime)),
        lb_entropy_formula=report.lb_entropy_formula,
        ub_q_formula=report.ub_q_formula,
        lb_case2=report.lb_case2,
        ub_case2=report.ub_case2,
        q_value=report.q_value,
        diam_power_lb=report.diam_power_lb,
        simple_diam_lb=report.simple_diam_lb,
        warnings=list(report.warnings),
    )


@app.post("/certify", response_model=CertifyResponse)
def certify(req: CertifyRequest):
    g = _build_graph(req.graph)
    cert = certify_md_lower_bound(g, keep_per_vertex=req.include_per_vertex)
    return CertifyResponse(
        n=cert.n,
        h_max=cert.h_max,
        lower_bound=cert.lower_bound,
        bound_real=cert.bound_real,
        per_vertex_entropy=(
            list(cert.per_vertex_entropy) if req.include_per_vertex else None
        ),
    )


@app.post("/construct", response_model=ConstructResponse)
def construct(req: ConstructRequest):
    g = _build_graph(req.graph)
    cert = construct_separator(
        g,
        seed=req.seed,
        max_retries=req.max_retries,
        pair_budget=req.pair_budget,
        sample_pairs=req.sample_pairs,
    )
    return ConstructResponse(**cert.to_json_dict())


@app.post("/exact", response_model=ExactResponse)
def exact(req: ExactRequest):
    g = _build_graph(req.graph)
    try:
        md = exact_md(g, budget=req.budget)
        return ExactResponse(
            metric_dimension=md, conclusive=True, lower_bound=md, upper_bound=md
        )
    except BudgetExhaustedError as err:
        return ExactResponse(
            metric_dimension=None,
            conclusive=False,
            lower_bound=err.lower,
            upper_bound=err.upper,
            detail=str(err),
        )


@app.post("/greedy")
def greedy(req: ExactRequest):
    g = _build_graph(req.graph)
    w = sorted(greedy_separator(g))
    return {"size": len(w), "landmarks": w}


def _config_from_request(req: SweepRequest) -> ExperimentConfig:
    raw = req.model_dump(exclude_none=True)
    if "modes" in raw:
        raw["modes"] = frozenset(raw["modes"])
    for key in ("n_values", "c_values", "d_values"):
        if key in raw:
            raw[key] = tuple(raw[key])
    return ExperimentConfig(**raw)


@app.post("/sweep")
def sweep(req: SweepRequest, format: str = Query(default="json")):
    cfg = _config_from_request(req)
    result = run_sweep(cfg)
    if format == "json":
        return SweepResponse(
            records=[record_to_dict(r) for r in result.records],
            summaries=[summary_to_dict(s) for s in result.summaries],
        )
    media = "image/svg+xml" if format == "svg" else "text/csv"
    return PlainTextResponse(emit_records(result, format), media_type=media)


@app.post("/validate", response_model=SweepResponse)
def validate(req: ValidateRequest):
    cfg = ExperimentConfig(
        n_values=(req.n,),
        c_values=(req.c,) if req.c is not None else None,
        d_values=(req.d,) if req.d is not None else None,
        trials=req.trials,
        master_seed=req.master_seed,
        modes=frozenset({"bounds", "validate"}),
        gamma_threshold=req.gamma_threshold,
        force_unit_alpha_beta=req.force_unit_alpha_beta,
    )
    result = run_sweep(cfg)
    return SweepResponse(
        records=[record_to_dict(r) for r in result.records],
        summaries=[summary_to_dict(s) for s in result.summaries],
    )
