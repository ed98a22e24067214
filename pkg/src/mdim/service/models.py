"""Pydantic request/response schemas for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field, model_validator


class GnpSpec(BaseModel):
    """Parameters for sampling one G(n, d/n) instance."""

    n: int = Field(ge=2)
    d: float = Field(gt=0)
    seed: int = 0


class GraphSource(BaseModel):
    """A graph given inline as edge-list text or as G(n,p) parameters."""

    edge_list: Optional[str] = None
    gnp: Optional[GnpSpec] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.edge_list is None) == (self.gnp is None):
            raise ValueError("provide exactly one of edge_list / gnp")
        return self


class GenResponse(BaseModel):
    n: int
    m: int
    connected: bool
    edge_list: str


class RegimeModel(BaseModel):
    n: int
    d: float
    c: float
    t_star: int
    gamma: float
    alpha: float
    beta: float
    case_label: str
    gamma_threshold: float


class BoundsRequest(BaseModel):
    n: int = Field(ge=3)
    d: float = Field(gt=1)
    diameter: Optional[int] = Field(default=None, ge=1)
    gamma_threshold: float = 8.0
    force_unit_alpha_beta: bool = False


class BoundsResponse(BaseModel):
    regime: RegimeModel
    lb_entropy_formula: float
    ub_q_formula: float
    lb_case2: float
    ub_case2: float
    q_value: float
    diam_power_lb: Optional[int] = None
    simple_diam_lb: Optional[float] = None
    warnings: list[str] = []


class CertifyRequest(BaseModel):
    graph: GraphSource
    include_per_vertex: bool = False


class CertifyResponse(BaseModel):
    n: int
    h_max: float
    lower_bound: int
    bound_real: float
    per_vertex_entropy: Optional[list[float]] = None


class ConstructRequest(BaseModel):
    graph: GraphSource
    seed: int = 0
    max_retries: int = Field(default=32, ge=1)
    pair_budget: int = Field(default=200_000, ge=1)
    sample_pairs: int = Field(default=10_000, ge=1)


class ConstructResponse(BaseModel):
    sigma: float
    sigma_exact: bool
    Z: int
    landmarks: list[int]
    distinct_count: int
    verified: bool
    trials_used: int


class ExactRequest(BaseModel):
    graph: GraphSource
    budget: int = Field(default=100_000_000, ge=1)


class ExactResponse(BaseModel):
    metric_dimension: Optional[int] = None
    conclusive: bool
    lower_bound: int
    upper_bound: int
    detail: str = ""


class SweepRequest(BaseModel):
    """Mirror of the experiment configuration; unset fields use its defaults."""

    n_values: list[int]
    c_values: Optional[list[float]] = None
    d_values: Optional[list[float]] = None
    trials: Optional[int] = None
    master_seed: Optional[int] = None
    modes: Optional[list[str]] = None
    workers: Optional[int] = None
    gamma_threshold: Optional[float] = None
    force_unit_alpha_beta: Optional[bool] = None
    shell_ratio_window: Optional[tuple[float, float]] = None
    shell_fraction_slack: Optional[float] = None
    degree_window_factors: Optional[tuple[float, float]] = None
    sym_diff_ratio_window: Optional[tuple[float, float]] = None
    sym_diff_pair_sample: Optional[int] = None
    sigma_pair_budget: Optional[int] = None
    sigma_sample_pairs: Optional[int] = None
    construct_max_retries: Optional[int] = None
    exact_budget: Optional[int] = None
    exact_n_limit: Optional[int] = None


class SweepResponse(BaseModel):
    records: list[dict]
    summaries: list[dict]


class ValidateRequest(BaseModel):
    """One-cell prediction-validation run (modes: bounds + validate)."""

    n: int = Field(ge=3)
    d: Optional[float] = None
    c: Optional[float] = None
    trials: int = Field(default=1, ge=1)
    master_seed: int = 0
    gamma_threshold: float = 8.0
    force_unit_alpha_beta: bool = False

    @model_validator(mode="after")
    def _exactly_one_degree(self):
        if (self.d is None) == (self.c is None):
            raise ValueError("provide exactly one of d / c")
        return self
