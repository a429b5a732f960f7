"""HTTP service wrapping the core package.

Each endpoint mirrors one library operation with a pydantic request and
response model; the CLI performs the same computations in-process.  Domain
errors map to 422, budget errors to 400 with code "budget_exceeded".

Run with: uvicorn c4tail.service:app
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import cores, meanfield, montecarlo, rates, varsolve
from .cli import SWEEP_HEADER, sweep_rows
from .errors import BudgetExceededError, DomainError, InfeasibleSolutionError
from .extremal import bound_inducibility, max_induced_c4
from .graphs import SimpleGraph, exact_tail_probability
from .subcube import phi_bruteforce

app = FastAPI(title="c4tail", version="0.1.0")


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except BudgetExceededError as exc:
        raise HTTPException(status_code=400, detail={"code": "budget_exceeded", "message": str(exc)})
    except (DomainError, InfeasibleSolutionError) as exc:
        raise HTTPException(status_code=422, detail={"code": "domain_error", "message": str(exc)})


class RateRequest(BaseModel):
    n: int = Field(ge=4)
    p: float = Field(gt=0, lt=1)
    delta: float = Field(gt=0)
    eps: float = 0.0


class RegimeModel(BaseModel):
    label: str
    k: int | None
    boundary_warning: bool


class RateResponse(BaseModel):
    regime: RegimeModel
    normalized_rate: float
    raw_log_prob: float
    plant: dict
    diagnostics: dict


class SweepRequest(BaseModel):
    n: int = Field(ge=4)
    delta: float = Field(gt=0)
    eps: float = 0.0
    p_lo: float = Field(gt=0, lt=1)
    p_hi: float = Field(gt=0, lt=1)
    steps: int = Field(ge=1, le=10000)


class SweepResponse(BaseModel):
    header: list[str]
    rows: list[list]


class PhiRequest(BaseModel):
    n: int = Field(ge=4)
    p: float = Field(gt=0, lt=1)
    delta: float = Field(gt=0)
    eps: float = 0.0
    brute: bool = False
    one_supcubes: bool = False


class PhiResponse(BaseModel):
    lower: float
    upper: float
    bruteforce: float | None = None
    bruteforce_infeasible: bool = False


class TailRequest(BaseModel):
    n: int = Field(ge=0)
    p: float = Field(ge=0, le=1)
    delta: float
    trials: int = Field(ge=1, le=10_000_000)
    seed: int = 0
    exact: bool = False


class TailResponse(BaseModel):
    p_hat: float
    trials: int
    ci_low: float
    ci_high: float
    seed: int
    exact: float | None = None


class VarsolveRequest(BaseModel):
    n: int = Field(ge=4)
    p: float = Field(gt=0, lt=1)
    delta: float = Field(gt=0)
    eps: float = Field(gt=0)
    R: int | None = None


class MeanfieldRequest(BaseModel):
    n: int = Field(ge=4, le=120)
    p: float = Field(gt=0, lt=1)
    delta: float = Field(ge=0)
    seed: int = 0
    method: str = "both"


class GapRequest(BaseModel):
    n: int = Field(ge=4)
    delta: float = Field(gt=0)
    p: float | None = None
    k: int | None = None


class GraphPayload(BaseModel):
    text: str  # edge-list format: "n m" then m lines "u v"


class CoreExtractRequest(BaseModel):
    graph: GraphPayload
    s: float = Field(ge=0)
    p: float = Field(ge=0, le=1)


class CoreCensusRequest(BaseModel):
    n: int = Field(ge=4, le=8)
    m: int = Field(ge=0, le=12)
    eps: float = Field(gt=0)
    delta: float = Field(gt=0)
    K: float = Field(gt=0)
    p: float = Field(gt=0, lt=1)


class ExtremalRequest(BaseModel):
    n: int = Field(ge=1, le=9)
    m: int = Field(ge=0)
    min_degree: int = 0


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/rate", response_model=RateResponse)
def rate(req: RateRequest):
    report = _guard(rates.rate_theorem, req.n, req.p, req.delta, req.eps)
    return report.as_dict()


@app.post("/sweep", response_model=SweepResponse)
def sweep(req: SweepRequest):
    if req.steps == 1:
        grid = [req.p_lo]
    else:
        ratio = (req.p_hi / req.p_lo) ** (1.0 / (req.steps - 1))
        grid = [req.p_lo * ratio**i for i in range(req.steps)]
    rows = _guard(sweep_rows, req.n, req.delta, req.eps, grid)
    return {"header": SWEEP_HEADER, "rows": rows}


@app.post("/phi", response_model=PhiResponse)
def phi(req: PhiRequest):
    lower, upper = _guard(rates.phi_bounds, req.n, req.p, req.delta, req.eps)
    out = {"lower": lower, "upper": upper}
    if req.brute:
        val = _guard(
            phi_bruteforce, req.n, req.p, req.delta, req.one_supcubes
        )
        if math.isfinite(val):
            out["bruteforce"] = val
        else:
            out["bruteforce_infeasible"] = True
    return out


@app.post("/plant")
def plant(req: RateRequest):
    sizes = _guard(rates.plant_sizes, req.n, req.p, req.delta, req.eps)
    return {
        "r": {str(k): v for k, v in sizes.r.items()},
        "m": {str(k): v for k, v in sizes.m.items()},
        "m_star": sizes.m_star,
        "ex": sizes.ex,
    }


@app.post("/tail", response_model=TailResponse)
def tail(req: TailRequest):
    est = _guard(montecarlo.estimate_tail, req.n, req.p, req.delta, req.trials, req.seed)
    out = est.as_dict()
    if req.exact:
        threshold = (1.0 + req.delta) * rates.expected_induced_c4(req.n, req.p)
        oracle = _guard(exact_tail_probability, req.n, req.p, threshold)
        out["exact"] = oracle.probability
    return out


@app.post("/varsolve")
def varsolve_endpoint(req: VarsolveRequest):
    sol = _guard(varsolve.solve_discrete, req.n, req.p, req.delta, req.eps, req.R)
    return sol.as_dict()


@app.post("/meanfield")
def meanfield_endpoint(req: MeanfieldRequest):
    out = {}
    if req.method in ("ansatz", "both"):
        out["ansatz"] = _guard(meanfield.solve_ansatz, req.n, req.p, req.delta).as_dict()
    if req.method in ("general", "both"):
        out["general"] = _guard(
            meanfield.solve_general, req.n, req.p, req.delta, req.seed
        ).as_dict()
    if not out:
        raise HTTPException(
            status_code=422,
            detail={"code": "domain_error", "message": f"unknown method {req.method}"},
        )
    return out


@app.post("/gap")
def gap(req: GapRequest):
    p = req.p
    if p is None:
        if req.k is None:
            raise HTTPException(
                status_code=422,
                detail={"code": "domain_error", "message": "need p or k"},
            )
        p = rates.sparse_k_midpoint_p(req.n, req.k)
    return _guard(meanfield.gap_report, req.n, p, req.delta)


@app.post("/core/extract", response_model=GraphPayload)
def core_extract(req: CoreExtractRequest):
    G = _guard(SimpleGraph.from_text, req.graph.text)
    result = _guard(cores.extract_core, G, req.s, req.p)
    return {"text": result.to_text()}


@app.post("/core/census")
def core_census(req: CoreCensusRequest):
    params = _guard(
        cores.CoreParams, eps=req.eps, delta=req.delta, K=req.K, n=req.n, p=req.p
    )
    report = _guard(cores.enumerate_cores, req.n, req.m, params)
    return report.as_dict()


@app.post("/extremal")
def extremal_endpoint(req: ExtremalRequest):
    rec = _guard(max_induced_c4, req.n, req.m, req.min_degree)
    bound = bound_inducibility(req.n, req.m) if req.m > 3 else None
    return {
        "n": req.n,
        "m": req.m,
        "min_degree": req.min_degree,
        "max_count": rec.max_count,
        "bound": bound,
        "tight": bound is not None and rec.max_count == bound,
        "witness": rec.witness.to_text(),
    }
