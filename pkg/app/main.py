# app/main.py
import asyncio
import logging

from fastapi import FastAPI, HTTPException
from fastapi.responses import Response

from app.cache import get_cache_metrics, invalidate_all_cache
from app.cg import CouplingLabel, clebsch_gordan, three_j, verify_orthogonality
from app.config import configure_logging, get_settings, reset_settings
from app.entropy import LogBase, q_grid, tsallis_sweep, verify_inequalities
from app.errors import CGEntropyError, ConfigError, DomainError
from app.exact import parse_spins
from app.formatters import coefficient_record, matrix_payload
from app.hahn import check_equivalence
from app.prob import build_bistochastic, column_joint
from app.schemas import (
    BlockRequest,
    CoefficientRequest,
    SweepReport,
    SweepRequest,
    SweepRow,
    ThreeJRequest,
    VerifyRequest,
)

configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(title="cgentropy")


async def _compute(func, *args, **kwargs):
    """Run CPU-bound work off the event loop; map package errors onto HTTP statuses"""
    try:
        return await asyncio.to_thread(func, *args, **kwargs)
    except ConfigError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except DomainError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except CGEntropyError as e:
        logger.error(f"{type(e).__name__}: {e}")
        raise HTTPException(status_code=500, detail=str(e))


def _coefficient(req: CoefficientRequest):
    label = CouplingLabel.of(*parse_spins([req.j1, req.m1, req.j2, req.m2, req.j, req.m]))
    return coefficient_record("cg", str(label), clebsch_gordan(label))


def _threej(req: ThreeJRequest):
    values = parse_spins([req.j1, req.j2, req.j3, req.m1, req.m2, req.m3])
    label = "({} {} {}; {} {} {})".format(*values)
    return coefficient_record("threej", label, three_j(*values))


def _sweep(req: SweepRequest) -> SweepReport:
    j1, j2, j, m = parse_spins([req.j1, req.j2, req.j, req.m])
    joint = column_joint(j1, j2, j, m)
    q_values = q_grid(req.q_min, req.q_max, req.q_step)
    return SweepReport(
        j1=j1, j2=j2, j=j, m=m,
        rows=[SweepRow(q=q, tsallis_information=value) for q, value in tsallis_sweep(joint, q_values)],
    )


def _verify(req: VerifyRequest):
    j1, j2 = parse_spins([req.j1, req.j2])
    log_base = LogBase.of(req.log_base)
    return verify_inequalities(j1, j2, q_values=req.q, log_base=log_base)


@app.get("/")
def root():
    return {
        "status": "ok",
        "service": "cgentropy",
        "endpoints": {
            "/cg": "POST - Clebsch-Gordan coefficient <j1 m1 j2 m2|j m>",
            "/threej": "POST - Wigner 3-j symbol",
            "/table": "POST - Bistochastic matrix of squared coefficients",
            "/verify": "POST - Entropic inequalities for every column",
            "/sweep/tsallis": "POST - Tsallis information over a q grid",
            "/hahn-check": "POST - Hahn backend against the Racah sum",
            "/orthogonality": "POST - Exact orthogonality relations",
            "/cache/stats": "GET - Coefficient cache statistics",
        },
    }


@app.get("/favicon.ico")
def favicon():
    return Response(status_code=204)


@app.post("/cg")
async def cg(req: CoefficientRequest):
    return await _compute(_coefficient, req)


@app.post("/threej")
async def threej(req: ThreeJRequest):
    return await _compute(_threej, req)


@app.post("/table")
async def table(req: BlockRequest):
    def build():
        return matrix_payload(build_bistochastic(*parse_spins([req.j1, req.j2])))
    return await _compute(build)


@app.post("/verify")
async def verify(req: VerifyRequest):
    """Always 200; the pass flag is part of the report"""
    report = await _compute(_verify, req)
    logger.info(f"verify ({req.j1}, {req.j2}): passed={report.passed}")
    return report


@app.post("/sweep/tsallis")
async def sweep_tsallis(req: SweepRequest):
    return await _compute(_sweep, req)


@app.post("/hahn-check")
async def hahn_check(req: BlockRequest):
    return await _compute(lambda: check_equivalence(*parse_spins([req.j1, req.j2])))


@app.post("/orthogonality")
async def orthogonality(req: BlockRequest):
    return await _compute(lambda: verify_orthogonality(*parse_spins([req.j1, req.j2])))


# Cache management endpoints
@app.get("/cache/stats")
async def get_cache_stats():
    return get_cache_metrics()


@app.post("/cache/clear")
async def clear_cache():
    invalidate_all_cache()
    return {"message": "Cache cleared successfully"}


@app.post("/config/reload")
async def reload_config():
    # Next get_settings() re-reads .env and the environment
    reset_settings()
    try:
        settings = get_settings()
    except ConfigError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return {"message": "Settings reloaded", "log_base": settings.log_base, "tolerance": settings.tolerance}
