# Standard library
import logging
import os
from typing import List, Optional

# Third-party
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

#
from app import config
from app.cache import cached_cosets
from app.cartan import CartanData
from app.errors import BudgetExceeded, ConfigError, SteenrodError
from app.steenrod import steenrod_table
from app.tools.render import basis_document, steenrod_document

logger = logging.getLogger(__name__)

app = FastAPI(title="Schubert Steenrod API")

# one request may not fan out wider than the machine
MAX_THREADS = os.cpu_count() or 1


# -----------------------------------------------------------------------------
# Models
# -----------------------------------------------------------------------------
class JobReq(BaseModel):
    lie_type: Optional[str] = None
    cartan: Optional[List[List[int]]] = None   # explicit matrix instead of a type
    parabolic: List[int] = []
    primes: List[int] = []
    k_list: List[int] = [1]
    threads: int = Field(1, ge=1, le=MAX_THREADS)
    budget: Optional[int] = None


def _job(req: JobReq) -> config.JobConfig:
    # an inline matrix is checked by CartanData itself; the JobConfig only needs a source
    fields = req.model_dump(exclude={"cartan"})
    if req.cartan is not None:
        fields["cartan_file"] = "<inline>"
    return config.build_config(**fields, cache_dir=config.CACHE_DIR, format="json")


def _cartan(req: JobReq, job: config.JobConfig):
    if req.cartan is None:
        return job.cartan()
    C = CartanData.from_matrix(req.cartan)
    bad = [i for i in job.parabolic if not 1 <= i <= C.rank]
    if bad:
        raise ConfigError(f"parabolic: nodes {bad} outside 1..{C.rank}")
    return C


@app.exception_handler(SteenrodError)
async def _steenrod_error(request: Request, exc: SteenrodError):
    status = 413 if isinstance(exc, BudgetExceeded) else 400
    return JSONResponse(status_code=status, content={"error": exc.kind, "message": str(exc)})


@app.exception_handler(RequestValidationError)
async def _bad_request(request: Request, exc: RequestValidationError):
    parts = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err.get("loc", ()) if x != "body") or "body"
        parts.append(f"{loc}: {err.get('msg')}")
    return JSONResponse(status_code=400, content={"error": ConfigError.kind, "message": "; ".join(parts)})


# -----------------------------------------------------------------------------
# API
# -----------------------------------------------------------------------------
@app.post("/basis")
def api_basis(req: JobReq):
    job = _job(req)
    cosets = cached_cosets(_cartan(req, job), job.parabolic_nodes, cache_dir=job.cache_dir, budget=job.budget)
    return basis_document(cosets)


@app.post("/steenrod")
def api_steenrod(req: JobReq):
    """One document per requested prime, every coefficient included."""
    job = _job(req)
    C = _cartan(req, job)
    cosets = cached_cosets(C, job.parabolic_nodes, cache_dir=job.cache_dir, budget=job.budget)
    docs = [
        steenrod_document(steenrod_table(C, cosets.parabolic, p, job.k_list, threads=job.threads, cosets=cosets))
        for p in job.require_primes()
    ]
    logger.info("[STEENROD] api: %s parabolic=%s primes=%s", "+".join(C.classify()), list(cosets.parabolic), job.primes)
    return {"count": len(docs), "results": docs}


@app.get("/health")
def health():
    defaults = config.load_defaults()
    return {
        "cache_dir": config.CACHE_DIR,
        "budget": defaults.budget,
        "threads": defaults.threads,
        "max_threads": MAX_THREADS,
    }
