from typing import Optional

from fastapi import APIRouter, Depends, HTTPException, Path, Query
from pydantic import BaseModel

from ..core import oracle, torus
from ..dependency import ExactValue, domain_errors, exact, get_digits

torus_router = APIRouter(prefix="/torus", tags=["Torus"])

MAX_FIBONACCI_INDEX = 40
MAX_SCAN = 500


# ---------------- MODELS ---------------- #
class RankOneOut(BaseModel):
    p: int
    n: int
    expansion: list[int]
    dispersion: ExactValue
    normalized: ExactValue
    strip: bool
    oracle: Optional[ExactValue] = None


class FibonacciOut(BaseModel):
    m: int
    p: int
    n: int
    profile: list[ExactValue]
    normalized: ExactValue


class ZarembaRowOut(BaseModel):
    n: int
    p: int
    reflection: int
    m: int
    normalized: ExactValue
    flagged: bool


class ZarembaOut(BaseModel):
    bound: int
    constant: ExactValue
    rows: list[ZarembaRowOut]


# ---------------- ROUTES ---------------- #

@torus_router.get("/rank1/{p}/{n}", response_model=RankOneOut)
def rank_one(p: int, n: int, check_oracle: bool = Query(False, alias="oracle"), digits: int = Depends(get_digits)):
    with domain_errors():
        lattice = torus.RankOneLattice(p, n)
        result = torus.periodic_dispersion(lattice)
        out = RankOneOut(
            p=p,
            n=n,
            expansion=lattice.expansion(),
            dispersion=exact(result.value, digits),
            normalized=exact(result.normalized, digits),
            strip=result.strip,
        )
        if check_oracle:
            value, _ = oracle.brute_periodic_dispersion(lattice)
            out.oracle = exact(value, digits)
    return out


@torus_router.get("/fibonacci/{m}", response_model=FibonacciOut)
def fibonacci(m: int = Path(..., ge=3, le=MAX_FIBONACCI_INDEX), digits: int = Depends(get_digits)):
    with domain_errors():
        lattice, profile = torus.fibonacci_lattice(m)
        result = torus.periodic_dispersion(lattice)
    return FibonacciOut(
        m=m,
        p=lattice.p,
        n=lattice.n,
        profile=[exact(v, digits) for v in profile],
        normalized=exact(result.normalized, digits),
    )


@torus_router.get("/zaremba", response_model=ZarembaOut)
def zaremba(
    start: int = Query(2, ge=2),
    stop: int = Query(...),
    bound: int = Query(5, ge=1),
    digits: int = Depends(get_digits),
):
    if stop < start or stop - start >= MAX_SCAN:
        raise HTTPException(status_code=400, detail=f"need start <= stop and at most {MAX_SCAN} values of n")
    with domain_errors():
        rows = torus.zaremba_scan(range(start, stop + 1), bound, workers=1)
    return ZarembaOut(
        bound=bound,
        constant=exact(torus.zaremba_constant(bound), digits),
        rows=[
            ZarembaRowOut(n=row.n, p=row.p, reflection=row.reflection, m=row.max_coefficient,
                          normalized=exact(row.normalized, digits), flagged=row.flagged)
            for row in rows
        ],
    )
