from fastapi import APIRouter, Depends, HTTPException, Path, Query
from pydantic import BaseModel

from ..core import boxwalk, dispersion
from ..dependency import ExactValue, domain_errors, exact, get_digits
from ..utils.file_handler import load_json

rings_router = APIRouter(prefix="/rings", tags=["Rings"])
bounds_router = APIRouter(prefix="/bounds", tags=["Bounds"])

BOUND_TABLE_FILE = "bound_table.json"
MAX_BOXES = 200


# ---------------- MODELS ---------------- #
class RingOut(BaseModel):
    d: int
    n: int
    disc: int
    det: ExactValue
    dispersion: ExactValue
    normalized: ExactValue


class BoxOut(BaseModel):
    n: int
    alpha: ExactValue
    alpha_tilde: ExactValue
    beta: ExactValue
    beta_tilde: ExactValue
    vol: ExactValue
    normalized_vol: ExactValue


class BoundsOut(BaseModel):
    a: int
    lower: ExactValue
    upper: ExactValue


class TightBoundsOut(BaseModel):
    a: int
    disp_periodic: ExactValue
    disp_tail: ExactValue


class BoundTableRowOut(BaseModel):
    a: int
    L: ExactValue
    disp_periodic: ExactValue
    disp_tail: ExactValue
    U: ExactValue


class BoundTableOut(BaseModel):
    rows: list[BoundTableRowOut]
    mismatches: list[dict] = []


# ---------------- RING ROUTES ---------------- #

@rings_router.get("/{d}/{n}", response_model=RingOut)
def ring_dispersion(d: int, n: int = Path(..., ge=1), digits: int = Depends(get_digits)):
    with domain_errors():
        spec = dispersion.SubringSpec(d, n)
        res = dispersion.disp_quadratic(spec)
        return RingOut(
            d=spec.d,
            n=spec.n,
            disc=spec.disc,
            det=exact(spec.det, digits),
            dispersion=exact(res.value, digits),
            normalized=exact(res.normalized, digits),
        )


@rings_router.get("/{d}/{n}/boxes", response_model=list[BoxOut])
def ring_boxes(
    d: int,
    n: int = Path(..., ge=1),
    start: int = Query(-5, le=0),
    stop: int = Query(5, ge=0),
    digits: int = Depends(get_digits),
):
    if stop - start > MAX_BOXES:
        raise HTTPException(status_code=400, detail=f"at most {MAX_BOXES} boxes per request")
    with domain_errors():
        lattice = boxwalk.normal_form(boxwalk.ring_lattice(d, n))
        boxes = boxwalk.enumerate_boxes(lattice, start, stop)
        rows = boxwalk.box_table(boxes, lattice)
    return [
        BoxOut(n=row["n"], **{key: exact(value, digits) for key, value in row.items() if key != "n"})
        for row in rows
    ]


# ---------------- BOUND ROUTES ---------------- #

# the table route is declared before /{a} so it is not read as a coefficient
@bounds_router.get("/table", response_model=BoundTableOut)
def bound_table(check: bool = False, digits: int = Depends(get_digits)):
    with domain_errors():
        rows = dispersion.bound_table()
    mismatches = []
    if check:
        mismatches = [
            {"a": a, "column": column, "printed": printed, "computed": computed}
            for a, column, printed, computed in dispersion.bound_table_check(rows, load_json(BOUND_TABLE_FILE))
        ]
    out = [
        BoundTableRowOut(a=row.a, **{key: exact(value, digits) for key, value in row.cells().items() if key != "a"})
        for row in rows
    ]
    return BoundTableOut(rows=out, mismatches=mismatches)


@bounds_router.get("/{a}", response_model=BoundsOut)
def bounds(a: int = Path(..., ge=2), digits: int = Depends(get_digits)):
    with domain_errors():
        lower, upper = dispersion.coefficient_bounds(a)
    return BoundsOut(a=a, lower=exact(lower, digits), upper=exact(upper, digits))


@bounds_router.get("/{a}/tight", response_model=TightBoundsOut)
def tight_bounds(a: int = Path(..., ge=1), digits: int = Depends(get_digits)):
    with domain_errors():
        lo, hi = dispersion.tight_bounds(a)
    return TightBoundsOut(a=a, disp_periodic=exact(lo, digits), disp_tail=exact(hi, digits))
