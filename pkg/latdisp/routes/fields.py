from typing import Optional

from fastapi import APIRouter, Depends
from pydantic import BaseModel

from ..core.contfrac import cf_expand
from ..core.qfield import ci_compare
from ..dependency import ExactValue, domain_errors, exact, get_digits
from ..utils.parsing import parse_quadratic

fields_router = APIRouter(prefix="/fields", tags=["Fields"])


# ---------------- MODELS ---------------- #
class NumberIn(BaseModel):
    text: str


class CompareIn(BaseModel):
    x: str
    y: str


class NumberOut(BaseModel):
    value: ExactValue
    radicand: int
    conjugate: ExactValue
    norm: ExactValue
    trace: ExactValue
    floor: int
    expansion: Optional[str] = None


class CompareOut(BaseModel):
    x: ExactValue
    y: ExactValue
    ordering: int
    relation: str


# ---------------- ROUTES ---------------- #

# 1. Parse a number and report its field data
@fields_router.post("/parse", response_model=NumberOut)
def parse_number(body: NumberIn, digits: int = Depends(get_digits)):
    with domain_errors():
        x = parse_quadratic(body.text)
        expansion = str(cf_expand(x)) if not x.is_rational or x > 0 else None
        return NumberOut(
            value=exact(x, digits),
            radicand=x.d,
            conjugate=exact(x.conjugate(), digits),
            norm=exact(x.norm(), digits),
            trace=exact(x.trace(), digits),
            floor=x.floor(),
            expansion=expansion,
        )


# 2. Certified comparison, also across two quadratic fields
@fields_router.post("/compare", response_model=CompareOut)
def compare_numbers(body: CompareIn, digits: int = Depends(get_digits)):
    with domain_errors():
        x, y = parse_quadratic(body.x), parse_quadratic(body.y)
        ordering = int(ci_compare(x, y))
    return CompareOut(
        x=exact(x, digits),
        y=exact(y, digits),
        ordering=ordering,
        relation={-1: "<", 0: "=", 1: ">"}[ordering],
    )
