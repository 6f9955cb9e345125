from typing import Optional

from fastapi import APIRouter, Depends, Path
from pydantic import BaseModel

from ..core.contfrac import cf_expand, conjugate_expansion_identity
from ..core.dispersion import best_lattice, disp_sequence
from ..dependency import ExactValue, domain_errors, exact, get_digits
from ..utils.parsing import parse_quadratic, parse_sequence

sequences_router = APIRouter(prefix="/sequences", tags=["Sequences"])

MAX_RANK = 50


# ---------------- MODELS ---------------- #
class ExpandIn(BaseModel):
    value: str


class SequenceIn(BaseModel):
    sequence: str


class ExpansionOut(BaseModel):
    value: ExactValue
    expansion: str
    preperiod: int
    period: int
    conjugate_expansion: Optional[str] = None


class DispersionOut(BaseModel):
    sequence: str
    dispersion: Optional[ExactValue] = None
    infinite: bool
    attained: bool
    witness: Optional[tuple[int, int]] = None


class BestLatticeOut(BaseModel):
    rank: int
    period: list[int]
    dispersion: ExactValue


# ---------------- ROUTES ---------------- #

@sequences_router.post("/expand", response_model=ExpansionOut)
def expand(body: ExpandIn, digits: int = Depends(get_digits)):
    with domain_errors():
        x = parse_quadratic(body.value)
        seq = cf_expand(x)
        return ExpansionOut(
            value=exact(x, digits),
            expansion=str(seq),
            preperiod=len(seq.right_preperiod),
            period=len(seq.right_period),
            conjugate_expansion=conjugate_expansion_identity(x) if seq.is_purely_periodic else None,
        )


@sequences_router.post("/dispersion", response_model=DispersionOut)
def sequence_dispersion(body: SequenceIn, digits: int = Depends(get_digits)):
    with domain_errors():
        seq = parse_sequence(body.sequence)
        result = disp_sequence(seq)
        return DispersionOut(
            sequence=str(seq),
            dispersion=None if result.infinite else exact(result.value, digits),
            infinite=result.infinite,
            attained=result.attained,
            witness=result.witness,
        )


@sequences_router.get("/best/{rank}", response_model=BestLatticeOut)
def best(rank: int = Path(..., ge=1, le=MAX_RANK), digits: int = Depends(get_digits)):
    with domain_errors():
        seq, value = best_lattice(rank)
        return BestLatticeOut(rank=rank, period=list(seq.right_period), dispersion=exact(value, digits))
