from contextlib import contextmanager

from fastapi import HTTPException, Query, status
from pydantic import BaseModel

from . import config
from .utils.errors import InternalFault, LatdispError
from .utils.file_handler import render_value


def get_digits(digits: int = Query(config.DEFAULT_DIGITS, ge=0, le=60)) -> int:
    return digits


@contextmanager
def domain_errors():
    """Turn library errors into HTTP errors: 500 for internal faults, 400 for everything else."""
    try:
        yield
    except InternalFault as e:
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
    except LatdispError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))


class ExactValue(BaseModel):
    exact: str
    decimal: str


def exact(value, digits: int) -> ExactValue:
    return ExactValue(**render_value(value, digits))
