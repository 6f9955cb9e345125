import csv
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Optional

from .. import config
from ..core.qfield import CertifiedInterval, QuadraticNumber, format_decimal
from .errors import ParseError
from .parsing import parse_quadratic

logger = logging.getLogger(__name__)


def data_path(filename: str) -> Path:
    return Path(config.DATA_DIR) / filename


def load_json(filename: str):
    """
    Load a JSON file shipped in the data directory (bound_table.json, ...).
    Returns a Python object (list/dict). If the file is missing or broken -> [].
    """
    filepath = data_path(filename)

    if not filepath.exists():
        logger.warning("data file %s not found", filepath)
        return []

    with open(filepath, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError:
            logger.warning("data file %s is not valid JSON", filepath)
            return []


# -- rendering exact values ------------------------------------------------------------


def exact_text(value) -> str:
    return "inf" if value is None else str(value)


def render_value(value, digits: int = config.DEFAULT_DIGITS) -> dict:
    """{exact, decimal} pair; the decimal is a rendering only."""
    if value is None:
        return {"exact": "inf", "decimal": "inf"}
    return {"exact": exact_text(value), "decimal": format_decimal(value, digits)}


def render_row(row: dict, digits: int = config.DEFAULT_DIGITS) -> dict:
    """Replace every exact number in a row by its {exact, decimal} pair."""
    out = {}
    for key, value in row.items():
        if isinstance(value, (QuadraticNumber, CertifiedInterval, Fraction)):
            out[key] = render_value(value, digits)
        else:
            out[key] = value
    return out


def flatten_row(row: dict, digits: int = config.DEFAULT_DIGITS) -> dict:
    """CSV form: each exact number becomes two columns, `<name>` and `<name>_decimal`."""
    out = {}
    for key, value in row.items():
        if isinstance(value, (QuadraticNumber, CertifiedInterval, Fraction)):
            out[key] = exact_text(value)
            out[f"{key}_decimal"] = format_decimal(value, digits)
        elif value is None:
            out[key] = ""
        else:
            out[key] = value
    return out


def write_csv(rows: Iterable[dict], stream: IO[str], digits: int = config.DEFAULT_DIGITS) -> None:
    flat = [flatten_row(row, digits) for row in rows]
    if not flat:
        return
    writer = csv.DictWriter(stream, fieldnames=list(flat[0].keys()), lineterminator="\n")
    writer.writeheader()
    writer.writerows(flat)


def write_json(rows, stream: IO[str], digits: int = config.DEFAULT_DIGITS) -> None:
    if isinstance(rows, dict):
        payload = render_row(rows, digits)
    else:
        payload = [render_row(row, digits) for row in rows]
    json.dump(payload, stream, indent=4, ensure_ascii=False)
    stream.write("\n")


# -- point sets --------------------------------------------------------------------------


def read_points_csv(stream: IO[str]) -> list[tuple[QuadraticNumber, QuadraticNumber]]:
    """Rows `x,y` with exact text coordinates; decimals are read as exact rationals. A header row is skipped."""
    points = []
    for line_no, row in enumerate(csv.reader(stream), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected two coordinates on line {line_no}", ",".join(row), 0)
        if line_no == 1 and row[0].strip().lower() == "x":
            continue
        points.append((parse_quadratic(row[0]), parse_quadratic(row[1])))
    return points


def write_points_csv(points: Iterable, stream: IO[str], header: Optional[bool] = True) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    if header:
        writer.writerow(["x", "y"])
    for x, y in points:
        writer.writerow([str(x), str(y)])
