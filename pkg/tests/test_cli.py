"""
Tests for the latdisp command line, driven through run() with in-memory streams.
"""
import csv
import io
import json

import pytest

from latdisp.cli import run
from latdisp.core.dispersion import coefficient_statistics_scan
from latdisp.core.qfield import QuadraticNumber, delta
from latdisp.utils.parsing import parse_quadratic


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    status = run(list(argv), stdout=out, stderr=err)
    return status, out.getvalue(), err.getvalue()


def _json(*argv):
    status, out, _ = _run("--format", "json", *argv)
    assert status == 0
    return json.loads(out)


def _csv(*argv):
    status, out, _ = _run("--format", "csv", *argv)
    return status, list(csv.DictReader(io.StringIO(out)))


def test_disp_ring_json():
    [row] = _json("disp-ring", "--d", "5", "--walk")
    assert row["d"] == 5 and row["disc"] == 5
    assert row["dispersion"] == {"exact": "2 + sqrt(5)", "decimal": "4.23607"}
    assert row["normalized"]["decimal"] == "1.89443"
    assert row["normalized_walk"] == row["normalized"]
    assert parse_quadratic(row["normalized"]["exact"]) == delta(5) ** 3 / QuadraticNumber.sqrt(5)


def test_bound_table_check_passes():
    status, rows = _csv("bound-table", "--check")
    assert status == 0
    assert len(rows) == 17
    assert rows[0]["a"] == "2"
    assert rows[0]["disp_periodic_decimal"] == "2.06066"


def test_bound_table_subset_through_the_short_alias():
    status, rows = _csv("table1", "--a", "2,3")
    assert status == 0
    assert [row["a"] for row in rows] == ["2", "3"]


def test_norm_figure():
    rows = _json("norm-figure", "--delta", "phi", "--max-n", "3")
    assert [row["n"] for row in rows] == [0, 1, 2, 3]
    assert all(row["norms"]["exact"] == "2" for row in rows)


def test_cf_of_a_number():
    [row] = _json("cf", "1+sqrt(2)")
    assert row["expansion"] == "[(2)]"
    assert row["preperiod"] == 0
    assert row["period"] == 1
    assert row["conjugate_expansion"] == "both"


def test_cf_of_a_sequence_literal():
    [row] = _json("cf", "[0;2,1,1]")
    assert row == {"sequence": "[0;2,1,1]", "kind": "finite"}


def test_disp_seq():
    [row] = _json("disp-seq", "(2,1,1,2)")
    assert row["attained"] is True
    assert parse_quadratic(row["dispersion"]["exact"]) == 1 + 16 / QuadraticNumber.sqrt(221)


def test_disp_seq_infinite():
    [row] = _json("disp-seq", "1,2|(2)")
    assert row["infinite"] is True
    assert row["dispersion"] is None


def test_rank1_with_oracle():
    [row] = _json("rank1", "rank1(1,5)", "--oracle")
    assert row["normalized"]["exact"] == "12/5"
    assert row["oracle"]["exact"] == "12/25"
    assert row["strip"] is False


def test_rank1_with_flags():
    [row] = _json("rank1", "--p", "5", "--n", "13")
    assert row["dispersion"]["exact"] == "2/13"
    assert row["strip"] is True
    status, _, err = _run("rank1", "--p", "5")
    assert status == 1
    assert "rank1" in err


def test_zaremba_csv():
    status, rows = _csv("zaremba", "--stop", "12", "--workers", "1")
    assert status == 0
    assert [int(row["n"]) for row in rows] == list(range(2, 13))
    assert all(row["flagged"] == "False" and row["below_C"] == "True" for row in rows)


def test_boxes_of_a_ring():
    rows = _json("boxes", "--ring", "2", "1", "--start", "-1", "--stop", "1")
    assert [row["n"] for row in rows] == [-1, 0, 1]
    assert rows[1]["vol"] == {"exact": "2 + 2*sqrt(2)", "decimal": "4.82843"}


def test_boxes_in_torus_mode():
    rows = _json("boxes", "--delta", "5/3", "--delta-tilde=-1/2", "--torus", "--start", "-20", "--stop", "20")
    assert [row["n"] for row in rows] == [-1, 0, 1, 2, 3]
    assert rows[0]["normalized_vol"]["exact"] == "2"


def test_best():
    rows = _json("best", "--rank", "3")
    assert [row["period"] for row in rows] == ["1", "2", "2,1,1,2"]


def test_coeff_scan_single_generator():
    status, rows = _csv("coeff-scan", "--delta", "6+delta_217")
    assert status == 0
    assert len(rows) == 16
    assert rows[0]["a"] == "13"


def test_coeff_scan_statistics():
    expected = coefficient_statistics_scan(6, range(1, 7))
    status, rows = _csv("coeff-scan", "--trace-max", "6", "--norm-max", "6")
    assert len(rows) == len(expected)
    assert status == (0 if all(row.consistent for row in expected) else 1)


def test_fib_profile():
    rows = _json("fib", "--m", "5")
    assert [row["normalized_volume"]["exact"] for row in rows] == ["2", "9/5", "2"]
    assert rows[0]["p"] == 2 and rows[0]["n"] == 5


def test_tight_bounds_and_bounds():
    status, rows = _csv("tight-bounds", "--a", "2,3")
    assert status == 0
    assert rows[0]["disp_periodic_decimal"] == "2.06066"
    assert rows[0]["disp_tail_decimal"] == "2.15470"
    [row] = _json("bounds", "--a", "5")
    assert row["L"]["exact"] == "12/5"
    assert row["U"]["exact"] == "20/7"


def test_oracle_on_a_point_file(tmp_path):
    points = tmp_path / "points.csv"
    points.write_text("x,y\n1/2,1/2\n", encoding="utf-8")
    [row] = _json("oracle", "--points", str(points))
    assert row["points"] == 1
    assert row["dispersion"]["exact"] == "1/2"


def test_oracle_with_a_missing_point_file(tmp_path):
    status, out, err = _run("oracle", "--points", str(tmp_path / "absent.csv"))
    assert status == 1
    assert out == ""
    assert "latdisp oracle: cannot read" in err
    assert "absent.csv" in err


def test_oracle_on_a_rank_one_lattice():
    [row] = _json("oracle", "--rank1", "rank1(5,13)")
    assert row["dispersion"]["exact"] == "2/13"
    assert row["normalized"]["exact"] == "2"


def test_pretty_output_shows_decimal_and_exact():
    status, out, _ = _run("disp-ring", "--d", "2")
    assert status == 0
    header, line = out.splitlines()
    assert header.split()[:3] == ["d", "n", "disc"]
    assert "5.82843 (3 + 2*sqrt(2))" in line


@pytest.mark.parametrize("argv", [[], ["bogus"], ["disp-ring"], ["best", "--rank", "x"], ["bounds", "--a", "2,x"]])
def test_usage_errors_exit_with_two(argv):
    status, out, err = _run(*argv)
    assert status == 2
    assert out == ""
    assert err.startswith("usage: ")


def test_help_goes_to_the_given_stream():
    status, out, err = _run("--help")
    assert status == 0
    assert "bound-table" in out
    assert err == ""


@pytest.mark.parametrize("argv, fragment", [
    (["disp-ring", "--d", "4"], "squarefree"),
    (["cf", "sqrt(2)+sqrt(3)"], "latdisp cf"),
    (["bounds", "--a", "1"], "a >= 2"),
    (["disp-seq", "[1;2"], "latdisp disp-seq"),
])
def test_domain_errors_exit_with_one(argv, fragment):
    status, out, err = _run(*argv)
    assert status == 1
    assert out == ""
    assert fragment in err


def test_out_writes_a_file(tmp_path):
    target = tmp_path / "fib.csv"
    status, out, _ = _run("--format", "csv", "--out", str(target), "fib", "--m", "6")
    assert status == 0
    assert out == ""
    rows = list(csv.DictReader(io.StringIO(target.read_text(encoding="utf-8"))))
    assert len(rows) == 4


def test_out_to_an_unwritable_path(tmp_path):
    status, _, err = _run("--out", str(tmp_path / "missing" / "fib.csv"), "fib", "--m", "6")
    assert status == 1
    assert "cannot write" in err


def test_output_is_deterministic():
    first = _run("--format", "json", "bound-table")
    second = _run("--format", "json", "bound-table")
    assert first == second
