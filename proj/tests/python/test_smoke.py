import os

import pytest

import logcartier as lc

DATA = os.environ.get("LOGCARTIER_DATA", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def cone(p):
    return lc.Chart(p, 2, [[1, 1], [1, -1], [1, 0]], log_coords=[[1, 0], [0, 1]])


def test_chart_basics():
    c = cone(2)
    assert c.p == 2 and c.r == 2 and c.ambient_rank == 2
    assert len(c.coset_reps) == 4
    assert c.in_P([2, -1]) and not c.in_P([0, 1])
    assert c.coords_modp([3, 1]) == [1, 1]


def test_minimal_elements_of_the_cone():
    mins = dict((tuple(rep), sorted(map(tuple, ms))) for rep, ms in lc.minimal_elements(cone(2)))
    assert mins[(1, 1)] == [(1, -1), (1, 1)]
    assert sum(len(ms) for ms in mins.values()) > 4


def test_invalid_chart_raises():
    with pytest.raises(lc.LogCartierError, match="Q_generators"):
        lc.Chart(3, 1, [[1]], Q_generators=[[3]], log_coords=[[1]])


def test_elements():
    c = cone(3)
    assert lc.element_str(c, "x^[1,0] + x^[1,0] + x^[1,0]") == "0"
    assert lc.in_B(c, "x^[3,0]")
    assert not lc.in_B(c, "x^[1,0]")
    with pytest.raises(lc.LogCartierError):
        lc.element_str(c, "x^[1")


def test_p_curvature_of_constant_connection():
    c = lc.Chart(3, 1, [[1]], log_coords=[[1]])
    conn = lc.constant_connection(c, [[[0, 1], [0, 0]]])
    assert lc.is_integrable(c, conn)
    assert lc.p_curvature(c, conn) == ["[0, 2; 0, 0]"]
    assert lc.nilpotence_level(c, conn) == 1


def test_transform_and_cohomology():
    c = lc.Chart(3, 1, [[1]], log_coords=[[1]])
    conn = lc.constant_connection(c, [[[0, 1], [0, 0]]])
    t = lc.cartier_transform(c, conn, 9)
    assert t["level"] == 1 and t["free"] and t["comparison_surjective"]
    assert t["higgs"].matrices == ["[0, 1; 0, 0]"]
    back = lc.inverse_cartier_transform(c, t["higgs"])
    assert back.matrices == ["[0, 1; 0, 0]"]
    slices, mismatches = lc.cartier_iso_check(c, 12)
    assert slices > 0 and mismatches == 0
    q = lc.quasi_iso_check(c, conn, 2, 9)
    assert q["ok"] and q["truncation"] == 1


def test_chart_files_and_cli():
    path = os.path.join(DATA, "line_p3.chart")
    c = lc.load_chart(path)
    assert c.r == 1
    logpole = lc.load_connection(c, path, "logpole")
    assert lc.p_curvature(c, logpole) == ["[0]"]
    assert lc.load_higgs(c, path, "jordan").rank == 2
    code, out, err = lc.run_cli(["--format", "structured", "verify-all", path])
    assert code == 0, err
    assert out.startswith("logcartier-report/1\n")
    assert "summary.failed=0" in out
    code, _, err = lc.run_cli(["chart-info", path, "--bogus"])
    assert code == 2 and "bogus" in err
