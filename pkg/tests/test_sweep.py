import io
import json
import math

import numpy as np
import pytest

from fuzzyent import fermi
from fuzzyent.errors import InvalidSpec, NoBracket
from fuzzyent.sweep import COLUMNS, SweepSpec, emit, find_threshold, format_rows, parse_csv, parse_grid, run_sweep


def test_parse_grid():
    assert parse_grid("0:1:3") == [0.0, 0.5, 1.0]
    assert parse_grid("1,2,4") == [1.0, 2.0, 4.0]
    assert parse_grid("2.5") == [2.5]
    assert parse_grid(3) == [3.0]
    assert parse_grid("1:1:1") == [1.0]
    for bad in ("1:0:3", "0:1:0", "0:1", "a,b", "0:1:x"):
        with pytest.raises(InvalidSpec):
            parse_grid(bad)


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        SweepSpec("nope", d=[0, 1])
    with pytest.raises(InvalidSpec):
        SweepSpec("fermi-ideal", d=[1.0])
    with pytest.raises(InvalidSpec):
        SweepSpec("fermi-ideal", d=[])


def test_fig1_sweep_shape():
    spec = SweepSpec("fermi-fuzzy", p_f=[1.0], sigma=[1.0, 2.0, 4.0], d=parse_grid("0:10:400"))
    rows = run_sweep(spec)
    assert len(rows) == 1200
    assert [r["sigma"] for r in rows[::400]] == [1.0, 2.0, 4.0]
    for r in rows:
        assert abs(r["negativity_closed"] - r["negativity_eigen"]) <= 1e-10


def test_ideal_sweep_flag():
    rows = run_sweep(SweepSpec("fermi-ideal", d=parse_grid("0:5:100")))
    assert len(rows) == 100
    for r in rows:
        assert r["entangled"] == (fermi.ideal_f(1.0, r["d"]) ** 2 > 0.5)
        assert r["g"] == pytest.approx(fermi.ideal_f(1.0, r["d"]) ** 2)


def test_boson_sweep():
    rows = run_sweep(SweepSpec("boson-hom", sigma=[1.0], tau=parse_grid("0:3:300")))
    assert len(rows) == 300
    for r in rows:
        assert abs(r["negativity_eigen"] - math.exp(-r["tau"] ** 2)) <= 1e-12
        assert r["p_f"] is None and r["d"] is None


def test_general_boson_sweep_agrees_with_hom():
    rows = run_sweep(SweepSpec("boson-general", sigma=[1.0], tau=[0.0, 0.5, 1.0]))
    for r in rows:
        assert r["f"] == pytest.approx(math.exp(-r["tau"] ** 2), abs=1e-8)
        assert abs(r["negativity_closed"] - r["negativity_eigen"]) <= 1e-10


def test_worker_count_does_not_change_output():
    spec1 = SweepSpec("fermi-fuzzy", sigma=[1.0, 3.0], d=parse_grid("0:6:25"), workers=1)
    spec4 = SweepSpec("fermi-fuzzy", sigma=[1.0, 3.0], d=parse_grid("0:6:25"), workers=4)
    assert format_rows(run_sweep(spec1)) == format_rows(run_sweep(spec4))


def test_failed_points_are_annotated():
    from fuzzyent.quadrature import QuadratureConfig
    spec = SweepSpec("fermi-fuzzy", sigma=[1.0], d=[0.0, 1e5], quad=QuadratureConfig(max_subdivisions=8))
    rows = run_sweep(spec)
    assert "error" not in rows[0]
    assert rows[1]["error"].startswith("NonConvergence")
    assert rows[1]["negativity_eigen"] is None


def test_threshold_ideal():
    d1 = find_threshold("fermi-ideal", p_f=1.0)
    assert d1 == pytest.approx(1.8148229770, abs=1e-8)
    assert find_threshold("fermi-ideal", p_f=2.0) == pytest.approx(d1 / 2, abs=1e-8)


def test_threshold_fuzzy_matches_sweep():
    d = find_threshold("fermi-fuzzy", p_f=1.0, sigma=1.0)
    f, g = fermi.fuzzy_correlations(1.0, 1.0, d)
    assert g / f == pytest.approx(0.5, abs=1e-8)
    rows = run_sweep(SweepSpec("fermi-fuzzy", sigma=[1.0], d=parse_grid("0:10:400")))
    flips = [(a["d"], b["d"]) for a, b in zip(rows, rows[1:]) if a["entangled"] and not b["entangled"]]
    assert len(flips) == 1 and flips[0][0] < d < flips[0][1]


def test_threshold_no_bracket():
    with pytest.raises(NoBracket):
        find_threshold("fermi-ideal", p_f=1.0, d_max=1.0)
    with pytest.raises(NoBracket):
        find_threshold("boson-hom", sigma=1.0, d_max=5.0)


def test_emit_empty_and_deterministic(tmp_path):
    assert emit([], "csv") == ",".join(COLUMNS) + "\n"
    rows = run_sweep(SweepSpec("fermi-fuzzy", sigma=[1.0], d=[0.0, 1.0]))[:1]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit(rows, "csv", a)
    emit(run_sweep(SweepSpec("fermi-fuzzy", sigma=[1.0], d=[0.0, 1.0]))[:1], "csv", b)
    assert a.read_bytes() == b.read_bytes()


def test_csv_json_round_trip():
    rows = run_sweep(SweepSpec("fermi-fuzzy", sigma=[0.7, 2.0], d=parse_grid("0:4:9")))
    rows += run_sweep(SweepSpec("boson-hom", sigma=[1.0], tau=[0.0, 0.4]))
    from_csv = parse_csv(emit(rows, "csv"))
    from_json = json.loads(emit(rows, "json"))
    assert from_csv == from_json
    for orig, back in zip(rows, from_csv):
        for c in COLUMNS:
            assert orig[c] == back[c]  # 17 significant digits round-trip exactly


def test_emit_to_stream_and_bad_format():
    buf = io.StringIO()
    emit([], "json", buf)
    assert json.loads(buf.getvalue()) == []
    with pytest.raises(InvalidSpec):
        emit([], "xml")
