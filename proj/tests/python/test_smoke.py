import math

import pytest

import lpdiscrim


def test_case_ids():
    assert lpdiscrim.case_ids()[0] == "eq1-lp"
    assert "eq9-search" in lpdiscrim.case_ids()


def test_resource_protocol_value():
    basis = lpdiscrim.family("eq1")
    a = math.sqrt(0.8)
    report = lpdiscrim.evaluate(basis, lpdiscrim.protocol("bell-measurement", resource="nmes", a=a))
    assert report["success"] == pytest.approx(0.75 + a * math.sqrt(0.2) / 2, abs=1e-12)
    assert not report["perfect"]


def test_maximally_entangled_resource_is_perfect():
    report = lpdiscrim.evaluate(lpdiscrim.family("eq1"), lpdiscrim.protocol("bell-measurement"))
    assert report["perfect"]
    assert list(report["per_state_success"].values()) == [1.0] * 4


def test_negativity():
    s = 1 / math.sqrt(2)
    assert lpdiscrim.negativity([s, 0, 0, s], [2, 2], {0}) == pytest.approx(0.5)
    assert lpdiscrim.negativity([1j * s, 0, 0, s], [2, 2], {0}) == pytest.approx(0.5)
    assert lpdiscrim.negativity([1, 0, 0, 0], [2, 2], {0}) == pytest.approx(0.0)


def test_grid_search_on_semilocal_basis():
    result = lpdiscrim.grid_search(lpdiscrim.family("eq1"), copies=1, resolution=1e-2)
    assert result["success"] == pytest.approx(0.5 + 1 / (2 * math.sqrt(2)), abs=1e-2)


def test_schedule_and_copy_bound():
    assert lpdiscrim.copy_bound([3, 3]) == 4
    result = lpdiscrim.construct_schedule(lpdiscrim.family("domino-3x3"))
    assert result["copies"] <= 4


def test_run_case_and_errors():
    report = lpdiscrim.run_case("thm4", a2=0.7)
    assert report["pass"]
    with pytest.raises(ValueError):
        lpdiscrim.run_case("eq3", a2=0.3)
    with pytest.raises(ValueError):
        lpdiscrim.family("nosuchfamily")
