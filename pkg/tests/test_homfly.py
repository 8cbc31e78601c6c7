import json

import pytest
from hypothesis import given, strategies as st

from sl3web.corpus import bundled_knotinfo, table_fixtures
from sl3web.diagram import connected_sum, disjoint_union, from_braid_word, mirror, unknot
from sl3web.homfly import (CalibrationError, Convention, HomflyError, HomflyPoly, ONE,
                           calibrate, homfly, load_convention, parse_knotinfo_homfly,
                           specialize_sl3, unlink)
from sl3web.laurent import QINT3
from sl3web.statesum import invariant

# a^-1 P+ - a P- = z P0 with P(unknot) = 1
TREFOIL = HomflyPoly({(2, 0): 2, (4, 0): -1, (2, 2): 1})
TWO_UNLINK = HomflyPoly({(-1, -1): 1, (1, -1): -1})


def test_unknot_and_unlinks():
    assert homfly(unknot()) == ONE
    assert homfly(from_braid_word([1], 2)) == ONE
    assert unlink(2) == TWO_UNLINK
    assert homfly(unknot(2)) == TWO_UNLINK
    assert homfly(from_braid_word([1, -1], 2)) == TWO_UNLINK
    assert unlink(3) == TWO_UNLINK * TWO_UNLINK


def test_trefoil(tref, tref_braid):
    assert homfly(tref) == TREFOIL
    assert homfly(tref_braid) == TREFOIL
    assert homfly(mirror(tref)) == TREFOIL.mirror()


def test_skein_relation():
    # crossing 0 of each braid is the one changed or smoothed
    for rest, n in (([1, 1], 2), ([2, 1, 2, -1], 3), ([1, -2, 1, 2, 2], 3)):
        pp = homfly(from_braid_word([1] + rest, n))
        pm = homfly(from_braid_word([-1] + rest, n))
        p0 = homfly(from_braid_word(rest, n))
        a_inv = HomflyPoly({(-1, 0): 1})
        a = HomflyPoly({(1, 0): 1})
        z = HomflyPoly({(0, 1): 1})
        assert a_inv * pp - a * pm == z * p0


def test_specialization():
    assert specialize_sl3(ONE) == QINT3
    assert specialize_sl3(TWO_UNLINK) == QINT3 ** 2
    assert specialize_sl3(unlink(3)) == QINT3 ** 3


@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=8))
def test_agrees_with_state_sum(word):
    d = from_braid_word(word, 4)
    assert specialize_sl3(homfly(d)) == invariant(d)


def test_multiplicativity(tref):
    f = from_braid_word([1] * 5, 2)
    assert homfly(connected_sum(tref, f)) == homfly(tref) * homfly(f)
    assert homfly(disjoint_union(tref, f)) == homfly(tref) * homfly(f) * TWO_UNLINK


def test_braid_relation_invariance():
    assert homfly(from_braid_word([1, 2, 1, 1], 3)) == homfly(from_braid_word([2, 1, 2, 1], 3))


def test_poly_json_and_text():
    assert HomflyPoly.from_json(json.loads(json.dumps(TREFOIL.to_json()))) == TREFOIL
    assert str(ONE) == "1"
    assert TREFOIL.mirror().mirror() == TREFOIL


def test_parse():
    assert parse_knotinfo_homfly("1") == ONE
    assert parse_knotinfo_homfly("(2*v^2-v^4)+v^2*z^2") == TREFOIL
    assert parse_knotinfo_homfly("v^-1*z^-1 - v*z^-1") == TWO_UNLINK
    assert parse_knotinfo_homfly("(2*v^2-v^4)+v^2*z^2",
                                 Convention(mirror=True)) == TREFOIL.mirror()
    flipped = Convention(a_power=-1, z_sign=-1)
    assert parse_knotinfo_homfly("(2*v^-2-v^-4)+v^-2*z^2", flipped) == TREFOIL


@pytest.mark.parametrize("bad", ["", "v^2 +", "x*v", "v/2", "sqrt(v)", "1/(v+1)"])
def test_parse_errors(bad):
    with pytest.raises(HomflyError):
        parse_knotinfo_homfly(bad)


def test_convention_file(tmp_path, monkeypatch):
    c = load_convention()
    assert c == Convention()
    p = tmp_path / "conv.json"
    p.write_text(json.dumps({"a_variable": "a", "a_power": -1, "z_variable": "z",
                             "z_sign": 1, "mirror": False}))
    monkeypatch.setenv("SL3WEB_CONVENTION", str(p))
    assert load_convention().a_power == -1
    assert load_convention().digest() != c.digest()
    p.write_text(json.dumps({"a_power": 2}))
    with pytest.raises(ValueError):
        load_convention(p)


def test_calibration():
    text = next(r for r in bundled_knotinfo() if r["name"] == "3_1")["homfly_polynomial"]
    assert calibrate(Convention(), text).mirror is False
    # a wrong chirality guess is corrected
    assert calibrate(Convention(mirror=True), text).mirror is False
    with pytest.raises(CalibrationError):
        calibrate(Convention(), "2*v^2")


def test_knotinfo_rows_match_fixtures():
    rows = {r["name"]: r for r in bundled_knotinfo()}
    fixtures = table_fixtures()
    for name in ("3_1", "8_19", "10_139", "10_154", "11n_183", "12n_888"):
        p = parse_knotinfo_homfly(rows[name]["homfly_polynomial"])
        assert specialize_sl3(p) == invariant(fixtures[name]), name
    assert parse_knotinfo_homfly(rows["11n_183"]["homfly_polynomial"]) == homfly(fixtures["11n_183"])


def test_cap():
    with pytest.raises(ValueError):
        homfly(from_braid_word([1] * 6, 2), cap=5)
