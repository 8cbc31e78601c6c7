import json
import random

import pytest
from hypothesis import given, strategies as st

from sl3web.diagram import State, from_braid_word, resolution_state_diagram
from sl3web.laurent import ONE, QINT2, QINT3
from sl3web.web import (Web, WebError, apply_ow_move, build_capped_square_chain, circles,
                        clear_memo, evaluate, faces, find_bigons, find_squares,
                        memo_size, ow_sites, reduce_step, theta_web)

LADDERS = ([("half-capped", None, k) for k in range(7)]
           + [("uncapped", "caps", k) for k in range(7)]
           + [("uncapped", "rails", k) for k in (1, 3, 5)]
           + [("trace-closed", None, k) for k in (0, 2, 4, 6)])


def test_circles():
    assert evaluate(circles(0)) == ONE
    assert evaluate(circles(1)) == QINT3
    assert evaluate(circles(2)) == QINT3 ** 2


def test_theta():
    t = theta_web()
    t.validate()
    assert t.num_vertices == 2 and t.num_edges == 3
    assert evaluate(t) == QINT2 * QINT3
    assert find_bigons(t)


@pytest.mark.parametrize("capped,closure,k", LADDERS)
def test_ladders(capped, closure, k):
    w, expected = build_capped_square_chain(k, capped, closure)
    w.validate()
    assert evaluate(w, memo=False) == expected


def test_ladder_argument_errors():
    with pytest.raises(WebError):
        build_capped_square_chain(2, "uncapped", "rails")
    with pytest.raises(WebError):
        build_capped_square_chain(3, "trace-closed")
    with pytest.raises(WebError):
        build_capped_square_chain(-1, "half-capped")
    with pytest.raises(WebError):
        build_capped_square_chain(1, "sideways")


def test_ladder_has_squares():
    w, _ = build_capped_square_chain(4, "uncapped", "caps")
    assert find_squares(w)


def test_validate_rejects_bad_webs():
    with pytest.raises(WebError):
        Web((True,), (1, 0, 2)).validate()
    with pytest.raises(WebError):
        # edge between two sources
        Web((True, True), (3, 4, 5, 0, 1, 2)).validate()
    with pytest.raises(WebError):
        Web((), (), -1).validate()
    with pytest.raises(WebError):
        Web((True,), (0, 1)).validate()


def test_faces_of_theta():
    t = theta_web()
    # V - E + F = 2 on the sphere
    assert len(faces(t)) == 3
    assert sorted(len(f) for f in faces(t)) == [2, 2, 2]


def test_reduce_step_preserves_value():
    w, expected = build_capped_square_chain(3, "uncapped", "caps")
    total = sum((c * evaluate(x) for c, x in reduce_step(w)), start=ONE - ONE)
    assert total == expected


def test_ow_move_on_loops_and_sites():
    two = circles(2)
    assert apply_ow_move(two, ("loop", "loop")).num_vertices == 2
    with pytest.raises(WebError):
        apply_ow_move(circles(1), ("loop", "loop"))
    t = theta_web()
    for site in ow_sites(t):
        v = evaluate(apply_ow_move(t, site))
        assert abs(v.degree() - evaluate(t).degree()) == 1


def _resolved_webs():
    d = from_braid_word([1, 2, 1, 2, 1, 2], 3)
    rng = random.Random(3)
    out = []
    for _ in range(6):
        word = "".join("W" if rng.random() < 0.6 else "O" for _ in range(d.e))
        out.append(resolution_state_diagram(d, State.from_string(word)))
    return out


def test_ow_move_changes_degree_by_one():
    for w in _resolved_webs():
        base = evaluate(w).degree()
        for site in ow_sites(w)[:6]:
            moved = apply_ow_move(w, site)
            moved.validate()
            assert abs(evaluate(moved).degree() - base) == 1


@given(st.integers(0, 10_000))
def test_reduction_order_is_irrelevant(seed):
    w, expected = build_capped_square_chain(4, "trace-closed")
    assert evaluate(w, rng=random.Random(seed), memo=False) == expected


def test_canonical_key_ignores_relabeling():
    w, _ = build_capped_square_chain(2, "uncapped", "caps")
    n = w.num_vertices
    perm = list(range(n))
    random.Random(1).shuffle(perm)
    opp = [0] * len(w.opp)
    src = [False] * n
    for v in range(n):
        src[perm[v]] = w.sources[v]
        for i in range(3):
            o = w.opp[3 * v + i]
            opp[3 * perm[v] + i] = 3 * perm[o // 3] + o % 3
    w2 = Web(tuple(src), tuple(opp), w.loops)
    w2.validate()
    assert w2.canonical_key() == w.canonical_key()
    assert w.canonical_key() != theta_web().canonical_key()


def test_json_round_trip():
    w, _ = build_capped_square_chain(3, "half-capped")
    assert Web.from_json(json.loads(json.dumps(w.to_json()))) == w


def test_memo():
    clear_memo()
    assert memo_size() == 0
    evaluate(build_capped_square_chain(5, "half-capped")[0])
    assert memo_size() > 0
    clear_memo()
    assert memo_size() == 0
