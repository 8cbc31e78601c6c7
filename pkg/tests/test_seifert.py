import pytest

from sl3web.corpus import five_two
from sl3web.diagram import from_braid_word, seifert_circles, torus_braid, unknot
from sl3web.seifert import (build_seifert_graph, classify_pair, find_cycle, is_tree,
                            mixed_pairs, mu, reduce, run_profile, seifert_data,
                            seifert_graph, theta)


def test_run_profiles():
    assert run_profile([1, 1, 1, 2, 2]) == ((3, 2), 1)
    assert run_profile([1, 2, 1, 2]) == ((1, 1, 1, 1), 2)
    # runs wrapping around the end merge
    assert run_profile([1, 2, 2, 1, 2, 1])[1] == 2
    assert run_profile([2, 1, 1, 2]) == ((2, 2), 1)
    with pytest.raises(ValueError):
        run_profile([1, 1])
    with pytest.raises(ValueError):
        run_profile([])


def test_profile_is_rotation_invariant():
    seq = [1, 1, 2, 1, 2, 2, 2, 1, 2]
    base = run_profile(seq)
    for k in range(len(seq)):
        rot = seq[k:] + seq[:k]
        # the first letter names edge 1, so keep it fixed
        if rot[0] == seq[0]:
            assert run_profile(rot) == base


def test_trefoil_graph(tref_braid):
    g = seifert_graph(tref_braid)
    assert (g.v, g.e) == (2, 3)
    r = reduce(g)
    assert r.e_prime == 1 and r.multiplicities == {(0, 1): 3}
    assert mu(r) == 1 and theta(g) == 0 and is_tree(r)
    assert g.is_bipartite()
    circles = seifert_circles(tref_braid)
    assert all(len(a) == 3 for a in circles.attachments)


def test_unknot_graph():
    g = seifert_graph(unknot())
    assert (g.v, g.e) == (1, 0)
    r = reduce(g)
    assert r.e_prime == 0 and mu(r) == 0 and is_tree(r)


def test_11n183(k11n183):
    sd = seifert_data(k11n183)
    assert (sd.v, sd.e, sd.e_prime, sd.mu, sd.theta) == (7, 12, 6, 6, 7)
    assert sd.is_tree


@pytest.mark.parametrize("n", [3, 4, 5])
def test_prime_positive_braids(n):
    # each generator used at least twice, interleaved
    word = list(range(1, n)) * 3
    sd = seifert_data(from_braid_word(word, n))
    assert sd.v == n
    assert sd.mu == sd.e_prime == n - 1
    assert sd.theta == n - 2


def test_classify_pair_symmetric():
    g = seifert_graph(from_braid_word([1, 2, 1, 2], 3))
    assert classify_pair(g, (0, 1), (1, 2)).m == classify_pair(g, (1, 2), (0, 1)).m
    p = classify_pair(g, (0, 1), (1, 2))
    assert p.mixed and p.profile == (1, 1, 1, 1)
    q = classify_pair(seifert_graph(from_braid_word([1, 1, 2, 2], 3)), (0, 1), (1, 2))
    assert q.classification == "separated"
    with pytest.raises(ValueError):
        classify_pair(g, (0, 1), (0, 1))


def test_mixed_pairs_counts_every_shared_vertex():
    g = seifert_graph(torus_braid(3, 4))
    assert len(mixed_pairs(g)) == 1 and theta(g) == 1


def test_cycle_certificate():
    r = reduce(seifert_graph(five_two()))
    assert not is_tree(r)
    cyc = find_cycle(r)
    assert cyc is not None and len(cyc) >= 3
    edges = set(r.classes)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert tuple(sorted((a, b))) in edges
    assert find_cycle(reduce(seifert_graph(torus_braid(3, 4)))) is None


def test_keep_subset(tref_braid):
    g = build_seifert_graph(seifert_circles(tref_braid), keep=[0])
    assert g.e == 1
