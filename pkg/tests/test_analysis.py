import json

import pytest

from sl3web.analysis import (InvariantReport, PreconditionError,
                             alternating_positive_braid_classifier,
                             braid_positivity_obstruction, c_formula, confluence_experiment,
                             connected_sum_check, disjoint_union_check, fibered_criterion,
                             gammas, kn_family_gamma3, lam, report, semi_mixed_state_audit,
                             semi_mixed_supports, verify_coefficient_theorems,
                             verify_mixing_combinatorics)
from sl3web.corpus import alternating_sum, five_two, positive_corpus, table_fixtures
from sl3web.diagram import from_braid_word, mirror, torus_braid, unknot
from sl3web.laurent import QINT3
from sl3web.statesum import invariant


@pytest.fixture(scope="module")
def fixtures():
    return table_fixtures()


def test_gammas(tref, k11n183):
    assert gammas(QINT3) == (2, 1, 1, 1)
    assert gammas(invariant(tref)) == (-2, 1, 1, 2)
    assert gammas(invariant(k11n183))[2:] == (1, 0)
    with pytest.raises(ValueError):
        gammas(QINT3 - QINT3)


@pytest.mark.parametrize("n", range(2, 9))
def test_torus_two_strand_coefficients(n):
    _, g1, g2, g3 = gammas(invariant(torus_braid(2, n)))
    assert (g1, g2, g3) == (1, 1, 2)


def test_theorems_on_positive_corpus():
    for en in positive_corpus(seed=5, random_count=4):
        rep = verify_coefficient_theorems(en.diagram, subject=en.name)
        assert rep.ok, rep.to_json()


def test_theorem_report_names_failures(tref):
    wrong = invariant(tref) + QINT3.shift(-6)  # top term lands on gamma2
    rep = verify_coefficient_theorems(tref, wrong)
    assert not rep.ok and rep.failures


def test_theorem_preconditions(tref):
    with pytest.raises(PreconditionError):
        verify_coefficient_theorems(mirror(tref))
    with pytest.raises(PreconditionError):
        verify_coefficient_theorems(unknot())


def test_fibered(tref, k11n183):
    assert fibered_criterion(tref).fibered
    v = fibered_criterion(k11n183)
    assert v.fibered and v.consistent and v.certificate is None
    v = fibered_criterion(five_two())
    assert not v.fibered and v.consistent
    assert v.gamma2 < 1 and len(v.certificate) >= 3


def _obstruction(d, hint):
    rep = report(d)
    return braid_positivity_obstruction(rep, assume_knot=True, prime_count_hint=hint)


@pytest.mark.parametrize("name", ["10_154", "10_161", "11n_183"])
def test_obstructed(fixtures, name):
    v = _obstruction(fixtures[name], 1)
    assert v.obstructed and v.reasons


@pytest.mark.parametrize("name", ["3_1", "5_1", "10_139"])
def test_consistent(fixtures, name):
    v = _obstruction(fixtures[name], 1)
    assert not v.obstructed and v.verdict == "consistent"


def test_obstruction_without_hint(fixtures, k11n183):
    rep = report(k11n183)
    assert not braid_positivity_obstruction(rep, True).obstructed
    rep = report(five_two())
    # gamma2 != 1 needs no hint
    assert braid_positivity_obstruction(rep, True).obstructed


def test_connected_sums(tref):
    f = from_braid_word([1] * 5, 2)
    for d1, d2 in ((tref, tref), (tref, f)):
        rep = connected_sum_check(d1, d2)
        assert rep.ok, rep.to_json()
    s = report(from_braid_word([1, 1, 1], 2))
    assert lam(tref) == 1 and s.gamma3 == 2


def test_disjoint_union(tref):
    assert disjoint_union_check(tref, from_braid_word([1, 2, 1, 2], 3)).ok


def test_classifier(tref):
    v = alternating_positive_braid_classifier(torus_braid(2, 5))
    assert v.precondition and v.factors == [(2, 5)]
    v = alternating_positive_braid_classifier(alternating_sum(tref, tref))
    assert v.factors == [(2, 3), (2, 3)]
    v = alternating_positive_braid_classifier(torus_braid(3, 4))
    assert not v.precondition and v.reason == "not alternating"
    assert not alternating_positive_braid_classifier(mirror(tref)).precondition


def test_semi_mixed_supports_small():
    # m = 2: cyclic word u1 v1 u2 v2
    sup = set(semi_mixed_supports(2))
    assert ((0,), (0,)) in sup and ((0, 1), (1,)) in sup
    assert ((0, 1), (0, 1)) not in sup


@pytest.mark.parametrize("m", range(2, 7))
def test_mixing(m):
    rep = verify_mixing_combinatorics(m)
    assert rep.ok, rep.to_json()
    assert sum(rep.counts.values()) == sum(c_formula(m, u, v) for u in range(1, m + 1)
                                           for v in range(1, m + 1))


def test_mixing_with_profile():
    rep = verify_mixing_combinatorics(2, [2, 1, 1, 3])
    assert rep.ok and rep.state_sum == 0
    with pytest.raises(ValueError):
        verify_mixing_combinatorics(2, [1, 1, 1])
    with pytest.raises(ValueError):
        verify_mixing_combinatorics(1)


def test_semi_mixed_audit():
    audit = semi_mixed_state_audit(from_braid_word([1, 2, 1, 2], 3))
    assert audit.ok and audit.by_n == {1: 8, 2: 1}
    assert semi_mixed_state_audit(from_braid_word([1, 1, 2, 2, 1, 2], 3)).ok
    with pytest.raises(PreconditionError):
        semi_mixed_state_audit(torus_braid(2, 3))


def test_confluence_small():
    rep = confluence_experiment(n_webs=10, orders=3, seed=2)
    assert rep.ok and rep.webs == 10


def test_kn_family():
    for n in range(1, 6):
        assert kn_family_gamma3(n) == (1, 2)


def test_report_round_trip(k11n183):
    rep = report(k11n183, prime_count_hint=1)
    assert rep.braid_positivity_obstructed
    again = InvariantReport.from_json(json.loads(json.dumps(rep.to_json())))
    assert again == rep
    assert (rep.v, rep.e_prime, rep.mu, rep.theta) == (7, 6, 6, 7)
