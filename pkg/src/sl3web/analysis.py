"""Leading coefficients, the Seifert-graph formulas, and combinatorial audits.

For a positive diagram with ``v`` Seifert circles and ``e`` crossings the
invariant starts ``q^n + g2 q^(n-2) + g3 q^(n-4) + ...`` with ``n = 2(v-e)``,
``g2 = v - e'`` and ``g3 = C(g2+1, 2) + mu - theta``.  The checks below
compare those closed forms with the state sum, exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Callable, Sequence

from .diagram import (LinkDiagram, State, connected_sum, disjoint_union,
                      from_braid_word, is_alternating, resolution_state_diagram)
from .laurent import LaurentPoly, QINT2, QINT3, qint_power
from .seifert import (SeifertGraph, classify_pair, find_cycle, reduce, run_profile,
                      seifert_data, seifert_graph)
from .statesum import DEFAULT_CAP, invariant, state_graph, state_weight
from .web import evaluate as evaluate_web


class PreconditionError(ValueError):
    pass


def gammas(p: LaurentPoly) -> tuple[int, int, int, int]:
    """``(n, g1, g2, g3)``: top degree and the coefficients at ``n, n-2, n-4``."""
    if p.is_zero():
        raise ValueError("zero polynomial has no leading coefficients")
    n = p.degree()
    return n, p.coeff(n), p.coeff(n - 2), p.coeff(n - 4)


@dataclass
class InvariantReport:
    polynomial: LaurentPoly
    n: int
    gamma1: int
    gamma2: int
    gamma3: int
    v: int
    e: int
    e_prime: int
    mu: int
    theta: int
    positive: bool
    connected: bool
    components: int
    is_fibered_criterion: bool | None = None
    braid_positivity_obstructed: bool | None = None
    reasons: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "polynomial": str(self.polynomial),
            "terms": self.polynomial.to_json(),
            "n": self.n, "gamma1": self.gamma1, "gamma2": self.gamma2,
            "gamma3": self.gamma3, "v": self.v, "e": self.e,
            "e_prime": self.e_prime, "mu": self.mu, "theta": self.theta,
            "positive": self.positive, "connected": self.connected,
            "components": self.components,
            "is_fibered_criterion": self.is_fibered_criterion,
            "braid_positivity_obstructed": self.braid_positivity_obstructed,
            "reasons": list(self.reasons),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "InvariantReport":
        kw = {k: obj[k] for k in obj if k not in ("polynomial", "terms")}
        return cls(polynomial=LaurentPoly.from_json(obj["terms"]), **kw)


def report(d: LinkDiagram, poly: LaurentPoly | None = None,
           prime_count_hint: int | None = None, engine: str = "kernel",
           workers: int = 1, cap: int | None = DEFAULT_CAP) -> InvariantReport:
    """Invariant, gammas, Seifert statistics, and the predicates that apply."""
    if poly is None:
        poly = invariant(d, engine=engine, workers=workers, cap=cap)
    n, g1, g2, g3 = gammas(poly)
    sd = seifert_data(d)
    rep = InvariantReport(poly, n, g1, g2, g3, sd.v, sd.e, sd.e_prime, sd.mu, sd.theta,
                          d.is_positive(), d.is_connected(), d.num_components)
    if rep.positive and rep.connected:
        rep.is_fibered_criterion = sd.is_tree
        rep.reasons.append("reduced Seifert graph is a tree" if sd.is_tree
                           else "reduced Seifert graph has a cycle")
    verdict = braid_positivity_obstruction(rep, assume_knot=rep.components == 1,
                                           prime_count_hint=prime_count_hint)
    rep.braid_positivity_obstructed = verdict.obstructed
    rep.reasons.extend(verdict.reasons)
    return rep


# coefficient theorems


@dataclass
class Check:
    name: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def to_json(self) -> dict:
        return {"name": self.name, "expected": self.expected, "actual": self.actual,
                "ok": self.ok}


@dataclass
class CheckReport:
    subject: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, expected, actual) -> None:
        self.checks.append(Check(name, expected, actual))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_json(self) -> dict:
        return {"subject": self.subject, "ok": self.ok,
                "checks": [c.to_json() for c in self.checks]}


def _require_positive(d: LinkDiagram, connected: bool = True) -> None:
    if not d.is_positive() or d.e == 0:
        raise PreconditionError("diagram must have crossings, all positive")
    if connected and not d.is_connected():
        raise PreconditionError("diagram must be connected")


def verify_coefficient_theorems(d: LinkDiagram, poly: LaurentPoly | None = None,
                                subject: str = "diagram") -> CheckReport:
    """Compare the state-sum polynomial with the Seifert-graph closed forms."""
    _require_positive(d)
    if poly is None:
        poly = invariant(d)
    sd = seifert_data(d)
    n, g1, g2, g3 = gammas(poly)
    rep = CheckReport(subject)
    rep.add("leading degree 2(v-e)", 2 * (sd.v - sd.e), n)
    rep.add("gamma1", 1, g1)
    rep.add("gamma2 = v - e'", sd.v - sd.e_prime, g2)
    rep.add("gamma3 = C(g2+1,2) + mu - theta",
            comb(sd.v - sd.e_prime + 1, 2) + sd.mu - sd.theta, g3)
    rep.add("expanded gamma3 form",
            comb(sd.v + 1, 2) + comb(sd.e_prime, 2) - sd.v * sd.e_prime + sd.mu - sd.theta, g3)
    rep.add("even exponents", True, poly.exponents_even())
    all_o = (qint_power(3, sd.v)).shift(-2 * sd.e)
    rep.add("all-O trinomial coefficient", comb(sd.v + 1, 2),
            all_o.coeff(2 * (sd.v - sd.e - 2)))
    return rep


@dataclass
class FiberVerdict:
    fibered: bool
    gamma2: int
    certificate: list[int] | None
    consistent: bool

    def to_json(self) -> dict:
        return {"fibered": self.fibered, "gamma2": self.gamma2,
                "certificate": self.certificate, "consistent": self.consistent}


def fibered_criterion(d: LinkDiagram, poly: LaurentPoly | None = None) -> FiberVerdict:
    """Tree test on the reduced Seifert graph, cross-checked against ``gamma2 == 1``.

    The certificate is a cycle of Seifert circles when the graph is not a
    tree.
    """
    _require_positive(d)
    if poly is None:
        poly = invariant(d)
    r = reduce(seifert_graph(d))
    cycle = find_cycle(r)
    tree = cycle is None and r.components() == 1
    g2 = gammas(poly)[2]
    return FiberVerdict(tree, g2, cycle, tree == (g2 == 1))


@dataclass
class BraidVerdict:
    verdict: str
    reasons: list[str]

    @property
    def obstructed(self) -> bool:
        return self.verdict == "obstructed"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "reasons": self.reasons}


def braid_positivity_obstruction(rep: InvariantReport, assume_knot: bool,
                                 prime_count_hint: int | None = None) -> BraidVerdict:
    """Flag diagrams whose coefficients rule out a positive braid closure.

    Never certifies positivity.  ``prime_count_hint`` is the number of prime
    factors, supplied by the caller.
    """
    reasons = []
    if rep.gamma1 != 1:
        reasons.append(f"gamma1 = {rep.gamma1}, not 1")
    if rep.gamma2 != 1:
        reasons.append(f"gamma2 = {rep.gamma2}, not 1")
    if assume_knot and prime_count_hint is not None:
        if rep.gamma3 != prime_count_hint + 1:
            reasons.append(f"gamma3 = {rep.gamma3}, expected {prime_count_hint + 1} "
                           f"for {prime_count_hint} prime factor(s)")
    return BraidVerdict("obstructed" if reasons else "consistent", reasons)


# connected sums and disjoint unions


def lam(d: LinkDiagram) -> int:
    sd = seifert_data(d)
    return sd.mu - sd.theta


def connected_sum_check(d1: LinkDiagram, d2: LinkDiagram,
                        arc1: int | None = None, arc2: int | None = None) -> CheckReport:
    """Additivity of ``gamma2 - 1`` and ``mu - theta`` over a sum of two positive knots."""
    for d in (d1, d2):
        _require_positive(d)
    s = connected_sum(d1, d2, arc1, arc2)
    p1, p2, ps = invariant(d1), invariant(d2), invariant(s)
    g1, g2, gs = gammas(p1), gammas(p2), gammas(ps)
    rep = CheckReport("connected sum")
    rep.add("[3] <<d1#d2>> = <<d1>><<d2>>", p1 * p2, QINT3 * ps)
    rep.add("gamma2 = 1 - p + sum", 1 - 2 + g1[2] + g2[2], gs[2])
    rep.add("lambda additive", lam(d1) + lam(d2), lam(s))
    rep.add("gamma3 = C(g2+1,2) + lambda", comb(gs[2] + 1, 2) + lam(s), gs[3])
    return rep


def disjoint_union_check(d1: LinkDiagram, d2: LinkDiagram) -> CheckReport:
    rep = CheckReport("disjoint union")
    u = disjoint_union(d1, d2)
    rep.add("<<d1 u d2>> = <<d1>><<d2>>", invariant(d1) * invariant(d2), invariant(u))
    return rep


# alternating positive braids


@dataclass
class AltBraidVerdict:
    precondition: bool
    reason: str
    factors: list[tuple[int, int]]
    nugatory: int

    def to_json(self) -> dict:
        return {"precondition": self.precondition, "reason": self.reason,
                "factors": [list(f) for f in self.factors], "nugatory": self.nugatory}


def alternating_positive_braid_classifier(d: LinkDiagram) -> AltBraidVerdict:
    """Split an alternating positive closed-braid diagram into its torus factors.

    The caller vouches that ``d`` is a closed-braid diagram.  Every reduced
    Seifert edge of multiplicity ``k > 1`` is a ``(2, k)`` factor; edges of
    multiplicity one are nugatory crossings.
    """
    if not d.is_positive() or d.e == 0:
        return AltBraidVerdict(False, "not a positive diagram", [], 0)
    if not is_alternating(d):
        return AltBraidVerdict(False, "not alternating", [], 0)
    g = seifert_graph(d)
    r = reduce(g)
    if find_cycle(r) is not None:
        raise AssertionError("positive braid closure with a cyclic reduced Seifert graph")
    mult = sorted(len(c) for c in r.classes.values())
    factors = [(2, k) for k in mult if k > 1]
    nug = sum(1 for k in mult if k == 1)
    theta_ = seifert_data(d).theta
    if theta_ != 0:
        raise AssertionError(f"alternating diagram with theta = {theta_}")
    return AltBraidVerdict(True, "ok", factors, nug)


# mixing combinatorics


def _runs(flags: Sequence[int]) -> int:
    """Runs of each letter among the nonzero ``flags``; 0 unless both letters occur."""
    seq = [x for x in flags if x]
    if len(set(seq)) < 2:
        return 0
    return run_profile(seq)[1]


def semi_mixed_supports(m: int):
    """All ``(I_u, I_v)`` on the cyclic word ``u1 v1 ... um vm`` with one run of each letter."""
    idx = range(m)
    for ku in range(1, m + 1):
        for iu in combinations(idx, ku):
            for kv in range(1, m + 1):
                for iv in combinations(idx, kv):
                    flags = []
                    for j in idx:
                        flags.append(1 if j in iu else 0)
                        flags.append(2 if j in iv else 0)
                    if _runs(flags) == 1:
                        yield iu, iv


def c_formula(m: int, u: int, v: int) -> int:
    """Closed form for the number of semi-mixed supports with sizes ``u``, ``v``."""
    if u > v:
        u, v = v, u
    if u == 1:
        return m * comb(m, v)
    return m * sum(comb(i - 1, v) * comb(m - i, u - 2) for i in range(v + 1, m - u + 3))


@dataclass
class MixingReport:
    m: int
    counts: dict[tuple[int, int], int]
    formula_mismatches: list[tuple[int, int, int, int]]
    symmetry_failures: list[tuple[int, int]]
    support_sum: int
    size_bound_violations: int
    profile: tuple[int, ...] | None = None
    chunk_failures: list = field(default_factory=list)
    state_sum: int | None = None

    @property
    def ok(self) -> bool:
        return (not self.formula_mismatches and not self.symmetry_failures
                and self.support_sum == 0 and not self.size_bound_violations
                and not self.chunk_failures and self.state_sum in (None, 0))

    def to_json(self) -> dict:
        return {"m": self.m, "ok": self.ok,
                "counts": {f"{u},{v}": c for (u, v), c in sorted(self.counts.items())},
                "formula_mismatches": self.formula_mismatches,
                "symmetry_failures": self.symmetry_failures,
                "support_sum": self.support_sum,
                "size_bound_violations": self.size_bound_violations,
                "profile": list(self.profile) if self.profile else None,
                "chunk_failures": self.chunk_failures, "state_sum": self.state_sum}


def verify_mixing_combinatorics(m: int, profile: Sequence[int] | None = None) -> MixingReport:
    """Brute-force the support counts at a mixed vertex of index ``m``.

    ``profile`` gives the lift multiplicities ``(a1, b1, ..., am, bm)``;
    when present, every state over that profile is enumerated as well.
    """
    if m < 2:
        raise ValueError("mixing index must be at least 2")
    counts: dict[tuple[int, int], int] = {}
    alt = 0
    bound = 0
    for iu, iv in semi_mixed_supports(m):
        key = (len(iu), len(iv))
        counts[key] = counts.get(key, 0) + 1
        alt += (-1) ** (len(iu) + len(iv))
        if len(iu) + len(iv) > m + 1 or len(set(iu) & set(iv)) > 1:
            bound += 1
    mism = []
    for u in range(1, m + 1):
        for v in range(1, m + 1):
            got, want = counts.get((u, v), 0), c_formula(m, u, v)
            if got != want:
                mism.append((u, v, got, want))
    sym = [(u, v) for u in range(2, m + 1) for v in range(2, m + 1)
           if counts.get((u, v), 0) != counts.get((u + 1, v - 1), 0)]
    rep = MixingReport(m, counts, mism, sym, alt, bound)
    if profile is not None:
        _chunk_check(rep, m, tuple(profile))
    return rep


def _chunk_check(rep: MixingReport, m: int, profile: tuple[int, ...]) -> None:
    if len(profile) != 2 * m or min(profile) < 1:
        raise ValueError("profile needs 2m positive multiplicities")
    rep.profile = profile
    a, b = profile[0::2], profile[1::2]
    total = 0
    per_support: dict[tuple, int] = {}
    for us in product(*(range(x + 1) for x in a)):
        for vs in product(*(range(x + 1) for x in b)):
            flags = []
            for j in range(m):
                flags.append(1 if us[j] else 0)
                flags.append(2 if vs[j] else 0)
            if _runs(flags) != 1:
                continue
            ways = 1
            for j in range(m):
                ways *= comb(a[j], us[j]) * comb(b[j], vs[j])
            sign = (-1) ** (sum(us) + sum(vs))
            key = (tuple(j for j in range(m) if us[j]), tuple(j for j in range(m) if vs[j]))
            per_support[key] = per_support.get(key, 0) + sign * ways
            total += sign * ways
    for (iu, iv), s in per_support.items():
        if s != (-1) ** (len(iu) + len(iv)):
            rep.chunk_failures.append([list(iu), list(iv), s])
    rep.state_sum = total


# semi-mixed states on an actual diagram


@dataclass
class SemiMixedAudit:
    states: int
    by_n: dict[int, int]
    degree_failures: list
    web_failures: list
    leading_sum: int

    @property
    def ok(self) -> bool:
        return not self.degree_failures and not self.web_failures and self.leading_sum == 0

    def to_json(self) -> dict:
        return {"states": self.states, "by_n": {str(k): v for k, v in sorted(self.by_n.items())},
                "degree_failures": self.degree_failures, "web_failures": self.web_failures,
                "leading_sum": self.leading_sum, "ok": self.ok}


def _w_identity(beta: int, n: int, v: int) -> LaurentPoly:
    tail = QINT2 ** 2
    for i in range(1, n):
        tail = tail + QINT2 ** (2 * i)
    return qint_power(2, beta - 2 * n) * qint_power(3, v - 2) * tail


def semi_mixed_state_audit(d: LinkDiagram, cap: int = 16) -> SemiMixedAudit:
    """Check every state lying over one mixed pair of reduced edges.

    For each such state the state mixing index ``n`` predicts the web value
    and the weight degree ``2(v-e-2-n) + max(2, 2(n-1))``; the weights of
    the semi-mixed states (``n = 1``) must cancel at degree ``2(v-e-2)``.
    """
    _require_positive(d)
    if d.e > cap:
        raise PreconditionError(f"{d.e} crossings exceeds the audit cap of {cap}")
    g = seifert_graph(d)
    r = reduce(g)
    mixed = {(p.edge1, p.edge2) for p in _mixed_pairs(g)}
    if not mixed:
        raise PreconditionError("diagram has no mixed pair of reduced edges")
    v, e = g.v, g.e
    top = 2 * (v - e - 2)
    by_n: dict[int, int] = {}
    deg_fail, web_fail = [], []
    lead = 0
    count = 0
    for mask in range(1, 1 << e):
        s = State(mask, e)
        sg = state_graph(d, s)
        pairs = sorted(set(sg.edges.values()))
        if len(pairs) != 2 or tuple(pairs) not in mixed:
            continue
        n = classify_pair(sg, pairs[0], pairs[1]).m
        count += 1
        by_n[n] = by_n.get(n, 0) + 1
        sw = state_weight(d, s)
        beta = len(s.w_set())
        want_deg = 2 * (v - e - 2 - n) + max(2, 2 * (n - 1))
        if sw.weight.degree() != want_deg:
            deg_fail.append([str(s), n, sw.weight.degree(), want_deg])
        if sw.web_value != _w_identity(beta, n, v):
            web_fail.append([str(s), n])
        if n == 1:
            lead += sw.weight.coeff(top)
    return SemiMixedAudit(count, by_n, deg_fail, web_fail, lead)


def _mixed_pairs(g: SeifertGraph):
    from .seifert import mixed_pairs
    return [p for p in mixed_pairs(g) if p.mixed]


# confluence of the web reduction


@dataclass
class ConfluenceReport:
    webs: int
    orders: int
    disagreements: list

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {"webs": self.webs, "orders": self.orders,
                "disagreements": self.disagreements, "ok": self.ok}


def random_braid_word(rng: random.Random, strands: int, length: int,
                      positive: bool = False) -> list[int]:
    word = [rng.randint(1, strands - 1) for _ in range(length)]
    if not positive:
        word = [g if rng.random() < 0.5 else -g for g in word]
    return word


def confluence_experiment(n_webs: int = 100, orders: int = 5, seed: int = 0,
                          max_crossings: int = 10) -> ConfluenceReport:
    """Evaluate random state webs under several random reduction orders."""
    rng = random.Random(seed)
    rep = ConfluenceReport(0, orders, [])
    while rep.webs < n_webs:
        strands = rng.randint(2, 4)
        word = random_braid_word(rng, strands, rng.randint(2, max_crossings))
        d = from_braid_word(word, strands)
        s = State(rng.getrandbits(d.e), d.e)
        w = resolution_state_diagram(d, s)
        if w.num_vertices == 0:
            continue
        rep.webs += 1
        ref = evaluate_web(w)
        for k in range(orders):
            got = evaluate_web(w, rng=random.Random(rng.getrandbits(32)))
            if got != ref:
                rep.disagreements.append({"word": word, "strands": strands,
                                          "state": str(s), "order": k})
    return rep


# K_n family arithmetic


def kn_family_gamma3(n: int) -> tuple[int, int]:
    """``(gamma2, gamma3)`` from ``v = 6n+5, e' = 6n+4, mu = 6n+4, theta = 6n+3``."""
    v, ep, mu_, th = 6 * n + 5, 6 * n + 4, 6 * n + 4, 6 * n + 3
    g2 = v - ep
    return g2, comb(g2 + 1, 2) + mu_ - th


def batch(items: Sequence, fn: Callable, workers: int = 1) -> list:
    """Map ``fn`` over ``items``, in worker processes when ``workers > 1``."""
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
