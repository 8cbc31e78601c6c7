"""Seifert graphs, their reductions, and the mixing data of edge pairs.

Vertices are Seifert circles and edges are crossings.  Each vertex keeps
the cyclic order in which its circle meets crossings, read along the
circle's orientation; every quantity derived here is invariant under
rotating that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .diagram import LinkDiagram, SeifertCircleSet, seifert_circles


@dataclass(frozen=True)
class SeifertGraph:
    num_vertices: int
    edges: dict[int, tuple[int, int]]
    rotation: tuple[tuple[int, ...], ...]

    @property
    def v(self) -> int:
        return self.num_vertices

    @property
    def e(self) -> int:
        return len(self.edges)

    def is_bipartite(self) -> bool:
        color = [-1] * self.v
        adj = [[] for _ in range(self.v)]
        for a, b in self.edges.values():
            adj[a].append(b)
            adj[b].append(a)
        for s in range(self.v):
            if color[s] >= 0:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if color[y] < 0:
                        color[y] = 1 - color[x]
                        stack.append(y)
                    elif color[y] == color[x]:
                        return False
        return True

    def components(self) -> int:
        return _count_components(self.v, self.edges.values())


@dataclass(frozen=True)
class ReducedSeifertGraph:
    num_vertices: int
    classes: dict[tuple[int, int], tuple[int, ...]]

    @property
    def v(self) -> int:
        return self.num_vertices

    @property
    def e_prime(self) -> int:
        return len(self.classes)

    @property
    def multiplicities(self) -> dict[tuple[int, int], int]:
        return {k: len(c) for k, c in self.classes.items()}

    def components(self) -> int:
        return _count_components(self.v, self.classes)


@dataclass(frozen=True)
class PairReport:
    edge1: tuple[int, int]
    edge2: tuple[int, int]
    vertex: int
    profile: tuple[int, ...]
    m: int

    @property
    def mixed(self) -> bool:
        return self.m >= 2

    @property
    def classification(self) -> str:
        return "mixed" if self.mixed else "separated"


def _count_components(n: int, pairs: Iterable[tuple[int, int]]) -> int:
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        parent[find(a)] = find(b)
    return len({find(i) for i in range(n)})


def build_seifert_graph(circles: SeifertCircleSet,
                        keep: Iterable[int] | None = None) -> SeifertGraph:
    """Graph of Seifert circles; ``keep`` restricts to a set of crossings."""
    all_edges = {c: (min(p), max(p)) for c, p in enumerate(circles.crossing_circles)}
    if keep is not None:
        keep = set(keep)
        all_edges = {c: p for c, p in all_edges.items() if c in keep}
    rot = tuple(tuple(c for c in att if c in all_edges) for att in circles.attachments)
    return SeifertGraph(len(circles.circles), all_edges, rot)


def seifert_graph(d: LinkDiagram) -> SeifertGraph:
    return build_seifert_graph(seifert_circles(d))


def reduce(g: SeifertGraph) -> ReducedSeifertGraph:
    classes: dict[tuple[int, int], list[int]] = {}
    for c, pair in sorted(g.edges.items()):
        classes.setdefault(pair, []).append(c)
    return ReducedSeifertGraph(g.v, {k: tuple(v) for k, v in classes.items()})


def mu(r: ReducedSeifertGraph) -> int:
    return sum(1 for c in r.classes.values() if len(c) > 1)


def run_profile(seq: Sequence) -> tuple[tuple[int, ...], int]:
    """Cyclic run lengths of a two-letter sequence and the number of runs of each letter.

    The first letter of ``seq`` plays the role of edge 1.  The profile is
    ``(a_1, b_1, ..., a_m, b_m)``, rotated to the lexicographically least
    form that starts with an ``a`` run; runs that wrap around the end of
    ``seq`` are merged.
    """
    if not seq:
        raise ValueError("empty sequence")
    letters = list(dict.fromkeys(seq))
    if len(letters) != 2:
        raise ValueError("sequence must use exactly two letters")
    first = letters[0]
    n = len(seq)
    start = next(i for i in range(n) if seq[i] != seq[i - 1])
    rot = list(seq[start:]) + list(seq[:start])
    runs = []
    for x in rot:
        if runs and runs[-1][0] == x:
            runs[-1][1] += 1
        else:
            runs.append([x, 1])
    if runs[0][0] != first:
        runs = runs[1:] + runs[:1]
    lengths = [r[1] for r in runs]
    m = len(lengths) // 2
    best = min(tuple(lengths[2 * i:] + lengths[:2 * i]) for i in range(m))
    return best, m


def classify_pair(g: SeifertGraph, edge1: tuple[int, int], edge2: tuple[int, int]) -> PairReport:
    """Mixing data of two reduced edges at their shared vertex."""
    e1, e2 = tuple(sorted(edge1)), tuple(sorted(edge2))
    if e1 == e2:
        raise ValueError("edges are identical")
    shared = set(e1) & set(e2)
    if len(shared) != 1:
        raise ValueError("edges must share exactly one vertex")
    w = shared.pop()
    seq = []
    for c in g.rotation[w]:
        pair = g.edges[c]
        if pair == e1:
            seq.append(1)
        elif pair == e2:
            seq.append(2)
    if seq[0] != 1:
        k = seq.index(1)
        seq = seq[k:] + seq[:k]
    profile, m = run_profile(seq)
    return PairReport(e1, e2, w, profile, m)


def mixed_pairs(g: SeifertGraph) -> list[PairReport]:
    r = reduce(g)
    at: dict[int, list[tuple[int, int]]] = {}
    for pair in r.classes:
        for x in pair:
            at.setdefault(x, []).append(pair)
    out = []
    for w, edges in sorted(at.items()):
        for a, b in combinations(sorted(edges), 2):
            assert len(set(a) & set(b)) == 1, "distinct reduced edges share both ends"
            out.append(classify_pair(g, a, b))
    return out


def theta(g: SeifertGraph) -> int:
    return sum(1 for p in mixed_pairs(g) if p.mixed)


def is_tree(r: ReducedSeifertGraph) -> bool:
    return r.components() == 1 and r.e_prime == r.v - 1


def find_cycle(r: ReducedSeifertGraph) -> list[int] | None:
    """Vertices of some cycle in the reduced graph, or ``None`` for a forest."""
    adj: dict[int, list[int]] = {i: [] for i in range(r.v)}
    for a, b in r.classes:
        adj[a].append(b)
        adj[b].append(a)
    parent: dict[int, int] = {}
    for s in range(r.v):
        if s in parent:
            continue
        parent[s] = -1
        stack = [(s, -1)]
        while stack:
            x, px = stack.pop()
            for y in adj[x]:
                if y == px:
                    continue
                if y in parent:
                    if parent.get(x) == y:
                        continue
                    path_x, path_y = [x], [y]
                    while path_x[-1] != -1:
                        path_x.append(parent[path_x[-1]])
                    while path_y[-1] != -1:
                        path_y.append(parent[path_y[-1]])
                    common = next(z for z in path_x if z in set(path_y))
                    cyc = path_x[:path_x.index(common) + 1]
                    cyc += list(reversed(path_y[:path_y.index(common)]))
                    return cyc
                parent[y] = x
                stack.append((y, x))
    return None


@dataclass(frozen=True)
class SeifertData:
    v: int
    e: int
    e_prime: int
    multiplicities: tuple[int, ...]
    mu: int
    theta: int
    is_tree: bool
    components: int

    def to_json(self) -> dict:
        return {"v": self.v, "e": self.e, "e_prime": self.e_prime,
                "multiplicities": list(self.multiplicities), "mu": self.mu,
                "theta": self.theta, "is_tree": self.is_tree,
                "components": self.components}


def seifert_data(d: LinkDiagram) -> SeifertData:
    g = seifert_graph(d)
    r = reduce(g)
    mult = tuple(sorted(len(c) for c in r.classes.values()))
    return SeifertData(g.v, g.e, r.e_prime, mult, mu(r), theta(g), is_tree(r),
                       r.components())
