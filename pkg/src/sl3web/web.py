"""Closed A2 webs as combinatorial maps, and their evaluation.

A web with ``V`` trivalent vertices has darts ``0 .. 3V-1``; dart ``3v+i``
is the ``i``-th edge end at vertex ``v`` in counterclockwise order.
``opp`` pairs the two ends of each edge.  Every vertex is a source or a
sink, so every edge runs from a source dart to a sink dart.  Closed
vertexless loops are only counted.

Faces are the orbits of ``d -> sigma(opp(d))`` where ``sigma`` is the
counterclockwise successor at a vertex; a face dart ``d`` means the face
boundary runs along the edge of ``d`` away from ``d``'s vertex, with the
face on its right.

Evaluation applies the circle, bubble and square relations
``O = [3]``, ``bubble = [2] * strand`` and ``square = sum of both
smoothings``.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .laurent import ONE, ZERO, LaurentPoly, qint_power, QINT2, QINT3


class WebError(ValueError):
    """Invalid web data or a web that admits no reduction."""


def sigma(d: int) -> int:
    return 3 * (d // 3) + (d % 3 + 1) % 3


@dataclass(frozen=True)
class Web:
    sources: tuple[bool, ...]
    opp: tuple[int, ...]
    loops: int = 0

    @property
    def num_vertices(self) -> int:
        return len(self.sources)

    @property
    def num_edges(self) -> int:
        return len(self.opp) // 2

    def is_empty(self) -> bool:
        return not self.sources

    def validate(self) -> None:
        nv = len(self.sources)
        if len(self.opp) != 3 * nv:
            raise WebError("opp must have three darts per vertex")
        for d, o in enumerate(self.opp):
            if not 0 <= o < 3 * nv or o == d or self.opp[o] != d:
                raise WebError(f"dart {d}: opp is not a fixed-point-free involution")
            if self.sources[d // 3] == self.sources[o // 3]:
                raise WebError(f"edge {d}-{o} joins two vertices of the same kind")
        if self.loops < 0:
            raise WebError("negative loop count")
        for comp in self.graph_components():
            v, e = comp.num_vertices, comp.num_edges
            f = len(comp._face_orbits())
            if v - e + f != 2:
                raise WebError(f"component is not planar (V-E+F = {v - e + f})")
            if any(len(o) % 2 for o in comp._face_orbits()):
                raise WebError("odd face")

    # structure

    def _face_orbits(self) -> list[tuple[int, ...]]:
        seen = [False] * len(self.opp)
        out = []
        for d0 in range(len(self.opp)):
            if seen[d0]:
                continue
            orb = []
            d = d0
            while not seen[d]:
                seen[d] = True
                orb.append(d)
                d = sigma(self.opp[d])
            out.append(tuple(orb))
        return out

    def faces(self) -> list[tuple[int, ...]]:
        """Face boundary walks; each loop adds two empty walks."""
        return self._face_orbits() + [()] * (2 * self.loops)

    def vertex_components(self) -> list[list[int]]:
        nv = self.num_vertices
        comp = [-1] * nv
        out = []
        for v0 in range(nv):
            if comp[v0] >= 0:
                continue
            stack = [v0]
            comp[v0] = len(out)
            members = []
            while stack:
                v = stack.pop()
                members.append(v)
                for i in range(3):
                    u = self.opp[3 * v + i] // 3
                    if comp[u] < 0:
                        comp[u] = len(out)
                        stack.append(u)
            out.append(sorted(members))
        return out

    def graph_components(self) -> list["Web"]:
        """Connected components with vertices, loops dropped."""
        comps = self.vertex_components()
        if len(comps) == 1:
            return [Web(self.sources, self.opp, 0)]
        return [self._restrict(vs) for vs in comps]

    def _restrict(self, verts: Sequence[int]) -> "Web":
        new = {v: i for i, v in enumerate(verts)}
        opp = []
        for v in verts:
            for i in range(3):
                o = self.opp[3 * v + i]
                opp.append(3 * new[o // 3] + o % 3)
        return Web(tuple(self.sources[v] for v in verts), tuple(opp), 0)

    def disjoint_union(self, other: "Web") -> "Web":
        off = len(self.opp)
        return Web(self.sources + other.sources,
                   self.opp + tuple(o + off for o in other.opp),
                   self.loops + other.loops)

    def reversed(self) -> "Web":
        """Same graph with every edge reversed."""
        return Web(tuple(not s for s in self.sources), self.opp, self.loops)

    # canonical form

    def canonical_key(self) -> tuple:
        """Isomorphism-invariant key (orientation-preserving map isomorphism)."""
        parts = sorted(c._connected_key() for c in self.graph_components()) \
            if self.sources else []
        return (self.loops, tuple(parts))

    def _connected_key(self) -> tuple:
        orbits = self._face_orbits()
        flen = [0] * len(self.opp)
        for o in orbits:
            for d in o:
                flen[d] = len(o)
        best_sig = None
        roots = []
        for d in range(len(self.opp)):
            if self.sources[d // 3]:
                continue
            sig = (flen[d], flen[sigma(d)], flen[sigma(sigma(d))])
            if best_sig is None or sig < best_sig:
                best_sig, roots = sig, [d]
            elif sig == best_sig:
                roots.append(d)
        return min(self._bfs_code(r) for r in roots)

    def _bfs_code(self, root: int) -> tuple:
        order = {root // 3: 0}
        start = {root // 3: root}
        queue = [root // 3]
        code = []
        i = 0
        while i < len(queue):
            v = queue[i]
            i += 1
            d = start[v]
            code.append(1 if self.sources[v] else 0)
            for _ in range(3):
                o = self.opp[d]
                u = o // 3
                if u not in order:
                    order[u] = len(queue)
                    start[u] = o
                    queue.append(u)
                code.append(order[u])
                code.append((o - start[u]) % 3)
                d = sigma(d)
        return tuple(code)

    # serialization

    def to_json(self) -> dict:
        return {"sources": [int(s) for s in self.sources], "opp": list(self.opp),
                "loops": self.loops}

    @classmethod
    def from_json(cls, obj) -> "Web":
        if isinstance(obj, str):
            obj = json.loads(obj)
        w = cls(tuple(bool(s) for s in obj["sources"]), tuple(obj["opp"]),
                int(obj.get("loops", 0)))
        w.validate()
        return w


EMPTY = Web((), (), 0)


def circles(n: int) -> Web:
    return Web((), (), n)


def faces(w: Web) -> list[tuple[int, ...]]:
    return w.faces()


# mutable helpers


def _third(v: int, a: int, b: int) -> int:
    return 3 * v + (3 - a % 3 - b % 3)


def _splice(opp: list[int], ts: Sequence[int], match: Sequence[int]) -> int:
    """Delete the darts ``ts`` and join what they led to according to ``match``.

    ``match[i] = j`` says the strand entering at ``ts[i]`` now leaves at
    ``ts[j]``.  Chains through other darts of ``ts`` are followed; chains
    closing on themselves become loops, whose number is returned.
    """
    idx = {t: i for i, t in enumerate(ts)}
    n = len(ts)
    done = [False] * n
    for i in range(n):
        if done[i] or opp[ts[i]] in idx:
            continue
        a = opp[ts[i]]
        done[i] = True
        j = match[i]
        done[j] = True
        b = opp[ts[j]]
        while b in idx:
            k = idx[b]
            done[k] = True
            j = match[k]
            done[j] = True
            b = opp[ts[j]]
        opp[a] = b
        opp[b] = a
    loops = 0
    for i in range(n):
        if done[i]:
            continue
        loops += 1
        k = i
        while not done[k]:
            done[k] = True
            j = match[k]
            done[j] = True
            k = idx[opp[ts[j]]]
    return loops


def _compact(sources: Sequence[bool], opp: Sequence[int], dead: set[int], loops: int) -> Web:
    keep = [v for v in range(len(sources)) if v not in dead]
    new = {v: i for i, v in enumerate(keep)}
    out = []
    for v in keep:
        for i in range(3):
            o = opp[3 * v + i]
            out.append(3 * new[o // 3] + o % 3)
    return Web(tuple(sources[v] for v in keep), tuple(out), loops)


# moves


def find_bigons(w: Web) -> list[tuple[int, int]]:
    out = []
    for d in range(len(w.opp)):
        e = sigma(w.opp[d])
        if sigma(w.opp[e]) == d and d < e:
            out.append((d, e))
    return out


def find_squares(w: Web) -> list[tuple[int, int, int, int]]:
    out = []
    seen = set()
    for d in range(len(w.opp)):
        if d in seen:
            continue
        walk = [d]
        x = d
        for _ in range(4):
            x = sigma(w.opp[x])
            walk.append(x)
        if walk[4] != d or walk[2] == d:
            continue
        seen.update(walk[:4])
        if len({y // 3 for y in walk[:4]}) == 4:
            out.append(tuple(walk[:4]))
    return out


def _bubble(w: Web, d: int, e: int) -> Web:
    opp = list(w.opp)
    u, v = d // 3, e // 3
    tu = _third(u, d, opp[e])
    tv = _third(v, e, opp[d])
    loops = w.loops + _splice(opp, (tu, tv), (1, 0))
    return _compact(w.sources, opp, {u, v}, loops)


def _square(w: Web, walk: Sequence[int]) -> tuple[Web, Web]:
    ts = []
    for i in range(4):
        d = walk[i]
        ts.append(_third(d // 3, d, w.opp[walk[i - 1]]))
    dead = {d // 3 for d in walk}
    out = []
    for match in ((1, 0, 3, 2), (3, 2, 1, 0)):
        opp = list(w.opp)
        loops = w.loops + _splice(opp, ts, match)
        out.append(_compact(w.sources, opp, dead, loops))
    return out[0], out[1]


def reduce_step(w: Web, rng: random.Random | None = None) -> list[tuple[LaurentPoly, Web]]:
    """Apply one relation and return the resulting linear combination.

    Without ``rng`` the order is circle, then bubble, then square.  With
    ``rng`` a circle is still removed first, but the face to reduce is drawn
    uniformly from every bigon and square present.
    """
    if w.loops:
        return [(QINT3, Web(w.sources, w.opp, w.loops - 1))]
    if not w.sources:
        raise WebError("cannot reduce the empty web")
    if rng is None:
        bigons = find_bigons(w)
        if bigons:
            return [(QINT2, _bubble(w, *bigons[0]))]
        squares = find_squares(w)
        if not squares:
            raise WebError("closed web has neither a bigon nor a square")
        a, b = _square(w, squares[0])
        return [(ONE, a), (ONE, b)]
    moves = [("b", m) for m in find_bigons(w)] + [("s", m) for m in find_squares(w)]
    if not moves:
        raise WebError("closed web has neither a bigon nor a square")
    kind, m = moves[rng.randrange(len(moves))]
    if kind == "b":
        return [(QINT2, _bubble(w, *m))]
    a, b = _square(w, m)
    return [(ONE, a), (ONE, b)]


# evaluation

_MEMO: dict[tuple, LaurentPoly] = {}


def clear_memo() -> None:
    _MEMO.clear()


def memo_size() -> int:
    return len(_MEMO)


def evaluate(w: Web, rng: random.Random | None = None, memo: bool = True) -> LaurentPoly:
    """Scalar value of a closed web.

    The memoized path splits the web into connected components and caches
    each by its canonical key; its recursion depth is bounded by the vertex
    count.  With ``rng`` (or ``memo=False``) the reduction runs on an
    explicit work queue with no caching.
    """
    if rng is not None or not memo:
        return _evaluate_queue(w, rng)
    result = qint_power(3, w.loops)
    if not w.sources:
        return result
    for comp in w.graph_components():
        result = result * _evaluate_connected(comp)
    return result


def _evaluate_connected(w: Web) -> LaurentPoly:
    key = w._connected_key()
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    total = ZERO
    for coeff, nxt in reduce_step(w):
        total = total + coeff * evaluate(nxt)
    _MEMO[key] = total
    return total


def _evaluate_queue(w: Web, rng: random.Random | None) -> LaurentPoly:
    total = ZERO
    queue: list[tuple[LaurentPoly, Web]] = [(ONE, w)]
    while queue:
        coeff, cur = queue.pop()
        if not cur.sources:
            total = total + coeff * qint_power(3, cur.loops)
            continue
        for c2, nxt in reduce_step(cur, rng):
            queue.append((coeff * c2, nxt))
    return total


# OW-moves


def _components_of(w: Web) -> list[int]:
    comp = [0] * w.num_vertices
    for i, vs in enumerate(w.vertex_components()):
        for v in vs:
            comp[v] = i
    return comp


def ow_sites(w: Web) -> list[tuple[int, int]]:
    """All coherent pairs of distinct edges sharing a face."""
    out = []
    for orb in w._face_orbits():
        for i in range(len(orb)):
            for j in range(i + 1, len(orb)):
                a, b = orb[i], orb[j]
                if w.opp[a] in (b,):
                    continue
                fa, fb = w.sources[a // 3], w.sources[b // 3]
                if fa != fb:
                    out.append((a, b))
    return out


def apply_ow_move(w: Web, site: tuple[int | str, int | str]) -> Web:
    """Replace two coherent parallel arcs by the W-resolution.

    Each entry of ``site`` is a face dart (the arc is that dart's edge, seen
    from the face on its right) or ``"loop"`` for one of the loops.  Two
    darts of the same component must lie on one face; arcs of different
    components can always be brought side by side.  Exactly one dart may
    point forward along its edge.
    """
    a1, a2 = site
    darts = [x for x in site if x != "loop"]
    nloop = sum(1 for x in site if x == "loop")
    if nloop > w.loops:
        raise WebError("site uses more loops than the web has")
    for x in darts:
        if not isinstance(x, int) or not 0 <= x < len(w.opp):
            raise WebError(f"bad site entry {x!r}")
    fwd = [x for x in darts if w.sources[x // 3]]
    bwd = [x for x in darts if not w.sources[x // 3]]
    if len(darts) == 2:
        if len(fwd) != 1:
            raise WebError("site arcs are not coherently oriented")
        a, b = fwd[0], bwd[0]
        if w.opp[a] == b:
            raise WebError("site arcs must be distinct edges")
        comp = _components_of(w)
        if comp[a // 3] == comp[b // 3]:
            orb = {}
            for i, o in enumerate(w._face_orbits()):
                for d in o:
                    orb[d] = i
            if orb[a] != orb[b]:
                raise WebError("site arcs do not share a face")
    nv = w.num_vertices
    X, Y = nv, nv + 1
    xm, xa1, xa2 = 3 * X, 3 * X + 1, 3 * X + 2
    ya2, ya1, ym = 3 * Y, 3 * Y + 1, 3 * Y + 2
    opp = list(w.opp) + [-1] * 6
    loops = w.loops - nloop

    def join(p, q):
        opp[p] = q
        opp[q] = p

    # arc 1 runs forward along the face, arc 2 backward
    if darts and len(fwd) == 1:
        first = fwd[0]
        second = bwd[0] if bwd else "loop"
    elif darts:
        second = bwd[0]
        first = "loop"
    else:
        first = second = "loop"
    if first == "loop":
        join(ya1, xa1)
    else:
        t1, h1 = first, w.opp[first]
        join(t1, xa1)
        join(ya1, h1)
    if second == "loop":
        join(ya2, xa2)
    else:
        t2, h2 = w.opp[second], second
        join(t2, xa2)
        join(ya2, h2)
    join(xm, ym)
    return Web(w.sources + (False, True), tuple(opp), loops)


def degree(p: LaurentPoly) -> int:
    return p.degree()


# fixtures


class WebBuilder:
    """Assemble a web from vertices in the plane and edges with end angles.

    Edge ends are ordered counterclockwise by angle at each vertex.  By
    default an end points at the other vertex.
    """

    def __init__(self):
        self.kinds: list[bool] = []
        self.pos: list[tuple[float, float]] = []
        self.ends: list[list[tuple[float, int]]] = []
        self.edges: list[tuple[int, int]] = []
        self.loops = 0

    def vertex(self, source: bool, x: float = 0.0, y: float = 0.0) -> int:
        self.kinds.append(bool(source))
        self.pos.append((x, y))
        self.ends.append([])
        return len(self.kinds) - 1

    def edge(self, u: int, v: int, angle_u: float | None = None,
             angle_v: float | None = None) -> None:
        if self.kinds[u] == self.kinds[v]:
            raise WebError("edge must join a source and a sink")
        if angle_u is None:
            angle_u = self._angle(u, v)
        if angle_v is None:
            angle_v = self._angle(v, u)
        k = len(self.edges)
        self.edges.append((u, v))
        self.ends[u].append((angle_u, 2 * k))
        self.ends[v].append((angle_v, 2 * k + 1))

    def _angle(self, a: int, b: int) -> float:
        (x0, y0), (x1, y1) = self.pos[a], self.pos[b]
        return math.atan2(y1 - y0, x1 - x0)

    def build(self) -> Web:
        dart_of = {}
        for v, ends in enumerate(self.ends):
            if len(ends) != 3:
                raise WebError(f"vertex {v} has {len(ends)} edge ends")
            for i, (_, end) in enumerate(sorted(ends, key=lambda t: t[0] % (2 * math.pi))):
                dart_of[end] = 3 * v + i
        opp = [0] * (3 * len(self.kinds))
        for k in range(len(self.edges)):
            a, b = dart_of[2 * k], dart_of[2 * k + 1]
            opp[a], opp[b] = b, a
        w = Web(tuple(self.kinds), tuple(opp), self.loops)
        w.validate()
        return w


_PI = math.pi


def _ladder(k: int) -> tuple[WebBuilder, dict[str, int]]:
    b = WebBuilder()
    vid = {}
    for i in range(k + 1):
        for j in (0, 1):
            vid[i, j] = b.vertex((i + j) % 2 == 1, float(i), float(j))
    for i in range(k):
        for j in (0, 1):
            b.edge(vid[i, j], vid[i + 1, j])
    for i in range(k + 1):
        b.edge(vid[i, 0], vid[i, 1])
    legs = {"BL": vid[0, 0], "TL": vid[0, 1], "BR": vid[k, 0], "TR": vid[k, 1]}
    return b, legs


def _sum(terms: Iterable[LaurentPoly]) -> LaurentPoly:
    out = ZERO
    for t in terms:
        out = out + t
    return out


def build_capped_square_chain(k: int, capped: str, closure: str | None = None) -> tuple[Web, LaurentPoly]:
    """Closed ladder webs of ``k`` squares with their closed-form values.

    ``capped`` is ``"half-capped"``, ``"uncapped"`` or ``"trace-closed"``.
    A half-capped ladder has its right legs joined by a cap; its left legs
    are then joined to close it up.  An uncapped ladder keeps four legs and
    is closed by ``closure``: ``"caps"`` joins each side's pair of legs,
    ``"rails"`` joins top to top and bottom to bottom (odd ``k`` only).
    The trace closure (even ``k``) adds an outside source feeding both
    bottom legs and an outside sink fed by both top legs, joined by an edge.
    """
    if k < 0:
        raise WebError("k must be non-negative")
    two, three = QINT2, QINT3
    b, legs = _ladder(k)
    if capped == "half-capped":
        if closure not in (None, "caps"):
            raise WebError("a half-capped ladder is closed by joining its left legs")
        b.edge(legs["TR"], legs["BR"], 0.0, 0.0)
        b.edge(legs["TL"], legs["BL"], _PI, _PI)
        return b.build(), two ** (k + 1) * three
    if capped == "uncapped":
        closure = closure or "caps"
        if closure == "caps":
            b.edge(legs["TR"], legs["BR"], 0.0, 0.0)
            b.edge(legs["TL"], legs["BL"], _PI, _PI)
            if k % 2 == 0:
                exp = two * three + _sum(two ** (2 * i - 1) * three ** 2
                                         for i in range(1, k // 2 + 1))
            else:
                exp = three + _sum(two ** (2 * i - 2) * three ** 2
                                   for i in range(1, (k + 1) // 2 + 1))
            return b.build(), exp
        if closure == "rails":
            if k % 2 == 0:
                raise WebError("rails closure needs odd k")
            b.edge(legs["TL"], legs["TR"], _PI, 0.0)
            b.edge(legs["BL"], legs["BR"], _PI, 0.0)
            exp = three ** 2 + _sum(two ** (2 * i - 2) * three
                                    for i in range(1, (k + 1) // 2 + 1))
            return b.build(), exp
        raise WebError(f"unknown closure {closure!r}")
    if capped == "trace-closed":
        if k % 2:
            raise WebError("trace closure needs even k")
        left = b.vertex(True, -0.5, 0.0)
        right = b.vertex(False, k + 1.0, 1.0)
        b.edge(left, legs["BL"], 0.0, _PI)
        b.edge(legs["TR"], right, 0.0, _PI)
        b.edge(legs["TL"], right, _PI, 0.25 * _PI)
        b.edge(left, right, 0.75 * _PI, -0.25 * _PI)
        b.edge(left, legs["BR"], -0.75 * _PI, 0.0)
        exp = two ** 2 * three + _sum(two ** (2 * i) * three for i in range(1, k // 2 + 1))
        return b.build(), exp
    raise WebError(f"unknown capping {capped!r}")


def theta_web() -> Web:
    """Two vertices joined by three edges; the bubble web of an OW-move on two circles."""
    return apply_ow_move(circles(2), ("loop", "loop"))
