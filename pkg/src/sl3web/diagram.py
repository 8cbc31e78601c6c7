"""Oriented link diagrams in planar-diagram (PD) form.

A crossing is stored as four arc labels listed counterclockwise starting
from the incoming under-strand (Knot Atlas convention), together with its
sign.  Slot 0 is always the incoming under-strand and slot 2 the outgoing
one.  On a positive crossing the over-strand enters at slot 3 and leaves
at slot 1; on a negative crossing it enters at slot 1 and leaves at slot 3.

The two incoming slots are therefore a counterclockwise-adjacent pair
``(p, p+1)`` with ``p = 3`` for positive and ``p = 0`` for negative
crossings.  Everything downstream (resolutions, webs, the HOMFLY oracle)
is phrased in terms of that ``p``.

Crossingless unknotted components are carried as ``free_loops``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class DiagramError(ValueError):
    """Raised for malformed or inconsistent diagram input."""


@dataclass(frozen=True)
class Crossing:
    labels: tuple[int, int, int, int]
    sign: int

    @property
    def p(self) -> int:
        """First incoming slot; incoming slots are ``p`` and ``p+1``."""
        return 3 if self.sign > 0 else 0

    @property
    def in_slots(self) -> tuple[int, int]:
        p = self.p
        return p, (p + 1) % 4

    @property
    def out_slots(self) -> tuple[int, int]:
        p = self.p
        return (p + 2) % 4, (p + 3) % 4

    def is_in(self, slot: int) -> bool:
        return (slot - self.p) % 4 in (0, 1)

    def o_partner(self, slot: int) -> int:
        """Slot joined to ``slot`` by the oriented (Seifert) smoothing."""
        rel = (slot - self.p) % 4
        return (self.p + 3 - rel) % 4


@dataclass(frozen=True)
class LinkDiagram:
    """Immutable oriented diagram: signed PD crossings plus free loops."""

    crossings: tuple[Crossing, ...]
    free_loops: int = 0
    _occ: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        occ: dict[int, list[tuple[int, int]]] = {}
        for ci, x in enumerate(self.crossings):
            for s, lab in enumerate(x.labels):
                occ.setdefault(lab, []).append((ci, s))
        object.__setattr__(self, "_occ", occ)

    # basic counts

    @property
    def e(self) -> int:
        return len(self.crossings)

    @property
    def labels(self) -> list[int]:
        return sorted(self._occ)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(x.sign for x in self.crossings)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    def is_positive(self) -> bool:
        return all(x.sign > 0 for x in self.crossings)

    def is_negative(self) -> bool:
        return all(x.sign < 0 for x in self.crossings)

    # arc endpoints

    def head(self, label: int) -> tuple[int, int]:
        """``(crossing, slot)`` where the arc ends."""
        for ci, s in self._occ[label]:
            if self.crossings[ci].is_in(s):
                return ci, s
        raise DiagramError(f"arc {label} has no incoming end")

    def tail(self, label: int) -> tuple[int, int]:
        for ci, s in self._occ[label]:
            if not self.crossings[ci].is_in(s):
                return ci, s
        raise DiagramError(f"arc {label} has no outgoing end")

    def port_partner(self) -> list[int]:
        """For port ``4*c + s``, the port at the other end of its arc."""
        out = [0] * (4 * self.e)
        for ends in self._occ.values():
            (c1, s1), (c2, s2) = ends
            out[4 * c1 + s1] = 4 * c2 + s2
            out[4 * c2 + s2] = 4 * c1 + s1
        return out

    def components(self) -> list[list[int]]:
        """Arc labels of each component with crossings, in traversal order."""
        seen: set[int] = set()
        comps = []
        for start in self.labels:
            if start in seen:
                continue
            comp = []
            lab = start
            while lab not in seen:
                seen.add(lab)
                comp.append(lab)
                ci, s = self.head(lab)
                lab = self.crossings[ci].labels[(s + 2) % 4]
            comps.append(comp)
        return comps

    @property
    def num_components(self) -> int:
        return len(self.components()) + self.free_loops

    def split_components(self) -> int:
        """Connected pieces of the projection, free loops included."""
        parent = list(range(self.e))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for ends in self._occ.values():
            a, b = find(ends[0][0]), find(ends[1][0])
            parent[a] = b
        return len({find(i) for i in range(self.e)}) + self.free_loops

    def is_connected(self) -> bool:
        return self.split_components() == 1

    # serialization

    def to_pd_text(self) -> str:
        return " ".join("X[%d,%d,%d,%d]" % x.labels for x in self.crossings)

    def to_json(self) -> dict:
        heads = {str(lab): list(self.head(lab)) for lab in self.labels}
        return {
            "pd": [list(x.labels) for x in self.crossings],
            "heads": heads,
            "free_loops": self.free_loops,
            "signs": list(self.signs),
        }

    @classmethod
    def from_json(cls, obj: Mapping | str) -> "LinkDiagram":
        if isinstance(obj, str):
            obj = json.loads(obj)
        heads = {int(k): tuple(v) for k, v in obj.get("heads", {}).items()}
        return from_pd_code(obj["pd"], orientation=heads or None,
                            free_loops=obj.get("free_loops", 0))

    def relabeled(self) -> "LinkDiagram":
        """Copy with arcs renumbered 1..n along components."""
        new = {}
        for comp in self.components():
            for lab in comp:
                new[lab] = len(new) + 1
        xs = tuple(Crossing(tuple(new[l] for l in x.labels), x.sign)
                   for x in self.crossings)
        return LinkDiagram(xs, self.free_loops)


# construction


def from_pd_code(code: Sequence[Sequence[int]],
                 orientation: Mapping[int, int | tuple[int, int]] | None = None,
                 free_loops: int = 0) -> LinkDiagram:
    """Build a diagram from a PD code, inferring orientation and signs.

    Each under-pass fixes the direction of its component.  A component
    that never passes under falls back to the Knot Atlas habit of numbering
    arcs consecutively along the orientation.  ``orientation`` maps an arc
    label to the crossing (or ``(crossing, slot)``) where it ends and
    overrides inference for that label's component; it is required when a
    component with no under-pass has one or two arcs.
    """
    xs = [tuple(int(v) for v in row) for row in code]
    for row in xs:
        if len(row) != 4:
            raise DiagramError(f"crossing {row} does not have four labels")
    occ: dict[int, list[tuple[int, int]]] = {}
    for ci, row in enumerate(xs):
        for s, lab in enumerate(row):
            occ.setdefault(lab, []).append((ci, s))
    for lab, ends in occ.items():
        if len(ends) != 2:
            raise DiagramError(f"arc label {lab} used {len(ends)} times, expected 2")

    _check_planar(xs, occ)

    # tentative traversal: each arc listed as (label, tail_end, head_end)
    seen: set[int] = set()
    comps: list[list[tuple[int, tuple[int, int], tuple[int, int]]]] = []
    for start in sorted(occ):
        if start in seen:
            continue
        comp = []
        lab, tail = start, occ[start][0]
        while lab not in seen:
            seen.add(lab)
            e0, e1 = occ[lab]
            head = e1 if tail == e0 else e0
            comp.append((lab, tail, head))
            ci, s = head
            nxt_tail = (ci, (s + 2) % 4)
            lab = xs[ci][nxt_tail[1]]
            tail = nxt_tail
        comps.append(comp)

    override: dict[int, tuple[int, int] | int] = dict(orientation or {})
    heads: dict[int, tuple[int, int]] = {}
    for comp in comps:
        votes = set()
        for lab, tail, head in comp:
            if head[1] == 0 or tail[1] == 2:
                votes.add(1)
            if head[1] == 2 or tail[1] == 0:
                votes.add(-1)
        if len(votes) > 1:
            raise DiagramError(
                f"inconsistent orientation on component containing arc {comp[0][0]}")
        forced = None
        for lab, tail, head in comp:
            if lab in override:
                want = override[lab]
                if isinstance(want, int):
                    if head[0] == want and tail[0] != want:
                        d = 1
                    elif tail[0] == want and head[0] != want:
                        d = -1
                    else:
                        raise DiagramError(
                            f"orientation override for arc {lab} is ambiguous; "
                            "give (crossing, slot)")
                else:
                    want = tuple(want)
                    if want == head:
                        d = 1
                    elif want == tail:
                        d = -1
                    else:
                        raise DiagramError(f"arc {lab} does not end at {want}")
                if forced is not None and forced != d:
                    raise DiagramError("conflicting orientation overrides")
                forced = d
        if votes:
            direction = votes.pop()
            if forced is not None and forced != direction:
                raise DiagramError(
                    f"orientation override for component of arc {comp[0][0]} "
                    "contradicts its under-passes")
        elif forced is not None:
            direction = forced
        else:
            direction = _label_direction([lab for lab, _, _ in comp])
        for lab, tail, head in comp:
            heads[lab] = head if direction > 0 else tail

    crossings = []
    for ci, row in enumerate(xs):
        in3 = heads[row[3]] == (ci, 3)
        in1 = heads[row[1]] == (ci, 1)
        if in3 == in1:
            raise DiagramError(f"crossing {ci} has an inconsistent over-strand")
        if heads[row[0]] != (ci, 0):
            raise DiagramError(f"crossing {ci}: slot 0 is not an incoming under-strand")
        crossings.append(Crossing(row, 1 if in3 else -1))
    if free_loops < 0:
        raise DiagramError("free_loops must be non-negative")
    return LinkDiagram(tuple(crossings), free_loops)


def _label_direction(labels: list[int]) -> int:
    n = len(labels)
    if n <= 2:
        raise DiagramError(
            f"cannot infer orientation of the over-only component with arcs {labels}; "
            "supply an orientation override")
    fwd = sum(1 for i in range(n) if labels[(i + 1) % n] - labels[i] == 1)
    bwd = sum(1 for i in range(n) if labels[i] - labels[(i + 1) % n] == 1)
    if fwd == bwd:
        raise DiagramError(
            f"cannot infer orientation of the over-only component with arcs {labels}; "
            "supply an orientation override")
    return 1 if fwd > bwd else -1


def _check_planar(xs, occ) -> None:
    """Euler characteristic test on the 4-valent map, per connected piece."""
    n = len(xs)
    if n == 0:
        return
    other = {}
    for ends in occ.values():
        a, b = ends
        other[a] = b
        other[b] = a
    seen = set()
    faces_per_root: dict[int, int] = {}
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in other.items():
        parent[find(a[0])] = find(b[0])
    for ci in range(n):
        for s in range(4):
            if (ci, s) in seen:
                continue
            d = (ci, s)
            while d not in seen:
                seen.add(d)
                c2, s2 = other[d]
                d = (c2, (s2 + 1) % 4)
            r = find(ci)
            faces_per_root[r] = faces_per_root.get(r, 0) + 1
    verts: dict[int, int] = {}
    for ci in range(n):
        r = find(ci)
        verts[r] = verts.get(r, 0) + 1
    for r, v in verts.items():
        chi = v - 2 * v + faces_per_root[r]
        if chi != 2:
            raise DiagramError(f"PD code is not planar (Euler characteristic {chi})")


def from_braid_word(word: Sequence[int], strand_count: int) -> LinkDiagram:
    """Closure of a braid, strands running downward.

    Generator ``i`` (1-based) crosses positions ``i`` and ``i+1``; a positive
    entry gives a positive crossing.
    """
    if strand_count < 2:
        raise DiagramError("strand_count must be at least 2")
    cur = list(range(1, strand_count + 1))
    initial = list(cur)
    nxt = strand_count + 1
    rows = []
    heads: list[tuple[int, int, int]] = []
    for ci, g in enumerate(word):
        i = abs(int(g))
        if g == 0 or i >= strand_count:
            raise DiagramError(f"generator {g} out of range for {strand_count} strands")
        a, b = cur[i - 1], cur[i]
        n1, n2 = nxt, nxt + 1
        nxt += 2
        if g > 0:
            rows.append([a, n1, n2, b])
            heads += [(a, ci, 0), (b, ci, 3)]
        else:
            rows.append([b, a, n1, n2])
            heads += [(b, ci, 0), (a, ci, 1)]
        cur[i - 1], cur[i] = n1, n2
    close = {cur[k]: initial[k] for k in range(strand_count)}
    touched = {lab for row in rows for lab in row}
    free = sum(1 for k in range(strand_count) if initial[k] not in touched)
    rows = [[close.get(l, l) for l in row] for row in rows]
    orient = {close.get(lab, lab): (ci, s) for lab, ci, s in heads}
    d = from_pd_code(rows, orientation=orient, free_loops=free)
    return d.relabeled()


def unknot(loops: int = 1) -> LinkDiagram:
    return LinkDiagram((), loops)


# text formats

_BRAID_RE = re.compile(r"^\s*(\d+)\s*:\s*\[\s*([-\d,\s]*)\]\s*$")
_PD_RE = re.compile(r"X\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse_braid_text(text: str) -> tuple[list[int], int]:
    """``"2:[1,1,1]"`` -> ``([1, 1, 1], 2)``."""
    m = _BRAID_RE.match(text)
    if not m:
        raise DiagramError(f"malformed braid word {text!r}; expected e.g. 2:[1,1,1]")
    n = int(m.group(1))
    body = m.group(2).strip()
    word = [int(t) for t in body.split(",") if t.strip()] if body else []
    return word, n


def parse_pd_text(text: str) -> list[tuple[int, int, int, int]]:
    """Parse ``"X[1,4,2,3] X[3,6,4,5] ..."``; also accepts ``[[1,4,2,3],...]``."""
    text = text.strip()
    if text.startswith("[["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed PD list: {exc}") from None
        return [tuple(r) for r in rows]
    rows = [tuple(int(g) for g in m.groups()) for m in _PD_RE.finditer(text)]
    rest = _PD_RE.sub("", text)
    rest = re.sub(r"(PD\s*\[|\]|[\s,])", "", rest)
    if rest or not rows and text:
        raise DiagramError(f"malformed PD code {text!r}")
    return rows


def diagram_from_text(text: str) -> LinkDiagram:
    """Braid word if the text looks like ``n:[...]``, else a PD code."""
    if re.match(r"^\s*\d+\s*:", text):
        return from_braid_word(*parse_braid_text(text))
    rows = parse_pd_text(text)
    if not rows:
        return unknot()
    return from_pd_code(rows)


# resolutions


@dataclass(frozen=True)
class SeifertCircleSet:
    circles: tuple[tuple[int, ...], ...]
    attachments: tuple[tuple[int, ...], ...]
    crossing_circles: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.circles)


def seifert_circles(d: LinkDiagram) -> SeifertCircleSet:
    """Circles of the oriented smoothing, with crossings in traversal order.

    ``crossing_circles[c]`` is ``(circle through in-slot p, circle through
    in-slot p+1)``.
    """
    circles, atts = [], []
    where: dict[tuple[int, int], int] = {}
    seen: set[int] = set()
    for start in d.labels:
        if start in seen:
            continue
        arcs, att = [], []
        lab = start
        while lab not in seen:
            seen.add(lab)
            arcs.append(lab)
            ci, s = d.head(lab)
            x = d.crossings[ci]
            att.append(ci)
            where[(ci, (s - x.p) % 4)] = len(circles)
            lab = x.labels[x.o_partner(s)]
        circles.append(tuple(arcs))
        atts.append(tuple(att))
    for _ in range(d.free_loops):
        circles.append(())
        atts.append(())
    cc = []
    for ci in range(d.e):
        a, b = where[(ci, 0)], where[(ci, 1)]
        if a == b:
            raise DiagramError(f"crossing {ci} touches a single Seifert circle")
        cc.append((a, b))
    return SeifertCircleSet(tuple(circles), tuple(atts), tuple(cc))


@dataclass(frozen=True)
class State:
    """O/W choice per crossing, stored as a bitmask (bit set = W)."""

    mask: int
    e: int

    @classmethod
    def from_string(cls, text: str) -> "State":
        text = text.strip().upper()
        if set(text) - {"O", "W"}:
            raise ValueError(f"state string must use O/W, got {text!r}")
        mask = sum(1 << i for i, ch in enumerate(text) if ch == "W")
        return cls(mask, len(text))

    @classmethod
    def all_o(cls, e: int) -> "State":
        return cls(0, e)

    @classmethod
    def all_w(cls, e: int) -> "State":
        return cls((1 << e) - 1, e)

    def is_w(self, c: int) -> bool:
        return bool(self.mask >> c & 1)

    def flip(self, c: int) -> "State":
        return State(self.mask ^ (1 << c), self.e)

    def w_set(self) -> list[int]:
        return [c for c in range(self.e) if self.is_w(c)]

    def __str__(self):
        return "".join("W" if self.is_w(c) else "O" for c in range(self.e))


def resolution_state_diagram(d: LinkDiagram, s: State):
    """Closed web obtained by resolving every crossing of ``d`` as ``s`` says.

    A W-resolved crossing ``c`` becomes a sink (vertex ``2k``) fed by its two
    incoming arcs and a source (``2k+1``) emitting the two outgoing arcs,
    joined by a middle edge running from source to sink; ``k`` is the rank
    of ``c`` among W-crossings.  Dart ``3v+i`` is the ``i``-th edge end at
    vertex ``v`` counterclockwise; dart 0 is the middle edge.
    """
    from .web import Web

    if s.e != d.e:
        raise ValueError("state length does not match the crossing count")
    partner = d.port_partner()
    rank = {}
    for c in range(d.e):
        if s.is_w(c):
            rank[c] = len(rank)
    nv = 2 * len(rank)
    opp = [-1] * (3 * nv)
    sources = [False, True] * len(rank)

    def dart(port):
        c, sl = divmod(port, 4)
        rel = (sl - d.crossings[c].p) % 4
        k = rank[c]
        return (6 * k + 1 + rel) if rel < 2 else (6 * k + 3 + rel - 1)

    visited = [False] * (4 * d.e)
    for c, k in rank.items():
        opp[6 * k] = 6 * k + 3
        opp[6 * k + 3] = 6 * k
        for sl in range(4):
            port = 4 * c + sl
            if visited[port]:
                continue
            visited[port] = True
            q = partner[port]
            while not s.is_w(q // 4):
                visited[q] = True
                x = d.crossings[q // 4]
                q2 = 4 * (q // 4) + x.o_partner(q % 4)
                visited[q2] = True
                q = partner[q2]
            visited[q] = True
            a, b = dart(port), dart(q)
            opp[a] = b
            opp[b] = a
    loops = d.free_loops
    for port in range(4 * d.e):
        if visited[port]:
            continue
        loops += 1
        q = port
        while not visited[q]:
            visited[q] = True
            x = d.crossings[q // 4]
            q2 = 4 * (q // 4) + x.o_partner(q % 4)
            visited[q2] = True
            q = partner[q2]
    return Web(tuple(sources), tuple(opp), loops)


@dataclass(frozen=True)
class StateGraphAB:
    kind: str
    num_circles: int
    edges: tuple[tuple[int, int], ...]

    def has_loop(self) -> bool:
        return any(a == b for a, b in self.edges)


_AB_PAIRS = {"B": ((0, 1), (2, 3)), "A": ((1, 2), (3, 0))}


def ab_resolution_graph(d: LinkDiagram, kind: str) -> StateGraphAB:
    """All-A or all-B state graph of the unoriented diagram.

    The B-smoothing opens the regions swept when the over-strand is turned
    counterclockwise, joining slots {0,1} and {2,3}; on a positive crossing
    it coincides with the oriented smoothing.
    """
    kind = kind.upper()
    if kind not in _AB_PAIRS:
        raise ValueError("kind must be 'A' or 'B'")
    pairs = _AB_PAIRS[kind]
    partner = d.port_partner()
    inner = [0] * (4 * d.e)
    for c in range(d.e):
        for a, b in pairs:
            inner[4 * c + a] = 4 * c + b
            inner[4 * c + b] = 4 * c + a
    circle = [-1] * (4 * d.e)
    count = 0
    for port in range(4 * d.e):
        if circle[port] >= 0:
            continue
        q = port
        while circle[q] < 0:
            circle[q] = count
            q2 = inner[q]
            circle[q2] = count
            q = partner[q2]
        count += 1
    edges = []
    for c in range(d.e):
        a, b = pairs[0][0], pairs[1][0]
        edges.append((circle[4 * c + a], circle[4 * c + b]))
    return StateGraphAB(kind, count + d.free_loops, tuple(edges))


def is_b_adequate(d: LinkDiagram) -> bool:
    return not ab_resolution_graph(d, "B").has_loop()


def is_a_adequate(d: LinkDiagram) -> bool:
    return not ab_resolution_graph(d, "A").has_loop()


def is_alternating(d: LinkDiagram) -> bool:
    """Over and under passes alternate along every component."""
    for comp in d.components():
        kinds = []
        for lab in comp:
            ci, s = d.head(lab)
            kinds.append(s % 2 == 0)
        if any(kinds[i] == kinds[(i + 1) % len(kinds)] for i in range(len(kinds))):
            return False
    return True


# constructors


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Swap over and under at every crossing; orientation is kept."""
    xs = []
    for x in d.crossings:
        a, b, c, e = x.labels
        if x.sign > 0:
            xs.append(Crossing((e, a, b, c), -1))
        else:
            xs.append(Crossing((b, c, e, a), 1))
    return LinkDiagram(tuple(xs), d.free_loops)


def _shift(d: LinkDiagram, offset: int) -> LinkDiagram:
    xs = tuple(Crossing(tuple(l + offset for l in x.labels), x.sign) for x in d.crossings)
    return LinkDiagram(xs, d.free_loops)


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    off = max(d1.labels, default=0)
    d2s = _shift(d2, off - min(d2.labels, default=1) + 1)
    return LinkDiagram(d1.crossings + d2s.crossings, d1.free_loops + d2.free_loops)


def connected_sum(d1: LinkDiagram, d2: LinkDiagram,
                  arc1: int | None = None, arc2: int | None = None) -> LinkDiagram:
    """Band two diagrams together along ``arc1`` of ``d1`` and ``arc2`` of ``d2``.

    On the sphere every arc borders a face that can be taken as the outer
    one, so any arc is admissible.  ``None`` picks the smallest label, or a
    free loop when the diagram has no crossings.
    """
    for d, arc in ((d1, arc1), (d2, arc2)):
        if arc is not None and arc not in d._occ:
            raise DiagramError(f"arc {arc} is not an arc of the diagram")
    if d2.e == 0:
        if d2.free_loops == 0:
            raise DiagramError("empty diagram")
        return LinkDiagram(d1.crossings, d1.free_loops + d2.free_loops - 1)
    if d1.e == 0:
        if d1.free_loops == 0:
            raise DiagramError("empty diagram")
        return LinkDiagram(d2.crossings, d2.free_loops + d1.free_loops - 1)
    arc1 = min(d1.labels) if arc1 is None else arc1
    arc2 = min(d2.labels) if arc2 is None else arc2
    off = max(d1.labels) - min(d2.labels) + 1
    d2s = _shift(d2, off)
    y = arc2 + off
    h1 = d1.head(arc1)
    h2 = d2s.head(y)
    rows1 = [list(x.labels) for x in d1.crossings]
    rows2 = [list(x.labels) for x in d2s.crossings]
    rows1[h1[0]][h1[1]] = y
    rows2[h2[0]][h2[1]] = arc1
    xs = tuple(Crossing(tuple(r), x.sign) for r, x in zip(rows1, d1.crossings)) + \
        tuple(Crossing(tuple(r), x.sign) for r, x in zip(rows2, d2s.crossings))
    out = LinkDiagram(xs, d1.free_loops + d2.free_loops)
    _check_planar([x.labels for x in xs], out._occ)
    return out.relabeled()


def torus_braid(p: int, n: int) -> LinkDiagram:
    """Closure of ``(s_1 ... s_{p-1})^n``, a diagram of T(p, n)."""
    return from_braid_word(list(range(1, p)) * n, p)
