"""HOMFLY polynomial by skein recursion, and its sl3 specialization.

Normalization: ``a^-1 P(L+) - a P(L-) = z P(L0)`` with ``P(unknot) = 1``.
The recursion walks a diagram from fixed basepoints and switches the
first crossing met from below, so every branch ends at a descending
diagram, which is an unlink.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import sympy

from .diagram import Crossing, LinkDiagram, from_pd_code
from .laurent import LaurentPoly, QINT3, divide_exact

DEFAULT_CAP = 24

CONVENTION_ENV = "SL3WEB_CONVENTION"
_DATA = Path(__file__).resolve().parent / "data"


class HomflyError(ValueError):
    pass


class CalibrationError(RuntimeError):
    pass


class HomflyPoly:
    """Integer Laurent polynomial in ``a`` and ``z``; keys are ``(i, j)`` for ``a^i z^j``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple[int, int], int] = {}
        for (i, j), c in items:
            c = int(c)
            if c:
                k = (int(i), int(j))
                v = clean.get(k, 0) + c
                if v:
                    clean[k] = v
                else:
                    clean.pop(k, None)
        self._terms = clean
        self._hash = None

    @property
    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "HomflyPoly") -> "HomflyPoly":
        t = dict(self._terms)
        for k, c in other._terms.items():
            t[k] = t.get(k, 0) + c
        return HomflyPoly(t)

    def __neg__(self) -> "HomflyPoly":
        return HomflyPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "HomflyPoly") -> "HomflyPoly":
        return self + (-other)

    def __mul__(self, other) -> "HomflyPoly":
        if isinstance(other, int):
            return HomflyPoly({k: c * other for k, c in self._terms.items()})
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + c1 * c2
        return HomflyPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HomflyPoly":
        if n < 0:
            raise ValueError("negative power")
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = HomflyPoly({(0, 0): other})
        return isinstance(other, HomflyPoly) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def monomial_shift(self, di: int, dj: int) -> "HomflyPoly":
        return HomflyPoly({(i + di, j + dj): c for (i, j), c in self._terms.items()})

    def mirror(self) -> "HomflyPoly":
        """``P(a^-1, -z)``, the polynomial of the mirror image."""
        return HomflyPoly({(-i, j): (-c if j % 2 else c) for (i, j), c in self._terms.items()})

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self._terms.items(), key=lambda t: (-t[0][1], -t[0][0])):
            mono = "*".join(s for s in (_pw("a", i), _pw("z", j)) if s)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"HomflyPoly({self})"

    def to_json(self) -> list[list[int]]:
        return [[i, j, c] for (i, j), c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, rows) -> "HomflyPoly":
        return cls({(i, j): c for i, j, c in rows})


def _pw(x: str, k: int) -> str:
    if k == 0:
        return ""
    return x if k == 1 else f"{x}^{k}"


ONE = HomflyPoly({(0, 0): 1})
_A2 = HomflyPoly({(2, 0): 1})
_AM2 = HomflyPoly({(-2, 0): 1})
_AZ = HomflyPoly({(1, 1): 1})
_MAMZ = HomflyPoly({(-1, 1): -1})
# (a^-1 - a) / z, the value of a split unknotted circle
_DELTA = HomflyPoly({(-1, -1): 1, (1, -1): -1})


def unlink(k: int) -> HomflyPoly:
    if k < 1:
        raise ValueError("an unlink needs at least one component")
    return _DELTA ** (k - 1)


# the recursion works on (crossings, loops) with crossings as (labels, sign)

_Key = tuple[tuple[tuple[tuple[int, int, int, int], int], ...], int]
_MEMO: dict[_Key, HomflyPoly] = {}


def clear_memo() -> None:
    _MEMO.clear()


def _in_slots(labels_sign) -> tuple[int, int]:
    p = 3 if labels_sign[1] > 0 else 0
    return p, (p + 1) % 4


def _canonical(xs, loops: int) -> tuple[_Key, int]:
    """Relabel arcs 1..n along the traversal order; return the key and component count.

    Components are visited in order of their least label and each one is
    walked from that label, so the order survives crossing switches.
    """
    heads: dict[int, tuple[int, int]] = {}
    for ci, x in enumerate(xs):
        for s in _in_slots(x):
            heads[x[0][s]] = (ci, s)
    new: dict[int, int] = {}
    comps = 0
    for start in sorted(heads):
        if start in new:
            continue
        comps += 1
        lab = start
        while lab not in new:
            new[lab] = len(new) + 1
            ci, s = heads[lab]
            lab = xs[ci][0][(s + 2) % 4]
    key = tuple(sorted((tuple(new[l] for l in x[0]), x[1]) for x in xs))
    return (key, loops), comps


def _first_bad(xs) -> int:
    """First crossing the traversal meets from below, or -1 if descending.

    Assumes canonical labels, so the traversal is label order.
    """
    heads = {}
    for ci, x in enumerate(xs):
        for s in _in_slots(x):
            heads[x[0][s]] = (ci, s)
    seen = set()
    for lab in range(1, len(heads) + 1):
        ci, s = heads[lab]
        if ci in seen:
            continue
        seen.add(ci)
        if s == 0:
            return ci
    return -1


def _switch(x):
    (a, b, c, d), sign = x
    if sign > 0:
        return (d, a, b, c), -1
    return (b, c, d, a), 1


def _smooth(xs, ci: int, loops: int):
    labels, sign = xs[ci]
    p = 3 if sign > 0 else 0
    parent = {l: l for l in labels}

    def find(l):
        while parent[l] != l:
            l = parent[l]
        return l

    for i, o in ((p, (p + 3) % 4), ((p + 1) % 4, (p + 2) % 4)):
        ra, rb = find(labels[i]), find(labels[o])
        if ra != rb:
            parent[rb] = ra
    rest = [x for k, x in enumerate(xs) if k != ci]
    used = {l for x in rest for l in x[0]}
    ren = {l: find(l) for l in labels}
    classes = {find(l) for l in labels}
    alive = {r for r in classes if any(ren[l] == r and l in used for l in labels)}
    loops += len(classes - alive)
    rest = [(tuple(ren.get(l, l) for l in x[0]), x[1]) for x in rest]
    return rest, loops


def _homfly(xs, loops: int) -> HomflyPoly:
    if not xs:
        return unlink(loops)
    key, comps = _canonical(xs, loops)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    cx = list(key[0])
    bad = _first_bad(cx)
    if bad < 0:
        val = unlink(comps + loops)
    else:
        switched = cx[:bad] + [_switch(cx[bad])] + cx[bad + 1:]
        smoothed, l0 = _smooth(cx, bad, loops)
        p_sw = _homfly(switched, loops)
        p_0 = _homfly(smoothed, l0)
        if cx[bad][1] > 0:
            val = _A2 * p_sw + _AZ * p_0
        else:
            val = _AM2 * p_sw + _MAMZ * p_0
    _MEMO[key] = val
    return val


def homfly(d: LinkDiagram, cap: int | None = DEFAULT_CAP) -> HomflyPoly:
    """HOMFLY polynomial of ``d`` by skein recursion toward descending diagrams."""
    if cap is not None and d.e > cap:
        raise HomflyError(f"{d.e} crossings exceeds the skein cap of {cap}")
    xs = [(x.labels, x.sign) for x in d.crossings]
    if not xs and d.free_loops == 0:
        raise HomflyError("empty diagram")
    return _homfly(xs, d.free_loops)


_Z = LaurentPoly({1: 1, -1: -1})


def specialize_sl3(p: HomflyPoly) -> LaurentPoly:
    """``[3] * P(q^-3, q - q^-1)``, with negative powers of ``z`` divided out exactly."""
    if p.is_zero():
        return LaurentPoly()
    k = max(0, -min(j for _, j in p._terms))
    num = LaurentPoly()
    for (i, j), c in p._terms.items():
        num = num + (_Z ** (j + k)).shift(-3 * i) * c
    return QINT3 * divide_exact(num, _Z ** k)


# KnotInfo ingestion


@dataclass(frozen=True)
class Convention:
    """How a KnotInfo polynomial maps into ``(a, z)``.

    ``a`` is replaced by ``a_variable ** a_power`` and ``z`` by
    ``z_sign * z_variable``; ``mirror`` applies ``P(a^-1, -z)`` afterwards.
    """

    a_variable: str = "v"
    a_power: int = 1
    z_variable: str = "z"
    z_sign: int = 1
    mirror: bool = False

    def to_json(self) -> dict:
        return {"a_variable": self.a_variable, "a_power": self.a_power,
                "z_variable": self.z_variable, "z_sign": self.z_sign,
                "mirror": self.mirror}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Convention":
        c = cls(**obj)
        if c.a_power not in (1, -1) or c.z_sign not in (1, -1):
            raise ValueError("a_power and z_sign must be +1 or -1")
        return c

    def digest(self) -> str:
        import hashlib
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def load_convention(path: str | os.PathLike | None = None) -> Convention:
    """Read a convention file; default is ``$SL3WEB_CONVENTION`` or the bundled one."""
    if path is None:
        path = os.environ.get(CONVENTION_ENV) or _DATA / "knotinfo_convention.json"
    with open(path) as fh:
        return Convention.from_json(json.load(fh))


def parse_knotinfo_homfly(text: str, convention: Convention | None = None) -> HomflyPoly:
    """Parse a KnotInfo HOMFLY string such as ``(2*v^2-v^4)+ v^2*z^2``."""
    convention = convention or Convention()
    if not isinstance(text, str) or not text.strip():
        raise HomflyError("empty polynomial text")
    av = sympy.Symbol(convention.a_variable)
    zv = sympy.Symbol(convention.z_variable)
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals={convention.a_variable: av,
                                                           convention.z_variable: zv},
                             rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise HomflyError(f"cannot parse {text!r}: {exc}") from None
    extra = expr.free_symbols - {av, zv}
    if extra:
        raise HomflyError(f"unexpected symbols {sorted(map(str, extra))} in {text!r}")
    expr = sympy.expand(expr)
    try:
        poly = sympy.Poly(expr * av ** 200 * zv ** 200, av, zv)
    except sympy.PolynomialError as exc:
        raise HomflyError(f"not a Laurent polynomial: {text!r}") from exc
    terms = {}
    for (i, j), c in poly.terms():
        if not c.is_integer:
            raise HomflyError(f"non-integer coefficient {c} in {text!r}")
        i, j = i - 200, j - 200
        sign = convention.z_sign ** (j % 2)
        terms[(convention.a_power * i, j)] = int(c) * sign
    out = HomflyPoly(terms)
    return out.mirror() if convention.mirror else out


TREFOIL_PD = ((1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2))


def calibrate(convention: Convention, trefoil_text: str,
              trefoil: LinkDiagram | None = None) -> Convention:
    """Check ``convention`` on the unknot and a trefoil; fix the chirality flag.

    ``trefoil_text`` is the table's entry for the trefoil and ``trefoil`` a
    diagram of the chirality the caller wants (positive by default).  The
    returned convention has ``mirror`` set so that the specialized entry
    equals the diagram's skein value.  Raises ``CalibrationError`` when no
    choice of the flag fits.
    """
    from dataclasses import replace
    if specialize_sl3(parse_knotinfo_homfly("1", convention)) != QINT3:
        raise CalibrationError("unknot entry does not specialize to [3]")
    d = trefoil or from_pd_code(TREFOIL_PD)
    want = specialize_sl3(homfly(d))
    for flag in (convention.mirror, not convention.mirror):
        c = replace(convention, mirror=flag)
        if specialize_sl3(parse_knotinfo_homfly(trefoil_text, c)) == want:
            return c
    raise CalibrationError("trefoil entry fits neither chirality under this convention")
