"""Exact integer Laurent polynomials in one variable ``q``.

Coefficients are Python ints, so arithmetic never wraps.  Values are
immutable and hashable.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping


class LaurentPoly:
    """Finite sum of ``c * q**k`` with integer ``c`` and ``k``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[int, int] = {}
        for k, c in items:
            k = int(k)
            c = int(c)
            s = clean.get(k, 0) + c
            if s:
                clean[k] = s
            else:
                clean.pop(k, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    def low_degree(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no low degree")
        return min(self._terms)

    def coeff(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def substitute_q_inverse(self) -> "LaurentPoly":
        return LaurentPoly({-k: c for k, c in self._terms.items()})

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def evaluate(self, q: int) -> int | float:
        if q in (1, -1):
            # stay exact: q**-k is a float in Python
            return sum(c * q ** abs(k) for k, c in self._terms.items())
        return sum(c * q**k for k, c in self._terms.items())

    def is_palindromic(self) -> bool:
        return self == self.substitute_q_inverse()

    def exponents_even(self) -> bool:
        return all(k % 2 == 0 for k in self._terms)

    # arithmetic

    @staticmethod
    def _coerce(other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return _from_clean(out)

    __radd__ = __add__

    def __neg__(self):
        return _from_clean({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) == 1:
                (k, c), = self._terms.items()
                if c in (1, -1):
                    return LaurentPoly({k * n: c**n})
            raise ValueError("only unit monomials have negative powers")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        """Yield ``(exponent, coeff)`` in decreasing exponent order."""
        for k in sorted(self._terms, reverse=True):
            yield k, self._terms[k]

    def __len__(self):
        return len(self._terms)

    def __str__(self):
        if not self._terms:
            return "0"
        parts: list[str] = []
        for k, c in self:
            if k == 0:
                body = str(abs(c))
            else:
                mono = "q" if k == 1 else f"q^{k}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"

    def to_json(self) -> dict[str, int]:
        return {str(k): c for k, c in self}

    @classmethod
    def from_json(cls, obj: Mapping[str, int] | str) -> "LaurentPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls({int(k): int(c) for k, c in obj.items()})


def _from_clean(terms: dict[int, int]) -> LaurentPoly:
    p = LaurentPoly.__new__(LaurentPoly)
    p._terms = terms
    p._hash = None
    return p


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
Q = LaurentPoly({1: 1})


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def coeff_at(p: LaurentPoly, exponent: int) -> int:
    return p.coeff(exponent)


def substitute_q_inverse(p: LaurentPoly) -> LaurentPoly:
    return p.substitute_q_inverse()


_QINT = {
    2: LaurentPoly({1: 1, -1: 1}),
    3: LaurentPoly({2: 1, 0: 1, -2: 1}),
}


def quantum_int(n: int) -> LaurentPoly:
    """Balanced quantum integer ``[n]`` for ``n`` in ``{2, 3}``."""
    try:
        return _QINT[n]
    except KeyError:
        raise ValueError(f"quantum_int is only defined for n in {{2, 3}}, got {n}") from None


QINT2 = _QINT[2]
QINT3 = _QINT[3]

_power_cache: dict[tuple[int, int], LaurentPoly] = {}


def qint_power(n: int, k: int) -> LaurentPoly:
    """``[n]**k``, cached."""
    key = (n, k)
    p = _power_cache.get(key)
    if p is None:
        p = quantum_int(n) ** k
        _power_cache[key] = p
    return p


def divide_exact(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Quotient ``p / d``; raises ``ArithmeticError`` unless ``d`` divides ``p``."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    rem = dict(p.terms)
    top, lead = d.degree(), d.coeff(d.degree())
    floor = p.low_degree() - d.low_degree()
    quot: dict[int, int] = {}
    while rem:
        shift = max(rem) - top
        if shift < floor:
            break
        c, r = divmod(rem[max(rem)], lead)
        if r:
            break
        quot[shift] = c
        for e, dc in d.terms.items():
            v = rem.get(e + shift, 0) - c * dc
            if v:
                rem[e + shift] = v
            else:
                rem.pop(e + shift, None)
    if rem:
        raise ArithmeticError("inexact division")
    return LaurentPoly(quot)
