"""Truncated multivariate power series over exact rationals.

All generating functions in this package live in a :class:`SeriesRing`:
a fixed tuple of variable names, a truncation order, and an optional
per-variable grading weight (a weight-0 variable is allowed; its powers
are then bounded through the combinatorics, not the truncation).
Coefficients are `fractions.Fraction`; arithmetic is exact and closed
under truncation by weighted total degree.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

__all__ = [
    "SeriesRing",
    "Series",
    "catalan",
    "solve_fixed_point",
]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


class SeriesRing:
    """Ring of power series in named variables, truncated at `order`."""

    def __init__(self, names, order, weights=None):
        self.names = tuple(names)
        self.order = int(order)
        if weights is None:
            weights = {}
        self.weights = tuple(int(weights.get(nm, 1)) for nm in self.names)
        self.nvars = len(self.names)
        self._index = {nm: i for i, nm in enumerate(self.names)}

    def degree(self, mono) -> int:
        return sum(w * e for w, e in zip(self.weights, mono))

    def zero(self) -> "Series":
        return Series(self, {})

    def one(self) -> "Series":
        return self.const(1)

    def const(self, c) -> "Series":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return Series(self, {(0,) * self.nvars: c})

    def var(self, name) -> "Series":
        mono = [0] * self.nvars
        mono[self._index[name]] = 1
        return Series(self, {tuple(mono): Fraction(1)})

    def __eq__(self, other):
        return (
            isinstance(other, SeriesRing)
            and self.names == other.names
            and self.order == other.order
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.order, self.weights))

    def __repr__(self):
        return f"SeriesRing({self.names}, order={self.order})"


class Series:
    """Immutable truncated series; do not mutate the coefficient dict."""

    __slots__ = ("ring", "c")

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.c = {m: v for m, v in coeffs.items() if v != 0 and ring.degree(m) <= ring.order}

    # -- basic ring operations -------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Series):
            if other.ring != self.ring:
                raise ValueError("series from different rings")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.c)
        for m, v in other.c.items():
            out[m] = out.get(m, Fraction(0)) + v
        return Series(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.ring, {m: -v for m, v in self.c.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Series):
            q = Fraction(other)
            return Series(self.ring, {m: v * q for m, v in self.c.items()})
        other = self._coerce(other)
        ring = self.ring
        order = ring.order
        out = {}
        if len(self.c) > len(other.c):
            a, b = other, self
        else:
            a, b = self, other
        bdeg = [(m, v, ring.degree(m)) for m, v in b.c.items()]
        for m1, v1 in a.c.items():
            d1 = ring.degree(m1)
            for m2, v2, d2 in bdeg:
                if d1 + d2 > order:
                    continue
                m = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + v1 * v2
        return Series(ring, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __truediv__(self, other):
        if not isinstance(other, Series):
            q = Fraction(other)
            return Series(self.ring, {m: v / q for m, v in self.c.items()})
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, Series):
            other = self._coerce(other)
        return self.ring == other.ring and self.c == other.c

    def __hash__(self):
        return hash((self.ring, frozenset(self.c.items())))

    # -- structural helpers ----------------------------------------------

    def constant_term(self) -> Fraction:
        return self.c.get((0,) * self.ring.nvars, Fraction(0))

    def coeff(self, **powers) -> Fraction:
        mono = [0] * self.ring.nvars
        for nm, e in powers.items():
            mono[self.ring._index[nm]] = e
        return self.c.get(tuple(mono), Fraction(0))

    def min_degree(self) -> int:
        if not self.c:
            return self.ring.order + 1
        return min(self.ring.degree(m) for m in self.c)

    def graded_part(self, d) -> "Series":
        return Series(self.ring, {m: v for m, v in self.c.items() if self.ring.degree(m) == d})

    def is_zero(self) -> bool:
        return not self.c

    def has_integer_coeffs(self) -> bool:
        return all(v.denominator == 1 for v in self.c.values())

    def has_nonnegative_coeffs(self) -> bool:
        return all(v >= 0 for v in self.c.values())

    def deriv(self, name) -> "Series":
        i = self.ring._index[name]
        out = {}
        for m, v in self.c.items():
            if m[i] == 0:
                continue
            mm = list(m)
            mm[i] -= 1
            out[tuple(mm)] = v * m[i]
        return Series(self.ring, out)

    def inverse(self) -> "Series":
        """Multiplicative inverse; constant term must be nonzero and the
        only degree-0 monomial present."""
        c0 = self.constant_term()
        if c0 == 0:
            raise ZeroDivisionError("series has no constant term")
        for m in self.c:
            if self.ring.degree(m) == 0 and any(m):
                raise ZeroDivisionError("degree-0 non-constant monomial; cannot invert")
        x = self.ring.const(Fraction(1, 1) / c0)
        # Newton doubling: each step doubles the number of exact orders.
        steps = max(1, (self.ring.order + 1).bit_length() + 1)
        two = self.ring.const(2)
        for _ in range(steps):
            x = x * (two - self * x)
        return x

    def sqrt(self) -> "Series":
        """Square root with constant term 1."""
        if self.constant_term() != 1:
            raise ValueError("sqrt requires constant term 1")
        x = self.ring.one()
        half = Fraction(1, 2)
        for _ in range(self.ring.order + 1):
            x = (x + self * x.inverse()) * half
        assert (x * x - self).is_zero()
        return x

    def compose(self, substitutions) -> "Series":
        """Substitute series for variables; unsubstituted vars stay."""
        ring = self.ring
        vals = []
        for nm in ring.names:
            vals.append(substitutions.get(nm, ring.var(nm)))
        out = ring.zero()
        for m, v in self.c.items():
            term = ring.const(v)
            for val, e in zip(vals, m):
                if e:
                    term = term * val**e
            out = out + term
        return out

    def __repr__(self):
        if not self.c:
            return "Series(0)"
        items = sorted(self.c.items())[:8]
        parts = []
        for m, v in items:
            mono = "*".join(
                f"{nm}^{e}" if e > 1 else nm
                for nm, e in zip(self.ring.names, m)
                if e
            )
            parts.append(f"{v}{'*' + mono if mono else ''}")
        more = " + ..." if len(self.c) > 8 else ""
        return "Series(" + " + ".join(parts) + more + ")"


def solve_fixed_point(f, start, order=None):
    """Solve X = f(X) by iteration in the graded topology.

    `f` must be a contraction: the coefficients of f(X) up to degree d
    only depend on coefficients of X up to degree d-1 (plus X's exact
    part).  Iterating order+2 times is then enough; we assert stability.
    """
    x = start
    n = (order if order is not None else x.ring.order) + 2
    for _ in range(n):
        x = f(x)
    assert f(x) == x, "fixed-point iteration did not stabilize"
    return x
