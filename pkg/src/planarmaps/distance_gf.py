"""Distance generating functions of planar maps.

Exact series: the pointed-rooted-map series R, the quadrangulation
two-point function R_d, the chain/triangle series X and Y entering the
three-point function, disk series w_n, Hankel-determinant ratios and
Stieltjes continued fractions.  Numeric: the bounded-degree two-point
function through characteristic roots and through banded determinants.

Conventions.  Boltzmann weights are a dict ``{2k: coefficient}`` where
the coefficient is a Series (formal weights) or a float (numeric); the
outer/root face never carries a weight.  For quadrangulations the
single weight g_4 is the ring variable ``g``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .series import Series, SeriesRing, catalan, solve_fixed_point

__all__ = [
    "SingularHankel",
    "RootFindingFailed",
    "NumericallyDegenerate",
    "solve_R",
    "quad_ring",
    "quad_R",
    "quad_x",
    "two_point_quad",
    "X_st",
    "x_recurrence_residual",
    "Y_stu",
    "F_stu",
    "three_point",
    "three_point_aligned",
    "wn_series",
    "wn_depointing",
    "hankel_two_point",
    "cont_frac_w0",
    "cont_frac_residuals",
    "numeric_R",
    "char_roots",
    "u_from_roots",
    "u_banded",
    "two_point_numeric",
]


class SingularHankel(Exception):
    pass


class RootFindingFailed(Exception):
    pass


class NumericallyDegenerate(Exception):
    pass


# ---------------------------------------------------------------------------
# the master series R and the disk series w_n (formal weights)
# ---------------------------------------------------------------------------


def solve_R(weights, ring_or_order, order=None):
    """Pointed-rooted-map series: R = 1 + sum_k C(2k-1,k) g_{2k} R^k.

    `weights` maps even face degrees 2k to Series coefficients (or exact
    rationals, coerced into the ring).
    """
    if isinstance(ring_or_order, SeriesRing):
        ring = ring_or_order
    else:
        ring = SeriesRing(("g",), ring_or_order)
    ws = {
        deg: (w if isinstance(w, Series) else ring.const(w))
        for deg, w in weights.items()
    }
    for deg in ws:
        if deg % 2 or deg <= 0:
            raise ValueError("bipartite weights need positive even degrees")

    def step(R):
        out = ring.one()
        for deg, w in ws.items():
            k = deg // 2
            out = out + math.comb(2 * k - 1, k) * w * R**k
        return out

    return solve_fixed_point(step, ring.one(), order)


def _coerce_weights(weights, ring):
    return {
        deg: (w if isinstance(w, Series) else ring.const(w))
        for deg, w in weights.items()
    }


def _a_coeffs(weights, ring, R):
    """Coefficients a_q of the disk-series expansion w_n = R^n sum a_q Cat(n+q).

    a_0 carries a factor R; this normalization is pinned by w_0 = 1 and
    cross-checked against the depointing integral and brute-force counts.
    """
    ws = _coerce_weights(weights, ring)
    p = max((deg // 2 - 1 for deg in ws), default=0)
    a = []
    for q in range(p + 1):
        aq = R if q == 0 else ring.zero()
        for deg, w in ws.items():
            k = deg // 2
            if k >= q + 1:
                aq = aq - math.comb(2 * k - 2 * q - 2, k - q - 1) * w * R**k
        a.append(aq)
    return a


def wn_series(weights, n_max, ring, R=None):
    """Disk series w_0..w_{n_max} (boundary length 2n, unweighted root face)."""
    if R is None:
        R = solve_R(weights, ring)
    a = _a_coeffs(weights, ring, R)
    out = []
    for n in range(n_max + 1):
        wn = ring.zero()
        for q, aq in enumerate(a):
            wn = wn + catalan(n + q) * aq
        out.append(R**n * wn)
    return out


def wn_depointing(weights, n, ring, R=None):
    """Independent route to w_n via depointing:
    w_n = C(2n,n) [ R^{n+1}/(n+1) - sum_k g_{2k} C(2k-1,k) k R^{n+k}/(n+k) ].
    """
    ws = _coerce_weights(weights, ring)
    if R is None:
        R = solve_R(weights, ring)
    acc = R ** (n + 1) / (n + 1)
    for deg, w in ws.items():
        k = deg // 2
        acc = acc - w * math.comb(2 * k - 1, k) * Fraction(k, n + k) * R ** (n + k)
    return math.comb(2 * n, n) * acc


# ---------------------------------------------------------------------------
# quadrangulations: R, x, R_d and the three-point ingredients
# ---------------------------------------------------------------------------


def quad_ring(order) -> SeriesRing:
    return SeriesRing(("g",), order)


def quad_R(ring) -> Series:
    g = ring.var("g")
    return solve_fixed_point(lambda R: 1 + 3 * g * R * R, ring.one())


def quad_x(ring, R=None) -> Series:
    """The root x(g), x(0)=0, of gR(1+x^2) = (1-4gR)x.

    Equivalently x + 1/x = (1-4gR)/(gR); this is the branch analytic at
    g = 0.  Solving the cleared-denominator form avoids square roots.
    """
    g = ring.var("g")
    if R is None:
        R = quad_R(ring)
    inv = (ring.one() - 4 * g * R).inverse()

    def step(x):
        return g * R * (1 + x * x) * inv

    return solve_fixed_point(step, ring.zero())


def _one_minus_xpow(x, p):
    return x.ring.one() - x**p


def two_point_quad(d, order, ring=None):
    """Two-point function R_d of quadrangulations as a g-series.

    R_d = R (1-x^d)(1-x^{d+3}) / ((1-x^{d+1})(1-x^{d+2})); R_0 = 0.
    """
    if ring is None:
        ring = quad_ring(order)
    if d == 0:
        return ring.zero()
    R = quad_R(ring)
    x = quad_x(ring, R)
    num = _one_minus_xpow(x, d) * _one_minus_xpow(x, d + 3)
    den = _one_minus_xpow(x, d + 1) * _one_minus_xpow(x, d + 2)
    return R * num * den.inverse()


def X_st(s, t, ring, x=None):
    """Chain series X_{s,t} (Motzkin paths of well-labeled subtrees)."""
    if x is None:
        x = quad_x(ring)
    num = (
        _one_minus_xpow(x, 3)
        * _one_minus_xpow(x, s + 1)
        * _one_minus_xpow(x, t + 1)
        * _one_minus_xpow(x, s + t + 3)
    )
    den = (
        _one_minus_xpow(x, 1)
        * _one_minus_xpow(x, s + 3)
        * _one_minus_xpow(x, t + 3)
        * _one_minus_xpow(x, s + t + 1)
    )
    return num * den.inverse()


def x_recurrence_residual(s, t, ring):
    """Residual of X_{s,t} = 1 + g R_s R_t X_{s,t}
    + g^2 R_s R_t X_{s,t} R_{s+1} R_{t+1} X_{s+1,t+1}."""
    g = ring.var("g")
    x = quad_x(ring)
    Rs = two_point_quad(s, ring.order, ring)
    Rt = two_point_quad(t, ring.order, ring)
    Rs1 = two_point_quad(s + 1, ring.order, ring)
    Rt1 = two_point_quad(t + 1, ring.order, ring)
    X = X_st(s, t, ring, x)
    X1 = X_st(s + 1, t + 1, ring, x)
    return X - 1 - g * Rs * Rt * X - g * g * Rs * Rt * X * Rs1 * Rt1 * X1


def Y_stu(s, t, u, ring, x=None):
    if x is None:
        x = quad_x(ring)
    num = (
        _one_minus_xpow(x, s + 3)
        * _one_minus_xpow(x, t + 3)
        * _one_minus_xpow(x, u + 3)
        * _one_minus_xpow(x, s + t + u + 3)
    )
    den = (
        _one_minus_xpow(x, 3)
        * _one_minus_xpow(x, s + t + 3)
        * _one_minus_xpow(x, t + u + 3)
        * _one_minus_xpow(x, u + s + 3)
    )
    return num * den.inverse()


def F_stu(s, t, u, ring, x=None):
    if x is None:
        x = quad_x(ring)
    Y = Y_stu(s, t, u, ring, x)
    return X_st(s, t, ring, x) * X_st(t, u, ring, x) * X_st(u, s, ring, x) * Y * Y


def three_point(s, t, u, order, ring=None):
    """Triple difference Delta_s Delta_t Delta_u F_{s,t,u}: the series
    counting quadrangulations with three marked distinct vertices whose
    pairwise distances are s+t, t+u, u+s.  Requires s,t,u >= 1."""
    if min(s, t, u) < 1:
        raise ValueError("generic three-point function needs s,t,u >= 1")
    if ring is None:
        ring = quad_ring(order)
    x = quad_x(ring)
    acc = ring.zero()
    for ds, dt, du in itertools.product((0, 1), repeat=3):
        sign = (-1) ** (ds + dt + du)
        acc = acc + sign * F_stu(s - ds, t - dt, u - du, ring, x)
    return acc


def three_point_aligned(s, t, order, ring=None):
    """Aligned case (u = 0): Delta_s Delta_t X_{s,t}, s,t >= 1."""
    if min(s, t) < 1:
        raise ValueError("aligned three-point function needs s,t >= 1")
    if ring is None:
        ring = quad_ring(order)
    x = quad_x(ring)
    return (
        X_st(s, t, ring, x)
        - X_st(s - 1, t, ring, x)
        - X_st(s, t - 1, ring, x)
        + X_st(s - 1, t - 1, ring, x)
    )


# ---------------------------------------------------------------------------
# Hankel determinants and continued fractions (exact pipeline)
# ---------------------------------------------------------------------------


def _det(rows):
    """Exact determinant by Leibniz expansion; fine at desk sizes."""
    n = len(rows)
    if n == 0:
        return None  # caller substitutes ring.one()
    acc = None
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        # count inversions for the signature
        inv = sum(
            1
            for i in range(n)
            for j in range(i + 1, n)
            if seen[i] > seen[j]
        )
        sign = -1 if inv % 2 else 1
        term = rows[0][perm[0]]
        for i in range(1, n):
            term = term * rows[i][perm[i]]
        acc = term * sign if acc is None else acc + sign * term
    return acc


def hankel_two_point(ws, d_max):
    """Two-point sequence R_1..R_{d_max} from the Hankel-determinant
    ratios of the disk series w_n.

    R_{2n+1} = (h_n^(1)/h_{n-1}^(1)) / (h_n^(0)/h_{n-1}^(0)),
    R_{2n+2} = (h_{n+1}^(0)/h_n^(0)) / (h_n^(1)/h_{n-1}^(1)),
    with h_{-1}^(0) = h_{-1}^(1) = 1.
    """
    ring = ws[0].ring
    one = ring.one()

    def h(shift, n):
        if n < 0:
            return one
        rows = [[ws[i + j + shift] for j in range(n + 1)] for i in range(n + 1)]
        d = _det(rows)
        if d.is_zero():
            raise SingularHankel(f"h_{n}^({shift}) vanishes")
        return d

    out = {}
    for d in range(1, d_max + 1):
        if d % 2:
            n = (d - 1) // 2
            out[d] = (h(1, n) / h(1, n - 1)) / (h(0, n) / h(0, n - 1))
        else:
            n = (d - 2) // 2
            out[d] = (h(0, n + 1) / h(0, n)) / (h(1, n) / h(1, n - 1))
    return out


def cont_frac_w0(rd, depth, ring):
    """Truncated Stieltjes fraction 1/(1 - z R_1/(1 - z R_2/...)) as a
    series in z whose coefficients live in `ring`.

    `rd` maps d -> R_d.  Returns the list of z-coefficients 0..depth.
    """
    # represent W_d as a list of ring-coefficients of z^0..z^depth
    def mul(a, b):
        out = [ring.zero() for _ in range(depth + 1)]
        for i, ai in enumerate(a):
            if ai.is_zero():
                continue
            for j, bj in enumerate(b):
                if i + j > depth:
                    break
                out[i + j] = out[i + j] + ai * bj
        return out

    w = [ring.one()] + [ring.zero()] * depth  # W_{depth} = 1
    for d in range(depth - 1, -1, -1):
        # W_d = 1 + z R_{d+1} W_d W_{d+1}; solve order by order in z
        coeff = rd[d + 1]
        new = [ring.one()] + [ring.zero()] * depth
        for _ in range(depth):
            prod = mul(new, w)
            new = [ring.one()] + [coeff * prod[j] for j in range(depth)]
        w = new
    return w


def cont_frac_residuals(rd, ws, depth):
    """Max nonzero z-order residual of W_d = 1 + z R_{d+1} W_d W_{d+1};
    also checks the depth-`depth` fraction reproduces the w_n through
    z^depth.  Returns (recurrence_ok, w0_matches)."""
    ring = ws[0].ring
    w0 = cont_frac_w0(rd, depth, ring)
    matches = all(w0[n] == ws[n] for n in range(depth + 1))
    return matches


# ---------------------------------------------------------------------------
# numeric two-point function for bounded degrees
# ---------------------------------------------------------------------------


def numeric_R(weights, tol=1e-14, max_iter=200000):
    """Smallest positive root of R = 1 + sum C(2k-1,k) g_{2k} R^k."""
    R = 1.0
    for _ in range(max_iter):
        nxt = 1.0 + sum(
            math.comb(deg - 1, deg // 2) * w * R ** (deg // 2)
            for deg, w in weights.items()
        )
        if not math.isfinite(nxt) or nxt > 1e12:
            raise RootFindingFailed("weights appear inadmissible (R diverges)")
        if abs(nxt - R) <= tol * max(1.0, abs(nxt)):
            return nxt
        R = nxt
    raise RootFindingFailed("fixed-point iteration for R did not converge")


def _numeric_a(weights, R):
    p = max(deg // 2 - 1 for deg in weights)
    a = []
    for q in range(p + 1):
        aq = R if q == 0 else 0.0
        for deg, w in weights.items():
            k = deg // 2
            if k >= q + 1:
                aq -= math.comb(2 * k - 2 * q - 2, k - q - 1) * w * R**k
        a.append(aq)
    return a


def _numeric_b(weights, R):
    a = _numeric_a(weights, R)
    p = len(a) - 1
    return {
        n: sum(a[q] * math.comb(2 * q, q + n) for q in range(abs(n), p + 1))
        for n in range(-p, p + 1)
    }


def char_roots(weights, R=None, tol=1e-8):
    """Roots y_1..y_p (|y| < 1 branch) of sum_{n=-p}^p b_n y^n = 0.

    The 2p roots come in reciprocal pairs; degeneracy |y| ~ 1 is refused.
    """
    if R is None:
        R = numeric_R(weights)
    b = _numeric_b(weights, R)
    p = max(b)
    coeffs = [b[n] for n in range(p, -p - 1, -1)]  # y^{2p} ... y^0 after *y^p
    roots = np.roots(coeffs)
    if len(roots) != 2 * p:
        raise RootFindingFailed("characteristic polynomial degenerated")
    inside = sorted(
        (y for y in roots if abs(y) < 1 - tol),
        key=lambda y: (abs(y), np.angle(y)),
    )
    if len(inside) != p or any(abs(y) > 1 - tol for y in inside):
        raise NumericallyDegenerate(
            f"expected {p} roots inside the unit disk, got {len(inside)}"
        )
    return inside, R


def u_from_roots(ys, d):
    """u_d = det_{1<=i,j<=p} (y_i^{d/2+j-1} - y_i^{-d/2-j+1}).

    Complex powers use one fixed logarithm per root, so phases cancel in
    the R u_d u_{d+3} / (u_{d+1} u_{d+2}) ratios.
    """
    p = len(ys)
    logs = [np.log(complex(y)) for y in ys]
    mat = np.empty((p, p), dtype=complex)
    for i in range(p):
        for j in range(1, p + 1):
            e = d / 2 + j - 1
            mat[i, j - 1] = np.exp(e * logs[i]) - np.exp(-e * logs[i])
    return np.linalg.det(mat)


def u_banded(weights, d, R=None):
    """u_d from the banded Toeplitz+Hankel determinants:
    u_{2m+1} = det(b_{i-j} - b_{i+j+1}), u_{2m+2} = det(b_{i-j} - b_{i+j+2}),
    both of size m x m (empty determinant = 1)."""
    if R is None:
        R = numeric_R(weights)
    b = _numeric_b(weights, R)

    def bval(n):
        return b.get(abs(n), 0.0)

    if d % 2:
        m = (d - 1) // 2
        shift = 1
    else:
        m = (d - 2) // 2
        shift = 2
    if m <= 0:
        return 1.0
    mat = np.array(
        [[bval(i - j) - bval(i + j + shift) for j in range(m)] for i in range(m)]
    )
    return float(np.linalg.det(mat))


def two_point_numeric(weights, d, form="roots"):
    """R_d = R u_d u_{d+3} / (u_{d+1} u_{d+2}) at numeric weights."""
    if form == "roots":
        ys, R = char_roots(weights)
        vals = [u_from_roots(ys, d + i) for i in range(4)]
    elif form == "banded":
        R = numeric_R(weights)
        vals = [u_banded(weights, d + i, R) for i in range(4)]
    else:
        raise ValueError(f"unknown form {form!r}")
    num = R * vals[0] * vals[3]
    den = vals[1] * vals[2]
    if abs(den) < 1e-300:
        raise NumericallyDegenerate("vanishing u-denominator")
    out = num / den
    if abs(getattr(out, "imag", 0.0)) > 1e-8 * max(1.0, abs(out)):
        raise NumericallyDegenerate("two-point value has large imaginary part")
    return float(getattr(out, "real", out))
