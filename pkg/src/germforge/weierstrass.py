"""Weierstrass division and preparation, discriminants, Newton-Puiseux
branch construction, and curve lifting through supplied normal forms.

Division and preparation run entirely in exact arithmetic at jet level.
Branch construction follows the classical Newton-polygon iteration; at
each step the reduced characteristic polynomial is solved exactly over
the Gaussian rationals when possible, and a branch falls back to floating
coefficients (with its tolerance recorded) only when a characteristic
root lives outside the exact field.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .coeffs import GaussianRational, ZERO, ONE, as_gauss, gauss_from_complex
from .errors import (
    DimensionMismatch,
    DiscriminantError,
    ExactnessError,
    GermforgeError,
    NormalFormError,
    NotRegularError,
    PrecisionError,
)
from .series import FormalCurve, TruncSeries, divide, inverse, pullback

FLOAT_ZERO_EPS = 1e-12


# ---------------------------------------------------------------------------
# Weierstrass polynomials
# ---------------------------------------------------------------------------


class WeierstrassPoly:
    """Monic polynomial w^l + sum_{j<l} b_j(z_1..z_k) w^j with b_j(0) = 0."""

    __slots__ = ("base_vars", "degree", "coeffs", "precision")

    def __init__(self, base_vars: int, degree: int, coeffs: Sequence[TruncSeries]):
        if degree < 1:
            raise ValueError("a Weierstrass polynomial has degree >= 1")
        if len(coeffs) != degree:
            raise ValueError("need exactly `degree` lower coefficients b_0..b_{l-1}")
        prec = None
        for j, b in enumerate(coeffs):
            if b.nvars != base_vars:
                raise DimensionMismatch(f"coefficient b_{j} has wrong variable count")
            if b.constant_term():
                raise NotRegularError(f"coefficient b_{j}(0) != 0")
            prec = b.precision if prec is None else min(prec, b.precision)
        self.base_vars = base_vars
        self.degree = degree
        self.precision = prec if prec is not None else 0
        self.coeffs = tuple(b.with_precision(self.precision) for b in coeffs)

    @classmethod
    def from_series(cls, s: TruncSeries, degree: int) -> "WeierstrassPoly":
        """Interpret a (k+1)-variable series, distinguished variable last, as
        a Weierstrass polynomial.  Coefficients keep the honest precision
        s.precision - degree + 1 (the w^j factor eats j orders of knowledge)."""
        k = s.nvars - 1
        by_w: Dict[int, dict] = {}
        for J, c in s.coeffs.items():
            by_w.setdefault(J[-1], {})[J[:-1]] = c
        top = by_w.get(degree, {})
        if list(top.items()) != [((0,) * k, ONE)]:
            raise NotRegularError("leading w-coefficient is not the constant 1")
        if any(e > degree for e in by_w):
            raise NotRegularError("terms above the stated w-degree")
        prec = s.precision - degree + 1
        if prec < 0:
            raise PrecisionError("series too shallow for this w-degree")
        coeffs = [TruncSeries(k, prec, by_w.get(j, {})) for j in range(degree)]
        return cls(k, degree, coeffs)

    def as_series(self, precision: Optional[int] = None) -> TruncSeries:
        """The polynomial as a (base_vars + 1)-variable series, w last."""
        prec = self.precision if precision is None else precision
        if prec > self.precision:
            raise PrecisionError("coefficients are certified only to their precision")
        if prec < self.degree:
            raise PrecisionError("precision cannot hold the monic leading term")
        out: Dict[tuple, GaussianRational] = {
            (0,) * self.base_vars + (self.degree,): ONE
        }
        for j, b in enumerate(self.coeffs):
            for J, c in b.coeffs.items():
                if sum(J) + j <= prec:
                    out[J + (j,)] = c
        return TruncSeries(self.base_vars + 1, prec, out)

    def __str__(self) -> str:
        from .formats import format_weierstrass

        return format_weierstrass(self)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# division / preparation
# ---------------------------------------------------------------------------


def _split_w(f: TruncSeries, ell: int) -> Tuple[TruncSeries, TruncSeries]:
    """f = A * w^ell + R with deg_w R < ell; w is the last variable."""
    hi: Dict[tuple, GaussianRational] = {}
    lo: Dict[tuple, GaussianRational] = {}
    for J, c in f.coeffs.items():
        if J[-1] >= ell:
            hi[J[:-1] + (J[-1] - ell,)] = c
        else:
            lo[J] = c
    return (
        TruncSeries(f.nvars, f.precision, hi),
        TruncSeries(f.nvars, f.precision, lo),
    )


def _w_regular_order(f: TruncSeries) -> Optional[int]:
    """Vanishing order of f(0, .., 0, w) in w, or None if that slice is zero
    through the precision."""
    zslice = [J[-1] for J in f.coeffs if not any(J[:-1])]
    return min(zslice) if zslice else None


def divide_regular(
    g: TruncSeries, f: TruncSeries, ell: int, N: int
) -> Tuple[TruncSeries, TruncSeries]:
    """Division g = q*f + r (deg_w r < ell) by a series regular of order ell
    in the last variable, all identities exact through total degree N."""
    if g.nvars != f.nvars:
        raise DimensionMismatch("dividend and divisor variable counts differ")
    if N > min(g.precision, f.precision):
        raise PrecisionError("requested division order exceeds operand precision")
    fa, beta = _split_w(f.jet(N), ell)
    if not fa.constant_term():
        raise NotRegularError(
            f"divisor is not regular of order {ell} in the last variable"
        )
    ainv = inverse(fa, N)
    q = TruncSeries.zero(g.nvars, N)
    cur = g.jet(N)
    guard = 0
    while True:
        A, R = _split_w(cur, ell)
        if A.is_zero():
            return q, R
        Q = A * ainv
        q = q + Q
        cur = R - Q * beta
        guard += 1
        if guard > N + 2:
            raise GermforgeError("division failed to terminate (internal)")


def weierstrass_divide(
    f: TruncSeries, P: WeierstrassPoly, N: int
) -> Tuple[TruncSeries, TruncSeries]:
    """f = q*P + r with deg_w r < deg P, exact through total degree N."""
    ps = P.as_series()
    return divide_regular(f, ps, P.degree, N)


def weierstrass_prepare(f: TruncSeries, N: int) -> Tuple[TruncSeries, WeierstrassPoly]:
    """Factor f = unit * P with P Weierstrass in the last variable.

    f must be regular in the last variable: f(0,..,0,w) has finite vanishing
    order resolvable within precision."""
    if N > f.precision:
        raise PrecisionError("preparation order exceeds series precision")
    ell = _w_regular_order(f)
    if ell is None:
        raise NotRegularError(
            "series is not regular in the last variable within precision; "
            "apply a generic linear change of coordinates first"
        )
    wl = TruncSeries.monomial(f.nvars, N, (0,) * (f.nvars - 1) + (ell,))
    q, r = divide_regular(wl, f.jet(N), ell, N)
    if not q.constant_term():
        raise NotRegularError("division produced a non-unit cofactor (internal)")
    P = WeierstrassPoly.from_series(wl - r, ell)
    unit = inverse(q, N)
    return unit, P


# ---------------------------------------------------------------------------
# discriminant
# ---------------------------------------------------------------------------


def _det_subset(
    rows: List[List[Optional[TruncSeries]]], nvars: int, prec: int
) -> TruncSeries:
    """Determinant over the series ring by column-subset dynamic programming."""
    n = len(rows)
    zero = TruncSeries.zero(nvars, prec)
    states: Dict[int, TruncSeries] = {0: TruncSeries.constant(nvars, prec, 1)}
    for i in range(n):
        nxt: Dict[int, TruncSeries] = {}
        for mask, acc in states.items():
            if acc.is_zero():
                continue
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                entry = rows[i][j]
                if entry is None or entry.is_zero():
                    continue
                term = acc * entry
                # parity of inversions added by assigning column j after mask
                if bin(mask >> (j + 1)).count("1") & 1:
                    term = -term
                key = mask | bit
                cur = nxt.get(key)
                nxt[key] = term if cur is None else cur + term
        states = nxt
        if not states:
            return zero
    return states.get((1 << n) - 1, zero)


def discriminant(P: WeierstrassPoly) -> TruncSeries:
    """Resultant-based discriminant of P as a polynomial in w:
    (-1)^(l(l-1)/2) * Res(P, dP/dw), exact to the coefficient precision."""
    ell = P.degree
    k = P.base_vars
    prec = P.precision
    if ell == 1:
        return TruncSeries.constant(k, prec, 1)
    one = TruncSeries.constant(k, prec, 1)
    # descending coefficient lists of P and dP/dw
    pc: List[TruncSeries] = [one] + [P.coeffs[j] for j in range(ell - 1, -1, -1)]
    dc: List[TruncSeries] = [one.scale(ell)] + [
        P.coeffs[j].scale(j) for j in range(ell - 1, 0, -1)
    ]
    size = 2 * ell - 1
    rows: List[List[Optional[TruncSeries]]] = []
    for i in range(ell - 1):
        row: List[Optional[TruncSeries]] = [None] * size
        for j, c in enumerate(pc):
            row[i + j] = c
        rows.append(row)
    for i in range(ell):
        row = [None] * size
        for j, c in enumerate(dc):
            row[i + j] = c
        rows.append(row)
    res = _det_subset(rows, k, prec)
    sign = -1 if (ell * (ell - 1) // 2) % 2 else 1
    return res.scale(sign)


# ---------------------------------------------------------------------------
# generic line restriction
# ---------------------------------------------------------------------------


def restrict_to_line(s: TruncSeries, direction: Sequence[int]) -> TruncSeries:
    """Substitute z_i = v_i * s: a univariate series in the line parameter."""
    out: Dict[tuple, GaussianRational] = {}
    for J, c in s.coeffs.items():
        v = c
        for vi, e in zip(direction, J):
            if e:
                v = v * (as_gauss(vi) ** e)
        if v:
            key = (sum(J),)
            acc = out.get(key, ZERO) + v
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
    return TruncSeries(1, s.precision, out)


def _direction_trials(k: int):
    for ones in range(1, k + 1):
        yield tuple(1 if i < ones else 0 for i in range(k))
    if k > 1:
        yield tuple(range(1, k + 1))
        for m in range(2, 7):
            yield tuple(m**i for i in range(k))


@dataclass
class LineRestriction:
    """Record of the deterministic generic-direction choice: the direction,
    the restricted (one-base-variable) Weierstrass data, and the order of
    the restricted discriminant."""

    direction: tuple
    restricted: WeierstrassPoly
    s_order: int
    discriminant_on_line: TruncSeries


def generic_restrict(P: WeierstrassPoly) -> LineRestriction:
    """Find a line direction on which the discriminant stays nonzero, walking
    a fixed trial sequence so the choice is reproducible."""
    D = discriminant(P)
    if D.is_zero():
        raise DiscriminantError(
            "discriminant vanishes identically to precision; input is not reduced"
        )
    for v in _direction_trials(P.base_vars):
        Dv = restrict_to_line(D, v)
        if not Dv.is_zero():
            restricted = WeierstrassPoly(
                1, P.degree, [restrict_to_line(b, v) for b in P.coeffs]
            )
            return LineRestriction(
                direction=v,
                restricted=restricted,
                s_order=Dv.order(),
                discriminant_on_line=Dv,
            )
    raise DiscriminantError(
        "no direction in the fixed trial sequence keeps the discriminant nonzero"
    )


# ---------------------------------------------------------------------------
# floating univariate series (quarantined Puiseux fallback)
# ---------------------------------------------------------------------------


class FloatSeries:
    """Univariate truncated series with complex binary64 coefficients; used
    only when a Puiseux branch leaves the exact field."""

    __slots__ = ("precision", "coeffs")

    def __init__(self, precision: int, coeffs: Optional[Dict[int, complex]] = None):
        self.precision = precision
        self.coeffs = {
            e: complex(c)
            for e, c in (coeffs or {}).items()
            if e <= precision and c != 0
        }

    @classmethod
    def from_exact(cls, s: TruncSeries) -> "FloatSeries":
        return cls(s.precision, {J[0]: complex(c) for J, c in s.coeffs.items()})

    @classmethod
    def constant(cls, precision: int, c) -> "FloatSeries":
        return cls(precision, {0: complex(c)})

    def is_zero(self, eps: float = FLOAT_ZERO_EPS) -> bool:
        return all(abs(c) <= eps for c in self.coeffs.values())

    def order(self, eps: float = FLOAT_ZERO_EPS) -> Optional[int]:
        live = [e for e, c in self.coeffs.items() if abs(c) > eps]
        return min(live) if live else None

    def coeff(self, e: int) -> complex:
        return self.coeffs.get(e, 0j)

    def __add__(self, other: "FloatSeries") -> "FloatSeries":
        prec = min(self.precision, other.precision)
        out = {e: c for e, c in self.coeffs.items() if e <= prec}
        for e, c in other.coeffs.items():
            if e <= prec:
                out[e] = out.get(e, 0j) + c
        return FloatSeries(prec, out)

    def __sub__(self, other: "FloatSeries") -> "FloatSeries":
        return self + other.scale(-1.0)

    def scale(self, c) -> "FloatSeries":
        c = complex(c)
        return FloatSeries(self.precision, {e: c * v for e, v in self.coeffs.items()})

    def __mul__(self, other: "FloatSeries") -> "FloatSeries":
        prec = min(self.precision, other.precision)
        out: Dict[int, complex] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e <= prec:
                    out[e] = out.get(e, 0j) + c1 * c2
        return FloatSeries(prec, out)

    def shift(self, e: int) -> "FloatSeries":
        if e < 0 and any(
            d + e < 0 and abs(c) > FLOAT_ZERO_EPS for d, c in self.coeffs.items()
        ):
            raise ValueError("negative exponent after shift")
        return FloatSeries(
            self.precision + e,
            {d + e: c for d, c in self.coeffs.items() if d + e >= 0},
        )

    def substitute_power(self, m: int) -> "FloatSeries":
        return FloatSeries(
            self.precision * m, {d * m: c for d, c in self.coeffs.items()}
        )

    def truncate(self, k: int) -> "FloatSeries":
        return FloatSeries(
            min(k, self.precision), {e: c for e, c in self.coeffs.items() if e <= k}
        )

    def max_abs_through(self, k: int) -> float:
        vals = [abs(c) for e, c in self.coeffs.items() if e <= k]
        return max(vals) if vals else 0.0

    def __repr__(self):
        items = sorted(self.coeffs.items())
        return " + ".join(f"({c:.4g})*t^{e}" for e, c in items) or "0"


Ser = Union[TruncSeries, FloatSeries]


def _is_exact(s: Ser) -> bool:
    return isinstance(s, TruncSeries)


def _ser_shift(s: Ser, e: int) -> Ser:
    if not _is_exact(s):
        return s.shift(e)
    if e >= 0:
        return s.shift(e)
    if any(J[0] + e < 0 for J in s.coeffs):
        raise ValueError("negative exponent after shift")
    return TruncSeries(1, s.precision + e, {(J[0] + e,): c for J, c in s.coeffs.items()})


def _ser_trunc(s: Ser, k: int) -> Ser:
    if _is_exact(s):
        return s.with_precision(min(k, s.precision))
    return s.truncate(k)


def _ser_coeff(s: Ser, e: int):
    if _is_exact(s):
        return s.coeffs.get((e,), ZERO)
    return s.coeff(e)


def _zero_ser(prec: int, exact: bool) -> Ser:
    return TruncSeries.zero(1, prec) if exact else FloatSeries(prec, {})


def _to_float_list(coeffs: List[Ser]) -> List[FloatSeries]:
    return [c if isinstance(c, FloatSeries) else FloatSeries.from_exact(c) for c in coeffs]


# ---------------------------------------------------------------------------
# exact-first polynomial root extraction
# ---------------------------------------------------------------------------


def _poly_eval(coeffs: List[GaussianRational], x: GaussianRational) -> GaussianRational:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_deflate(
    coeffs: List[GaussianRational], root: GaussianRational
) -> List[GaussianRational]:
    """Synthetic division by (x - root) for an exact root."""
    n = len(coeffs) - 1
    out: List[GaussianRational] = [ZERO] * n
    out[n - 1] = coeffs[n]
    for i in range(n - 2, -1, -1):
        out[i] = coeffs[i + 1] + out[i + 1] * root
    return out


def _numeric_roots(coeffs: List[complex]) -> List[complex]:
    arr = np.array(list(reversed(coeffs)), dtype=complex)
    arr = np.trim_zeros(arr, "f")
    if arr.size <= 1:
        return []
    return list(np.roots(arr))


def _cluster(roots: List[complex], tol: float = 1e-8) -> List[Tuple[complex, int]]:
    roots = sorted(roots, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
    out: List[Tuple[complex, int]] = []
    for z in roots:
        for i, (z0, m0) in enumerate(out):
            if abs(z - z0) < tol:
                out[i] = (z0, m0 + 1)
                break
        else:
            out.append((z, 1))
    return out


def poly_roots_exact_first(
    coeffs: List[GaussianRational],
) -> Tuple[List[Tuple[GaussianRational, int]], List[Tuple[complex, int]]]:
    """Roots (with multiplicity) of an exact polynomial given by its
    ascending coefficient list.

    Numeric root candidates are snapped to small Gaussian rationals and kept
    only when exact evaluation verifies them; verified roots are deflated
    exactly, the rest stay floating."""
    work = list(coeffs)
    while work and not work[-1]:
        work.pop()
    exact: List[Tuple[GaussianRational, int]] = []
    progress = True
    while progress and len(work) > 1:
        progress = False
        cands = _numeric_roots([complex(c) for c in work])
        cands.sort(key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        for z in cands:
            cand = gauss_from_complex(z)
            if _poly_eval(work, cand) == ZERO:
                mult = 0
                while len(work) > 1 and _poly_eval(work, cand) == ZERO:
                    work = _poly_deflate(work, cand)
                    mult += 1
                exact.append((cand, mult))
                progress = True
                break
    floats: List[Tuple[complex, int]] = []
    if len(work) > 1:
        floats = _cluster(_numeric_roots([complex(c) for c in work]))
    return exact, floats


def _nth_root_exact(xi: GaussianRational, q: int) -> Optional[GaussianRational]:
    """A q-th root of xi inside the Gaussian rationals, if one exists."""
    if q == 1:
        return xi
    base = complex(xi) ** (1.0 / q)
    for s in range(q):
        cand = gauss_from_complex(base * cmath.exp(2j * cmath.pi * s / q))
        if cand**q == xi:
            return cand
    return None


# ---------------------------------------------------------------------------
# Newton-Puiseux
# ---------------------------------------------------------------------------


@dataclass
class PuiseuxBranch:
    """One place of the plane curve: the formal curve t -> (t^d, w(t)).

    ``w`` is a TruncSeries in exact mode, a FloatSeries (with recorded
    tolerance) in floating mode; the residual of the defining polynomial on
    the branch is certified through ``certified_order``."""

    ramification: int
    w: Ser
    mode: str  # "exact" | "floating"
    tolerance: Optional[float]
    certified_order: int
    residual_bound: float  # 0.0 when every coefficient through the order cancels

    @property
    def is_exact(self) -> bool:
        return self.mode == "exact"

    def curve(self, precision: Optional[int] = None) -> FormalCurve:
        """(t^d, w(t)) as an exact FormalCurve."""
        if not self.is_exact:
            raise ExactnessError("floating branch cannot become an exact curve")
        prec = self.w.precision if precision is None else precision
        tpart = TruncSeries.monomial(1, prec, (self.ramification,))
        return FormalCurve([tpart, self.w.with_precision(prec)])

    def __str__(self) -> str:
        from .formats import format_branch

        return format_branch(self)

    __repr__ = __str__


def _regular_root(coeffs: List[Ser], N: int, exact: bool) -> Ser:
    """Order-by-order solution w(t), w(0) = 0, of sum c_i w^i = 0 when the
    vanishing root is simple (c_0(0) = 0, c_1(0) invertible)."""
    c1_0 = _ser_coeff(coeffs[1], 0)
    w = _zero_ser(N, exact)
    for e in range(1, N + 1):
        res = coeffs[0]
        wp = w
        for i in range(1, len(coeffs)):
            if not coeffs[i].is_zero():
                res = res + _ser_trunc(coeffs[i] * wp, N)
            if i + 1 < len(coeffs):
                wp = _ser_trunc(wp * w, N)
        ce = _ser_coeff(res, e)
        if exact:
            if not ce:
                continue
            w = w + TruncSeries.monomial(1, N, (e,), -(ce / c1_0))
        else:
            if abs(ce) <= FLOAT_ZERO_EPS:
                continue
            w = w + FloatSeries(N, {e: -(ce / c1_0)})
    return w


def _lower_hull(points: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    pts = sorted(points)
    hull: List[Tuple[int, int]] = []
    for p in pts:
        while (
            len(hull) >= 2
            and (hull[-1][0] - hull[-2][0]) * (p[1] - hull[-2][1])
            - (p[0] - hull[-2][0]) * (hull[-1][1] - hull[-2][1])
            <= 0
        ):
            hull.pop()
        hull.append(p)
    return hull


def _transform(
    coeffs: List[Ser], q: int, m_e: int, l_const: int, c_lead, N: int, exact: bool
) -> List[Ser]:
    """Coefficients of P(tau^q, tau^m_e (c + w')) / tau^l_const in w'."""
    deg = len(coeffs) - 1
    out: List[Ser] = [_zero_ser(N, exact) for _ in range(deg + 1)]
    subs: List[Optional[Ser]] = []
    for i, c in enumerate(coeffs):
        if c.is_zero():
            subs.append(None)
        else:
            expanded = c.substitute_power(q)
            subs.append(_ser_trunc(_ser_shift(expanded, m_e * i - l_const), N))
    cpow = [as_gauss(1) if exact else 1 + 0j]
    for _ in range(deg):
        cpow.append(cpow[-1] * c_lead)
    for i, base in enumerate(subs):
        if base is None:
            continue
        for s in range(i + 1):
            out[s] = out[s] + base.scale(cpow[i - s] * comb(i, s))
    return [_ser_trunc(o, N) for o in out]


def _puiseux_rec(
    coeffs: List[Ser], N: int, exact: bool, exact_only: bool, depth: int
) -> List[Tuple[int, Ser, bool]]:
    """Branches (ramification, w-series, exactness) with w(0) = 0 of the
    polynomial sum_i c_i(t) w^i."""
    if depth > N + 8:
        raise GermforgeError("Newton-polygon recursion failed to terminate")
    out: List[Tuple[int, Ser, bool]] = []
    i0 = next((i for i, c in enumerate(coeffs) if not c.is_zero()), None)
    if i0 is None:
        raise GermforgeError("polynomial vanishes identically to precision")
    for _ in range(i0):
        out.append((1, _zero_ser(N, exact), exact))
    coeffs = coeffs[i0:]
    if len(coeffs) == 1:
        return out
    if coeffs[0].order() == 0:
        return out  # constant slice is a unit: no further vanishing roots
    mu = next((i for i, c in enumerate(coeffs) if c.order() == 0), None)
    if mu is None:
        raise GermforgeError(
            "every w-coefficient vanishes at the base point; polygon degenerates"
        )
    if mu == 1:
        out.append((1, _regular_root(coeffs, N, exact), exact))
        return out
    points = [(i, c.order()) for i, c in enumerate(coeffs) if c.order() is not None]
    hull = _lower_hull([p for p in points if p[0] <= mu])
    for (i1, j1), (i2, j2) in zip(hull, hull[1:]):
        if j1 <= j2:
            continue
        rise, run = j1 - j2, i2 - i1
        g = gcd(rise, run)
        m_e, q = rise // g, run // g
        width = run // q
        # reduced characteristic polynomial in eta = c^q
        psi = [_ser_coeff(coeffs[i1 + s * q], j1 - s * m_e) for s in range(width + 1)]
        if exact:
            exact_roots, float_roots = poly_roots_exact_first(psi)
        else:
            exact_roots, float_roots = [], _cluster(_numeric_roots([complex(v) for v in psi]))
        root_list = [(r, m, True) for r, m in exact_roots] + [
            (r, m, False) for r, m in float_roots
        ]
        l_const = q * j1 + m_e * i1
        for xi, _mult, xi_exact in root_list:
            branch_exact = exact and xi_exact
            if branch_exact:
                c_lead = _nth_root_exact(xi, q)
                if c_lead is None:
                    branch_exact = False
            if not branch_exact:
                if exact_only:
                    continue
                c_lead = complex(xi) ** (1.0 / q)
            work = coeffs if branch_exact else _to_float_list(coeffs)
            trans = _transform(work, q, m_e, l_const, c_lead, N, branch_exact)
            for d_sub, w_sub, sub_exact in _puiseux_rec(
                trans, N, branch_exact, exact_only, depth + 1
            ):
                d = q * d_sub
                if sub_exact:
                    inner = TruncSeries.constant(1, N, c_lead) + w_sub
                else:
                    w_sub_f = (
                        w_sub
                        if isinstance(w_sub, FloatSeries)
                        else FloatSeries.from_exact(w_sub)
                    )
                    inner = FloatSeries.constant(N, complex(c_lead)) + w_sub_f
                w = _ser_trunc(_ser_shift(inner, m_e * d_sub), N)
                out.append((d, w, sub_exact))
    return out


def newton_puiseux(
    P: WeierstrassPoly, N: int, exact_only: bool = False
) -> List[PuiseuxBranch]:
    """All branches of a one-base-variable Weierstrass polynomial, each with
    its ramification and a residual certified through order N.

    Requires a nonzero discriminant within precision (reduced input);
    characteristic roots outside the Gaussian rationals yield floating
    branches with a recorded tolerance, or are skipped under ``exact_only``."""
    if P.base_vars != 1:
        raise DimensionMismatch(
            "newton_puiseux expects one base variable; use generic_restrict first"
        )
    if P.precision < N:
        raise PrecisionError(
            f"coefficients certified to {P.precision} < requested order {N}"
        )
    if discriminant(P).is_zero():
        raise DiscriminantError(
            "discriminant vanishes identically to precision; input is not reduced"
        )
    coeffs: List[Ser] = [b.with_precision(N) for b in P.coeffs]
    coeffs.append(TruncSeries.constant(1, N, 1))
    branches = []
    for d, w, is_exact in _puiseux_rec(coeffs, N, True, exact_only, 0):
        res_bound = _branch_residual(P, d, w, N, is_exact)
        branches.append(
            PuiseuxBranch(
                ramification=d,
                w=w,
                mode="exact" if is_exact else "floating",
                tolerance=None if is_exact else 1e-9,
                certified_order=N,
                residual_bound=res_bound,
            )
        )
    return branches


def _branch_residual(P: WeierstrassPoly, d: int, w: Ser, N: int, is_exact: bool) -> float:
    """Largest surviving coefficient magnitude of P(t^d, w(t)) through order N
    (0.0 when everything cancels; exact zero for exact branches)."""
    if is_exact:
        res = TruncSeries.zero(1, N)
        wp = TruncSeries.constant(1, N, 1)
        wN = w.with_precision(N)
        for i in range(P.degree + 1):
            ci = (
                P.coeffs[i].with_precision(N).substitute_power(d).with_precision(N)
                if i < P.degree
                else TruncSeries.constant(1, N, 1)
            )
            res = res + ci * wp
            wp = wp * wN
        if res.is_zero():
            return 0.0
        return max(float(c.norm2()) for c in res.coeffs.values()) ** 0.5
    wf = (w if isinstance(w, FloatSeries) else FloatSeries.from_exact(w)).truncate(N)
    res_f = FloatSeries(N, {})
    wp_f = FloatSeries.constant(N, 1.0)
    for i in range(P.degree + 1):
        ci = (
            FloatSeries.from_exact(
                P.coeffs[i].with_precision(N).substitute_power(d).with_precision(N)
            )
            if i < P.degree
            else FloatSeries.constant(N, 1.0)
        )
        res_f = res_f + ci * wp_f
        wp_f = (wp_f * wf).truncate(N)
    return res_f.max_abs_through(N)


# ---------------------------------------------------------------------------
# normal forms and the prime-ideal curve lift
# ---------------------------------------------------------------------------


def extend_vars(s: TruncSeries, nvars: int) -> TruncSeries:
    """Reinterpret a k-variable series inside n >= k variables (new ones last)."""
    if s.nvars > nvars:
        raise DimensionMismatch("cannot shrink the variable count")
    pad = (0,) * (nvars - s.nvars)
    return TruncSeries(nvars, s.precision, {J + pad: c for J, c in s.coeffs.items()})


def restrict_vars(s: TruncSeries, nvars: int) -> TruncSeries:
    """Drop trailing variables the series does not actually use."""
    if s.nvars < nvars:
        raise DimensionMismatch("series already has fewer variables")
    out = {}
    for J, c in s.coeffs.items():
        if any(J[nvars:]):
            raise DimensionMismatch("series uses a variable beyond the restriction")
        out[J[:nvars]] = c
    return TruncSeries(nvars, s.precision, out)


class NormalForm:
    """User-supplied strictly-regular presentation of a prime ideal: the
    defining Weierstrass polynomial p of the distinguished variable z_{k+1},
    its discriminant D, and one relation D*z_j - Q_j(z_1..z_{k+1}) per
    remaining variable j = k+2..n."""

    __slots__ = ("nvars", "k", "p", "discriminant", "relations")

    def __init__(
        self,
        nvars: int,
        k: int,
        p: WeierstrassPoly,
        disc: TruncSeries,
        relations: Sequence[Tuple[int, TruncSeries]],
    ):
        if p.base_vars != k:
            raise NormalFormError("p must be a Weierstrass polynomial over z_1..z_k")
        if disc.nvars != k:
            raise NormalFormError("discriminant must live in the base variables")
        own = discriminant(p).with_precision(min(disc.precision, p.precision))
        supplied = disc.with_precision(own.precision)
        if not (supplied == own or supplied == own.scale(-1)):
            raise NormalFormError(
                "supplied discriminant disagrees with the resultant of p (up to sign)"
            )
        expected = sorted(range(k + 2, nvars + 1))
        if sorted(j for j, _ in relations) != expected:
            raise NormalFormError(
                f"relations must cover exactly the variables {expected}"
            )
        rels = []
        for j, Q in sorted(relations):
            if Q.nvars != nvars:
                raise NormalFormError(
                    "relation polynomials must be stated in all variables"
                )
            restrict_vars(Q, k + 1)  # raises if Q touches z_{k+2}..z_n
            rels.append((j, Q))
        self.nvars = nvars
        self.k = k
        self.p = p
        self.discriminant = disc
        self.relations = tuple(rels)

    def q_series(self, j: int) -> TruncSeries:
        """The relation generator D*z_j - Q_j as an n-variable series."""
        for jj, Q in self.relations:
            if jj == j:
                Dn = extend_vars(self.discriminant, self.nvars)
                zj = TruncSeries.variable(self.nvars, Q.precision, j - 1)
                return Dn * zj - Q
        raise NormalFormError(f"no relation for variable {j}")

    def generators(self) -> List[TruncSeries]:
        """p and the q_j, all in n variables at their joint precision."""
        gens = [extend_vars(self.p.as_series(), self.nvars)]
        for j, _ in self.relations:
            gens.append(self.q_series(j))
        prec = min(g.precision for g in gens)
        return [g.with_precision(prec) for g in gens]


@dataclass
class LiftResult:
    curve: FormalCurve
    divisor_order: int
    generator_orders: Dict[str, int]  # label -> vanishing certified through


def prime_curve_lift(nf: NormalForm, zeta_base: FormalCurve, N: int) -> LiftResult:
    """Extend a curve annihilating p into all n variables by the exact series
    divisions z_j = Q_j / D along the curve.

    Requires ord(Q_j o curve) > ord(D o curve), so each quotient is a genuine
    power series vanishing at 0; violations contradict the normal-form
    hypotheses and report the offending variable."""
    if zeta_base.dim != nf.k + 1:
        raise DimensionMismatch(
            f"base curve must have {nf.k + 1} components, got {zeta_base.dim}"
        )
    p_full = nf.p.as_series()
    p_res = pullback(p_full, zeta_base)
    if p_res.precision < N:
        raise PrecisionError("base curve too shallow to certify the requested order")
    if not p_res.jet(N).is_zero():
        raise NormalFormError(f"base curve does not annihilate p through order {N}")
    base_k = FormalCurve(zeta_base.components[: nf.k])
    Dpull = pullback(nf.discriminant, base_k)
    omega = Dpull.order()
    if omega is None:
        raise NormalFormError(
            "discriminant vanishes on the base curve to precision; pick another branch"
        )
    comps = list(zeta_base.components)
    for j, Q in nf.relations:
        num = pullback(restrict_vars(Q, nf.k + 1), zeta_base)
        if num.is_zero():
            comps.append(TruncSeries.zero(1, num.precision))
            continue
        if num.order() < omega:
            raise NormalFormError(
                f"ord(Q_{j} o curve) = {num.order()} < ord(D o curve) = {omega}; "
                "normal-form hypotheses are violated"
            )
        if num.order() == omega:
            raise NormalFormError(
                f"component z_{j} = Q_{j}/D would not vanish at the origin"
            )
        comps.append(divide(num, Dpull))
    curve = FormalCurve(comps)
    orders: Dict[str, int] = {}
    for label, gen in [("p", extend_vars(p_full, nf.nvars))] + [
        (f"q_{j}", nf.q_series(j)) for j, _ in nf.relations
    ]:
        res = pullback(gen.with_precision(min(gen.precision, curve.precision)), curve)
        orders[label] = res.precision if res.is_zero() else res.order() - 1
    return LiftResult(curve=curve, divisor_order=omega, generator_orders=orders)


def associated_membership(
    f: TruncSeries, nf: NormalForm, max_nu: int, N: int
) -> Optional[Tuple[int, Dict]]:
    """Smallest nu <= max_nu with D^nu * f in (p, q_{k+2}, .., q_n) modulo
    degrees > N, with the certifying combination; None if the cap is reached."""
    from .ideals import IdealPresentation, membership_jet

    gens = nf.generators()
    if min(g.precision for g in gens) < N:
        raise PrecisionError("normal-form generators too shallow for this order")
    if f.precision < N:
        raise PrecisionError("candidate series too shallow for this order")
    ideal = IdealPresentation(nf.nvars, [g.with_precision(N) for g in gens])
    Dn = extend_vars(nf.discriminant, nf.nvars)
    if Dn.precision < N:
        raise PrecisionError("discriminant too shallow for this order")
    Dn = Dn.with_precision(N)
    acc = f.with_precision(N)
    for nu in range(max_nu + 1):
        res = membership_jet(acc, ideal, N)
        if res.contained:
            return nu, res.combination
        acc = acc * Dn
    return None
