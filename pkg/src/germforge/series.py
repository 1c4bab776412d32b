"""Truncated multivariate formal power series and formal curves.

A :class:`TruncSeries` stores exact coefficients for all total degrees up
to its ``precision``; degrees beyond the precision are *unknown*, never
assumed zero.  All arithmetic propagates precision conservatively, so a
coefficient is reported only when no unknown tail of any operand could
have contributed to it.
"""

from __future__ import annotations

from math import gcd, inf
from typing import Iterable, Optional, Sequence

from .coeffs import GaussianRational, ZERO, ONE, as_gauss
from .errors import (
    ConstantCurveError,
    DimensionMismatch,
    PrecisionError,
)

Multidegree = tuple  # tuple of non-negative ints, one per variable


def total_degree(J: Multidegree) -> int:
    return sum(J)


def compare(J: Multidegree, K: Multidegree) -> int:
    """Total order on multidegrees: by total degree, ties broken entrywise
    with the smaller entry first.  Returns -1, 0 or +1."""
    if len(J) != len(K):
        raise DimensionMismatch(f"multidegrees of length {len(J)} vs {len(K)}")
    dJ, dK = sum(J), sum(K)
    if dJ != dK:
        return -1 if dJ < dK else 1
    for a, b in zip(J, K):
        if a != b:
            return -1 if a < b else 1
    return 0


def degree_key(J: Multidegree):
    """Sort key realizing :func:`compare`."""
    return (sum(J), J)


def _add_exps(J: Multidegree, K: Multidegree) -> Multidegree:
    return tuple(a + b for a, b in zip(J, K))


class TruncSeries:
    """Sparse truncated power series with Gaussian-rational coefficients."""

    __slots__ = ("nvars", "precision", "coeffs")

    def __init__(self, nvars: int, precision: int, coeffs=None):
        if precision < 0:
            raise PrecisionError("precision must be >= 0")
        self.nvars = nvars
        self.precision = precision
        clean = {}
        if coeffs:
            for J, c in coeffs.items():
                c = as_gauss(c)
                if not c:
                    continue
                if len(J) != nvars:
                    raise DimensionMismatch(
                        f"exponent {J} has length {len(J)}, series has {nvars} variables"
                    )
                if sum(J) <= precision:
                    clean[tuple(J)] = c
        self.coeffs = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, precision: int) -> "TruncSeries":
        return cls(nvars, precision, {})

    @classmethod
    def constant(cls, nvars: int, precision: int, c) -> "TruncSeries":
        return cls(nvars, precision, {(0,) * nvars: as_gauss(c)})

    @classmethod
    def monomial(cls, nvars: int, precision: int, J: Multidegree, c=1) -> "TruncSeries":
        return cls(nvars, precision, {tuple(J): as_gauss(c)})

    @classmethod
    def variable(cls, nvars: int, precision: int, i: int) -> "TruncSeries":
        J = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(nvars, precision, {J: ONE})

    # -- basic queries ---------------------------------------------------------

    def coeff(self, J) -> GaussianRational:
        if isinstance(J, int):
            J = (J,)
        J = tuple(J)
        if sum(J) > self.precision:
            raise PrecisionError(
                f"degree {sum(J)} beyond certified precision {self.precision}"
            )
        return self.coeffs.get(J, ZERO)

    def is_zero(self) -> bool:
        """Zero through the certified precision (the tail stays unknown)."""
        return not self.coeffs

    def order(self) -> Optional[int]:
        """Smallest total degree with nonzero coefficient, or None when the
        series vanishes through its precision (order >= precision + 1)."""
        if not self.coeffs:
            return None
        return min(sum(J) for J in self.coeffs)

    def constant_term(self) -> GaussianRational:
        return self.coeffs.get((0,) * self.nvars, ZERO)

    def terms(self):
        """Stored terms in the canonical multidegree order."""
        return sorted(self.coeffs.items(), key=lambda it: degree_key(it[0]))

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.precision == other.precision
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def agrees_with(self, other: "TruncSeries", k: int) -> bool:
        """Coefficient-wise equality of the two k-jets."""
        return self.jet(k).coeffs == other.jet(k).coeffs

    # -- arithmetic -------------------------------------------------------------

    def _check_compatible(self, other: "TruncSeries"):
        if self.nvars != other.nvars:
            raise DimensionMismatch(
                f"series in {self.nvars} vs {other.nvars} variables"
            )

    def __add__(self, other):
        if isinstance(other, (int, GaussianRational)):
            other = TruncSeries.constant(self.nvars, self.precision, other)
        self._check_compatible(other)
        prec = min(self.precision, other.precision)
        out = dict(self.coeffs)
        for J, c in other.coeffs.items():
            s = out.get(J, ZERO) + c
            if s:
                out[J] = s
            else:
                out.pop(J, None)
        return TruncSeries(self.nvars, prec, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(
            self.nvars, self.precision, {J: -c for J, c in self.coeffs.items()}
        )

    def __sub__(self, other):
        if isinstance(other, (int, GaussianRational)):
            other = TruncSeries.constant(self.nvars, self.precision, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        c = as_gauss(c)
        if not c:
            return TruncSeries.zero(self.nvars, self.precision)
        return TruncSeries(
            self.nvars, self.precision, {J: c * v for J, v in self.coeffs.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, GaussianRational)):
            return self.scale(other)
        self._check_compatible(other)
        prec = min(self.precision, other.precision)
        out: dict = {}
        for J, a in self.coeffs.items():
            dJ = sum(J)
            if dJ > prec:
                continue
            for K, b in other.coeffs.items():
                d = dJ + sum(K)
                if d > prec:
                    continue
                E = _add_exps(J, K)
                s = out.get(E, ZERO) + a * b
                if s:
                    out[E] = s
                else:
                    out.pop(E, None)
        return TruncSeries(self.nvars, prec, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers need explicit inversion")
        out = TruncSeries.constant(self.nvars, self.precision, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base_needed = e > 1
            if base_needed:
                base = base * base
            e >>= 1
        return out

    def conj_coeffs(self) -> "TruncSeries":
        """Series whose coefficients are the complex conjugates."""
        return TruncSeries(
            self.nvars,
            self.precision,
            {J: c.conjugate() for J, c in self.coeffs.items()},
        )

    # -- truncation ---------------------------------------------------------------

    def jet(self, k: int) -> "TruncSeries":
        """Truncate to total degree <= k.  Requires k <= precision: the unknown
        tail is never silently read as zero."""
        if k > self.precision:
            raise PrecisionError(
                f"jet order {k} exceeds certified precision {self.precision}"
            )
        return TruncSeries(
            self.nvars, k, {J: c for J, c in self.coeffs.items() if sum(J) <= k}
        )

    def with_precision(self, k: int) -> "TruncSeries":
        """Restate at a lower (or equal) precision."""
        if k == self.precision:
            return self
        return self.jet(min(k, self.precision))

    def extended(self, k: int) -> "TruncSeries":
        """Declare knowledge up to degree k (caller asserts the tail is zero;
        legitimate for polynomial data only)."""
        if k <= self.precision:
            return self.with_precision(k)
        return TruncSeries(self.nvars, k, dict(self.coeffs))

    # -- univariate helpers ----------------------------------------------------------

    def shift(self, e: int) -> "TruncSeries":
        """Multiply a univariate series by t^e."""
        if self.nvars != 1:
            raise DimensionMismatch("shift applies to univariate series")
        return TruncSeries(
            1,
            self.precision + e,
            {(J[0] + e,): c for J, c in self.coeffs.items()},
        )

    def substitute_power(self, m: int) -> "TruncSeries":
        """Univariate substitution t -> t^m; precision scales by m."""
        if self.nvars != 1:
            raise DimensionMismatch("substitute_power applies to univariate series")
        if m < 1:
            raise ValueError("exponent must be >= 1")
        return TruncSeries(
            1, self.precision * m, {(J[0] * m,): c for J, c in self.coeffs.items()}
        )

    def __str__(self) -> str:
        from .formats import format_series

        return format_series(self)

    __repr__ = __str__


def inverse(s: TruncSeries, precision: Optional[int] = None) -> TruncSeries:
    """Multiplicative inverse of a series with nonzero constant term, exact
    through the requested precision (default: the operand's)."""
    prec = s.precision if precision is None else min(precision, s.precision)
    c0 = s.constant_term()
    if not c0:
        raise ZeroDivisionError("series has no unit constant term")
    # group coefficients by total degree for the triangular recursion
    by_deg: dict = {}
    for J, c in s.coeffs.items():
        by_deg.setdefault(sum(J), {})[J] = c
    inv0 = ONE / c0
    out = {(0,) * s.nvars: inv0}
    out_by_deg = {0: {(0,) * s.nvars: inv0}}
    for d in range(1, prec + 1):
        level: dict = {}
        for e in range(1, d + 1):
            se = by_deg.get(e)
            if not se:
                continue
            ue = out_by_deg.get(d - e)
            if not ue:
                continue
            for J, a in se.items():
                for K, b in ue.items():
                    E = _add_exps(J, K)
                    v = level.get(E, ZERO) + a * b
                    if v:
                        level[E] = v
                    else:
                        level.pop(E, None)
        if level:
            neg = {J: -(inv0 * c) for J, c in level.items()}
            out_by_deg[d] = neg
            out.update(neg)
    return TruncSeries(s.nvars, prec, out)


def divide(num: TruncSeries, den: TruncSeries) -> TruncSeries:
    """Exact univariate division num/den where ord(den) <= ord(num); the
    quotient is a genuine power series."""
    if num.nvars != 1 or den.nvars != 1:
        raise DimensionMismatch("series division is univariate")
    w = den.order()
    if w is None:
        raise ZeroDivisionError("denominator vanishes to precision")
    prec = min(num.precision, den.precision) - w
    if prec < 0:
        raise PrecisionError("operands too shallow for the requested division")
    if num.is_zero():
        return TruncSeries.zero(1, prec)
    if num.order() < w:
        raise ValueError("numerator order below denominator order")
    num_shift = TruncSeries(1, prec, {(J[0] - w,): c for J, c in num.coeffs.items() if J[0] - w <= prec})
    den_shift = TruncSeries(1, prec, {(J[0] - w,): c for J, c in den.coeffs.items() if J[0] - w <= prec})
    return num_shift * inverse(den_shift)


class FormalCurve:
    """n-tuple of univariate truncated series with every component vanishing
    at t = 0 (the germ is normalized to the origin)."""

    __slots__ = ("components", "precision")

    def __init__(self, components: Sequence[TruncSeries]):
        comps = tuple(components)
        if not comps:
            raise DimensionMismatch("a curve needs at least one component")
        prec = min(c.precision for c in comps)
        fixed = []
        for i, c in enumerate(comps):
            if c.nvars != 1:
                raise DimensionMismatch(f"component {i + 1} is not univariate")
            if c.constant_term():
                raise ValueError(f"component {i + 1} does not vanish at t=0")
            fixed.append(c.with_precision(prec))
        self.components = tuple(fixed)
        self.precision = prec

    @classmethod
    def from_monomials(
        cls, exponents: Sequence[int], precision: int, coefficients=None
    ) -> "FormalCurve":
        """Curve with components c_i * t^(a_i); a_i == 0 means the zero component."""
        coefficients = coefficients or [1] * len(exponents)
        comps = []
        for a, c in zip(exponents, coefficients):
            if a == 0:
                comps.append(TruncSeries.zero(1, precision))
            else:
                comps.append(TruncSeries.monomial(1, precision, (a,), c))
        return cls(comps)

    @property
    def dim(self) -> int:
        return len(self.components)

    def vanishing_order(self) -> Optional[int]:
        """min over components of the vanishing order; None when every
        component is zero through the precision (order >= precision + 1)."""
        best = inf
        for c in self.components:
            o = c.order()
            if o is not None and o < best:
                best = o
        return None if best is inf else int(best)

    def is_constant(self) -> bool:
        return self.vanishing_order() is None

    def reparametrize(self, m: int) -> "FormalCurve":
        """Substitute t -> t^m.  Orders and precision scale by m."""
        if m < 1:
            raise ValueError("reparametrization exponent must be >= 1")
        return FormalCurve(tuple(c.substitute_power(m) for c in self.components))

    def with_component(self, i: int, series: TruncSeries) -> "FormalCurve":
        comps = list(self.components)
        comps[i] = series
        return FormalCurve(comps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalCurve):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __str__(self) -> str:
        from .formats import format_curve

        return format_curve(self)

    __repr__ = __str__


def pullback(s: TruncSeries, curve: FormalCurve) -> TruncSeries:
    """Compose s with the curve: the univariate series (s o curve)(t).

    The output precision is min(s.precision * nu(curve), curve.precision):
    a coefficient is reported only when no unknown term of either input can
    reach it.
    """
    if s.nvars != curve.dim:
        raise DimensionMismatch(
            f"series in {s.nvars} variables, curve in C^{curve.dim}"
        )
    nu = curve.vanishing_order()
    if nu is None:
        raise ConstantCurveError("pullback along a constant-to-precision curve")
    prec = min(s.precision * nu, curve.precision)
    out = TruncSeries.zero(1, prec)
    pow_cache = [
        {0: TruncSeries.constant(1, prec, 1)} for _ in range(curve.dim)
    ]

    def comp_power(i: int, e: int) -> TruncSeries:
        cache = pow_cache[i]
        if e in cache:
            return cache[e]
        half = comp_power(i, e // 2)
        p = half * half
        if e & 1:
            p = p * curve.components[i].with_precision(prec)
        cache[e] = p
        return p

    for J, c in s.coeffs.items():
        term = TruncSeries.constant(1, prec, c)
        dead = False
        for i, e in enumerate(J):
            if e == 0:
                continue
            p = comp_power(i, e)
            if p.is_zero():
                dead = True
                break
            term = term * p
        if not dead:
            out = out + term
    return out


# thin functional aliases mirroring the module surface

def mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    return a * b


def jet(s: TruncSeries, k: int) -> TruncSeries:
    return s.jet(k)


def vanishing_order(curve: FormalCurve) -> Optional[int]:
    return curve.vanishing_order()


def reparametrize(curve: FormalCurve, m: int) -> FormalCurve:
    return curve.reparametrize(m)


def exponent_tuples(nvars: int, max_exponent: int) -> Iterable[tuple]:
    """Monomial-curve exponent patterns: entries in 0..max_exponent, not all
    zero, with gcd of the nonzero entries equal to 1."""

    def keep(t):
        nz = [a for a in t if a]
        if not nz:
            return False
        g = 0
        for a in nz:
            g = gcd(g, a)
        return g == 1

    def gen():
        idx = [0] * nvars
        while True:
            t = tuple(idx)
            if keep(t):
                yield t
            i = nvars - 1
            while i >= 0 and idx[i] == max_exponent:
                idx[i] = 0
                i -= 1
            if i < 0:
                return
            idx[i] += 1

    return gen()
