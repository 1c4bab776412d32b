"""Jet-level linear algebra on ideals of truncated power series.

True membership in an ideal I of the formal local ring is undecidable from
finite data; every operation here decides the computable surrogate
``f in I + M0^(k+1)`` by exact row reduction over the monomial basis of
degree <= k, where M0 is the maximal ideal.  This surrogate is precisely
what the finiteness, radical and intersection arguments consume, and a
membership certificate at level k >= l genuinely proves M0^l inside I by
the standard Nakayama argument for complete local rings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .coeffs import GaussianRational, ZERO, ONE
from .errors import (
    DimensionMismatch,
    ImproperIdealError,
    PrecisionError,
)
from .series import Multidegree, TruncSeries, degree_key


def monomials_up_to(nvars: int, k: int):
    """All exponent tuples of total degree <= k."""
    if nvars == 1:
        return [(d,) for d in range(k + 1)]
    out = []
    for d in range(k + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


def monomials_of_degree(nvars: int, d: int):
    """All exponent tuples of total degree exactly d."""
    if nvars == 1:
        return [(d,)]
    out = []
    for head in range(d + 1):
        for tail in monomials_of_degree(nvars - 1, d - head):
            out.append((head,) + tail)
    return out


def count_monomials(nvars: int, max_degree: int) -> int:
    """Number of monomials of degree <= max_degree (binomial count)."""
    from math import comb

    return comb(max_degree + nvars, nvars)


class IdealPresentation:
    """Finite generator list, all vanishing at the origin, with a shared
    certified precision.  ``normal_form`` optionally carries user-supplied
    Weierstrass data (see the weierstrass module)."""

    __slots__ = ("nvars", "generators", "precision", "normal_form", "_spans")

    def __init__(
        self,
        nvars: int,
        generators: Sequence[TruncSeries],
        normal_form=None,
    ):
        gens = []
        prec = None
        for g in generators:
            if g.nvars != nvars:
                raise DimensionMismatch("generator variable count mismatch")
            if g.constant_term():
                raise ImproperIdealError(
                    "generator has a nonzero constant term; the ideal is not proper"
                )
            prec = g.precision if prec is None else min(prec, g.precision)
            gens.append(g)
        if prec is None:
            raise ImproperIdealError("an ideal presentation needs generators")
        self.nvars = nvars
        self.generators = tuple(g.with_precision(prec) for g in gens)
        self.precision = prec
        self.normal_form = normal_form
        self._spans: Dict[int, "JetSpan"] = {}

    def span(self, k: int) -> "JetSpan":
        """Row-reduced span of { jet_k(m * g) } with combination tracking;
        cached per level."""
        if k > self.precision:
            raise PrecisionError(
                f"membership level {k} exceeds ideal precision {self.precision}"
            )
        got = self._spans.get(k)
        if got is None:
            got = JetSpan(self.nvars, k)
            for idx, g in enumerate(self.generators):
                o = g.order()
                if o is None:
                    continue
                for m in monomials_up_to(self.nvars, k - o):
                    got.insert(_mono_times(g, m, k), {(idx, m): ONE})
            self._spans[k] = got
        return got

    def __str__(self) -> str:
        from .formats import format_ideal

        return format_ideal(self)

    __repr__ = __str__


def _mono_times(g: TruncSeries, m: Multidegree, k: int) -> Dict[Multidegree, GaussianRational]:
    """Coefficient vector of jet_k(z^m * g)."""
    out = {}
    for J, c in g.coeffs.items():
        E = tuple(a + b for a, b in zip(J, m))
        if sum(E) <= k:
            out[E] = c
    return out


class JetSpan:
    """Echelonized row space over the degree <= k monomial basis.

    Rows are normalized to leading coefficient 1 with the pivot at the
    smallest multidegree in the fixed total order; each row remembers the
    combination of original (generator, monomial) products producing it."""

    def __init__(self, nvars: int, level: int):
        self.nvars = nvars
        self.level = level
        self.rows: Dict[Multidegree, Tuple[dict, dict]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: dict, combo: dict):
        vec = dict(vec)
        combo = dict(combo)
        while vec:
            lead = min(vec, key=degree_key)
            got = self.rows.get(lead)
            if got is None:
                return vec, combo, lead
            rvec, rcombo = got
            factor = vec[lead]
            for J, c in rvec.items():
                v = vec.get(J, ZERO) - factor * c
                if v:
                    vec[J] = v
                else:
                    vec.pop(J, None)
            for key, c in rcombo.items():
                v = combo.get(key, ZERO) - factor * c
                if v:
                    combo[key] = v
                else:
                    combo.pop(key, None)
        return vec, combo, None

    def insert(self, vec: dict, combo: dict) -> bool:
        """Add a row; returns True when it enlarged the span."""
        vec, combo, lead = self._reduce(vec, combo)
        if lead is None:
            return False
        inv = ONE / vec[lead]
        vec = {J: inv * c for J, c in vec.items()}
        combo = {key: inv * c for key, c in combo.items()}
        self.rows[lead] = (vec, combo)
        return True

    def express(self, vec: dict):
        """Reduce a vector against the span.

        Returns (residue, combination): residue empty means the vector lies
        in the span and equals sum combination[(gen, mono)] * z^mono * g_gen
        modulo degrees > level."""
        residue, combo, _ = self._reduce(vec, {})
        combination = {key: -c for key, c in combo.items()}
        return residue, combination


@dataclass
class MembershipResult:
    contained: bool
    level: int
    combination: Optional[Dict[Tuple[int, Multidegree], GaussianRational]]
    residue: Optional[TruncSeries]


def membership_jet(f: TruncSeries, I: IdealPresentation, k: int) -> MembershipResult:
    """Decide jet_k(f) in span{ jet_k(m*g) } by exact row reduction; this is
    membership in I + M0^(k+1).  Returns the certifying combination or the
    nonzero residue class."""
    if f.nvars != I.nvars:
        raise DimensionMismatch("series and ideal in different variable counts")
    if k > f.precision:
        raise PrecisionError(f"membership level {k} exceeds series precision")
    span = I.span(k)
    residue, combination = span.express(dict(f.jet(k).coeffs))
    if residue:
        return MembershipResult(False, k, None, TruncSeries(I.nvars, k, residue))
    return MembershipResult(True, k, combination, None)


def verify_combination(
    f: TruncSeries,
    I: IdealPresentation,
    combination: Dict[Tuple[int, Multidegree], GaussianRational],
    k: int,
) -> bool:
    """Re-expand a membership combination and compare jets; used to make
    certificates independently checkable."""
    acc = TruncSeries.zero(I.nvars, k)
    for (idx, m), c in combination.items():
        acc = acc + TruncSeries(I.nvars, k, _mono_times(I.generators[idx], m, k)).scale(c)
    return acc.agrees_with(f, k)


@dataclass
class VariableCertificate:
    variable: int
    exponent: int
    combination: Dict[Tuple[int, Multidegree], GaussianRational]


@dataclass
class CodimReport:
    """Per-level quotient dimensions dim O/(I + M0^k) for k = 1..bound and
    the finiteness verdict.  A finite verdict carries the per-variable power
    certificates plus the level l with every degree-l monomial certified in
    the ideal; unresolved verdicts only bound the codimension from below."""

    nvars: int
    bound: int
    dims: List[int]
    verdict: str  # "finite" | "unresolved"
    value: Optional[int] = None
    certificate_level: Optional[int] = None
    variable_certificates: List[VariableCertificate] = field(default_factory=list)
    lower_bound: int = 0

    def dim_at(self, k: int) -> int:
        return self.dims[k - 1]

    def __str__(self) -> str:
        from .formats import format_codim_report

        return format_codim_report(self)

    __repr__ = __str__


def codimension(I: IdealPresentation, bound: int) -> CodimReport:
    """Quotient dimensions up to the bound, with the finiteness certificate.

    The verdict is finite only when (a) the dimension sequence repeats over
    two consecutive levels, (b) every variable has a certified power in the
    ideal at the deepest level, and (c) some full monomial layer M0^l is
    certified inside the ideal, which is sound at jet level."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    if bound > I.precision:
        raise PrecisionError(
            f"bound {bound} exceeds ideal precision {I.precision}"
        )
    dims = []
    for k in range(1, bound + 1):
        dims.append(count_monomials(I.nvars, k - 1) - I.span(k - 1).rank)

    stab = None
    for k in range(1, bound):
        if dims[k - 1] == dims[k]:
            stab = k
            break

    if stab is not None:
        value = dims[stab - 1]
        level = bound - 1
        span = I.span(level)
        var_certs: List[VariableCertificate] = []
        for j in range(I.nvars):
            found = None
            for e in range(1, min(value, level) + 1):
                m = tuple(e if i == j else 0 for i in range(I.nvars))
                residue, combo = span.express({m: ONE})
                if not residue:
                    found = VariableCertificate(j, e, combo)
                    break
            if found is None:
                break
            var_certs.append(found)
        if len(var_certs) == I.nvars:
            cert_level = None
            for ell in range(1, level):
                if max_power_subset(I, ell, level):
                    cert_level = ell
                    break
            if cert_level is not None:
                return CodimReport(
                    nvars=I.nvars,
                    bound=bound,
                    dims=dims,
                    verdict="finite",
                    value=value,
                    certificate_level=cert_level,
                    variable_certificates=var_certs,
                    lower_bound=value,
                )
    return CodimReport(
        nvars=I.nvars,
        bound=bound,
        dims=dims,
        verdict="unresolved",
        lower_bound=dims[-1],
    )


def max_power_subset(I: IdealPresentation, ell: int, k: int) -> bool:
    """Whether every monomial of degree ell lies in I + M0^(k+1)."""
    if not ell < k:
        raise ValueError("need ell < k")
    if k > I.precision:
        raise PrecisionError(f"level {k} exceeds ideal precision")
    span = I.span(k)
    for m in monomials_of_degree(I.nvars, ell):
        residue, _ = span.express({m: ONE})
        if residue:
            return False
    return True


def radical_membership(
    f: TruncSeries, I: IdealPresentation, maxpow: int, k: int
) -> Optional[Tuple[int, Dict]]:
    """Smallest power p <= maxpow with f^p in I + M0^(k+1), as (p, combination),
    or None."""
    if k > f.precision:
        raise PrecisionError("membership level exceeds series precision")
    power = TruncSeries.constant(f.nvars, f.precision, 1)
    for p in range(1, maxpow + 1):
        power = power * f
        res = membership_jet(power, I, k)
        if res.contained:
            return p, res.combination
    return None


@dataclass
class IntersectionReport:
    report1: CodimReport
    report2: CodimReport
    product_report: CodimReport
    both_finite: bool
    intersection_level: Optional[int]
    intersection_verified: Optional[bool]

    def __str__(self) -> str:
        from .formats import format_intersection_report

        return format_intersection_report(self)

    __repr__ = __str__


def intersection_diagnostic(
    I1: IdealPresentation, I2: IdealPresentation, bound: int
) -> IntersectionReport:
    """Codimension reports for both ideals and their product (an inner bound
    for the intersection).  When both certify finite with levels l1, l2 the
    containment M0^max(l1,l2) within the intersection is verified monomial
    by monomial."""
    if I1.nvars != I2.nvars:
        raise DimensionMismatch("ideals in different variable counts")
    r1 = codimension(I1, bound)
    r2 = codimension(I2, bound)
    product_gens = [g1 * g2 for g1, g2 in itertools.product(I1.generators, I2.generators)]
    rp = codimension(IdealPresentation(I1.nvars, product_gens), min(bound, min(g.precision for g in product_gens)))
    both = r1.verdict == "finite" and r2.verdict == "finite"
    level = None
    verified = None
    if both:
        level = max(r1.certificate_level, r2.certificate_level)
        k = min(I1.precision, I2.precision, bound)
        if level < k:
            verified = max_power_subset(I1, level, k) and max_power_subset(I2, level, k)
        else:
            verified = False
    return IntersectionReport(r1, r2, rp, both, level, verified)
