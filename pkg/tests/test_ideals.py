"""Jet-level ideal linear algebra: membership, codimension, radicals."""

import pytest

from germforge.coeffs import ONE
from germforge.errors import ImproperIdealError, PrecisionError
from germforge.ideals import (
    IdealPresentation,
    codimension,
    count_monomials,
    intersection_diagnostic,
    max_power_subset,
    membership_jet,
    monomials_of_degree,
    radical_membership,
    verify_combination,
)
from germforge.series import TruncSeries

from conftest import (
    mono,
    oracle_level_dims_monomial,
    oracle_standard_monomials,
    series,
)


def ideal(nvars, precision, *gens):
    return IdealPresentation(nvars, [series(nvars, precision, t) for t in gens])


def monomial_ideal(nvars, precision, exps):
    return IdealPresentation(nvars, [mono(nvars, precision, J) for J in exps])


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------


def test_membership_square_in_linear():
    I = monomial_ideal(2, 10, [(1, 0)])
    res = membership_jet(mono(2, 10, (2, 0)), I, 5)
    assert res.contained
    assert verify_combination(mono(2, 10, (2, 0)), I, res.combination, 5)


def test_membership_residue_reported():
    I = monomial_ideal(2, 10, [(1, 0)])
    res = membership_jet(mono(2, 10, (0, 1)), I, 5)
    assert not res.contained
    assert res.residue.coeffs == {(0, 1): ONE}


def test_membership_sum_of_cubes():
    I = ideal(2, 10, {(1, 0): ONE, (0, 1): ONE})
    f = series(2, 10, {(3, 0): ONE, (0, 3): ONE})
    res = membership_jet(f, I, 6)
    assert res.contained
    assert verify_combination(f, I, res.combination, 6)


def test_membership_precision_guard():
    I = monomial_ideal(2, 4, [(1, 0)])
    with pytest.raises(PrecisionError):
        membership_jet(mono(2, 10, (1, 0)), I, 6)


def test_improper_ideal_rejected():
    with pytest.raises(ImproperIdealError):
        ideal(2, 5, {(0, 0): ONE, (1, 0): ONE})


# ---------------------------------------------------------------------------
# codimension
# ---------------------------------------------------------------------------


def test_codimension_square_of_maximal_ideal():
    I = monomial_ideal(2, 14, [(2, 0), (1, 1), (0, 2)])
    rep = codimension(I, 8)
    assert rep.verdict == "finite"
    assert rep.value == 3
    assert rep.certificate_level == 2
    assert rep.dims == oracle_level_dims_monomial([(2, 0), (1, 1), (0, 2)], 2, 8)
    verdict, count = oracle_standard_monomials([(2, 0), (1, 1), (0, 2)], 2)
    assert (verdict, count) == ("finite", 3)


def test_codimension_single_variable_unresolved():
    I = monomial_ideal(2, 14, [(1, 0)])
    rep = codimension(I, 12)
    assert rep.verdict == "unresolved"
    assert rep.dims == list(range(1, 13))
    assert rep.lower_bound == 12


def test_codimension_mixed_powers():
    I = monomial_ideal(2, 14, [(1, 0), (0, 3)])
    rep = codimension(I, 8)
    assert rep.verdict == "finite" and rep.value == 3
    assert oracle_standard_monomials([(1, 0), (0, 3)], 2) == ("finite", 3)


def test_codimension_dims_nondecreasing_and_bounded():
    I = ideal(3, 12, {(1, 0, 0): ONE, (0, 2, 0): ONE}, {(0, 0, 2): ONE})
    rep = codimension(I, 8)
    for a, b in zip(rep.dims, rep.dims[1:]):
        assert a <= b
    for k, d in enumerate(rep.dims, start=1):
        assert d <= count_monomials(3, k - 1)


def test_codimension_monotone_under_inclusion():
    small = monomial_ideal(2, 12, [(2, 0)])
    big = monomial_ideal(2, 12, [(2, 0), (0, 2)])
    rs = codimension(small, 8)
    rb = codimension(big, 8)
    assert all(b <= s for b, s in zip(rb.dims, rs.dims))


def test_codimension_variable_certificates_verify():
    I = monomial_ideal(3, 12, [(2, 0, 0), (0, 2, 0), (0, 0, 3), (1, 1, 0)])
    rep = codimension(I, 8)
    assert rep.verdict == "finite"
    for vc in rep.variable_certificates:
        zje = mono(3, 12, tuple(vc.exponent if i == vc.variable else 0 for i in range(3)))
        assert verify_combination(zje, I, vc.combination, 7)


def test_codimension_binomial_substitution_case():
    # (z1 - z2, z2^2): eliminating z1 leaves one variable modulo z2^2
    I = ideal(2, 12, {(1, 0): ONE, (0, 1): -ONE}, {(0, 2): ONE})
    rep = codimension(I, 8)
    assert rep.verdict == "finite" and rep.value == 2
    assert oracle_standard_monomials([(2,)], 1) == ("finite", 2)


def test_codimension_principal_binomial_unresolved():
    I = ideal(2, 14, {(2, 0): ONE, (0, 3): -ONE})
    rep = codimension(I, 10)
    assert rep.verdict == "unresolved"
    assert rep.dims[0] == 1
    assert rep.dims[3] == 7  # 2k-1 for k >= 2


# ---------------------------------------------------------------------------
# powers of the maximal ideal
# ---------------------------------------------------------------------------


def test_max_power_subset_basic():
    I = monomial_ideal(2, 12, [(2, 0), (1, 1), (0, 2)])
    assert max_power_subset(I, 2, 6)
    I2 = monomial_ideal(2, 12, [(1, 0)])
    assert not max_power_subset(I2, 2, 6)
    assert not max_power_subset(I2, 4, 8)


def test_max_power_subset_after_substitution():
    I = ideal(2, 12, {(1, 0): ONE, (0, 1): -ONE}, {(0, 2): ONE})
    assert max_power_subset(I, 2, 6)


# ---------------------------------------------------------------------------
# radicals
# ---------------------------------------------------------------------------


def test_radical_power_three():
    I = monomial_ideal(2, 12, [(3, 0)])
    p, combo = radical_membership(mono(2, 12, (1, 0)), I, 5, 9)
    assert p == 3


def test_radical_with_unit_factor():
    u = series(2, 12, {(0, 0): ONE, (1, 0): ONE})
    gsq = series(2, 12, {(1, 0): ONE, (0, 1): ONE}) ** 2
    I = IdealPresentation(2, [gsq * u])
    f = series(2, 12, {(1, 0): ONE, (0, 1): ONE})
    p, _ = radical_membership(f, I, 5, 9)
    assert p == 2


def test_radical_not_member():
    I = monomial_ideal(2, 12, [(1, 0)])
    assert radical_membership(mono(2, 12, (0, 1)), I, 4, 8) is None


def test_radical_unresolved_transfer():
    # principal prime-like generator: both it and its radical generator stay
    # unresolved at every level
    P = ideal(2, 14, {(2, 0): ONE, (0, 3): -ONE})
    rad_gen = ideal(2, 14, {(2, 0): ONE, (0, 3): -ONE})
    assert codimension(P, 10).verdict == "unresolved"
    assert codimension(rad_gen, 10).verdict == "unresolved"


# ---------------------------------------------------------------------------
# intersections
# ---------------------------------------------------------------------------


def test_intersection_both_finite_verified():
    M2 = monomial_ideal(2, 12, [(2, 0), (1, 1), (0, 2)])
    M3 = monomial_ideal(2, 12, [(3, 0), (2, 1), (1, 2), (0, 3)])
    rep = intersection_diagnostic(M2, M3, 8)
    assert rep.both_finite
    assert rep.intersection_level == 3
    assert rep.intersection_verified


def test_intersection_one_unresolved():
    I1 = monomial_ideal(2, 12, [(1, 0)])
    M2 = monomial_ideal(2, 12, [(2, 0), (1, 1), (0, 2)])
    rep = intersection_diagnostic(I1, M2, 8)
    assert not rep.both_finite
    assert rep.report1.verdict == "unresolved"
    assert rep.report2.verdict == "finite"


def test_intersection_product_unresolved_axes():
    I1 = monomial_ideal(2, 12, [(1, 0)])
    I2 = monomial_ideal(2, 12, [(0, 1)])
    rep = intersection_diagnostic(I1, I2, 8)
    assert rep.report1.verdict == "unresolved"
    assert rep.report2.verdict == "unresolved"
    assert rep.product_report.verdict == "unresolved"
