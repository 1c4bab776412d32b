"""Division, preparation, discriminants, branches, lifting."""

import random
from fractions import Fraction

import numpy as np
import pytest

from germforge.coeffs import GaussianRational, ONE, ZERO
from germforge.errors import (
    DiscriminantError,
    NormalFormError,
    NotRegularError,
)
from germforge.series import FormalCurve, TruncSeries, pullback
from germforge.weierstrass import (
    NormalForm,
    WeierstrassPoly,
    associated_membership,
    discriminant,
    generic_restrict,
    newton_puiseux,
    prime_curve_lift,
    restrict_to_line,
    weierstrass_divide,
    weierstrass_prepare,
)

from conftest import g, mono, series, uni


def wpoly(degree, *lower):
    """Weierstrass polynomial over one base variable from term dicts."""
    coeffs = [uni(45, terms) for terms in lower]
    return WeierstrassPoly(1, degree, coeffs)


def zero1(prec=45):
    return TruncSeries.zero(1, prec)


# ---------------------------------------------------------------------------
# division
# ---------------------------------------------------------------------------


def test_divide_w_squared_by_cusp():
    P = wpoly(2, {3: -ONE}, {})
    q, r = weierstrass_divide(mono(2, 20, (0, 2)), P, 18)
    assert q == TruncSeries.constant(2, 18, 1)
    assert r == mono(2, 18, (3, 0))


def test_divide_one_step():
    P = wpoly(2, {1: -ONE}, {})
    q, r = weierstrass_divide(mono(2, 20, (0, 3)), P, 18)
    assert q == mono(2, 18, (0, 1))
    assert r == mono(2, 18, (1, 1))


def test_divide_random_reconstruction():
    rng = random.Random(5)
    for _ in range(10):
        b0 = uni(30, {rng.randint(1, 3): g(rng.randint(-2, 2), rng.randint(-1, 1))})
        b1 = uni(30, {rng.randint(1, 3): g(rng.randint(-2, 2))})
        P = WeierstrassPoly(1, 2, [b0, b1])
        f = TruncSeries(
            2,
            30,
            {
                (rng.randint(0, 2), rng.randint(0, 3)): g(rng.randint(-3, 3), 1)
                for _ in range(4)
            },
        )
        N = 14
        q, r = weierstrass_divide(f, P, N)
        assert max((J[-1] for J in r.coeffs), default=0) < 2
        recon = q * P.as_series().jet(N) + r
        assert recon.agrees_with(f, N)


# ---------------------------------------------------------------------------
# preparation
# ---------------------------------------------------------------------------


def test_prepare_already_weierstrass():
    f = series(2, 20, {(0, 2): ONE, (3, 0): -ONE})
    unit, P = weierstrass_prepare(f, 16)
    assert unit == TruncSeries.constant(2, 16, 1)
    assert P.degree == 2
    assert P.coeffs[0] == mono(1, 15, (3,), -1)


def test_prepare_unit_factor():
    # (1 + z1)(w - z1)
    f = series(2, 20, {(0, 1): ONE, (1, 1): ONE, (1, 0): -ONE, (2, 0): -ONE})
    unit, P = weierstrass_prepare(f, 15)
    assert unit == series(2, 15, {(0, 0): ONE, (1, 0): ONE})
    assert P.degree == 1
    assert P.coeffs[0] == mono(1, 15, (1,), -1)


def test_prepare_not_regular():
    with pytest.raises(NotRegularError):
        weierstrass_prepare(mono(2, 10, (1, 0)), 8)


def test_prepare_roundtrip_random():
    rng = random.Random(9)
    for _ in range(8):
        f = TruncSeries(
            2,
            24,
            {
                (0, 2): ONE,
                (rng.randint(1, 2), rng.randint(0, 1)): g(rng.randint(-2, 2)),
                (rng.randint(1, 3), 2): g(rng.randint(-2, 2)),
                (0, 3): g(rng.randint(-1, 1)),
            },
        )
        N = 12
        unit, P = weierstrass_prepare(f, N)
        assert unit.constant_term()
        # the prepared coefficients keep the conservative uniform precision
        recon = unit * P.as_series()
        assert recon.agrees_with(f, recon.precision)
        assert recon.precision >= N - P.degree + 1
        for b in P.coeffs:
            assert not b.constant_term()


# ---------------------------------------------------------------------------
# discriminant
# ---------------------------------------------------------------------------


def test_discriminant_cusp():
    assert discriminant(wpoly(2, {3: -ONE}, {})) == uni(45, {3: g(4)})


def test_discriminant_node():
    assert discriminant(wpoly(2, {2: -ONE}, {})) == uni(45, {2: g(4)})


def test_discriminant_linear_is_unit():
    P = wpoly(1, {1: ONE})
    assert discriminant(P) == TruncSeries.constant(1, 45, 1)


def test_discriminant_depressed_cubic_formula():
    # w^3 + p(t) w + q(t): disc = -4 p^3 - 27 q^2
    p = uni(40, {1: g(2)})
    q = uni(40, {2: g(-1)})
    P = WeierstrassPoly(1, 3, [q, p, zero1(40)])
    expected = p * p * p * g(-4) + q * q * g(-27)
    assert discriminant(P) == expected


def test_discriminant_matches_numeric_root_separation():
    # evaluate at a sample t and compare with prod (a_i - a_j)^2 over i<j
    P = WeierstrassPoly(1, 3, [uni(40, {2: g(-1)}), uni(40, {1: g(2)}), zero1(40)])
    D = discriminant(P)
    t0 = 0.37
    coeffs = [1.0, 0.0, 2.0 * t0, -(t0**2)]
    roots = np.roots(coeffs)
    prod = 1.0
    for i in range(3):
        for j in range(i + 1, 3):
            prod *= (roots[i] - roots[j]) ** 2
    Dval = sum(complex(c) * t0 ** J[0] for J, c in D.coeffs.items())
    assert abs(Dval - prod) < 1e-8 * max(1.0, abs(prod))


# ---------------------------------------------------------------------------
# generic restriction
# ---------------------------------------------------------------------------


def test_restrict_identity_for_one_base_var():
    P = wpoly(2, {3: -ONE}, {})
    L = generic_restrict(P)
    assert L.direction == (1,)
    assert L.s_order == 3


def test_restrict_two_vars_diagonal():
    b0 = TruncSeries(2, 40, {(1, 1): -ONE})
    P = WeierstrassPoly(2, 2, [b0, TruncSeries.zero(2, 40)])
    L = generic_restrict(P)
    assert L.direction == (1, 1)
    assert L.s_order == 2
    assert L.restricted.coeffs[0] == uni(40, {2: -ONE})


def test_restrict_unit_discriminant():
    P = WeierstrassPoly(1, 1, [uni(40, {1: -ONE})])
    L = generic_restrict(P)
    assert L.s_order == 0


def test_restrict_rejects_vanishing_discriminant():
    # (w - t)^2 has discriminant 0
    P = WeierstrassPoly(1, 2, [uni(40, {2: ONE}), uni(40, {1: g(-2)})])
    with pytest.raises(DiscriminantError):
        generic_restrict(P)


# ---------------------------------------------------------------------------
# branches
# ---------------------------------------------------------------------------


def binomial_sqrt_coeffs(n):
    """Coefficients of (1+t)^(1/2) via the recursion c_k = c_{k-1}(1/2-k+1)/k."""
    out = [Fraction(1)]
    for k in range(1, n):
        out.append(out[-1] * (Fraction(1, 2) - k + 1) / k)
    return out


def test_branch_cusp():
    bs = newton_puiseux(wpoly(2, {3: -ONE}, {}), 40)
    assert len(bs) == 1
    b = bs[0]
    assert b.ramification == 2 and b.is_exact
    assert b.w == uni(40, {3: ONE})
    assert b.residual_bound == 0.0


def test_branch_square_root_series():
    P = wpoly(2, {2: -ONE, 3: -ONE}, {})
    bs = newton_puiseux(P, 40)
    assert len(bs) == 2
    expected = binomial_sqrt_coeffs(30)
    plus = next(b for b in bs if b.w.coeff((1,)) == ONE)
    for k, c in enumerate(expected[:20]):
        assert plus.w.coeff((k + 1,)) == GaussianRational(c)
    minus = next(b for b in bs if b.w.coeff((1,)) == -ONE)
    for k, c in enumerate(expected[:20]):
        assert minus.w.coeff((k + 1,)) == GaussianRational(-c)


def test_branch_split_linear():
    P = wpoly(2, {2: g(2)}, {1: g(-3)})
    bs = newton_puiseux(P, 40)
    ws = sorted(str(b.w.coeff((1,))) for b in bs)
    assert ws == ["1", "2"]
    assert all(b.ramification == 1 for b in bs)


def test_branch_third_root():
    bs = newton_puiseux(wpoly(3, {2: -ONE}, {}, {}), 40)
    assert len(bs) == 1
    assert bs[0].ramification == 3
    assert bs[0].w == uni(40, {2: ONE})


def test_branch_gaussian_roots_stay_exact():
    bs = newton_puiseux(wpoly(2, {2: ONE}, {}), 40)
    assert {str(b.w.coeff((1,))) for b in bs} == {"i", "-i"}
    assert all(b.is_exact for b in bs)


def test_branch_floating_fallback_and_exact_only():
    P = wpoly(2, {2: g(-2)}, {})
    bs = newton_puiseux(P, 40)
    assert len(bs) == 2
    assert all(not b.is_exact for b in bs)
    assert all(b.residual_bound <= 1e-9 for b in bs)
    leads = sorted(b.w.coeff(1).real for b in bs)
    assert abs(leads[0] + 2**0.5) < 1e-9 and abs(leads[1] - 2**0.5) < 1e-9
    assert newton_puiseux(P, 40, exact_only=True) == []


def test_branch_zero_factor():
    # w(w - t): one zero branch, one linear branch
    P = wpoly(2, {}, {1: -ONE})
    bs = newton_puiseux(P, 40)
    assert len(bs) == 2
    ws = sorted(str(b.w.coeff((1,))) for b in bs)
    assert ws == ["0", "1"]


def test_branch_residuals_certified_via_substitution():
    cases = [
        wpoly(2, {3: -ONE}, {}),
        wpoly(2, {2: -ONE, 3: -ONE}, {}),
        wpoly(3, {2: -ONE}, {}, {}),
        wpoly(2, {2: g(2)}, {1: g(-3)}),
        wpoly(3, {3: -ONE}, {}, {1: -ONE}),
    ]
    for P in cases:
        for b in newton_puiseux(P, 35):
            assert b.ramification >= 1
            if not b.is_exact:
                continue
            # independent residual: substitute into the series form
            total = TruncSeries.zero(1, 35)
            wp = TruncSeries.constant(1, 35, 1)
            for i in range(P.degree + 1):
                ci = (
                    P.coeffs[i].with_precision(35).substitute_power(b.ramification).with_precision(35)
                    if i < P.degree
                    else TruncSeries.constant(1, 35, 1)
                )
                total = total + ci * wp
                wp = wp * b.w.with_precision(35)
            assert total.is_zero()


def test_branch_multiplicities_sum_to_degree():
    cases = [
        (wpoly(2, {3: -ONE}, {}), 2),
        (wpoly(2, {2: -ONE, 3: -ONE}, {}), 2),
        (wpoly(3, {2: -ONE}, {}, {}), 3),
        (wpoly(2, {2: g(2)}, {1: g(-3)}), 2),
        (wpoly(4, {2: -ONE}, {}, {}, {}), 4),
        (wpoly(2, {}, {1: -ONE}), 2),
    ]
    for P, deg in cases:
        bs = newton_puiseux(P, 30)
        assert sum(b.ramification for b in bs) == deg


def test_branch_rejects_vanishing_discriminant():
    P = wpoly(2, {2: ONE}, {1: g(-2)})  # (w - t)^2
    with pytest.raises(DiscriminantError):
        newton_puiseux(P, 30)


def test_branch_separation_before_discriminant_order():
    # restricted discriminant order s bounds where exact branches separate
    P = wpoly(2, {2: -ONE, 3: -ONE}, {})
    L = generic_restrict(P)
    bs = newton_puiseux(P, 30)
    exact = [b for b in bs if b.is_exact and b.ramification == 1]
    if len(exact) >= 2:
        w1, w2 = exact[0].w, exact[1].w
        diff = w1 - w2
        assert diff.order() is not None and diff.order() <= max(1, L.s_order)


# ---------------------------------------------------------------------------
# normal forms and lifting
# ---------------------------------------------------------------------------


def make_nf_split():
    """p = z2^2 - z1^2, D = 4 z1^2, Q_3 = 4 z1^2 z2 (so q_3 = D z3 - D z2)."""
    p = WeierstrassPoly(1, 2, [mono(1, 45, (2,), -1), zero1()])
    D = mono(1, 45, (2,), 4)
    Q3 = mono(3, 45, (2, 1, 0), 4)
    return NormalForm(3, 1, p, D, [(3, Q3)])


def test_normal_form_validates_discriminant():
    p = WeierstrassPoly(1, 2, [mono(1, 45, (2,), -1), zero1()])
    with pytest.raises(NormalFormError):
        NormalForm(3, 1, p, mono(1, 45, (2,), 3), [(3, TruncSeries.zero(3, 45))])


def test_normal_form_relation_variable_coverage():
    p = WeierstrassPoly(1, 2, [mono(1, 45, (2,), -1), zero1()])
    D = mono(1, 45, (2,), 4)
    with pytest.raises(NormalFormError):
        NormalForm(3, 1, p, D, [])


def test_lift_zero_numerator():
    # p = z2^2 - z1^3, Q_3 = 0: the cusp curve lifts with a zero component
    p = WeierstrassPoly(1, 2, [mono(1, 45, (3,), -1), zero1()])
    nf = NormalForm(3, 1, p, mono(1, 45, (3,), 4), [(3, TruncSeries.zero(3, 45))])
    base = FormalCurve([mono(1, 42, (2,)), mono(1, 42, (3,))])
    lift = prime_curve_lift(nf, base, 40)
    assert lift.curve.components[2].is_zero()
    assert lift.generator_orders["p"] >= 40
    assert lift.generator_orders["q_3"] >= 40


def test_lift_division_example():
    nf = make_nf_split()
    base = FormalCurve([mono(1, 42, (1,)), mono(1, 42, (1,))])
    lift = prime_curve_lift(nf, base, 40)
    assert lift.divisor_order == 2
    assert lift.curve.components[2] == lift.curve.components[1]
    for label, order in lift.generator_orders.items():
        assert order >= 40, label


def test_lift_order_condition_violation():
    # Q_3 of too-low order contradicts the normal-form hypotheses
    p = WeierstrassPoly(1, 2, [mono(1, 45, (2,), -1), zero1()])
    D = mono(1, 45, (2,), 4)
    bad = NormalForm.__new__(NormalForm)
    # bypass validation to simulate corrupted data honestly marked
    bad.nvars, bad.k, bad.p, bad.discriminant = 3, 1, p, D
    bad.relations = ((3, mono(3, 45, (1, 0, 0), 1)),)
    base = FormalCurve([mono(1, 42, (1,)), mono(1, 42, (1,))])
    with pytest.raises(NormalFormError):
        prime_curve_lift(bad, base, 30)


def test_lift_requires_annihilating_base():
    nf = make_nf_split()
    base = FormalCurve([mono(1, 42, (1,)), mono(1, 42, (2,))])
    with pytest.raises(NormalFormError):
        prime_curve_lift(nf, base, 30)


def test_associated_membership_relation_itself():
    nf = make_nf_split()
    q3 = nf.q_series(3)
    nu, combo = associated_membership(q3, nf, 3, 30)
    assert nu == 0


def test_associated_membership_division_by_discriminant():
    nf = make_nf_split()
    f = series(3, 45, {(0, 0, 1): ONE, (0, 1, 0): -ONE})  # z3 - z2
    nu, combo = associated_membership(f, nf, 3, 30)
    assert nu == 1


def test_associated_membership_cap_respected():
    nf = make_nf_split()
    f = mono(3, 45, (0, 1, 0))  # z2 alone never enters
    assert associated_membership(f, nf, 2, 20) is None
