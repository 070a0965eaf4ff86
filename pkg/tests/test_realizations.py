import pytest

from conftest import same, to_sympy
from glnalg.realizations import (
    VARIANTS,
    L,
    RealizationSet,
    Z,
    build_realization,
    bracket_rhs,
    bracket_via_constants,
    second_from_literal,
    structure_constants,
    verify_duality,
    verify_gln,
    verify_ZL_relations,
)
from glnalg.ring import I, U, UPoly
from glnalg.weyl import WeylElement, commutator, p, x


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("variant", VARIANTS)
def test_gln_bracket_all_variants(n, variant):
    rep = verify_gln(build_realization(n, variant))
    assert rep.passed
    assert rep.counts["gln-bracket"] == [n**4, 0]
    assert all(r.residual == "0" for r in rep.records)


def test_n1_first():
    r = build_realization(1, "first")
    assert r[(1, 1)] == x(1, 1, 1) + x(1, 1, 1) * p(1, 1, 1) * U


def test_u_zero_is_undeformed():
    for variant in VARIANTS:
        r = build_realization(3, variant, 0)
        for (mu, nu), g in r.generators.items():
            assert g == x(3, mu, nu)
        rep = verify_gln(r)
        assert rep.passed


def test_n2_xhat12(oracle):
    r = build_realization(2, "first")
    assert same(to_sympy(r[(1, 2)]), oracle["weyl"]["xhat12 n=2"])


def test_second_matches_term_by_term_formula():
    for n in (1, 2, 3):
        lit = second_from_literal(n)
        sec = build_realization(n, "second")
        assert all(lit[mn] == sec[mn] for mn in lit)


@pytest.mark.parametrize("variant", VARIANTS)
def test_phi_factorization(variant):
    r = build_realization(3, variant)
    assert all(res.is_zero() for res in r.phi_residuals().values())


def test_structure_constants_reproduce_bracket():
    r = build_realization(2, "first")
    for mn in r.generators:
        for lr in r.generators:
            assert bracket_via_constants(r, mn, lr) == bracket_rhs(r, mn, lr)


def test_literal_constants_carry_an_extra_iu():
    plain = structure_constants(2)
    lit = structure_constants(2, literal=True)
    assert set(plain) == set(lit)
    assert all(lit[k] == plain[k] * I * U for k in plain)
    r = build_realization(2, "first")
    assert bracket_via_constants(r, (1, 2), (2, 1), literal=True) != bracket_rhs(r, (1, 2), (2, 1))


def test_negative_control_deleted_u_term():
    r = build_realization(2, "first")
    gens = dict(r.generators)
    gens[(1, 2)] = gens[(1, 2)].u_part(0)
    rep = verify_gln(RealizationSet(2, "first", r.u, gens, r.phi))
    assert not rep.passed
    assert any(rec.residual != "0" for rec in rep.failures)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_duality(n):
    rep = verify_duality(n)
    assert rep.passed
    assert rep.relation_passed("xhat-yhat-commute")
    assert rep.relation_passed("dual-gln-bracket")
    assert rep.relation_passed("yhat(-u)-gln-bracket")


def test_n1_collapse():
    assert build_realization(1, "first")[(1, 1)] == build_realization(1, "dualOfFirst")[(1, 1)]


def test_yhat_minus_u_differs(oracle):
    xh = build_realization(2, "first")
    ym = build_realization(2, "dualOfFirst", -U)
    assert same(to_sympy(ym[(1, 2)] - xh[(1, 2)]), oracle["weyl"]["yhat12(-u) - xhat12 n=2"])


def test_yhat12(oracle):
    assert same(to_sympy(build_realization(2, "dualOfFirst")[(1, 2)]), oracle["weyl"]["yhat12 n=2"])


def test_duality_negative_control():
    y = build_realization(2, "dualOfFirst")
    gens = dict(y.generators)
    gens[(1, 1)] = gens[(1, 1)].u_part(0)
    rep = verify_duality(2, yhat=RealizationSet(2, "dualOfFirst", y.u, gens, y.phi))
    assert not rep.relation_passed("xhat-yhat-commute")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ZL_relations(n):
    assert verify_ZL_relations(n).passed


def test_ZL_examples(oracle):
    xh = build_realization(2, "first")
    # Kronecker-zero case: mu = 1, lambda = 2
    assert commutator(Z(2, 1, 1), xh[(2, 1)]) == WeylElement(2)
    assert same(to_sympy(commutator(Z(2, 1, 2), xh[(1, 1)])), oracle["weyl"]["[Z12, xhat11] n=2"])
    assert same(to_sympy(commutator(L(2, 1, 2), L(2, 2, 1))), oracle["weyl"]["[L12, L21] n=2"])


def test_build_errors():
    with pytest.raises(ValueError):
        build_realization(0)
    with pytest.raises(ValueError):
        build_realization(2, "third")


def test_with_u():
    r = build_realization(2, "first").with_u(UPoly.const(0))
    assert r[(1, 2)] == x(2, 1, 2)
