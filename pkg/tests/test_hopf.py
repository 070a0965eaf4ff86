import pytest

from conftest import same, tensor_to_sympy, to_sympy
from glnalg.hopf import (
    ClosedTwist,
    DegreeGuardExceeded,
    TwistSpec,
    apply_coproduct,
    coassoc_check,
    cocycle_check,
    coordinate_monomials,
    coproduct,
    coproduct_identities_check,
    log_primitivity_check,
    normal_ordered_twist_check,
    realization_via_twist,
    twist_inverse_apply,
    twist_realization_check,
    twisted_coproduct_check,
)
from glnalg.realizations import build_realization
from glnalg.tensor import tensor
from glnalg.weyl import WeylElement, one, x


def test_coproduct_examples(oracle):
    t = oracle["tensor"]
    assert same(tensor_to_sympy(coproduct("zero", 2, 1, 1)), t["zero p11 n=2"])
    assert same(tensor_to_sympy(coproduct("delta", 1, 1, 1)), t["delta p11 n=1"])
    assert same(tensor_to_sympy(coproduct("deltaTilde", 2, 1, 2)), t["deltaTilde p12 n=2"])


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("variant", ["zero", "delta", "deltaTilde"])
def test_coassociativity(n, variant):
    rep = coassoc_check(variant, n)
    assert rep.passed
    assert rep.counts["coassociativity"] == [n * n, 0]


def test_iterated_coproduct_reaches_u_squared():
    from glnalg.hopf import coproduct_images

    d = coproduct("delta", 2, 1, 1)
    lhs = apply_coproduct(d, 0, coproduct_images("delta", 2), 3)
    assert lhs.u_degree() == 2


def test_coassociativity_negative_control():
    assert not coassoc_check("delta", 2, mutate=True).passed


@pytest.mark.parametrize("n", [1, 2, 3])
def test_coproduct_identities(n):
    assert coproduct_identities_check(n).passed


def test_log_primitivity_only_for_n1():
    assert log_primitivity_check(1).passed
    assert not log_primitivity_check(2).passed


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("variant", ["F1", "F2"])
def test_twist_generates_realization(n, variant):
    assert twist_realization_check(n, TwistSpec(variant)).passed


def test_F2_inverse_on_x12(oracle):
    assert same(to_sympy(realization_via_twist(2, TwistSpec("F2"), 1, 2)), oracle["weyl"]["yhat12 n=2"])


def test_inverse_twist_fixes_constant_first_leg():
    f = x(2, 1, 2) * x(2, 2, 1)
    t = tensor(one(2), f)
    for v in ("F1", "F2"):
        assert twist_inverse_apply(TwistSpec(v), t) == t


def test_twist_then_inverse_is_identity():
    n = 2
    for v in ("F1", "F2"):
        fwd = ClosedTwist(n, TwistSpec(v), (0,), (1,), -1)
        inv = ClosedTwist(n, TwistSpec(v), (0,), (1,), +1)
        for a in coordinate_monomials(n, 2):
            for b in coordinate_monomials(n, 1):
                t = tensor(WeylElement.from_monomial(n, a), WeylElement.from_monomial(n, b))
                assert inv.apply(fwd.apply(t)) == t


def test_degree_guard():
    spec = TwistSpec("F1", max_p_degree=1)
    t = tensor(x(1, 1, 1) ** 3, x(1, 1, 1))
    with pytest.raises(DegreeGuardExceeded):
        twist_inverse_apply(spec, t)


def test_twist_spec_validation():
    with pytest.raises(ValueError):
        TwistSpec("F3")
    with pytest.raises(ValueError):
        TwistSpec("F1", max_p_degree=0)


def test_realization_blind_to_second_order_log_mutation():
    # degree-1 first leg: the log series stops at its linear term
    assert twist_realization_check(2, TwistSpec("F1", mutate=True)).passed


@pytest.mark.parametrize("variant", ["F1", "F2"])
def test_twisted_coproduct_n1(variant):
    assert twisted_coproduct_check(1, 3, TwistSpec(variant)).passed


@pytest.mark.parametrize("variant", ["F1", "F2"])
@pytest.mark.parametrize("flipped", [False, True])
def test_twisted_coproduct_n2(variant, flipped):
    rep = twisted_coproduct_check(2, 2, TwistSpec(variant), flipped=flipped)
    assert rep.passed


def test_twisted_coproduct_negative_control():
    assert not twisted_coproduct_check(2, 2, TwistSpec("F1", mutate=True)).passed


@pytest.mark.parametrize("variant", ["F1", "F2"])
def test_cocycle_n1(variant):
    rep = cocycle_check(1, 3, TwistSpec(variant))
    assert rep.passed


@pytest.mark.parametrize("variant", ["F1", "F2"])
def test_cocycle_n2_degree2(variant):
    rep = cocycle_check(2, 2, TwistSpec(variant), keep_passing=False)
    assert rep.passed
    for rel in ("cocycle", "(1xD0)F = F12 F13", "(1xD0)F = F13 F12", "cocycle side = F23 F13 F12"):
        assert rep.relation_passed(rel)
    # F13 and F23 do not commute once n > 1
    assert rep.meta["F13F23_equals_F23F13"] is False


def test_cocycle_negative_control_reports_both_sides():
    rep = cocycle_check(1, 2, TwistSpec("F1", mutate=True), keep_passing=False)
    assert not rep.relation_passed("cocycle")
    bad = [r for r in rep.failures if r.relation == "cocycle"]
    assert "lhs" in bad[0].residual and "rhs" in bad[0].residual


@pytest.mark.parametrize("n,deg", [(1, 3), (2, 2)])
@pytest.mark.parametrize("variant", ["F1", "F2"])
def test_normal_ordered_twist(n, deg, variant):
    rep = normal_ordered_twist_check(n, deg, TwistSpec(variant))
    assert rep.passed
    assert rep.relation_passed("displayed exponent = derived exponent")


def test_normal_ordered_negative_control():
    assert not normal_ordered_twist_check(2, 2, TwistSpec("F2", mutate=True)).passed


def test_realization_from_twist_matches_module():
    for v, r in (("F1", "first"), ("F2", "dualOfFirst")):
        target = build_realization(2, r)
        for mn in target.generators:
            assert realization_via_twist(2, TwistSpec(v), *mn) == target[mn]
