import json
from fractions import Fraction

import numpy as np
import pytest

from conftest import same, to_sympy
from glnalg.general import (
    InvalidSpec,
    SimilaritySpec,
    TruncatedSeries,
    adjoint_transform,
    automorphism_check,
    builtin_specs,
    consistency_check,
    coproduct_prime,
    general_realization,
    lambda_inverse,
    lambda_map,
    lambda_roundtrip_check,
    prime_coassoc_check,
    prime_composition_numeric,
    primed_bracket_check,
    rescaling_spec,
    twist_family_check,
)
from glnalg.hopf import coproduct
from glnalg.realizations import build_realization
from glnalg.ring import U, UPoly
from glnalg.weyl import WeylElement, p, x

SPECS = builtin_specs(3)
NON_IDENTITY = [k for k, s in SPECS.items() if not s.is_identity()]


def test_builtin_set_has_three_non_identity_specs():
    assert len(NON_IDENTITY) >= 3
    assert SPECS["identity-n2"].is_identity()


# ------------------------------------------------------------ spec type


def test_spec_rejects_coordinates():
    with pytest.raises(InvalidSpec):
        SimilaritySpec(1, {(1, 1): x(1, 1, 1) * U})


def test_spec_rejects_u0_term():
    with pytest.raises(InvalidSpec):
        SimilaritySpec(1, {}, p(1, 1, 1))


def test_spec_rejects_bad_index():
    with pytest.raises(InvalidSpec):
        SimilaritySpec(1, {(2, 1): p(1, 1, 1) * U})


@pytest.mark.parametrize("name", sorted(SPECS))
def test_spec_json_roundtrip(name, tmp_path):
    s = SPECS[name]
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(s.to_dict()))
    back = SimilaritySpec.load(path)
    assert back.S == s.S and back.T == s.T and back.n == s.n and back.order == s.order


def test_spec_json_validation():
    doc = {"n": 1, "S": {"1,1": [{"uPower": 0, "coefficient": "1", "pMonomial": "p[1,1]"}]}}
    with pytest.raises(InvalidSpec):
        SimilaritySpec.from_dict(doc)
    doc = {"n": 1, "S": {"1,1": [{"uPower": 1, "coefficient": "1", "pMonomial": "x[1,1]"}]}}
    with pytest.raises(InvalidSpec):
        SimilaritySpec.from_dict(doc)
    with pytest.raises(InvalidSpec):
        SimilaritySpec.from_dict({"S": {}})
    doc = {"n": 1, "S": {"1,1": [{"uPower": 2, "coefficient": ["1/2", "-3"], "pMonomial": "p[1,1]^2"}]}}
    s = SimilaritySpec.from_dict(doc)
    assert s.S[(1, 1)] == p(1, 1, 1) ** 2 * (UPoly.const(Fraction(1, 2), -3) * U**2)


def test_truncated_series_arithmetic():
    a = TruncatedSeries(p(1, 1, 1) * U + p(1, 1, 1) * U**3, 2)
    assert a.element == p(1, 1, 1) * U
    sq = a * a
    assert sq.element == p(1, 1, 1) ** 2 * U**2
    assert (a * a * a).is_zero()
    assert (a - a).is_zero()


# ------------------------------------------------------------ adjoint action


def test_identity_adjoint_is_trivial():
    s = SPECS["identity-n2"]
    for e in (x(2, 1, 2), p(2, 2, 1), x(2, 1, 1) * p(2, 2, 2)):
        assert adjoint_transform(s, e).element == e


def test_adjoint_shift_example(oracle):
    s = SimilaritySpec(1, {}, p(1, 1, 1) * U, 3)
    assert same(to_sympy(adjoint_transform(s, x(1, 1, 1)).element), oracle["weyl"]["Ad_T x11"])


@pytest.mark.parametrize("name", sorted(SPECS))
def test_momenta_stay_momentum_only(name):
    s = SPECS[name]
    for e in lambda_map(s).values():
        assert not e.has_coordinates()


@pytest.mark.parametrize("name", sorted(SPECS))
def test_automorphism(name):
    assert automorphism_check(SPECS[name]).passed


# ------------------------------------------------------------ Lambda


def test_lambda_inverse_identity():
    lam = {0: p(1, 1, 1)}
    assert lambda_inverse(lam, 3) == lam


def test_lambda_inverse_series(oracle):
    order = 5
    lam = {0: p(1, 1, 1) + p(1, 1, 1) ** 2 * U}
    inv = lambda_inverse(lam, order)[0]
    expected = WeylElement(1)
    for k, c in enumerate(oracle["lambda_inverse_u_coefficients"]):
        expected = expected + p(1, 1, 1) ** (k + 1) * (UPoly.const(int(c)) * U**k)
    assert inv == expected


def test_lambda_inverse_rejects_non_identity_start():
    with pytest.raises(InvalidSpec):
        lambda_inverse({0: p(1, 1, 1) * 2}, 3)


@pytest.mark.parametrize("name", sorted(SPECS))
def test_lambda_roundtrip(name):
    assert lambda_roundtrip_check(SPECS[name]).passed


@pytest.mark.parametrize("name", ["quadratic-n1", "mixed-n2"])
def test_lambda_roundtrip_negative_control(name):
    assert not lambda_roundtrip_check(SPECS[name], mutate=True).passed


# ------------------------------------------------------------ realizations


def test_identity_spec_primed_frame():
    s = SPECS["identity-n2"]
    r = general_realization(s)
    base = build_realization(2, "first")
    for key, val in r.phi.items():
        assert val.element == base.phi[key]
    assert all(c.is_zero() for c in r.chi.values())
    assert r.roundtrip_ok()


def test_shift_only_spec_has_chi():
    s = SimilaritySpec(2, {}, p(2, 1, 1) * U + p(2, 2, 1) * U * U, 3, "shift")
    r = general_realization(s)
    assert any(not c.is_zero() for c in r.chi.values())
    assert r.roundtrip_ok()
    assert primed_bracket_check(s).passed


def test_rescaling_spec_roundtrip_at_order_2():
    s = rescaling_spec(2)
    for v in ("xhat", "yhat"):
        r = general_realization(s, v)
        assert r.roundtrip_ok()


@pytest.mark.parametrize("name", sorted(SPECS))
def test_primed_brackets(name):
    assert primed_bracket_check(SPECS[name]).passed


# ------------------------------------------------------------ coproducts


def test_identity_coproduct_prime():
    s = SPECS["identity-n2"]
    for mn in ((1, 1), (1, 2), (2, 1)):
        assert coproduct_prime(s, *mn) == coproduct("delta", 2, *mn)
        assert coproduct_prime(s, *mn, variant="deltaTilde") == coproduct("deltaTilde", 2, *mn)


@pytest.mark.parametrize("name", sorted(SPECS))
def test_prime_coassociativity(name):
    assert prime_coassoc_check(SPECS[name]).passed


def test_numeric_composition_error_scales_with_truncation_order():
    s = builtin_specs(2)["quadratic-n1"]
    k, q = np.array([[0.4]]), np.array([[-0.3]])
    errs = [prime_composition_numeric(s, k, q, u) for u in (0.02, 0.01)]
    ratio = errs[0] / errs[1]
    # u^(N+1) with N = 2
    assert 6 < ratio < 10


# ------------------------------------------------------------ consistency


@pytest.mark.parametrize("name", sorted(SPECS))
def test_consistency(name):
    rep = consistency_check(SPECS[name])
    assert rep.passed
    assert rep.meta["precondition_S_p_degree_ge_2"]


def test_consistency_needs_quadratic_S():
    rep = consistency_check(rescaling_spec())
    assert not rep.meta["precondition_S_p_degree_ge_2"]
    assert not rep.passed


# ------------------------------------------------------------ twist family

FAMILY = [k for k, s in SPECS.items() if s.T.is_zero()]


@pytest.mark.parametrize("name", FAMILY)
def test_twist_family(name):
    rep = twist_family_check(SPECS[name], (0, Fraction(1, 2), 1), max_deg=2)
    assert rep.passed
    assert rep.relation_passed("F1(s) = flip F2(1-s)")
    assert rep.relation_passed("star product independent of s")


def test_family_reproduces_closed_form_at_s0():
    rep = twist_family_check(SPECS["identity-n1"], (0,), max_deg=3)
    assert rep.relation_passed("s=0 reproduces closed-form F1")


def test_family_literal_dual_display_is_not_s_independent():
    rep = twist_family_check(SPECS["identity-n1"], (0, Fraction(1, 2), 1), max_deg=2)
    assert rep.meta["literal_F2_display_changes_star_product"] is True


def test_family_negative_control():
    assert not twist_family_check(SPECS["identity-n2"], max_deg=2, mutate=True).passed


def test_family_rejects_shifted_spec():
    with pytest.raises(InvalidSpec):
        twist_family_check(SPECS["shifted-n2"])
