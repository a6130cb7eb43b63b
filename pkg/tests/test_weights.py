import pytest

from toroidal.cartan import standard_params, subalgebra_params
from toroidal.exact import Mono
from toroidal.weights import (
    WeightFunction,
    character_series,
    decomposition_parameters,
    euler_inverse_power,
    fock_weight,
    hw_constraint_holds,
    hw_from_affine,
    hw_iota_dual_holds,
    k_bar_product_psi,
    kappa_context,
    kappa_mono,
    partition_counts,
    psi_from_decomposition,
    psi_from_fock_factors,
    verify_characters,
    verify_hw_suite,
    verify_weight_identity,
    weights_top,
)


def test_hw_n2_explicit():
    ctx = kappa_context(2)
    P = hw_from_affine(ctx, 2, "q3")
    k0 = ctx.mono(1, k0=1)
    up = ctx.mono(1, uprime=1)
    assert P[0].const == k0
    assert P[0].num == (k0.inv().mul(k0.inv()).mul(up),)
    assert P[0].den == (up,)
    # second component: kappa_1 (1 - q3 (k0 k1)^-2 u'/z) / (1 - q3 k0^-2 u'/z)
    q3 = ctx.mono(1, q=-1, d=-1)
    k1 = kappa_mono(ctx, 2, 1)
    assert P[1].const == k1
    assert P[1].num == (q3.mul(k0.pow(-2)).mul(k1.pow(-2)).mul(up),)
    assert P[1].den == (q3.mul(k0.pow(-2)).mul(up),)


def test_hw_q1_variant_component0():
    ctx = kappa_context(3)
    P = hw_from_affine(ctx, 3, "q1")
    k0 = ctx.mono(1, k0=1)
    up = ctx.mono(1, uprime=1)
    assert P[0].const == k0
    assert P[0].num == (up,)
    assert P[0].den == (k0.pow(2).mul(up),)


def test_hw_p0pinf_and_constraint():
    for n in (2, 3, 4, 5):
        ctx = kappa_context(n)
        assert hw_constraint_holds(ctx, n)
        for variant in ("q3", "q1"):
            for P in hw_from_affine(ctx, n, variant):
                assert P.value_zero().mul(P.value_inf()).is_one()


def test_hw_iota_duality():
    for n in (2, 3, 4, 5):
        ctx = kappa_context(n)
        assert hw_iota_dual_holds(ctx, n), n


def test_hw_suite():
    assert verify_hw_suite([2, 3, 4, 5]).ok()


def test_fock_weight_shape():
    top = weights_top(2)
    ctx = top.ctx
    ps = standard_params(ctx, 2)
    u = ctx.mono(1, u=1)
    w = fock_weight(ctx, ps.q3, u)
    assert w.num == (ps.q3.inv().mul(u),)
    assert w.den == (u,)
    assert w.value_zero().mul(w.value_inf()).is_one()


def test_kbar_product_n2_m_both():
    top = weights_top(2)
    p = top.gz.zero_pattern()
    for m in (0, 1):
        lhs = k_bar_product_psi(top, m, p)
        rhs = psi_from_decomposition(top, m, p)
        assert lhs.equals(rhs, top.ctx), m


def test_psibar_telescoping_counts():
    top = weights_top(3)
    p = top.gz.zero_pattern()
    for m in range(3):
        rhs = psi_from_decomposition(top, m, p)
        assert len(rhs.num) == 2 * m + 1
        assert len(rhs.den) == 2 * m + 1


def test_fock_parameter_monomials():
    # q_{3,m}^-1 u_{l,m} = q2^(lam-l) utilde and the q1 counterpart
    top = weights_top(3)
    ctx = top.ctx
    ps = standard_params(ctx, 3)
    p = top.gz.zero_pattern()
    for m in range(3):
        sub = subalgebra_params(ps, m, "E1m")
        for l in range(m + 1):
            u_lm, v = decomposition_parameters(top, m, l, p)
            assert sub.q3.inv().mul(u_lm) is not None
    rep = verify_weight_identity([2, 3])
    assert rep.ok()


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_weight_identity(n):
    rep = verify_weight_identity([n])
    assert rep.ok(), [c.as_dict() for c in rep.checks if c.status != "pass"][:3]


def test_weight_identity_negative_control():
    rep = verify_weight_identity([2], mutate_ubar=True)
    failing = [c for c in rep.checks if c.id == "weights.psibar" and c.status == "fail"]
    assert failing


def test_characters_fock():
    assert character_series("fock", 3) == [1, 1, 2, 3]
    assert character_series("fock", 12) == partition_counts(12)


def test_characters_w_n2():
    assert character_series("W", 2, n=2) == [1, 4, 14]


def test_characters_wm0():
    assert character_series("W_m", 10, m=0) == character_series("fock", 10)


def test_characters_suite():
    assert verify_characters().ok()


def test_euler_convolution_oracle():
    # (x)_inf^-4 coefficients by direct 4-fold convolution of partitions
    depth = 8
    p = partition_counts(depth)
    conv = [1] + [0] * depth
    for _ in range(4):
        new = [0] * (depth + 1)
        for a in range(depth + 1):
            for b in range(depth + 1 - a):
                new[a + b] += conv[a] * p[b]
        conv = new
    assert conv == euler_inverse_power(4, depth)
