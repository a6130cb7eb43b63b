import pytest

from toroidal.cartan import (
    CartanContext,
    affine_hx_poly,
    d_factor,
    deformed_cartan,
    g_factor_poly,
    iota_index,
    mono_root_power,
    standard_params,
    subalgebra_params,
    zr_coefficient,
    zr_null_scalar,
)
from toroidal.exact import Context, RatFunc, qint


def make_ctx(L=2):
    return Context(["q", "d", "z", "w"], L=L)


def test_pairing_basics():
    cc = CartanContext(3)
    assert cc.pairing(cc.alpha(1), cc.alpha(1)) == 2
    assert cc.pairing(cc.alpha(1), cc.Lambda(1)) == 1
    assert cc.pairing(cc.alpha(1), cc.alpha(2)) == -1


def test_pairing_lambda_delta():
    for n in (2, 3, 4, 5):
        cc = CartanContext(n)
        for i in range(1, n):
            for j in range(1, n):
                assert cc.pairing(cc.alpha(i), cc.Lambda(j)) == (1 if i == j else 0)


def test_alpha0_is_minus_sum():
    for n in (1, 2, 3, 4):
        cc = CartanContext(n)
        total = cc.alpha(0)
        for i in range(1, n):
            total = cc.add(total, cc.alpha(i))
        assert total == (0,) * n


def test_cartan_row_sums():
    for n in (2, 3, 4, 5):
        cc = CartanContext(n)
        for i in range(n):
            assert sum(cc.cartan_matrix_entry(i, j) for j in range(n)) == 0


def test_n1_cartan_zero():
    cc = CartanContext(1)
    assert cc.cartan_matrix_entry(0, 0) == 0


def test_deformed_cartan_examples():
    ctx = make_ctx()
    a = deformed_cartan(ctx, 3, 0, 0, 1)
    assert a.equals(ctx.rat(ctx.sym("q") + ctx.sym("q", -1)))
    b = deformed_cartan(ctx, 3, 0, 1, 1)
    assert b.equals(ctx.rat(-ctx.sym("d")))
    c = deformed_cartan(ctx, 1, 0, 0, 1)
    expect = ctx.sym("q") + ctx.sym("q", -1) - ctx.sym("d") - ctx.sym("d", -1)
    assert c.equals(ctx.rat(expect))


def test_deformed_cartan_r_denominator():
    ctx = make_ctx()
    a = deformed_cartan(ctx, 3, 1, 1, 2)
    assert a.equals(ctx.rat(qint(ctx, 2) * (ctx.sym("q", 2) + ctx.sym("q", -2)), ctx.const(2)))


def test_deformed_cartan_d_inversion_symmetry():
    ctx = make_ctx()
    flip = {"d": ctx.mono(1, d=-1)}
    for n in (1, 2, 3, 4):
        for i in range(n):
            for j in range(n):
                for r in (-4, -2, -1, 1, 2, 3, 4):
                    lhs = deformed_cartan(ctx, n, i, j, r).subs_mono(flip)
                    rhs = deformed_cartan(ctx, n, j, i, r)
                    assert lhs.equals(rhs), (n, i, j, r)


def test_g_factor_examples():
    ctx = make_ctx()
    z, w = ctx.mono(1, z=1), ctx.mono(1, w=1)
    ps3 = standard_params(ctx, 3)
    g = g_factor_poly(ps3, 0, 1, z, w)
    assert g == ctx.sym("z") - ctx.sym("q", -1) * ctx.sym("d") * ctx.sym("w")
    assert d_factor(ps3, 0, 1) == ctx.mono(1, d=-1)

    ps2 = standard_params(ctx, 2)
    g2 = g_factor_poly(ps2, 0, 1, z, w)
    q1w = ctx.sym("q", -1) * ctx.sym("d") * ctx.sym("w")
    q3w = ctx.sym("q", -1) * ctx.sym("d", -1) * ctx.sym("w")
    assert g2 == (ctx.sym("z") - q1w) * (ctx.sym("z") - q3w)
    assert d_factor(ps2, 0, 1) == ctx.mono(-1)

    ps1 = standard_params(ctx, 1)
    g1 = g_factor_poly(ps1, 0, 0, z, w)
    q2w = ctx.sym("q", 2) * ctx.sym("w")
    assert g1 == (ctx.sym("z") - q1w) * (ctx.sym("z") - q2w) * (ctx.sym("z") - q3w)
    assert d_factor(ps1, 0, 0) == ctx.mono(1)


def test_d_factor_inverse_pairs():
    ctx = make_ctx()
    for n in (3, 4, 5):
        ps = standard_params(ctx, n)
        for i in range(n):
            for j in range(n):
                assert d_factor(ps, i, j).mul(d_factor(ps, j, i)).is_one()
    ps2 = standard_params(ctx, 2)
    for i in range(2):
        for j in range(2):
            m = d_factor(ps2, i, j)
            assert m.mul(m).is_one()


def test_subalgebra_params_boundaries():
    ctx = make_ctx()
    for n in (2, 3, 4):
        ps = standard_params(ctx, n)
        top = subalgebra_params(ps, n - 1, "E1m")
        assert top.q1 == ps.q1.pow(n)
        assert top.q3 == ps.q3.mul(ps.q1.pow(-(n - 1)))
        bot = subalgebra_params(ps, 0, "E1m")
        assert bot.q1 == ps.q1.mul(ps.q3.pow(-(n - 1)))
        assert bot.q3 == ps.q3.pow(n)
        for m in range(n):
            sub = subalgebra_params(ps, m, "E1m")
            assert sub.q1.mul(sub.q2).mul(sub.q3).is_one()


def test_tilde_params():
    n = 3
    ctx = Context(["q", "d", "z", "w"], L=2 * (n - 1))
    ps = standard_params(ctx, n)
    t01 = subalgebra_params(ps, None, "tilde01")
    root = mono_root_power(ps.q1, 1, n - 1, ctx)
    assert t01.q1 == ps.q1.mul(root)
    assert t01.q3 == ps.q3.mul(root.inv())
    t0n1 = subalgebra_params(ps, None, "tilde0n1")
    root3 = mono_root_power(ps.q3, 1, n - 1, ctx)
    assert t0n1.q1 == ps.q1.mul(root3.inv())
    assert t0n1.q3 == ps.q3.mul(root3)


def test_iota_swap():
    ctx = make_ctx()
    ps = standard_params(ctx, 3)
    sw = ps.iota()
    assert sw.q1 == ps.q3 and sw.q3 == ps.q1 and sw.q2 == ps.q2
    assert sw.iota().q1 == ps.q1
    for n in (2, 3, 4):
        for i in range(n):
            assert iota_index(n, iota_index(n, i)) == i


def test_zr_null_identity():
    ctx = make_ctx()
    for n in (2, 3, 4):
        for j in range(1, n):
            for r in range(1, 5):
                s = zr_null_scalar(ctx, n, j, r)
                assert s.is_zero(), (n, j, r)


def test_affine_hx_matches_bracket_for_n3():
    # for n >= 3 the multi-hit form equals [r a_{ij}]/[r]
    ctx = make_ctx()
    for n in (3, 4):
        cc = CartanContext(n)
        for i in range(n):
            for j in range(n):
                for r in (1, 2, 3):
                    a = cc.cartan_matrix_entry(i, j)
                    lhs = ctx.rat(affine_hx_poly(ctx, n, i, j, r)) * ctx.rat(qint(ctx, r))
                    rhs = ctx.rat(qint(ctx, r * a))
                    assert lhs.equals(rhs), (n, i, j, r)


def test_zr_bracket_with_itself():
    # [Z_r, Z_-r] = -[nr]/r * eta_r: check the eta-stripped scalar
    ctx = make_ctx()
    for n in (2, 3):
        for r in (1, 2, 3):
            total = RatFunc(ctx.zero(), ctx.one())
            for i in range(n):
                for j in range(n):
                    ci = zr_coefficient(ctx, n, i, r)
                    cj = zr_coefficient(ctx, n, j, -r)
                    hh = ctx.rat(qint(ctx, r) * affine_hx_poly(ctx, n, i, j, r), ctx.const(r))
                    total = total + ci * cj * hh
            expect = ctx.rat(-qint(ctx, n * r), ctx.const(r))
            assert total.equals(expect), (n, r)
