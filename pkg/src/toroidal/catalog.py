"""Machine-readable catalog of the defining relations.

Three algebras are covered: quantum gl_n in component (mode) form, the
quantum affine algebra in Chevalley component form, and the toroidal
algebra in current form.  Verifier suites iterate the catalog and check
each instance for zero, so every displayed defining relation has exactly
one template here; the template count is frozen in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cartan import CartanContext, d_factor, g_factor_poly
from .exact import Context, Mono, RatFunc, qbinom, qint
from .currents import Alphabet, CurrentExpr, Term


@dataclass(frozen=True)
class RelationTemplate:
    id: str
    algebra: str
    family: str
    arity: str


def enumerate_relations(algebra, n, family=None):
    """All relation templates of one algebra at rank n."""
    if algebra == "gln":
        out = [
            RelationTemplate("gln.qh_mult", "gln", "cartan", "r,s"),
            RelationTemplate("gln.qh_e", "gln", "cartan", "r,i"),
            RelationTemplate("gln.qh_f", "gln", "cartan", "r,i"),
            RelationTemplate("gln.ef", "gln", "EF", "i,j"),
            RelationTemplate("gln.ee_comm", "gln", "EE", "i,j"),
            RelationTemplate("gln.ff_comm", "gln", "FF", "i,j"),
            RelationTemplate("gln.serre_e", "gln", "serre", "i,j adjacent"),
            RelationTemplate("gln.serre_f", "gln", "serre", "i,j adjacent"),
        ]
    elif algebra == "affine_chev":
        out = [
            RelationTemplate("aff.chev.kk", "affine_chev", "cartan", "i,j"),
            RelationTemplate("aff.chev.ke", "affine_chev", "KE", "i,j"),
            RelationTemplate("aff.chev.kf", "affine_chev", "KF", "i,j"),
            RelationTemplate("aff.chev.ef", "affine_chev", "EF", "i,j"),
            RelationTemplate("aff.chev.serre_e", "affine_chev", "serre", "i != j"),
            RelationTemplate("aff.chev.serre_f", "affine_chev", "serre", "i != j"),
            RelationTemplate("aff.chev.k0prod", "affine_chev", "cartan", "-"),
        ]
    elif algebra == "affine_drinfeld":
        out = [
            RelationTemplate("aff.drin.qh_x", "affine_drinfeld", "cartan", "r,i,sign"),
            RelationTemplate("aff.drin.hh", "affine_drinfeld", "HH", "i,j,r,s"),
            RelationTemplate("aff.drin.hx", "affine_drinfeld", "HE", "i,j,r,sign"),
            RelationTemplate("aff.drin.ef", "affine_drinfeld", "EF", "i,j"),
            RelationTemplate("aff.drin.xx_quad", "affine_drinfeld", "EE", "i,j,sign adjacent"),
            RelationTemplate("aff.drin.xx_comm", "affine_drinfeld", "EE", "i,j,sign a_ij=0"),
            RelationTemplate("aff.drin.serre", "affine_drinfeld", "serre", "i,j,sign a_ij=-1"),
        ]
    elif algebra == "toroidal":
        out = [
            RelationTemplate("tor.qh_E", "toroidal", "cartan", "r,i"),
            RelationTemplate("tor.qh_F", "toroidal", "cartan", "r,i"),
            RelationTemplate("tor.KK1", "toroidal", "KK", "i,j,sign"),
            RelationTemplate("tor.KK2", "toroidal", "KK", "i,j"),
            RelationTemplate("tor.KE", "toroidal", "KE", "i,j,sign"),
            RelationTemplate("tor.KF", "toroidal", "KF", "i,j,sign"),
            RelationTemplate("tor.EF", "toroidal", "EF", "i,j"),
            RelationTemplate("tor.EE", "toroidal", "EE", "i,j"),
            RelationTemplate("tor.EE_comm", "toroidal", "EE", "i,j distant"),
            RelationTemplate("tor.FF", "toroidal", "FF", "i,j"),
            RelationTemplate("tor.FF_comm", "toroidal", "FF", "i,j distant"),
            RelationTemplate(f"tor.serre_E.n{min(n, 3)}", "toroidal", "serre", "i,j"),
            RelationTemplate(f"tor.serre_F.n{min(n, 3)}", "toroidal", "serre", "i,j"),
            RelationTemplate("tor.quad_E", "toroidal", "quad-component", "i,k,l"),
            RelationTemplate("tor.quad_F", "toroidal", "quad-component", "i,k,l"),
        ]
    else:
        raise ValueError(f"unknown algebra {algebra!r}")
    if family is not None:
        out = [t for t in out if t.family == family]
    return out


# -- component (token) relations ----------------------------------------------------
#
# A component relation is a list of (coeff, word) pairs summing to zero;
# words are tuples of tokens ("e", i), ("f", i), ("qh", hvec).


def _one(ctx):
    return RatFunc(ctx.one(), ctx.one())


def _qpow(ctx, k):
    return RatFunc(ctx.sym("q", k), ctx.one())


def _inv_qq(ctx):
    return RatFunc(ctx.one(), ctx.sym("q") - ctx.sym("q", -1))


def serre_component_terms(ctx, kind, i, j, a_ij):
    """Quantum Serre in the Gaussian-binomial form for any a_ij <= 0."""
    N = 1 - a_ij
    terms = []
    for k in range(N + 1):
        coeff = RatFunc(qbinom(ctx, N, k) * ((-1) ** k), ctx.one())
        word = ((kind, i),) * (N - k) + ((kind, j),) + ((kind, i),) * k
        terms.append((coeff, word))
    return terms


def gln_relation_instances(ctx: Context, n: int):
    """Every defining relation of quantum gl_n, fully instantiated."""
    cc = CartanContext(n)
    out = []
    for r in range(n):
        for s in range(n):
            er, es = cc.eps(r), cc.eps(s)
            out.append(
                (
                    "gln.qh_mult",
                    (r, s),
                    [(_one(ctx), (("qh", er), ("qh", es))), (-_one(ctx), (("qh", cc.add(er, es)),))],
                )
            )
    for r in range(n):
        er = cc.eps(r)
        ner = cc.neg(er)
        for i in range(1, n):
            pair = cc.pairing(er, cc.alpha(i))
            out.append(
                (
                    "gln.qh_e",
                    (r, i),
                    [
                        (_one(ctx), (("qh", er), ("e", i), ("qh", ner))),
                        (-_qpow(ctx, pair), (("e", i),)),
                    ],
                )
            )
            out.append(
                (
                    "gln.qh_f",
                    (r, i),
                    [
                        (_one(ctx), (("qh", er), ("f", i), ("qh", ner))),
                        (-_qpow(ctx, -pair), (("f", i),)),
                    ],
                )
            )
    for i in range(1, n):
        for j in range(1, n):
            terms = [
                (_one(ctx), (("e", i), ("f", j))),
                (-_one(ctx), (("f", j), ("e", i))),
            ]
            if i == j:
                ai = cc.alpha(i)
                terms.append((-_inv_qq(ctx), (("qh", ai),)))
                terms.append((_inv_qq(ctx), (("qh", cc.neg(ai)),)))
            out.append(("gln.ef", (i, j), terms))
    for i in range(1, n):
        for j in range(1, n):
            if i == j:
                continue
            a = cc.pairing(cc.alpha(i), cc.alpha(j))
            if a == 0:
                out.append(
                    (
                        "gln.ee_comm",
                        (i, j),
                        [(_one(ctx), (("e", i), ("e", j))), (-_one(ctx), (("e", j), ("e", i)))],
                    )
                )
                out.append(
                    (
                        "gln.ff_comm",
                        (i, j),
                        [(_one(ctx), (("f", i), ("f", j))), (-_one(ctx), (("f", j), ("f", i)))],
                    )
                )
            elif a == -1:
                out.append(("gln.serre_e", (i, j), serre_component_terms(ctx, "e", i, j, a)))
                out.append(("gln.serre_f", (i, j), serre_component_terms(ctx, "f", i, j, a)))
    return out


def affine_chevalley_instances(ctx: Context, n: int):
    """Chevalley-form defining relations of quantum affine sl_n (n >= 2),
    indices mod n including the affine node 0."""
    cc = CartanContext(n)
    out = []
    alphas = [cc.alpha(i) for i in range(n)]
    total = (0,) * n
    for a in alphas:
        total = cc.add(total, a)
    out.append(("aff.chev.k0prod", (), [(_one(ctx), (("qh", total),)), (-_one(ctx), ())]))
    for i in range(n):
        ai = alphas[i]
        nai = cc.neg(ai)
        for j in range(n):
            pair = cc.pairing(ai, alphas[j])
            out.append(
                (
                    "aff.chev.ke",
                    (i, j),
                    [
                        (_one(ctx), (("qh", ai), ("e", j), ("qh", nai))),
                        (-_qpow(ctx, pair), (("e", j),)),
                    ],
                )
            )
            out.append(
                (
                    "aff.chev.kf",
                    (i, j),
                    [
                        (_one(ctx), (("qh", ai), ("f", j), ("qh", nai))),
                        (-_qpow(ctx, -pair), (("f", j),)),
                    ],
                )
            )
    for i in range(n):
        for j in range(n):
            terms = [
                (_one(ctx), (("e", i), ("f", j))),
                (-_one(ctx), (("f", j), ("e", i))),
            ]
            if i == j:
                ai = alphas[i]
                terms.append((-_inv_qq(ctx), (("qh", ai),)))
                terms.append((_inv_qq(ctx), (("qh", cc.neg(ai)),)))
            out.append(("aff.chev.ef", (i, j), terms))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            a = cc.pairing(alphas[i], alphas[j])
            out.append(("aff.chev.serre_e", (i, j), serre_component_terms(ctx, "e", i, j, a)))
            out.append(("aff.chev.serre_f", (i, j), serre_component_terms(ctx, "f", i, j, a)))
    return out


# -- current-form toroidal relations --------------------------------------------------


def rel_qh_current(ab: Alphabet, r, fam, i, z="z"):
    cc = ab.cartan
    er = cc.eps(r)
    letter = ab.E(i, z) if fam == "E" else ab.F(i, z)
    sign = 1 if fam == "E" else -1
    pair = sign * cc.pairing(er, cc.alpha(i))
    lhs = ab.word(ab.qh(er), letter)
    rhs = ab.word(letter, ab.qh(er)).scale(ab.rat(ab.ctx.sym("q", pair)))
    return lhs - rhs


def rel_KK1(ab: Alphabet, sign, i, j, z="z", w="w"):
    a = ab.word(ab.K(sign, i, z), ab.K(sign, j, w))
    b = ab.word(ab.K(sign, j, w), ab.K(sign, i, z))
    return a - b


def rel_KK2(ab: Alphabet, i, j, z="z", w="w"):
    ps = ab.params
    C = ps.C
    zm = Mono(1, ab.ctx.exp(**{z: 1}))
    wm = Mono(1, ab.ctx.exp(**{w: 1}))
    lhs_factor = RatFunc(
        g_factor_poly(ps, i, j, zm.mul(C.inv()), wm), g_factor_poly(ps, i, j, zm.mul(C), wm)
    )
    rhs_factor = RatFunc(
        g_factor_poly(ps, j, i, wm, zm.mul(C.inv())), g_factor_poly(ps, j, i, wm, zm.mul(C))
    )
    lhs = ab.word(ab.K(-1, i, z), ab.K(+1, j, w)).scale(lhs_factor)
    rhs = ab.word(ab.K(+1, j, w), ab.K(-1, i, z)).scale(rhs_factor)
    return lhs - rhs


def rel_KE(ab: Alphabet, sign, i, j, z="z", w="w"):
    # d_ij g_ij(z,w) K_i(C^{-(1+-1)/2} z) E_j(w) + g_ji(w,z) E_j(w) K_i(...) = 0
    ps = ab.params
    zm = Mono(1, ab.ctx.exp(**{z: 1}))
    wm = Mono(1, ab.ctx.exp(**{w: 1}))
    karg = ps.C.inv() if sign > 0 else None
    kword = ab.K(sign, i, z, karg)
    g1 = RatFunc(g_factor_poly(ps, i, j, zm, wm).mul_mono(d_factor(ps, i, j)), ab.ctx.one())
    g2 = RatFunc(g_factor_poly(ps, j, i, wm, zm), ab.ctx.one())
    return ab.word(kword, ab.E(j, w)).scale(g1) + ab.word(ab.E(j, w), kword).scale(g2)


def rel_KF(ab: Alphabet, sign, i, j, z="z", w="w"):
    ps = ab.params
    zm = Mono(1, ab.ctx.exp(**{z: 1}))
    wm = Mono(1, ab.ctx.exp(**{w: 1}))
    karg = ps.C.inv() if sign < 0 else None
    kword = ab.K(sign, i, z, karg)
    g1 = RatFunc(g_factor_poly(ps, j, i, wm, zm).mul_mono(d_factor(ps, j, i)), ab.ctx.one())
    g2 = RatFunc(g_factor_poly(ps, i, j, zm, wm), ab.ctx.one())
    return ab.word(kword, ab.F(j, w)).scale(g1) + ab.word(ab.F(j, w), kword).scale(g2)


def rel_EF(ab: Alphabet, i, j, z="z", w="w"):
    comm = ab.word(ab.E(i, z), ab.F(j, w)) - ab.word(ab.F(j, w), ab.E(i, z))
    if i != j:
        return comm
    C = ab.params.C
    zm = Mono(1, ab.ctx.exp(**{z: 1}))
    wm = Mono(1, ab.ctx.exp(**{w: 1}))
    inv_qq = _inv_qq(ab.ctx)
    plus = CurrentExpr(
        ab,
        [Term(inv_qq, (ab.pin_for_ratio(wm.mul(C), zm),), ab.K(+1, i, w))],
    )
    minus = CurrentExpr(
        ab,
        [Term(-inv_qq, (ab.pin_for_ratio(zm.mul(C), wm),), ab.K(-1, i, z))],
    )
    return comm - plus - minus


def rel_EE(ab: Alphabet, i, j, z="z", w="w"):
    ps = ab.params
    zm = Mono(1, ab.ctx.exp(**{z: 1}))
    wm = Mono(1, ab.ctx.exp(**{w: 1}))
    g1 = RatFunc(g_factor_poly(ps, i, j, zm, wm).mul_mono(d_factor(ps, i, j)), ab.ctx.one())
    g2 = RatFunc(g_factor_poly(ps, j, i, wm, zm), ab.ctx.one())
    return ab.word(ab.E(i, z), ab.E(j, w)).scale(g1) + ab.word(ab.E(j, w), ab.E(i, z)).scale(g2)


def rel_FF(ab: Alphabet, i, j, z="z", w="w"):
    ps = ab.params
    zm = Mono(1, ab.ctx.exp(**{z: 1}))
    wm = Mono(1, ab.ctx.exp(**{w: 1}))
    g1 = RatFunc(g_factor_poly(ps, j, i, wm, zm).mul_mono(d_factor(ps, j, i)), ab.ctx.one())
    g2 = RatFunc(g_factor_poly(ps, i, j, zm, wm), ab.ctx.one())
    return ab.word(ab.F(i, z), ab.F(j, w)).scale(g1) + ab.word(ab.F(j, w), ab.F(i, z)).scale(g2)


def rel_comm(ab: Alphabet, fam, i, j, z="z", w="w"):
    mk = ab.E if fam == "E" else ab.F
    return ab.word(mk(i, z), mk(j, w)) - ab.word(mk(j, w), mk(i, z))


def _qcomm(ab, x, y, power):
    """[x, y]_{q^power} = x y - q^power y x on expressions."""
    return x.mul_word(y) - y.mul_word(x).scale(ab.rat(ab.ctx.sym("q", power)))


def rel_serre_current(ab: Alphabet, fam, i, j):
    """Unsymmetrized Serre combination; symmetrize over the returned vars."""
    n = ab.n
    mk = ab.E if fam == "E" else ab.F
    if n >= 3:
        A = ab.word(mk(i, "z1"))
        B = ab.word(mk(i, "z2"))
        Cc = ab.word(mk(j, "w"))
        inner = _qcomm(ab, B, Cc, 1)
        outer = _qcomm(ab, A, inner, -1)
        return outer, ("z1", "z2")
    if n == 2:
        A = ab.word(mk(i, "z1"))
        B = ab.word(mk(i, "z2"))
        Cc = ab.word(mk(i, "z3"))
        D = ab.word(mk(j, "w"))
        inner = _qcomm(ab, Cc, D, 2)
        mid = _qcomm(ab, B, inner, 0)
        outer = _qcomm(ab, A, mid, -2)
        return outer, ("z1", "z2", "z3")
    # n == 1: Sym z2/z3 [E(z1), [E(z2), E(z3)]]
    A = ab.word(mk(0, "z1"))
    B = ab.word(mk(0, "z2"))
    Cc = ab.word(mk(0, "z3"))
    inner = _qcomm(ab, B, Cc, 0)
    outer = _qcomm(ab, A, inner, 0)
    mono = ab.rat(ab.ctx.sym("z2")) / ab.rat(ab.ctx.sym("z3"))
    return outer.scale(mono), ("z1", "z2", "z3")


def toroidal_current_instances(ab: Alphabet, index_filter=None, families=None):
    """All current-form toroidal relation instances at rank n.

    index_filter(indices) may restrict to instances touching given nodes.
    Returns (id, indices, expr, sym_vars).
    """
    n = ab.n
    out = []

    def want(fam, idx):
        if families is not None and fam not in families:
            return False
        if index_filter is not None and not index_filter(idx):
            return False
        return True

    for r in range(n):
        for i in range(n):
            if want("cartan", (r, i)):
                out.append((f"tor.qh_E", (r, i), rel_qh_current(ab, r, "E", i), ()))
                out.append((f"tor.qh_F", (r, i), rel_qh_current(ab, r, "F", i), ()))
    for i in range(n):
        for j in range(n):
            for sign in (+1, -1):
                if want("KK", (i, j, sign)):
                    out.append(("tor.KK1", (i, j, sign), rel_KK1(ab, sign, i, j), ()))
                if sign > 0 and want("KK", (i, j)):
                    out.append(("tor.KK2", (i, j), rel_KK2(ab, i, j), ()))
                if want("KE", (i, j, sign)):
                    out.append(("tor.KE", (i, j, sign), rel_KE(ab, sign, i, j), ()))
                if want("KF", (i, j, sign)):
                    out.append(("tor.KF", (i, j, sign), rel_KF(ab, sign, i, j), ()))
            if want("EF", (i, j)):
                out.append(("tor.EF", (i, j), rel_EF(ab, i, j), ()))
            if want("EE", (i, j)):
                out.append(("tor.EE", (i, j), rel_EE(ab, i, j), ()))
                out.append(("tor.FF", (i, j), rel_FF(ab, i, j), ()))
            if n >= 4 and (i - j) % n not in (0, 1, n - 1) and want("EE", (i, j)):
                out.append(("tor.EE_comm", (i, j), rel_comm(ab, "E", i, j), ()))
                out.append(("tor.FF_comm", (i, j), rel_comm(ab, "F", i, j), ()))
    serre_pairs = []
    if n >= 3:
        serre_pairs = [(i, (i + 1) % n) for i in range(n)] + [(i, (i - 1) % n) for i in range(n)]
    elif n == 2:
        serre_pairs = [(0, 1), (1, 0)]
    else:
        serre_pairs = [(0, 0)]
    for i, j in serre_pairs:
        if want("serre", (i, j)):
            expr, sym_vars = rel_serre_current(ab, "E", i, j)
            out.append((f"tor.serre_E", (i, j), expr, sym_vars))
            expr, sym_vars = rel_serre_current(ab, "F", i, j)
            out.append((f"tor.serre_F", (i, j), expr, sym_vars))
    return out


# -- component form of the quadratic E-E / F-F relations ------------------------------


def quad_component_instance(ctx: Context, n, fam, i, k, l):
    """Mode form of the adjacent quadratic relations.

    n >= 3:  [E_{i,k+1}, E_{i+1,l}]_{q^-1} - q1 [E_{i,k}, E_{i+1,l+1}]_q = 0
    n == 2:  the three-term form with q1+q3 and q1 q3.
    Words are mode tokens (fam, index, mode).
    """
    one = _one(ctx)
    q1 = RatFunc(ctx.sym("q", -1) * ctx.sym("d"), ctx.one())
    q3 = RatFunc(ctx.sym("q", -1) * ctx.sym("d", -1), ctx.one())

    def comm(m1, m2, power):
        a = (fam, i % n, m1)
        b = (fam, (i + 1) % n, m2)
        return [(one, (a, b)), (-_qpow(ctx, power), (b, a))]

    def scaled(terms, c):
        return [(coeff * c, w) for coeff, w in terms]

    if fam == "F":
        # [F_{i,k+1}, F_{i+1,l}]_q = q3^{-1} [F_{i,k}, F_{i+1,l+1}]_{q^-1}
        if n >= 3:
            return comm(k + 1, l, 1) + scaled(comm(k, l + 1, -1), -q3.inv())
        return (
            scaled(comm_rev(ctx, fam, n, i, l - 1, k + 1, -2), one)
            + scaled(comm_rev(ctx, fam, n, i, l, k, 0), -(q1 + q3))
            + scaled(comm_rev(ctx, fam, n, i, l + 1, k - 1, 2), q1 * q3)
        )
    if n >= 3:
        return comm(k + 1, l, -1) + scaled(comm(k, l + 1, 1), -q1)
    return (
        comm(k + 1, l - 1, -2)
        + scaled(comm(k, l, 0), -(q1 + q3))
        + scaled(comm(k - 1, l + 1, 2), q1 * q3)
    )


def comm_rev(ctx, fam, n, i, m1, m2, power):
    # [F_{i+1,m1}, F_{i,m2}]_{q^power}
    one = _one(ctx)
    a = (fam, (i + 1) % n, m1)
    b = (fam, i % n, m2)
    return [(one, (a, b)), (-_qpow(ctx, power), (b, a))]


def ee_current_component(ab_ctx: Context, ps, n, fam, i, k, l):
    """Mode (k, l) component of the current-form quadratic relation, for
    cross-checking against quad_component_instance."""
    zm = Mono(1, ab_ctx.exp(z=1))
    wm = Mono(1, ab_ctx.exp(w=1))
    j = (i + 1) % n
    if fam == "E":
        g1 = g_factor_poly(ps, i, j, zm, wm).mul_mono(d_factor(ps, i, j))
        g2 = g_factor_poly(ps, j, i, wm, zm)
        words = lambda mz, mw: [((fam, i, mz), (fam, j, mw)), ((fam, j, mw), (fam, i, mz))]
    else:
        g1 = g_factor_poly(ps, j, i, wm, zm).mul_mono(d_factor(ps, j, i))
        g2 = g_factor_poly(ps, i, j, zm, wm)
        words = lambda mz, mw: [((fam, i, mz), (fam, j, mw)), ((fam, j, mw), (fam, i, mz))]
    out = {}
    iz, iw = ab_ctx.index["z"], ab_ctx.index["w"]
    for poly, widx in ((g1, 0), (g2, 1)):
        for e, c in poly.terms.items():
            az, aw = e[iz] // ab_ctx.L, e[iw] // ab_ctx.L
            rest = list(e)
            rest[iz] = 0
            rest[iw] = 0
            mono = RatFunc(ab_ctx.poly_from_mono(Mono(c, tuple(rest))), ab_ctx.one())
            word = words(k + az, l + aw)[widx]
            cur = out.get(word)
            out[word] = mono if cur is None else cur + mono
    return [(c, w) for w, c in out.items() if not c.is_zero()]
