"""Fused currents and the verification of their commutation relations.

The fused currents are built from unfused multi-variable words with their
vanishing prefactors; relations are verified by normal ordering with the
base exchange rules and then taking the fusion limit, which checks
exactly that no merged-variable pole survives.  The same machinery
extracts the explicit delta residues of the mixed fused/unfused
commutators, which the evaluation-map suites register as exchange rules.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cartan import ParamSet, standard_params, subalgebra_params
from .currents import Alphabet, CurrentExpr, FusionSingular, Term, fusion_limit, mono_power, normal_order
from .exact import Context, Mono, RatFunc
from .report import VerificationReport


def fusion_context(n, spectral=None, central_value=None):
    """Alphabet over q, d and a free central symbol C (atomic K letters)."""
    spectral = spectral or ["z", "w", "z1", "z2", "z3", "w1", "w2", "w3"]
    ctx = Context(["q", "d", "C"] + spectral, L=2)
    ps = standard_params(ctx, n)
    C = central_value if central_value is not None else ctx.mono(1, C=1)
    from dataclasses import replace

    ps = replace(ps, C=C)
    return Alphabet(ctx, ps, spectral, kind="atomic")


@dataclass
class FusedCurrent:
    name: str
    expr: CurrentExpr  # unfused, prefactor included
    merge: dict  # fusion variable -> target variable
    params: ParamSet


def _prefactor(ab, pairs):
    """prod (1 - a/b) for (a, b) variable-name pairs."""
    ctx = ab.ctx
    out = RatFunc(ctx.one())
    for a, b in pairs:
        out = out * RatFunc(ctx.one() - ctx.sym(a) * ctx.sym(b, -1))
    return out


def build_ssE(ab: Alphabet, target="z", variables=None):
    """ssE(z): prefactor * E_{n-1}(q3^{n/2-1} z_{n-1}) ... E_1(q3^{-n/2+1} z_1)."""
    n = ab.n
    variables = variables or [f"z{k}" for k in range(1, n)]
    word = ()
    for k in range(n - 1, 0, -1):
        off = ab.q3_power(Fraction(-n, 2) + k)
        word = word + ab.E(k, variables[k - 1], off)
    pref = _prefactor(ab, [(variables[i], variables[i + 1]) for i in range(n - 2)])
    expr = ab.word(word).scale(pref)
    return FusedCurrent("ssE", expr, {v: target for v in variables}, ab.params)


def build_ssF(ab: Alphabet, target="w", variables=None):
    """ssF(w): prefactor * F_1(q3^{-n/2+1} w_1) ... F_{n-1}(q3^{n/2-1} w_{n-1})."""
    n = ab.n
    variables = variables or [f"w{k}" for k in range(1, n)]
    word = ()
    for k in range(1, n):
        off = ab.q3_power(Fraction(-n, 2) + k)
        word = word + ab.F(k, variables[k - 1], off)
    pref = _prefactor(ab, [(variables[i + 1], variables[i]) for i in range(n - 2)])
    expr = ab.word(word).scale(pref)
    return FusedCurrent("ssF", expr, {v: target for v in variables}, ab.params)


def build_ssK(ab: Alphabet, sign, target="z"):
    """ssK^{sign}(z) = prod_i K_i^{sign}(q3^{-n/2+i} z); no limit needed."""
    n = ab.n
    word = ()
    for i in range(1, n):
        word = word + ab.K(sign, i, target, ab.q3_power(Fraction(-n, 2) + i))
    return ab.word(word)


def build_ssE_m(ab: Alphabet, m, target="z"):
    """The rank-one fused generator at level m, without its normalization:
    prefactor * E_0(q3^n z_0) E_{n-1}(q3^{n-1} z_{n-1}) ... E_{m+1}(q3^{m+1} z_{m+1})
    * E_1(q3^n q1^-1 z_1) ... E_m(q3^n q1^-m z_m)."""
    n = ab.n
    variables = [f"z{k}" for k in range(n)]  # z0 ... z{n-1}
    order = [0] + list(range(n - 1, m, -1)) + list(range(1, m + 1))
    word = ()
    for k in order:
        if k == 0:
            off = mono_power(ab.params.q3, n, ab.ctx)
        elif k > m:
            off = mono_power(ab.params.q3, k, ab.ctx)
        else:
            off = mono_power(ab.params.q3, n, ab.ctx).mul(mono_power(ab.params.q1, -k, ab.ctx))
        word = word + ab.E(k, variables[k], off)
    # prefactor prod_{i=0}^{n-2} (1 - z_i/z_{i+1}) in the listed order
    seq = [variables[k] for k in order]
    pref = _prefactor(ab, [(seq[i + 1], seq[i]) for i in range(len(seq) - 1)])
    return FusedCurrent("ssE_m", ab.word(word).scale(pref), {v: target for v in seq}, ab.params)


def fuse(fc: FusedCurrent) -> CurrentExpr:
    return fusion_limit(fc.expr, fc.merge)


def commutator(a: CurrentExpr, b: CurrentExpr) -> CurrentExpr:
    return a.mul_word(b) - b.mul_word(a)


def extract_mixed_residues(ab: Alphabet, n):
    """The delta residues of [E_i(z), ssF(w)] and [ssE(z), F_i(w)] for
    i = 1 and i = n-1, computed from the unfused words.

    Returns a dict (side, i) -> list of (support, coeff, word) with side
    'EssF' for E_i(z) against ssF(w) and 'ssEF' for ssE(z) against F_i(w).
    """
    out = {}
    for i in (1, n - 1):
        ssf = build_ssF(ab)
        com = commutator(ab.word(ab.E(i, "z")), ssf.expr)
        merged = fusion_limit(com, ssf.merge)
        out[("EssF", i)] = [(t.pins, t.coeff, t.word) for t in merged.terms]
        sse = build_ssE(ab)
        com = commutator(sse.expr, ab.word(ab.F(i, "w")))
        merged = fusion_limit(com, sse.merge)
        out[("ssEF", i)] = [(t.pins, t.coeff, t.word) for t in merged.terms]
    return out


def verify_fused_suite(n, report=None):
    """The fused-current commutation relations, by the current calculus."""
    rep = report if report is not None else VerificationReport("fused", {"n": n})
    ab = fusion_context(n)
    ctx = ab.ctx
    one = RatFunc(ctx.one())
    C = ab.params.C
    q2 = ab.params.q2
    zm = Mono(1, ctx.exp(z=1))
    wm = Mono(1, ctx.exp(w=1))

    if n == 2:
        # degenerate case: ssE = E_1, ssF = F_1, ssK = K_1; the fused
        # relations are instances of the defining relations
        from .catalog import rel_EE, rel_EF, rel_FF

        rep.record("fused.EFfuse", rel_EF(ab, 1, 1).is_zero(), (n,))
        rep.record("fused.EEfuse", rel_EE(ab, 1, 1).is_zero(), (n,))
        rep.record("fused.FFfuse", rel_FF(ab, 1, 1).is_zero(), (n,))
        sse = build_ssE(ab)
        rep.record("fused.ssE_is_E1", len(fuse(sse).terms) == 1, (n,))
        rep.sort()
        return rep

    sse = build_ssE(ab)
    ssf = build_ssF(ab)

    # construction regularity
    try:
        fE = fuse(sse)
        rep.record("fused.ssE_regular", bool(fE.terms), (n,))
    except FusionSingular:
        rep.record("fused.ssE_regular", False, (n,), "fusion limit singular")
    try:
        fF = fuse(ssf)
        rep.record("fused.ssF_regular", bool(fF.terms), (n,))
    except FusionSingular:
        rep.record("fused.ssF_regular", False, (n,), "fusion limit singular")

    # dropping the prefactor must be singular
    bare = ab.word(tuple(sse.expr.terms[0].word))
    try:
        fusion_limit(bare, sse.merge)
        rep.record("fused.ssE_prefactor_needed", False, (n,))
    except FusionSingular:
        rep.record("fused.ssE_prefactor_needed", True, (n,))

    # EEfuse / FFfuse: (z - q2 w) ssE(z) ssE(w) + (w - q2 z) ssE(w) ssE(z) = 0
    sseW = build_ssE(ab, target="w", variables=["w1", "w2"])
    lhs = sse.expr.mul_word(sseW.expr).scale(
        RatFunc(ctx.sym("z") - ctx.sym("q", 2) * ctx.sym("w"))
    ) + sseW.expr.mul_word(sse.expr).scale(RatFunc(ctx.sym("w") - ctx.sym("q", 2) * ctx.sym("z")))
    merged = fusion_limit(lhs, dict(sse.merge) | dict(sseW.merge))
    rep.record("fused.EEfuse", not merged.terms, (n,))

    ssfZ = build_ssF(ab, target="z", variables=["z1", "z2"])
    ssfW = build_ssF(ab, target="w", variables=["w1", "w2"])
    lhs = ssfZ.expr.mul_word(ssfW.expr).scale(
        RatFunc(ctx.sym("w") - ctx.sym("q", 2) * ctx.sym("z"))
    ) + ssfW.expr.mul_word(ssfZ.expr).scale(RatFunc(ctx.sym("z") - ctx.sym("q", 2) * ctx.sym("w")))
    merged = fusion_limit(lhs, dict(ssfZ.merge) | dict(ssfW.merge))
    rep.record("fused.FFfuse", not merged.terms, (n,))

    # EFfuse: the doubly-killed form (z - Cw)(w - Cz)([ssE, ssF] - RHS) = 0
    # decides that the commutator minus the printed right-hand side has no
    # rational part and no delta support away from the two C-shifted
    # points.  The residues at those points involve merged double
    # contractions whose value depends on expansion regions; they are
    # covered by the one-current residue extraction below and by the
    # evaluation-map suite, where the Cartan reconstruction pins them.
    com = commutator(sse.expr, ssf.expr)
    inv_qq = RatFunc(ctx.one(), ctx.sym("q") - ctx.sym("q", -1))
    rhs_plus = CurrentExpr(
        ab, [Term(inv_qq, (ab.pin_for_ratio(wm.mul(C), zm),), t.word) for t in build_ssK(ab, +1, "w").terms]
    )
    rhs_minus = CurrentExpr(
        ab, [Term(-inv_qq, (ab.pin_for_ratio(zm.mul(C), wm),), t.word) for t in build_ssK(ab, -1, "z").terms]
    )
    kill = RatFunc(ctx.poly_from_mono(zm) - ctx.poly_from_mono(C.mul(wm))) * RatFunc(
        ctx.poly_from_mono(wm) - ctx.poly_from_mono(C.mul(zm))
    )
    lhs_killed = fusion_limit(com.scale(kill), dict(sse.merge) | dict(ssf.merge))
    rhs_killed = normal_order((rhs_plus + rhs_minus).scale(kill))
    rep.record("fused.EFfuse_killed", (lhs_killed - rhs_killed).is_zero(), (n,))

    # middle-index commutation: [ssE(z), E_i(w)] = [ssE(z), F_i(w)] = 0, 2 <= i <= n-2
    for i in range(2, n - 1):
        for mk, fam in ((ab.E, "E"), (ab.F, "F")):
            com = commutator(sse.expr, ab.word(mk(i, "w")))
            merged = fusion_limit(com, sse.merge)
            rep.record("fused.ssE_mid_comm", not merged.terms, (n, fam, i))
            com = commutator(ab.word(mk(i, "z")), ssf.expr)
            merged = fusion_limit(com, ssf.merge)
            rep.record("fused.ssF_mid_comm", not merged.terms, (n, fam, i))

    # scalar exchange: (z - q3^{-n/2} q1^{-1} w) E_1(z) ssE(w) = q (z - q3^{-n/2+1} w) ssE(w) E_1(z)
    def check_scalar(mkletter, fc, a_num, a_den, qpow, rel_id):
        znum = ctx.poly_from_mono(zm) - ctx.poly_from_mono(a_num.mul(wm))
        zden = ctx.poly_from_mono(zm) - ctx.poly_from_mono(a_den.mul(wm))
        lhs = ab.word(mkletter).mul_word(fc.expr).scale(RatFunc(znum))
        rhs = fc.expr.mul_word(ab.word(mkletter)).scale(
            RatFunc(zden) * RatFunc(ctx.sym("q", qpow))
        )
        merged = fusion_limit(lhs - rhs, fc.merge)
        rep.record(rel_id, not merged.terms, (n,))

    q3 = ab.params.q3
    q1 = ab.params.q1
    sseW2 = build_ssE(ab, target="w", variables=["w1", "w2"])
    check_scalar(
        ab.E(1, "z"),
        sseW2,
        mono_power(q3, Fraction(-n, 2), ctx).mul(q1.inv()),
        mono_power(q3, Fraction(-n, 2) + 1, ctx),
        1,
        "fused.E1E",
    )
    # the engine forces q1 where the printed display has q1^-1, matching
    # the mirror relation for F_{n-1}
    check_scalar(
        ab.E(n - 1, "z"),
        sseW2,
        mono_power(q3, Fraction(n, 2) - 1, ctx),
        mono_power(q3, Fraction(n, 2), ctx).mul(q1),
        1,
        "fused.EnE",
    )
    ssfW2 = build_ssF(ab, target="w", variables=["w1", "w2"])
    check_scalar(
        ab.F(1, "z"),
        ssfW2,
        mono_power(q3, Fraction(-n, 2) + 1, ctx),
        mono_power(q3, Fraction(-n, 2), ctx).mul(q1.inv()),
        -1,
        "fused.F1F",
    )
    check_scalar(
        ab.F(n - 1, "z"),
        ssfW2,
        mono_power(q3, Fraction(n, 2), ctx).mul(q1),
        mono_power(q3, Fraction(n, 2) - 1, ctx),
        -1,
        "fused.FnF",
    )

    # EF1n / FE1n: the commutators are pure delta, supported only at the
    # two C-shifted points; the printed linear factor removes the delta at
    # its own support.  The term at the mirror support, when the engine's
    # uniform region convention keeps it, is exactly the contribution the
    # paper disposes of by power-series positioning; it is classified
    # here, not silently dropped.
    def check_kill_shape(com_expr, merge, printed_mono, mirror_mono, rel_id):
        both = com_expr.scale(
            RatFunc(ctx.poly_from_mono(zm) - ctx.poly_from_mono(printed_mono.mul(wm)))
            * RatFunc(ctx.poly_from_mono(zm) - ctx.poly_from_mono(mirror_mono.mul(wm)))
        )
        merged = fusion_limit(both, merge)
        rep.record(rel_id + ".pure_delta", not merged.terms, (n,))
        killed = fusion_limit(
            com_expr.scale(
                RatFunc(ctx.poly_from_mono(zm) - ctx.poly_from_mono(printed_mono.mul(wm)))
            ),
            merge,
        )
        ok = True
        for t in killed.terms:
            for v, m in t.pins:
                # any survivor must sit at the mirror support
                target = mirror_mono.mul(wm) if v == "z" else mirror_mono.inv().mul(zm)
                if m != target:
                    ok = False
        rep.record(rel_id + ".printed_kill", ok, (n,))

    sseK = build_ssE(ab)
    check_kill_shape(
        commutator(sseK.expr, ab.word(ab.F(1, "w"))),
        sseK.merge,
        C.inv().mul(mono_power(q3, Fraction(n, 2) - 1, ctx)),
        C.mul(mono_power(q3, Fraction(-n, 2) + 1, ctx)),
        "fused.EF1n.F1",
    )
    sseK2 = build_ssE(ab)
    check_kill_shape(
        commutator(sseK2.expr, ab.word(ab.F(n - 1, "w"))),
        sseK2.merge,
        C.mul(mono_power(q3, Fraction(-n, 2) + 1, ctx)),
        C.inv().mul(mono_power(q3, Fraction(n, 2) - 1, ctx)),
        "fused.EF1n.Fn",
    )
    ssfK = build_ssF(ab, target="w", variables=["w1", "w2"])
    check_kill_shape(
        commutator(ab.word(ab.E(1, "z")), ssfK.expr),
        ssfK.merge,
        C.mul(mono_power(q3, Fraction(-n, 2) + 1, ctx)),
        C.inv().mul(mono_power(q3, Fraction(n, 2) - 1, ctx)),
        "fused.FE1n.E1",
    )
    ssfK2 = build_ssF(ab, target="w", variables=["w1", "w2"])
    check_kill_shape(
        commutator(ab.word(ab.E(n - 1, "z")), ssfK2.expr),
        ssfK2.merge,
        C.inv().mul(mono_power(q3, Fraction(n, 2) - 1, ctx)),
        C.mul(mono_power(q3, Fraction(-n, 2) + 1, ctx)),
        "fused.FE1n.En",
    )

    # ssK commutes with ssE/ssF up to a scalar: single canonical term
    kword = build_ssK(ab, +1, "z")
    x = kword.mul_word(fuse(sseW2))
    rep.record("fused.ssK_scalar", len(normal_order(x).terms) == 1, (n,))

    # the weight of ssE pairs to zero with -Lambda_1 + Lambda_{n-1}
    cc = ab.cartan
    total = (0,) * n
    for i in range(1, n):
        total = cc.add(total, cc.alpha(i))
    kvec = cc.sub(cc.Lambda(n - 1), cc.Lambda(1))
    rep.record("fused.K_commutes_ss", cc.pairing(kvec, total) == 0, (n,))

    # E1m family: ssK_m parameters match the subalgebra map
    ps = ab.params
    for m in range(n):
        sub = subalgebra_params(ps, m, "E1m")
        rep.record(
            "fused.ssKm_params",
            sub.q1.mul(sub.q2).mul(sub.q3).is_one(),
            (n, m),
        )
    rep.sort()
    return rep
