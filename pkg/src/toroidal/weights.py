"""Highest-weight data, Fock weights, the Psi-bar identity and characters.

Weight functions are kept in factored form: a constant monomial times a
product of factors (1 - c/z)^{+-1}, with c a monomial.  Products then
cancel by multiset arithmetic and the two routes to the highest weight of
the fused rank-one modules can be compared exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cartan import ParamSet, mono_root_power, standard_params, subalgebra_params
from .currents import mono_power
from .exact import Context, Mono, RatFunc
from .gz import xname
from .report import VerificationReport
from .topaction import TopLevel


@dataclass(frozen=True)
class WeightFunction:
    """const * prod_num (1 - c/z) / prod_den (1 - c/z), all c monomials."""

    const: Mono
    num: tuple
    den: tuple

    def mul(self, other):
        num = list(self.num) + list(other.num)
        den = list(self.den) + list(other.den)
        num2, den2 = _cancel_multisets(num, den)
        return WeightFunction(self.const.mul(other.const), tuple(num2), tuple(den2))

    def bar(self):
        """Drop the constant (normalize to value 1 at z = infinity)."""
        one = Mono(1, tuple(0 for _ in self.const.exps))
        return WeightFunction(one, self.num, self.den)

    def scale_arg(self, m: Mono):
        """Substitute z -> m z, i.e. every factor constant c -> c m^-1."""
        mi = m.inv()
        return WeightFunction(
            self.const,
            tuple(c.mul(mi) for c in self.num),
            tuple(c.mul(mi) for c in self.den),
        )

    def subs(self, ctx, bindings):
        return WeightFunction(
            _subs_m(ctx, self.const, bindings),
            tuple(_subs_m(ctx, c, bindings) for c in self.num),
            tuple(_subs_m(ctx, c, bindings) for c in self.den),
        )

    def value_inf(self):
        return self.const

    def value_zero(self):
        if len(self.num) != len(self.den):
            raise ValueError("value at 0 needs equal factor counts")
        out = self.const
        for c in self.num:
            out = out.mul(c)
        for c in self.den:
            out = out.mul(c.inv())
        return out

    def to_ratfunc(self, ctx, zname="z"):
        zinv = ctx.sym(zname, -1)
        num = ctx.poly_from_mono(self.const)
        den = ctx.one()
        for c in self.num:
            num = num * (ctx.one() - ctx.poly_from_mono(c) * zinv)
        dens = []
        for c in self.den:
            dens.append(ctx.one() - ctx.poly_from_mono(c) * zinv)
        return RatFunc.over_factors(num, dens)

    def equals(self, other, ctx=None, zname="z"):
        num1, den1 = _cancel_multisets(
            list(self.num) + list(other.den), list(self.den) + list(other.num)
        )
        if self.const == other.const and not num1 and not den1:
            return True
        if ctx is None:
            return False
        return self.to_ratfunc(ctx, zname).equals(other.to_ratfunc(ctx, zname))


def _subs_m(ctx, m, bindings):
    p = ctx.poly_from_mono(m).subs_mono(bindings)
    out = p.as_mono()
    if out is None:
        raise ValueError("substitution left the monomial lattice")
    return out


def _cancel_multisets(a, b):
    bb = list(b)
    out_a = []
    for m in a:
        for k, m2 in enumerate(bb):
            if m == m2:
                bb.pop(k)
                break
        else:
            out_a.append(m)
    return out_a, bb


def unit_weight(ctx):
    return WeightFunction(Mono(1, ctx.unit_exp()), (), ())


# -- highest weights of evaluation modules ---------------------------------------


def kappa_context(n):
    names = ["q", "d", "uprime", "z"] + [f"k{i}" for i in range(n - 1)]
    return Context(names, L=2)


def kappa_mono(ctx, n, i, variant="q3"):
    """kappa_i; the last one is solved from the level constraint of the
    variant: q3^n = prod kappa_i^2 (or q1^n for the other evaluation)."""
    if i < n - 1:
        return ctx.mono(1, **{f"k{i}": 1})
    base = ctx.mono(1, q=-1, d=-1) if variant == "q3" else ctx.mono(1, q=-1, d=1)
    out = mono_power(base, Fraction(n, 2), ctx)
    for j in range(n - 1):
        out = out.mul(ctx.mono(1, **{f"k{j}": -1}))
    return out


def hw_from_affine(ctx, n, variant="q3"):
    """The n-tuple of highest-weight functions of an evaluation module."""
    q3 = ctx.mono(1, q=-1, d=-1)
    q1 = ctx.mono(1, q=-1, d=1)
    up = ctx.mono(1, uprime=1)
    kappas = [kappa_mono(ctx, n, i, variant) for i in range(n)]
    out = []
    for i in range(n):
        Si = ctx.mono(1)
        for j in range(i + 1):
            Si = Si.mul(kappas[j]).mul(kappas[j])
        Sim1 = Si.mul(kappas[i].inv()).mul(kappas[i].inv())
        if variant == "q3":
            num = q3.pow(i).mul(Si.inv()).mul(up)
            den = q3.pow(i).mul(Sim1.inv()).mul(up)
        elif variant == "q1":
            num = mono_power(q1, -i, ctx).mul(Sim1).mul(up)
            den = mono_power(q1, -i, ctx).mul(Si).mul(up)
        else:
            raise ValueError(variant)
        out.append(WeightFunction(kappas[i], (num,), (den,)))
    return out


def hw_constraint_holds(ctx, n):
    """q3^n = prod kappa_i^2, exact monomial identity."""
    q3n = ctx.mono(1, q=-n, d=-n)
    prod = ctx.mono(1)
    for i in range(n):
        k = kappa_mono(ctx, n, i)
        prod = prod.mul(k).mul(k)
    return prod == q3n


def hw_iota_dual_holds(ctx, n):
    """The q1-variant equals the q3-variant under the involution: swap
    d -> 1/d, relabel kappa_i -> kappa_{(n-i) mod n}, reverse components,
    rescale u' -> kappa_0^2 u'."""
    p3 = hw_from_affine(ctx, n, "q3")
    p1 = hw_from_affine(ctx, n, "q1")
    dinv = {"d": ctx.mono(1, d=-1)}
    relabel = {}
    for j in range(1, n - 1):
        target = kappa_mono(ctx, n, (n - j) % n, "q3")
        relabel[f"k{j}"] = target
    k0sq_up = {"uprime": ctx.mono(1, uprime=1, **{"k0": 2})}
    for j in range(n):
        lhs = p1[(n - j) % n].subs(ctx, dinv).subs(ctx, relabel)
        rhs = p3[j].subs(ctx, k0sq_up)
        if not lhs.equals(rhs, ctx):
            return False
    return True


# -- Fock weights and the Psi-bar identity ------------------------------------------


def fock_weight(ctx, qi: Mono, u: Mono):
    """q_i^(1/2) (1 - q_i^-1 u/z) / (1 - u/z)."""
    const = mono_power(qi, Fraction(1, 2), ctx)
    return WeightFunction(const, (qi.inv().mul(u),), (u,))


def weights_top(n):
    """Top level with the exponent lattice refined for half powers."""
    return TopLevel(n, L=2)


def kbar_weight(top: TopLevel, i, pattern):
    const, num, den = top.kbar_eigen(i, pattern)
    return WeightFunction(const, num, den)


def k_bar_product_psi(top: TopLevel, m, pattern):
    """Psi-bar_m as the product of K-bar eigenvalues at shifted points."""
    ctx = top.ctx
    n = top.n
    q3 = ctx.mono(1, q=-1, d=-1)
    q1 = ctx.mono(1, q=-1, d=1)
    out = unit_weight(ctx)
    for i in range(m + 1, n):
        out = out.mul(kbar_weight(top, i, pattern).scale_arg(q3.pow(-(n - i))))
    for i in range(m + 1):
        out = out.mul(kbar_weight(top, i, pattern).scale_arg(mono_power(q1, -i, ctx)))
    return out


def psi_from_decomposition(top: TopLevel, m, pattern):
    """Psi-bar_m from the Fock factors of the decomposition data."""
    ctx = top.ctx
    num, den = [], []
    for l in range(m + 1):
        num.append(top._lam2_q3(l, m, -l, 0, pattern))
        den.append(top._lam2_q3(l, m, -l + m, top.n, pattern))
    for l in range(m):
        num.append(top._lam2_q3(l, m - 1, -l + m, top.n, pattern))
        den.append(top._lam2_q3(l, m - 1, -l - 1, 0, pattern))
    out = WeightFunction(ctx.mono(1), tuple(num), tuple(den))
    n1, d1 = _cancel_multisets(list(out.num), list(out.den))
    return WeightFunction(out.const, tuple(n1), tuple(d1))


def decomposition_parameters(top: TopLevel, m, l, pattern):
    """(u_{l,m}, v_{l,m-1}) spectral parameters of the Fock factors."""
    ctx = top.ctx
    ut = top.utilde()
    q3n = ctx.mono(1, q=-top.n, d=-top.n)

    def q2lam(ll, j, shift):
        off = top.gz.offset(pattern, ll, j)
        return ctx.mono(1, **{xname(ll, j): 2, "q": 2 * (off + shift)})

    u_lm = q2lam(l, m, -l + m).mul(q3n).mul(ut)
    v_lm1 = q2lam(l, m - 1, -l - 1).mul(ut) if m >= 1 and l <= m - 1 else None
    return u_lm, v_lm1


def psi_from_fock_factors(top: TopLevel, m, pattern):
    """Psi-bar_m as a product of barred Fock weights of the rank-one
    subalgebra at level m, at the decomposition spectral parameters."""
    ctx = top.ctx
    ps = standard_params(ctx, top.n)
    sub = subalgebra_params(ps, m, "E1m")
    out = unit_weight(ctx)
    for l in range(m + 1):
        u_lm, _ = decomposition_parameters(top, m, l, pattern)
        out = out.mul(fock_weight(ctx, sub.q3, u_lm).bar())
    for l in range(m):
        _, v = decomposition_parameters(top, m, l, pattern)
        out = out.mul(fock_weight(ctx, sub.q1, v).bar())
    return out


def fock_parameter_reconstruction(top: TopLevel, m, pattern):
    """q_{3,m}^-1 u_{l,m} = q2^(lam_{l,m}-l) utilde and
    q_{1,m}^-1 v_{l,m-1} = q2^(lam_{l,m-1}-l+m) q3^n utilde."""
    ctx = top.ctx
    ps = standard_params(ctx, top.n)
    sub = subalgebra_params(ps, m, "E1m")
    ut = top.utilde()
    q3n = ctx.mono(1, q=-top.n, d=-top.n)

    def q2lam(ll, j, shift):
        off = top.gz.offset(pattern, ll, j)
        return ctx.mono(1, **{xname(ll, j): 2, "q": 2 * (off + shift)})

    for l in range(m + 1):
        u_lm, _ = decomposition_parameters(top, m, l, pattern)
        if sub.q3.inv().mul(u_lm) != q2lam(l, m, -l).mul(ut):
            return False
    for l in range(m):
        _, v = decomposition_parameters(top, m, l, pattern)
        if sub.q1.inv().mul(v) != q2lam(l, m - 1, -l + m).mul(q3n).mul(ut):
            return False
    return True


def verify_weight_identity(n_values, report=None, mutate_ubar=False):
    """Cross-check the two closed forms of Psi-bar_m for each n and m."""
    rep = report if report is not None else VerificationReport(
        "weights", {"n": list(n_values), "mutate": mutate_ubar}
    )
    for n in n_values:
        top = weights_top(n)
        pattern = tuple((k % 3) - 1 for k in range(len(top.gz.cells)))
        for m in range(n):
            lhs = k_bar_product_psi(top, m, pattern)
            rhs = psi_from_decomposition(top, m, pattern)
            if mutate_ubar:
                rhs = rhs.subs(top.ctx, {"u": top.ctx.mono(1, u=1, q=1)})
            rep.record("weights.psibar", lhs.equals(rhs, top.ctx), (n, m))
            rhs_fock = psi_from_fock_factors(top, m, pattern)
            rep.record("weights.psibar_fock", lhs.equals(rhs_fock, top.ctx), (n, m))
            rep.record(
                "weights.fock_parameters", fock_parameter_reconstruction(top, m, pattern), (n, m)
            )
    rep.sort()
    return rep


def verify_hw_suite(n_values, report=None):
    rep = report if report is not None else VerificationReport("hw", {"n": list(n_values)})
    for n in n_values:
        ctx = kappa_context(n)
        rep.record("hw.constraint", hw_constraint_holds(ctx, n), (n,))
        for variant in ("q3", "q1"):
            tup = hw_from_affine(ctx, n, variant)
            for i, P in enumerate(tup):
                ok = P.value_zero().mul(P.value_inf()).is_one()
                rep.record("hw.p0pinf", ok, (n, variant, i))
        rep.record("hw.iota_dual", hw_iota_dual_holds(ctx, n), (n,))
    rep.sort()
    return rep


# -- characters -----------------------------------------------------------------------


def euler_inverse_power(k, depth):
    """Coefficients of prod_{r>=1} (1 - x^r)^(-k) up to x^depth."""
    coeffs = [0] * (depth + 1)
    coeffs[0] = 1
    for r in range(1, depth + 1):
        for _ in range(k):
            for m in range(r, depth + 1):
                coeffs[m] += coeffs[m - r]
    return coeffs


def character_series(kind, depth, n=None, m=None):
    if kind == "fock":
        return euler_inverse_power(1, depth)
    if kind == "W_m":
        return euler_inverse_power(2 * m + 1, depth)
    if kind == "W":
        return euler_inverse_power(n * n, depth)
    raise ValueError(kind)


def partition_counts(depth):
    """Partition numbers by brute-force enumeration (independent oracle)."""
    counts = [0] * (depth + 1)
    counts[0] = 1

    def rec(remaining, largest):
        if remaining == 0:
            return 1
        return sum(rec(remaining - p, p) for p in range(min(remaining, largest), 0, -1))

    for d in range(1, depth + 1):
        counts[d] = rec(d, d)
    return counts


def verify_characters(report=None, fock_depth=12, w_depth=8, nmax=3, sum_nmax=8):
    rep = report if report is not None else VerificationReport(
        "characters", {"fock_depth": fock_depth, "w_depth": w_depth, "nmax": nmax}
    )
    rep.record("char.fock_partitions", character_series("fock", fock_depth) == partition_counts(fock_depth))
    for n in range(1, nmax + 1):
        # W(lambda) character is the convolution of the W_m characters
        conv = [1]
        for m in range(n):
            wm = character_series("W_m", w_depth, m=m)
            new = [0] * (w_depth + 1)
            for a in range(min(len(conv), w_depth + 1)):
                for b in range(w_depth + 1 - a):
                    new[a + b] += conv[a] * wm[b]
            conv = new
        rep.record("char.w_tensor", conv == character_series("W", w_depth, n=n), (n,))
    for n in range(1, sum_nmax + 1):
        rep.record("char.sum_2m1", sum(2 * m + 1 for m in range(n)) == n * n, (n,))
    rep.record("char.wm0_is_fock", character_series("W_m", 10, m=0) == character_series("fock", 10))
    rep.sort()
    return rep
