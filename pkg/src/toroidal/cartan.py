"""Cartan data, deformed Cartan entries, g-factors and parameter maps.

All residue arithmetic mod n lives here; the n = 1 and n = 2 degenerations
of the Kronecker deltas are handled once, by summing every branch that
fires mod n.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .exact import Context, LaurentPoly, Mono, RatFunc, qint


class CartanContext:
    """Weight lattice P of gl_n with (eps_i, eps_j) = delta_ij."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("rank must be >= 1")
        self.n = n

    def eps(self, i):
        v = [0] * self.n
        v[i % self.n] = 1
        return tuple(v)

    def alpha(self, i):
        i = i % self.n
        v = [0] * self.n
        v[(i - 1) % self.n] += 1
        v[i] -= 1
        return tuple(v)

    def Lambda(self, i):
        if not 1 <= i <= self.n - 1:
            raise ValueError("fundamental weights have 1 <= i <= n-1")
        return tuple(1 if j < i else 0 for j in range(self.n))

    def t_vector(self):
        return (1,) * self.n

    @staticmethod
    def add(u, v):
        return tuple(x + y for x, y in zip(u, v))

    @staticmethod
    def sub(u, v):
        return tuple(x - y for x, y in zip(u, v))

    @staticmethod
    def neg(u):
        return tuple(-x for x in u)

    @staticmethod
    def pairing(u, v):
        return sum(x * y for x, y in zip(u, v))

    def cartan_matrix_entry(self, i, j):
        return self.pairing(self.alpha(i), self.alpha(j))


@dataclass(frozen=True)
class ParamSet:
    """The (q1, q2, q3) monomials of one algebra, with optional central C."""

    ctx: Context
    n: int
    q1: Mono
    q2: Mono
    q3: Mono
    C: Mono | None = None

    def __post_init__(self):
        prod = self.q1.mul(self.q2).mul(self.q3)
        if not prod.is_one():
            raise ValueError("q1*q2*q3 must be 1")

    def qpar(self, k):
        return (self.q1, self.q2, self.q3)[k - 1]

    def with_central(self):
        """Impose C = q3^(n/2), the evaluation-map normalization."""
        return replace(self, C=mono_root_power(self.q3, self.n, 2, self.ctx))

    def iota(self):
        """Swap q1 and q3; applying twice is the identity."""
        C = None
        if self.C is not None:
            C = mono_root_power(self.q1, self.n, 2, self.ctx)
        return replace(self, q1=self.q3, q3=self.q1, C=C)


def mono_root_power(m: Mono, num: int, den: int, ctx: Context) -> Mono:
    """m**(num/den) as an exact monomial in the context lattice."""
    if m.coeff != 1:
        raise ValueError("root of signed monomial")
    exps = []
    for x in m.exps:
        v = x * num
        if v % den:
            raise ValueError("monomial power outside exponent lattice")
        exps.append(v // den)
    return Mono(1, tuple(exps))


def standard_params(ctx: Context, n: int, central=False) -> ParamSet:
    """q1 = d/q, q2 = q^2, q3 = 1/(qd) inside a context carrying q and d."""
    ps = ParamSet(
        ctx,
        n,
        q1=ctx.mono(1, q=-1, d=1),
        q2=ctx.mono(1, q=2),
        q3=ctx.mono(1, q=-1, d=-1),
    )
    if central:
        ps = replace(ps, C=mono_root_power(ps.q3, n, 2, ctx))
    return ps


def iota_index(n, i):
    return (n - i) % n


# -- deformed Cartan -----------------------------------------------------------


def kron_mod(n, i, j):
    return 1 if (i - j) % n == 0 else 0


def deformed_cartan(ctx: Context, n: int, i: int, j: int, r: int) -> RatFunc:
    """a_{i,j}(r): the [r]/r-scaled deformed Cartan entry, exact RatFunc.

    All Kronecker branches that fire mod n are summed, so n = 1 and n = 2
    come out right without special cases.
    """
    if r == 0:
        raise ValueError("r must be nonzero")
    body = ctx.zero()
    if kron_mod(n, i, j):
        body = body + ctx.sym("q", r) + ctx.sym("q", -r)
    if kron_mod(n, i, j - 1):
        body = body - ctx.sym("d", r)
    if kron_mod(n, i, j + 1):
        body = body - ctx.sym("d", -r)
    return RatFunc(qint(ctx, r) * body, ctx.const(r))


def deformed_cartan_multiset(ctx: Context, n: int, i: int, j: int):
    """a_{i,j}(r) * r/[r] as a signed-monomial multiset: entries (s, m)
    meaning the function r -> sum_k s_k m_k^r."""
    out = []
    if kron_mod(n, i, j):
        out.append((1, ctx.mono(1, q=1)))
        out.append((1, ctx.mono(1, q=-1)))
    if kron_mod(n, i, j - 1):
        out.append((-1, ctx.mono(1, d=1)))
    if kron_mod(n, i, j + 1):
        out.append((-1, ctx.mono(1, d=-1)))
    return out


def affine_hx_poly(ctx: Context, n: int, i: int, j: int, r: int) -> LaurentPoly:
    """Coefficient of z^r x_j(z) in [h_{i,r}, x_j(z)] for quantum affine gl_n,
    normalized so the diagonal entry is q^r + q^-r.

    This is the d -> 1 limit of a_{i,j}(r) * r/[r]; for n >= 3 it equals
    [r a_{i,j}]/[r] with a_{i,j} the affine Cartan matrix, and it is the
    form under which the Heisenberg element Z_r commutes with x_j for
    every n >= 2.
    """
    body = ctx.zero()
    if kron_mod(n, i, j):
        body = body + ctx.sym("q", r) + ctx.sym("q", -r)
    if kron_mod(n, i, j - 1):
        body = body - ctx.one()
    if kron_mod(n, i, j + 1):
        body = body - ctx.one()
    return body


def zr_coefficient(ctx: Context, n: int, i: int, r: int) -> RatFunc:
    """The h_{i,r} coefficient in Z_r: (q^{ir} + q^{(n-i)r}) / (q^r - q^-r)."""
    num = ctx.sym("q", i * r) + ctx.sym("q", (n - i) * r)
    den = ctx.sym("q", r) - ctx.sym("q", -r)
    return RatFunc(num, den)


def zr_null_scalar(ctx: Context, n: int, j: int, r: int) -> RatFunc:
    """The scalar of [Z_r, x_j^+-(z)]; zero for 1 <= j <= n-1."""
    total = RatFunc(ctx.zero(), ctx.one())
    for i in range(n):
        total = total + zr_coefficient(ctx, n, i, r) * ctx.rat(affine_hx_poly(ctx, n, i, j, r))
    return total


# -- g factors -----------------------------------------------------------------


def g_factor_poly(ps: ParamSet, i, j, a: Mono, b: Mono) -> LaurentPoly:
    """g_{i,j}(z, w) evaluated at monomial arguments z = a, w = b."""
    ctx, n = ps.ctx, ps.n
    pa, pb = ctx.poly_from_mono(a), ctx.poly_from_mono(b)

    def lin(qm: Mono | None):
        if qm is None:
            return pa - pb
        return pa - pb.mul_mono(qm)

    if n == 1:
        return lin(ps.q1) * lin(ps.q2) * lin(ps.q3)
    if n == 2:
        if kron_mod(2, i, j):
            return lin(ps.q2)
        return lin(ps.q1) * lin(ps.q3)
    if kron_mod(n, i, j - 1):
        return lin(ps.q1)
    if kron_mod(n, i, j):
        return lin(ps.q2)
    if kron_mod(n, i, j + 1):
        return lin(ps.q3)
    return lin(None)


def d_factor(ps: ParamSet, i, j) -> Mono:
    """The sign/monomial d_{i,j} paired with g_{i,j}."""
    ctx, n = ps.ctx, ps.n
    if n == 1:
        return ctx.mono(1)
    if n == 2:
        return ctx.mono(1) if kron_mod(2, i, j) else ctx.mono(-1)
    if kron_mod(n, i, j - 1):
        return ctx.mono(1, d=-1)
    if kron_mod(n, i, j + 1):
        return ctx.mono(1, d=1)
    return ctx.mono(1)


# -- subalgebra parameter maps -------------------------------------------------


def subalgebra_params(ps: ParamSet, m: int | None, variant: str) -> ParamSet:
    """Parameters of the fused subalgebras sitting inside the rank-n algebra.

    E1m:      the rank-1 subalgebra attached to level m, 0 <= m <= n-1.
    tilde01:  the rank n-1 subalgebra from one simple fusion at node 0|1.
    tilde0n1: its image under iota.
    """
    ctx, n = ps.ctx, ps.n
    if variant == "E1m":
        if m is None or not 0 <= m <= n - 1:
            raise ValueError("m out of range")
        q1m = ps.q1.pow(m + 1).mul(ps.q3.pow(-(n - m - 1)))
        q3m = ps.q3.pow(n - m).mul(ps.q1.pow(-m))
        return ParamSet(ctx, 1, q1m, ps.q2, q3m)
    if variant == "tilde01":
        root = mono_root_power(ps.q1, 1, n - 1, ctx)
        return ParamSet(ctx, n - 1, ps.q1.mul(root), ps.q2, ps.q3.mul(root.inv()))
    if variant == "tilde0n1":
        root = mono_root_power(ps.q3, 1, n - 1, ctx)
        return ParamSet(ctx, n - 1, ps.q1.mul(root.inv()), ps.q2, ps.q3.mul(root))
    raise ValueError(f"unknown variant {variant!r}")
