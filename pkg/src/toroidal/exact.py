"""Exact sparse Laurent-polynomial and rational-function arithmetic.

Coefficients are arbitrary-precision integers; exponents are integers
scaled by a per-context denominator L, so fractional powers like q**(n/2)
stay exact.  Rational functions are kept unreduced apart from monomial
content; equality is decided by cross multiplication, never by gcd.
"""

from __future__ import annotations

from fractions import Fraction


class PoleHit(ArithmeticError):
    """Substitution produced a zero denominator."""


class Context:
    """An ordered set of symbols together with the exponent denominator L.

    All polynomials created from one context share the symbol ordering,
    which fixes a deterministic term order (lexicographic on exponent
    tuples) used for dumps and exact division.
    """

    __slots__ = ("names", "index", "L", "nvars", "_zero", "_one")

    def __init__(self, names, L=1):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate symbol names")
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.L = int(L)
        self.nvars = len(names)
        self._zero = (0,) * self.nvars
        self._one = None

    def __repr__(self):
        return f"Context({list(self.names)}, L={self.L})"

    # -- exponent helpers -------------------------------------------------

    def unit_exp(self):
        return self._zero

    def scale(self, power) -> int:
        """Scale a rational power into the integer exponent lattice."""
        f = Fraction(power) * self.L
        if f.denominator != 1:
            raise ValueError(f"power {power} not in 1/{self.L} lattice")
        return int(f)

    def exp(self, **powers):
        """Exponent tuple for a monomial given as symbol=power kwargs."""
        e = [0] * self.nvars
        for name, p in powers.items():
            e[self.index[name]] += self.scale(p)
        return tuple(e)

    def mono(self, coeff=1, **powers) -> "Mono":
        return Mono(int(coeff), self.exp(**powers))

    def mono_mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def mono_div(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def mono_pow(self, a, k):
        return tuple(x * k for x in a)

    # -- polynomial constructors ------------------------------------------

    def zero(self):
        return LaurentPoly(self, {})

    def one(self):
        if self._one is None:
            self._one = LaurentPoly(self, {self._zero: 1})
        return self._one

    def const(self, c):
        c = int(c)
        return LaurentPoly(self, {self._zero: c} if c else {})

    def sym(self, name, power=1):
        return LaurentPoly(self, {self.exp(**{name: power}): 1})

    def poly_from_mono(self, m: "Mono"):
        if m.coeff == 0:
            return self.zero()
        return LaurentPoly(self, {m.exps: m.coeff})

    def rat(self, num, den=None):
        num = self._coerce(num)
        den = self.one() if den is None else self._coerce(den)
        return RatFunc(num, den)

    def _coerce(self, x):
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, Mono):
            return self.poly_from_mono(x)
        if isinstance(x, int):
            return self.const(x)
        raise TypeError(f"cannot coerce {type(x)} to LaurentPoly")


class Mono:
    """A signed monomial: integer coefficient times a symbol power product."""

    __slots__ = ("coeff", "exps")

    def __init__(self, coeff, exps):
        self.coeff = coeff
        self.exps = exps

    def __eq__(self, other):
        return (
            isinstance(other, Mono)
            and self.coeff == other.coeff
            and self.exps == other.exps
        )

    def __hash__(self):
        return hash((self.coeff, self.exps))

    def __repr__(self):
        return f"Mono({self.coeff}, {self.exps})"

    def mul(self, other):
        return Mono(self.coeff * other.coeff, tuple(x + y for x, y in zip(self.exps, other.exps)))

    def inv(self):
        if self.coeff not in (1, -1):
            raise ValueError("only unit monomials invert")
        return Mono(self.coeff, tuple(-x for x in self.exps))

    def pow(self, k):
        if k < 0:
            return self.inv().pow(-k)
        c = self.coeff ** k
        return Mono(c, tuple(x * k for x in self.exps))

    def is_one(self):
        return self.coeff == 1 and all(x == 0 for x in self.exps)


class LaurentPoly:
    """Sparse Laurent polynomial: dict from exponent tuples to int coeffs.

    Instances are treated as immutable; all operations return new objects.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = terms

    # -- basics ------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def n_terms(self):
        return len(self.terms)

    def __add__(self, other):
        other = self.ctx._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            n = out.get(e, 0) + c
            if n:
                out[e] = n
            else:
                out.pop(e, None)
        return LaurentPoly(self.ctx, out)

    def __neg__(self):
        return LaurentPoly(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self.ctx._coerce(other))

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.ctx.zero()
            return LaurentPoly(self.ctx, {e: c * other for e, c in self.terms.items()})
        other = self.ctx._coerce(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        out = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                n = out.get(e, 0) + ca * cb
                if n:
                    out[e] = n
                else:
                    del out[e]
        return LaurentPoly(self.ctx, out)

    __rmul__ = __mul__

    def mul_mono(self, m: Mono):
        if m.coeff == 0:
            return self.ctx.zero()
        return LaurentPoly(
            self.ctx,
            {tuple(x + y for x, y in zip(e, m.exps)): c * m.coeff for e, c in self.terms.items()},
        )

    def pow(self, k):
        if k < 0:
            raise ValueError("negative poly power; use RatFunc")
        out = self.ctx.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- structure ---------------------------------------------------------

    def content_mono(self):
        """Largest monomial (with positive gcd coefficient) dividing self."""
        if not self.terms:
            return Mono(1, self.ctx.unit_exp())
        it = iter(self.terms.items())
        e0, c0 = next(it)
        mins = list(e0)
        from math import gcd

        g = abs(c0)
        for e, c in it:
            g = gcd(g, abs(c))
            for i, x in enumerate(e):
                if x < mins[i]:
                    mins[i] = x
        return Mono(g, tuple(mins))

    def div_mono(self, m: Mono):
        return LaurentPoly(
            self.ctx,
            {tuple(x - y for x, y in zip(e, m.exps)): c // m.coeff for e, c in self.terms.items()},
        )

    def leading(self):
        """Lexicographically largest term as (exps, coeff)."""
        e = max(self.terms)
        return e, self.terms[e]

    def as_mono(self):
        """The single term as a Mono, or None if not a monomial."""
        if len(self.terms) != 1:
            return None
        (e, c), = self.terms.items()
        return Mono(c, e)

    def single_signed_mono(self):
        m = self.as_mono()
        if m is None or m.coeff not in (1, -1):
            return None
        return m

    def degree_in(self, name):
        i = self.ctx.index[name]
        if not self.terms:
            return 0
        return max(e[i] for e in self.terms)

    def involves(self, name):
        i = self.ctx.index[name]
        return any(e[i] for e in self.terms)

    # -- substitution -------------------------------------------------------

    def subs_mono(self, bindings: dict):
        """Substitute symbols by signed monomials (exact, stays polynomial)."""
        if not bindings:
            return self
        idx = {self.ctx.index[n]: m for n, m in bindings.items()}
        out = {}
        for e, c in self.terms.items():
            ne = list(e)
            for i in idx:
                ne[i] = 0
            coeff = c
            for i, m in idx.items():
                k = e[i]
                if k == 0:
                    continue
                if k % self.ctx.L:
                    if m.coeff != 1 or any(x * k % self.ctx.L for x in m.exps):
                        raise ValueError("fractional power of substituted symbol")
                    ne = [a + (x * k) // self.ctx.L for a, x in zip(ne, m.exps)]
                    continue
                kk = k // self.ctx.L
                if m.coeff == 1:
                    pass
                elif m.coeff == -1:
                    coeff = -coeff if kk % 2 else coeff
                else:
                    if kk < 0:
                        raise ValueError("cannot invert non-unit coefficient")
                    coeff *= m.coeff ** kk
                ne = [a + x * kk for a, x in zip(ne, m.exps)]
            e2 = tuple(ne)
            n = out.get(e2, 0) + coeff
            if n:
                out[e2] = n
            else:
                del out[e2]
        return LaurentPoly(self.ctx, out)

    def subs_general(self, bindings: dict):
        """Substitute symbols by RatFuncs.  Exponents of substituted symbols
        must be integers.  Returns a RatFunc."""
        ctx = self.ctx
        idx = sorted(ctx.index[n] for n in bindings)
        vals = {ctx.index[n]: v for n, v in bindings.items()}
        for i in idx:
            if vals[i].is_zero():
                raise ValueError("binding to zero is not invertible")
        result = RatFunc(ctx.zero(), ctx.one())
        for e, c in self.terms.items():
            ne = list(e)
            term = RatFunc(ctx.const(c), ctx.one())
            for i in idx:
                k = ne[i]
                if k % ctx.L:
                    raise ValueError("fractional power in general substitution")
                ne[i] = 0
                term = term * vals[i].int_pow(k // ctx.L)
            term = term * RatFunc(LaurentPoly(ctx, {tuple(ne): 1}), ctx.one())
            result = result + term
        return result

    # -- output -------------------------------------------------------------

    def dump(self):
        """Deterministic s-expression style dump."""
        if not self.terms:
            return "(poly)"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = " ".join(
                f"({self.ctx.names[i]} {x})" for i, x in enumerate(e) if x
            )
            parts.append(f"({c} {factors})" if factors else f"({c})")
        return "(poly " + " ".join(parts) + ")"

    def __repr__(self):
        return self.dump()


def divexact(a: LaurentPoly, b: LaurentPoly):
    """Exact division a / b for Laurent polynomials.

    Returns the quotient, or None when b does not divide a.  Both are
    shifted into ordinary polynomial position first; lex leading-term
    elimination then terminates.
    """
    ctx = a.ctx
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return ctx.zero()
    if len(a.terms) < len(b.terms):
        return None
    # necessary condition: per-symbol exponent span of b fits inside a
    for i in range(ctx.nvars):
        amin = amax = None
        for e in a.terms:
            x = e[i]
            amin = x if amin is None or x < amin else amin
            amax = x if amax is None or x > amax else amax
        bmin = bmax = None
        for e in b.terms:
            x = e[i]
            bmin = x if bmin is None or x < bmin else bmin
            bmax = x if bmax is None or x > bmax else bmax
        if bmax - bmin > amax - amin:
            return None
    ca, cb = a.content_mono(), b.content_mono()
    if ca.coeff % cb.coeff:
        return None
    a = a.div_mono(ca)
    b = b.div_mono(cb)
    eb, kb = b.leading()
    rem = {e: c for e, c in a.terms.items()}
    quo = {}
    while rem:
        e = max(rem)
        c = rem[e]
        if c % kb:
            return None
        qe = tuple(x - y for x, y in zip(e, eb))
        if any(x < 0 for x in qe):
            return None
        qc = c // kb
        quo[qe] = qc
        for e2, c2 in b.terms.items():
            e3 = tuple(x + y for x, y in zip(qe, e2))
            n = rem.get(e3, 0) - qc * c2
            if n:
                rem[e3] = n
            else:
                rem.pop(e3, None)
    q = LaurentPoly(ctx, quo)
    shift = Mono(ca.coeff // cb.coeff, tuple(x - y for x, y in zip(ca.exps, cb.exps)))
    return q.mul_mono(shift)


_CANCEL_LIMIT = 120  # skip divexact attempts on very large operands


def _normalize_factor(f: LaurentPoly):
    """Split f into (unit monomial and integer content, primitive factor)."""
    c = f.content_mono()
    prim = f.div_mono(c)
    if prim.terms[max(prim.terms)] < 0:
        prim = -prim
        c = Mono(-c.coeff, c.exps)
    return c, prim


class RatFunc:
    """Rational function over a Context with a factored denominator.

    The denominator is held as a multiset of primitive polynomial factors
    (times a positive integer); it is never multiplied out except on
    demand.  No gcd is ever computed: cancellation is restricted to
    monomial content and exact trial division by existing factors, and
    equality is decided by cross multiplication.
    """

    __slots__ = ("num", "dfac", "dint")

    def __init__(self, num: LaurentPoly, den=None, _dfac=None, _dint=None):
        ctx = num.ctx
        if _dfac is not None:
            self.num = num
            self.dfac = _dfac
            self.dint = _dint if _dint is not None else 1
            return
        if den is None:
            den = ctx.one()
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.dfac, self.dint = num, (), 1
            return
        m, prim = _normalize_factor(den)
        num = num.mul_mono(Mono(1, tuple(-x for x in m.exps)))
        dint = m.coeff
        if dint < 0:
            num, dint = -num, -dint
        if prim == ctx.one():
            self.num, self.dfac, self.dint = num, (), dint
        else:
            self.num, self.dfac, self.dint = num, ((prim, 1),), dint
        self._reduce_int()

    def _reduce_int(self):
        if self.dint == 1 or self.num.is_zero():
            if self.num.is_zero():
                self.dfac, self.dint = (), 1
            return
        from math import gcd

        g = self.dint
        for c in self.num.terms.values():
            g = gcd(g, c)
            if g == 1:
                return
        if g > 1:
            self.num = LaurentPoly(self.ctx, {e: c // g for e, c in self.num.terms.items()})
            self.dint //= g

    @classmethod
    def _make(cls, num, dfac, dint):
        if num.is_zero():
            return cls(num, None, _dfac=(), _dint=1)
        out = cls(num, None, _dfac=tuple(sorted(dfac, key=_factor_key)), _dint=dint)
        out._reduce_int()
        return out

    @classmethod
    def over_factors(cls, num, factors):
        """num divided by a product of polynomial factors, kept factored."""
        dfac = {}
        dint = 1
        for f in factors:
            if f.is_zero():
                raise ZeroDivisionError("zero denominator factor")
            m, prim = _normalize_factor(f)
            num = num.mul_mono(Mono(1, tuple(-x for x in m.exps)))
            dint *= m.coeff
            if prim != num.ctx.one():
                dfac[prim] = dfac.get(prim, 0) + 1
        if dint < 0:
            num, dint = -num, -dint
        return cls._make(num, tuple(dfac.items()), dint)

    @property
    def ctx(self):
        return self.num.ctx

    @property
    def den(self) -> LaurentPoly:
        out = self.ctx.const(self.dint)
        for f, k in self.dfac:
            for _ in range(k):
                out = out * f
        return out

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        return RatFunc(self.ctx._coerce(other))

    def __add__(self, other):
        other = self._coerce(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        d1, d2 = dict(self.dfac), dict(other.dfac)
        union = dict(d1)
        for f, k in d2.items():
            union[f] = max(union.get(f, 0), k)
        from math import gcd

        g = gcd(self.dint, other.dint)
        i1, i2 = self.dint // g, other.dint // g
        lcm_int = self.dint * i2
        n1 = self.num * i2
        for f, k in union.items():
            extra = k - d1.get(f, 0)
            for _ in range(extra):
                n1 = n1 * f
        n2 = other.num * i1
        for f, k in union.items():
            extra = k - d2.get(f, 0)
            for _ in range(extra):
                n2 = n2 * f
        return RatFunc._make(n1 + n2, tuple(union.items()), lcm_int)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._make(-self.num, self.dfac, self.dint)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        num = self.num * other.num
        if num.is_zero():
            return RatFunc(num)
        dfac = dict(self.dfac)
        for f, k in other.dfac:
            dfac[f] = dfac.get(f, 0) + k
        # cancel factors that divide the numerator exactly
        if num.n_terms() <= _CANCEL_LIMIT:
            for f in list(dfac):
                while dfac[f] > 0 and f.n_terms() <= num.n_terms():
                    q = divexact(num, f)
                    if q is None:
                        break
                    num = q
                    dfac[f] -= 1
                if dfac[f] == 0:
                    del dfac[f]
        return RatFunc._make(num, tuple(dfac.items()), self.dint * other.dint)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverting zero")
        m, prim = _normalize_factor(self.num)
        num = self.ctx.const(self.dint).mul_mono(Mono(1, tuple(-x for x in m.exps)))
        for f, k in self.dfac:
            for _ in range(k):
                num = num * f
        dint = m.coeff
        if dint < 0:
            num, dint = -num, -dint
        dfac = ((prim, 1),) if prim != self.ctx.one() else ()
        return RatFunc._make(num, dfac, dint)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def int_pow(self, k):
        if k == 0:
            return RatFunc(self.ctx.one())
        if k > 0:
            out = RatFunc._make(
                self.num.pow(k), tuple((f, m * k) for f, m in self.dfac), self.dint ** k
            )
            return out
        return self.inv().int_pow(-k)

    def equals(self, other):
        other = self._coerce(other)
        # cancel the shared denominator factors before cross multiplying
        d1, d2 = dict(self.dfac), dict(other.dfac)
        e1 = self.num * other.dint
        e2 = other.num * self.dint
        for f, k in d2.items():
            extra = k - min(k, d1.get(f, 0))
            for _ in range(extra):
                e1 = e1 * f
        for f, k in d1.items():
            extra = k - min(k, d2.get(f, 0))
            for _ in range(extra):
                e2 = e2 * f
        return (e1 - e2).is_zero()

    def subs_mono(self, bindings):
        num = self.num.subs_mono(bindings)
        dfac = []
        dint = self.dint
        extra_inv = Mono(1, self.ctx.unit_exp())
        for f, k in self.dfac:
            f2 = f.subs_mono(bindings)
            if f2.is_zero():
                raise ZeroDivisionError("denominator factor vanished under substitution")
            m, prim = _normalize_factor(f2)
            for _ in range(k):
                extra_inv = extra_inv.mul(Mono(1, tuple(-x for x in m.exps)))
                dint *= m.coeff
            if prim != self.ctx.one():
                dfac.append((prim, k))
        num = num.mul_mono(extra_inv)
        if dint < 0:
            num, dint = -num, -dint
        return RatFunc._make(num, tuple(dfac), dint)

    def subs_general(self, bindings):
        num = self.num.subs_general(bindings)
        den = self.den.subs_general(bindings)
        if den.is_zero():
            raise PoleHit("pole hit")
        return num / den

    def cancel_binomial(self, binom: LaurentPoly):
        """Cancel factors equal to `binom` (up to monomial content) against
        the numerator; returns (ratfunc, fully_cancelled)."""
        mb, pb = _normalize_factor(binom)
        num = self.num
        dfac = dict(self.dfac)
        k = dfac.get(pb, 0)
        while k > 0:
            q = divexact(num, pb)
            if q is None:
                return RatFunc._make(num, tuple(dfac.items()), self.dint), False
            num = q
            k -= 1
            dfac[pb] = k
        dfac.pop(pb, None)
        return RatFunc._make(num, tuple(dfac.items()), self.dint), True

    def dump(self):
        if not self.dfac and self.dint == 1:
            return self.num.dump()
        parts = [self.num.dump()]
        if self.dint != 1:
            parts.append(f"(int {self.dint})")
        for f, k in self.dfac:
            parts.append(f.dump() if k == 1 else f"(pow {k} {f.dump()})")
        return "(div " + " ".join(parts) + ")"

    def __repr__(self):
        return self.dump()


def _factor_key(fk):
    f, k = fk
    return (sorted(f.terms.items()), k)


# -- q-number helpers --------------------------------------------------------


def qint(ctx: Context, r: int, qname="q") -> LaurentPoly:
    """The q-integer [r] = (q^r - q^-r)/(q - q^-1) as a Laurent polynomial."""
    if r == 0:
        return ctx.zero()
    sign = 1 if r > 0 else -1
    r = abs(r)
    out = ctx.zero()
    for j in range(r):
        out = out + ctx.sym(qname, r - 1 - 2 * j)
    return out * sign


def qbinom(ctx: Context, n: int, k: int, qname="q") -> LaurentPoly:
    """Gaussian binomial [n choose k] in the symmetric convention."""
    if k < 0 or k > n:
        return ctx.zero()
    num = ctx.one()
    den = ctx.one()
    for j in range(1, k + 1):
        num = num * qint(ctx, n - j + 1, qname)
        den = den * qint(ctx, j, qname)
    q = divexact(num, den)
    assert q is not None, "Gaussian binomial must divide exactly"
    return q


def qfactor(ctx: Context, *pairs) -> LaurentPoly:
    """Product of binomials (a - b) given as (a_mono, b_mono) pairs."""
    out = ctx.one()
    for a, b in pairs:
        out = out * (ctx.poly_from_mono(a) - ctx.poly_from_mono(b))
    return out
