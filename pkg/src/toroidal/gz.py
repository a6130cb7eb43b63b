"""The Gelfand-Zeitlin module of quantum gl_n with its explicit action.

Patterns are triangular arrays lambda_{i,j} = lambda0_{i,j} + k_{i,j} with
generic symbolic bases lambda0 (carried as pattern exponentials
X_{i,j} = q^{lambda0_{i,j}}) and integer offsets k.  The top row is frozen.
No interlacing conditions are imposed.
"""

from __future__ import annotations

from itertools import product

from .cartan import CartanContext
from .exact import Context, RatFunc


def pattern_cells(n):
    """Movable cells (i, j), 0 <= i <= j <= n-2, in row-major order."""
    return [(i, j) for j in range(n - 1) for i in range(j + 1)]


def all_cells(n):
    return [(i, j) for j in range(n) for i in range(j + 1)]


def xname(i, j):
    return f"X{i}_{j}"


class GZModule:
    """Carrier for the GZ action at rank n over exact rational functions."""

    def __init__(self, n, extra_symbols=(), L=1):
        self.n = n
        self.cells = pattern_cells(n)
        self.cell_index = {c: k for k, c in enumerate(self.cells)}
        names = ["q"] + [xname(i, j) for (i, j) in all_cells(n)] + list(extra_symbols)
        self.ctx = Context(names, L=L)
        self.cartan = CartanContext(n)
        self._qden = self.ctx.sym("q") - self.ctx.sym("q", -1)
        self._ccache = {}

    # -- patterns ----------------------------------------------------------

    def zero_pattern(self):
        return (0,) * len(self.cells)

    def patterns_in_box(self, box):
        rng = range(-box, box + 1)
        return [tuple(p) for p in product(rng, repeat=len(self.cells))]

    def shift(self, pattern, cell, step):
        k = self.cell_index[cell]
        return pattern[:k] + (pattern[k] + step,) + pattern[k + 1 :]

    def offset(self, pattern, i, j):
        if j == self.n - 1:
            return 0
        return pattern[self.cell_index[(i, j)]]

    # -- brackets of linear forms -------------------------------------------

    def lam_mono(self, pattern, coeffs, const=0):
        """Monomial q^(sum c * lambda_{i,j} + const) on the given pattern."""
        powers = {"q": const}
        for (i, j), c in coeffs.items():
            if not c:
                continue
            powers[xname(i, j)] = powers.get(xname(i, j), 0) + c
            powers["q"] += c * self.offset(pattern, i, j)
        return self.ctx.mono(1, **powers)

    def bracket(self, pattern, coeffs, const=0):
        """[sum c lambda + const] as an exact rational function."""
        plus = self.lam_mono(pattern, coeffs, const)
        minus = plus.inv()
        num = self.ctx.poly_from_mono(plus) - self.ctx.poly_from_mono(minus)
        return RatFunc(num, self._qden)

    def bracket_diff(self, pattern, a, b, const):
        """[lambda_a - lambda_b + const]."""
        return self.bracket(pattern, {a: 1, b: -1}, const)

    # -- GZ coefficients -----------------------------------------------------

    def cplus(self, k, i, pattern):
        """c^+_{k, i-1}: coefficient of raising lambda_{k,i-1} under e_i."""
        key = ("+", k, i, pattern)
        hit = self._ccache.get(key)
        if hit is not None:
            return hit
        out = self._cplus(k, i, pattern)
        self._ccache[key] = out
        return out

    def _cplus(self, k, i, pattern):
        one = RatFunc(self.ctx.one(), self.ctx.one())
        num = one
        for l in range(i - 1):
            num = num * self.bracket_diff(pattern, (l, i - 2), (k, i - 1), -l + k - 1)
        den = one
        for l in range(k + 1, i):
            den = den * self.bracket_diff(pattern, (l, i - 1), (k, i - 1), -l + k - 1)
            den = den * self.bracket_diff(pattern, (l, i - 1), (k, i - 1), -l + k)
        return num / den

    def cminus(self, k, i, pattern):
        """c^-_{k, i-1}: coefficient of lowering lambda_{k,i-1} under f_i."""
        key = ("-", k, i, pattern)
        hit = self._ccache.get(key)
        if hit is not None:
            return hit
        out = self._cminus(k, i, pattern)
        self._ccache[key] = out
        return out

    def _cminus(self, k, i, pattern):
        one = RatFunc(self.ctx.one(), self.ctx.one())
        num = one
        for l in range(i + 1):
            num = num * self.bracket_diff(pattern, (l, i), (k, i - 1), -l + k + 1)
        den = one
        for l in range(k):
            den = den * self.bracket_diff(pattern, (l, i - 1), (k, i - 1), -l + k)
            den = den * self.bracket_diff(pattern, (l, i - 1), (k, i - 1), -l + k + 1)
        return -num / den

    # -- vectors and generator action ----------------------------------------

    def vector(self, pattern, coeff=None):
        coeff = coeff if coeff is not None else RatFunc(self.ctx.one(), self.ctx.one())
        return {pattern: coeff}

    def vec_add(self, a, b):
        out = dict(a)
        for p, c in b.items():
            n = out.get(p)
            n = c if n is None else n + c
            if n.is_zero():
                out.pop(p, None)
            else:
                out[p] = n
        return out

    def vec_scale(self, a, s):
        return {p: c * s for p, c in a.items()}

    def vec_is_zero(self, a):
        return all(c.is_zero() for c in a.values())

    def qh_eigen(self, hvec, pattern):
        """Eigen-monomial of q^h, h = sum hvec_r eps_r."""
        powers = {"q": 0}
        for r in range(self.n):
            c = hvec[r] - (hvec[r + 1] if r + 1 < self.n else 0)
            if not c:
                continue
            for kk in range(r + 1):
                powers[xname(kk, r)] = powers.get(xname(kk, r), 0) + c
                powers["q"] += c * self.offset(pattern, kk, r)
        return self.ctx.mono(1, **powers)

    def apply_token(self, token, vec):
        kind = token[0]
        if kind == "e":
            i = token[1]
            out = {}
            for p, c in vec.items():
                for k in range(i):
                    coeff = self.cplus(k, i, p) * c
                    if coeff.is_zero():
                        continue
                    q = self.shift(p, (k, i - 1), +1)
                    cur = out.get(q)
                    cur = coeff if cur is None else cur + coeff
                    if cur.is_zero():
                        out.pop(q, None)
                    else:
                        out[q] = cur
            return out
        if kind == "f":
            i = token[1]
            out = {}
            for p, c in vec.items():
                for k in range(i):
                    coeff = self.cminus(k, i, p) * c
                    if coeff.is_zero():
                        continue
                    q = self.shift(p, (k, i - 1), -1)
                    cur = out.get(q)
                    cur = coeff if cur is None else cur + coeff
                    if cur.is_zero():
                        out.pop(q, None)
                    else:
                        out[q] = cur
            return out
        if kind == "qh":
            hvec = token[1]
            return {
                p: c * RatFunc(self.ctx.poly_from_mono(self.qh_eigen(hvec, p)), self.ctx.one())
                for p, c in vec.items()
            }
        raise ValueError(f"unknown token {token!r}")

    def apply_word(self, word, vec):
        for token in reversed(word):
            vec = self.apply_token(token, vec)
            if not vec:
                return {}
        return vec

    def apply_relation(self, relation_terms, pattern):
        """Sum of coeff * word applied to a basis vector; returns a vector."""
        out = {}
        base = self.vector(pattern)
        for coeff, word in relation_terms:
            v = self.apply_word(word, base)
            if coeff is not None:
                v = self.vec_scale(v, coeff)
            out = self.vec_add(out, v)
        return out


def verify_gln_suite(n, box, report=None):
    """Check every quantum gl_n defining relation on every basis pattern
    with offsets in [-box, box]; exact zero required."""
    from .catalog import gln_relation_instances
    from .report import VerificationReport

    rep = report if report is not None else VerificationReport("gln", {"n": n, "box": box})
    mod = GZModule(n)
    patterns = mod.patterns_in_box(box)
    for rel_id, idx, terms in gln_relation_instances(mod.ctx, n):
        for p in patterns:
            out = mod.apply_relation(terms, p)
            ok = mod.vec_is_zero(out)
            detail = None
            if not ok:
                bad = next(iter(out.items()))
                detail = f"pattern {p} -> {bad[0]}: {bad[1].dump()}"
            rep.record(rel_id, ok, idx + (p,), detail)
    rep.sort()
    return rep
