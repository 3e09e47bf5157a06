"""Independent reference computations in sympy: Groebner bases, standard monomials, ranks.

Generators of real degree 2 become sympy variables of degree 1.
"""

from __future__ import annotations

from itertools import combinations_with_replacement

import sympy as sp


class QuotientOracle:
    def __init__(self, names, relations):
        self.gens = sp.symbols(list(names))
        ns = dict(zip(names, self.gens))
        self.relations = [sp.expand(sp.sympify(r.replace("^", "**"), locals=ns)) for r in relations]
        self.G = sp.groebner(self.relations, *self.gens, order="grevlex")
        self.ns = ns

    def expr(self, text: str):
        return sp.expand(sp.sympify(text.replace("^", "**"), locals=self.ns))

    def standard_monomials(self, deg: int):
        lead = [sp.Poly(g, *self.gens).monoms(order="grevlex")[0] for g in self.G.exprs]
        out = []
        for combo in combinations_with_replacement(range(len(self.gens)), deg):
            exps = [combo.count(i) for i in range(len(self.gens))]
            if not any(all(e >= l for e, l in zip(exps, ld)) for ld in lead):
                out.append(sp.Mul(*[g ** e for g, e in zip(self.gens, exps)]))
        return out

    def dims(self, max_deg: int) -> dict[int, int]:
        """Dimensions keyed by real degree."""
        return {2 * k: n for k in range(max_deg + 1) if (n := len(self.standard_monomials(k)))}

    def reduce(self, expr):
        return self.G.reduce(sp.expand(expr))[1]

    def is_zero(self, expr) -> bool:
        return self.reduce(expr) == 0

    def coords(self, expr, deg: int) -> list:
        basis = self.standard_monomials(deg)
        red = sp.Poly(self.reduce(expr), *self.gens) if expr != 0 else None
        if red is None:
            return [0] * len(basis)
        return [red.coeff_monomial(m) for m in basis]

    def mult_matrix(self, e, deg: int):
        """Matrix of multiplication by ``e`` (degree one) from degree ``deg`` to ``deg + 1``."""
        src = self.standard_monomials(deg)
        cols = [self.coords(e * m, deg + 1) for m in src]
        return sp.Matrix(cols).T if cols and cols[0] else sp.zeros(len(self.standard_monomials(deg + 1)), len(src))

    def action_matrix(self, images: dict, deg: int):
        subs = {self.ns[k]: self.expr(v) for k, v in images.items()}
        src = self.standard_monomials(deg)
        cols = [self.coords(sp.expand(m.subs(subs, simultaneous=True)), deg) for m in src]
        return sp.Matrix(cols).T


def poly_to_sympy(ring_element, oracle: QuotientOracle):
    """The sympy expression of a ring element's coordinate polynomial."""
    out = 0
    for mono, c in ring_element.to_poly().items():
        term = sp.Rational(c.numerator, c.denominator)
        for g, e in zip(oracle.gens, mono):
            term *= g ** e
        out += term
    return sp.expand(out)


def truncated_inverse(expr, gens, top: int):
    """Inverse of ``1 + nilpotent`` as a polynomial truncated above total degree ``top``."""
    x = sp.expand(1 - expr)
    out, power = sp.Integer(1), sp.Integer(1)
    for _ in range(top):
        power = _truncate(sp.expand(power * x), gens, top)
        out += power
    return _truncate(sp.expand(out), gens, top)


def _truncate(expr, gens, top: int):
    if expr == 0:
        return expr
    p = sp.Poly(expr, *gens)
    return sp.expand(sum(c * sp.Mul(*[g ** e for g, e in zip(gens, m)]) for m, c in p.terms() if sum(m) <= top))


def gysin_dims(oracle: QuotientOracle, euler_text: str, top: int, swap: dict | None = None):
    """Circle-bundle cohomology dims by brute-force linear algebra: total and anti-invariant."""
    e = oracle.expr(euler_text)
    total, anti = {}, {}
    for k in range(2 * top + 3):
        if k % 2 == 0:
            deg = k // 2
            n = len(oracle.standard_monomials(deg))
            if not n:
                continue
            img = oracle.mult_matrix(e, deg - 1) if deg >= 1 else sp.zeros(n, 0)
            dim = n - (img.rank() if img.shape[1] else 0)
            if swap is not None and dim:
                s = oracle.action_matrix(swap, deg)
                pm = (sp.eye(n) - s) / 2
                a = pm.rank() - ((pm * img).rank() if img.shape[1] else 0)
        else:
            deg = (k - 1) // 2
            n = len(oracle.standard_monomials(deg))
            if not n:
                continue
            m = oracle.mult_matrix(e, deg)
            ker = m.nullspace() if m.shape[0] else [sp.eye(n)[:, i] for i in range(n)]
            dim = len(ker)
            if swap is not None and dim:
                s = oracle.action_matrix(swap, deg)
                pm = (sp.eye(n) - s) / 2
                a = sp.Matrix.hstack(*[pm * v for v in ker]).rank()
        if dim:
            total[k] = dim
            if swap is not None and a:
                anti[k] = a
    return total, anti
