"""Laurent polynomials in t, u, v with integer coefficients.

Used for mixed Hodge polynomials of complements: a Borel-Moore class of
degree ``i`` and twist ``m`` in a discriminant of complex codimension one in
``C^D`` contributes ``t^(2D-1-i) (uv)^(m-D)`` to the complement.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .twisted import TwistedDims

Exp = tuple[int, int, int]


class PolynomialError(ValueError):
    pass


class MHPolynomial(Mapping[Exp, int]):
    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[Exp, int] | Iterable[tuple[Exp, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[Exp, int] = {}
        for (a, b, c), k in items:
            key = (int(a), int(b), int(c))
            if int(k) != k:
                raise PolynomialError(f"non-integer coefficient {k}")
            acc[key] = acc.get(key, 0) + int(k)
        self._c = {k: acc[k] for k in sorted(acc) if acc[k]}

    @classmethod
    def one(cls) -> "MHPolynomial":
        return cls({(0, 0, 0): 1})

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, c: int = 0, coeff: int = 1) -> "MHPolynomial":
        return cls({(a, b, c): coeff})

    def __getitem__(self, key: Exp) -> int:
        return self._c.get(tuple(key), 0)

    def __iter__(self):
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, MHPolynomial):
            return self._c == other._c
        if isinstance(other, int):
            return self._c == MHPolynomial({(0, 0, 0): other})._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(self._c.items()))

    def __repr__(self) -> str:
        return f"MHPolynomial({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other: "MHPolynomial") -> "MHPolynomial":
        return MHPolynomial(list(self._c.items()) + list(other._c.items()))

    def __neg__(self) -> "MHPolynomial":
        return MHPolynomial({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "MHPolynomial") -> "MHPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "MHPolynomial":
        if isinstance(other, int):
            return MHPolynomial({k: v * other for k, v in self._c.items()})
        return MHPolynomial(
            ((a1 + a2, b1 + b2, c1 + c2), x * y)
            for (a1, b1, c1), x in self._c.items()
            for (a2, b2, c2), y in other._c.items()
        )

    __rmul__ = __mul__

    def to_json(self) -> str:
        return format_poly(self)


# -- text form -------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(\(uv\))|([tuv])|(\^)|(\*)|([+-])|(\{)|(\}))")


def parse_poly(text: str) -> MHPolynomial:
    """Parse e.g. ``"1 + t^3*(uv)^-2 - 2t^4u^{-1}v^{-2}"``."""
    toks: list[tuple[str, str]] = []
    pos = 0
    s = text.strip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise PolynomialError(f"unexpected character {s[pos]!r} at {pos} in {text!r}")
        kinds = ("int", "uv", "var", "pow", "mul", "sign", "lb", "rb")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                toks.append((kind, val))
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    toks.append(("end", ""))
    i = 0

    def peek():
        return toks[i][0]

    def take(kind):
        nonlocal i
        if toks[i][0] != kind:
            raise PolynomialError(f"expected {kind} but found {toks[i][1] or 'end'!r} in {text!r}")
        i += 1
        return toks[i - 1][1]

    def exponent() -> int:
        braced = peek() == "lb"
        if braced:
            take("lb")
        sign = 1
        if peek() == "sign":
            sign = -1 if take("sign") == "-" else 1
        val = sign * int(take("int"))
        if braced:
            take("rb")
        return val

    out: dict[Exp, int] = {}
    first = True
    while True:
        sign = 1
        while peek() == "sign":
            sign *= -1 if take("sign") == "-" else 1
        if not first and sign == 1 and toks[i - 1][0] != "sign":
            raise PolynomialError(f"missing '+' between terms in {text!r}")
        coeff = 1
        seen_any = False
        if peek() == "int":
            coeff = int(take("int"))
            seen_any = True
            if peek() == "mul":
                take("mul")
        exps = [0, 0, 0]
        while peek() in ("var", "uv"):
            kind, name = toks[i]
            i += 1
            e = 1
            if peek() == "pow":
                take("pow")
                e = exponent()
            if kind == "uv":
                exps[1] += e
                exps[2] += e
            else:
                exps["tuv".index(name)] += e
            seen_any = True
            if peek() == "mul":
                take("mul")
        if not seen_any:
            raise PolynomialError(f"empty term in {text!r}")
        key = tuple(exps)
        out[key] = out.get(key, 0) + sign * coeff
        first = False
        if peek() == "end":
            break
        if peek() != "sign":
            raise PolynomialError(f"unexpected {toks[i][1]!r} in {text!r}")
    return MHPolynomial(out)


def format_monomial(a: int, b: int, c: int) -> str:
    parts = []
    if a:
        parts.append(f"t^{a}")
    if b and b == c:
        parts.append(f"(uv)^{b}")
    else:
        if b:
            parts.append(f"u^{b}")
        if c:
            parts.append(f"v^{c}")
    return "*".join(parts)


def format_poly(p: Mapping[Exp, int]) -> str:
    if not p:
        return "0"
    out = ""
    for key in sorted(p):
        k = p[key]
        mono = format_monomial(*key)
        mag = abs(k)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        if not out:
            out = ("-" if k < 0 else "") + body
        else:
            out += (" - " if k < 0 else " + ") + body
    return out


# -- duality -----------------------------------------------------------------

def dualize(einf_totals: TwistedDims, D: int) -> MHPolynomial:
    """Mixed Hodge polynomial of ``C^D`` minus a hypersurface from the
    Borel-Moore homology of the hypersurface."""
    if D < 1:
        raise PolynomialError("ambient dimension must be >= 1")
    terms = [((0, 0, 0), 1)]
    for (i, m), n in einf_totals.items():
        a = 2 * D - 1 - i
        if a < 0:
            raise PolynomialError(f"class in degree {i} exceeds the real dimension {2 * D}")
        terms.append(((a, m - D, m - D), n))
    return MHPolynomial(terms)


def undualize(p: MHPolynomial, D: int) -> TwistedDims:
    """Inverse of :func:`dualize`: ``i = 2D - 1 - a``, ``m = b + D``."""
    rest = dict(p)
    if rest.get((0, 0, 0)) != 1:
        raise PolynomialError("polynomial must have constant term 1")
    del rest[(0, 0, 0)]
    out = {}
    for (a, b, c), k in rest.items():
        if b != c or k < 0 or a <= 0:
            raise PolynomialError(f"term t^{a}u^{b}v^{c} with coefficient {k} is not of dual shape")
        out[(2 * D - 1 - a, b + D)] = k
    return TwistedDims(out)


SPECIALIZATIONS = ("poincare_serre", "poincare", "euler")


def specialize(p: MHPolynomial, mode: str):
    if mode == "poincare_serre":
        return MHPolynomial(((a, b + c, 0), k) for (a, b, c), k in p.items())
    if mode == "poincare":
        return MHPolynomial(((a, 0, 0), k) for (a, b, c), k in p.items())
    if mode == "euler":
        return sum(k * (-1) ** (a % 2) for (a, _, _), k in p.items())
    raise PolynomialError(f"unknown specialization {mode!r}; choose from {SPECIALIZATIONS}")


# -- division ----------------------------------------------------------------

@dataclass(frozen=True)
class DivisionResult:
    divisible: bool
    quotient: MHPolynomial | None
    obstruction: Exp | None = None
    reason: str = ""

    def summary(self) -> str:
        if self.divisible:
            return f"divisible, quotient {self.quotient}"
        return f"not divisible, obstruction at {format_monomial(*self.obstruction) or '1'} ({self.reason})"


def _bounds(p: MHPolynomial) -> list[tuple[int, int]]:
    return [(min(k[i] for k in p), max(k[i] for k in p)) for i in range(3)]


def divide_exact(p: MHPolynomial, q: MHPolynomial) -> DivisionResult:
    """Exact division working upward from the lowest monomials.

    Quotient exponents are confined to the box allowed by the lowest and
    highest exponents of ``p`` and ``q``.  When ``p`` is not a multiple of
    ``q`` the reported obstruction is the first quotient term with a negative
    coefficient (where a product of polynomials with nonnegative coefficients
    would have to break), or else the first term that leaves the box.
    """
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return DivisionResult(True, MHPolynomial())
    bp, bq = _bounds(p), _bounds(q)
    box = [(lp - lq, hp - hq) for (lp, hp), (lq, hq) in zip(bp, bq)]
    lead = min(q)
    lead_c = q[lead]
    rem = dict(p)
    quot: dict[Exp, int] = {}
    first_negative: Exp | None = None
    escaped: Exp | None = None
    while rem:
        low = min(rem)
        m = tuple(x - y for x, y in zip(low, lead))
        c, r = divmod(rem[low], lead_c)
        if r or not all(lo <= x <= hi for x, (lo, hi) in zip(m, box)):
            escaped = m
            break
        quot[m] = c
        if c < 0 and first_negative is None:
            first_negative = m
        for k, v in q.items():
            key = tuple(x + y for x, y in zip(m, k))
            val = rem.get(key, 0) - c * v
            if val:
                rem[key] = val
            else:
                rem.pop(key, None)
    if not rem:
        return DivisionResult(True, MHPolynomial(quot))
    if first_negative is not None:
        return DivisionResult(False, None, first_negative, "candidate quotient acquires a negative coefficient")
    return DivisionResult(False, None, escaped, "remainder term cannot be cancelled inside the exponent range")
