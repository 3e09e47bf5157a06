"""Truncated graded-commutative quotient rings over Q.

A ring is given by even-degree generators, homogeneous relations and an
explicit truncation degree.  Each graded piece is computed separately: the
span of ``monomial * relation`` inside the degree-``k`` monomials is put in
reduced echelon form, the pivot monomials are eliminated and the remaining
monomials form the basis.  No Groebner bases.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .. import linalg

Monomial = tuple[int, ...]
Poly = dict[Monomial, Fraction]


class RingError(ValueError):
    pass


class RingSyntaxError(RingError):
    """Unparseable polynomial text or bundle JSON."""


class PresentationError(RingError):
    """Malformed presentation (duplicate names, non-homogeneous relation, ...)."""


# -- raw polynomials -------------------------------------------------------

def poly_add(a: Poly, b: Poly, scale: Fraction = Fraction(1)) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def parse_poly(text: str, names: list[str]) -> Poly:
    """Parse ``"a1^2 - 3/2*a1*a2 + 1"`` into a raw polynomial in ``names``."""
    n = len(names)
    index = {nm: i for i, nm in enumerate(names)}
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise RingSyntaxError(f"cannot parse polynomial {text!r}: {exc.msg}") from None

    def const(c) -> Poly:
        c = Fraction(c)
        return {(0,) * n: c} if c else {}

    def ev(node) -> Poly:
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise RingError(f"unknown generator {node.id!r} (have {names})")
            e = [0] * n
            e[index[node.id]] = 1
            return {tuple(e): Fraction(1)}
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            p = ev(node.operand)
            return {m: -c for m, c in p.items()} if isinstance(node.op, ast.USub) else p
        if isinstance(node, ast.BinOp):
            left, right = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return poly_add(left, right)
            if isinstance(node.op, ast.Sub):
                return poly_add(left, right, Fraction(-1))
            if isinstance(node.op, ast.Mult):
                return poly_mul(left, right)
            if isinstance(node.op, ast.Div):
                if any(any(m) for m in right) or not right:
                    raise RingError("division only by nonzero constants")
                c = right[(0,) * n]
                return {m: v / c for m, v in left.items()}
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)
                        and node.right.value >= 0):
                    raise RingError("exponents must be nonnegative integers")
                out = const(1)
                for _ in range(node.right.value):
                    out = poly_mul(out, left)
                return out
        raise RingError(f"unsupported syntax in {text!r}")

    return ev(tree)


def format_monomial(m: Monomial, names: list[str]) -> str:
    parts = []
    for nm, e in zip(names, m):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts)


def format_terms(terms: Iterable[tuple[str, Fraction]]) -> str:
    """Join (monomial text, coefficient) pairs as ``-a1^2 - a1*a2``."""
    out = ""
    for mono, c in terms:
        if c == 0:
            continue
        neg = c < 0
        a = -c if neg else c
        if mono:
            body = mono if a == 1 else f"{a}*{mono}"
        else:
            body = str(a)
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


# -- presentation and ring -------------------------------------------------

@dataclass(frozen=True)
class GradedRingPresentation:
    generators: tuple[tuple[str, int], ...]
    relations: tuple[str, ...]
    top_degree: int

    @classmethod
    def of(cls, generators, relations, top_degree) -> "GradedRingPresentation":
        return cls(tuple((str(n), int(d)) for n, d in generators), tuple(relations), int(top_degree))

    def to_json(self) -> dict:
        return {
            "generators": [[n, d] for n, d in self.generators],
            "relations": list(self.relations),
            "top_degree": self.top_degree,
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "GradedRingPresentation":
        return cls.of(obj["generators"], obj.get("relations", []), obj["top_degree"])


def _monomials_of_degree(degs: list[int], k: int) -> list[Monomial]:
    """All exponent vectors of weighted degree ``k``."""
    out: list[Monomial] = []

    def rec(i: int, left: int, acc: list[int]):
        if i == len(degs):
            if left == 0:
                out.append(tuple(acc))
            return
        for e in range(left // degs[i] + 1):
            acc.append(e)
            rec(i + 1, left - e * degs[i], acc)
            acc.pop()

    rec(0, k, [])
    return out


def _leading_key(m: Monomial) -> Monomial:
    # later generators weigh more: a2^2 is eliminated in favour of a1^2, a1*a2
    return tuple(reversed(m))


class GradedRing:
    """A truncated quotient ``Q[gens]/(relations)`` with per-degree bases."""

    def __init__(self, presentation: GradedRingPresentation, name: str | None = None):
        p = presentation
        self.presentation = p
        self.name = name
        self.names = [g for g, _ in p.generators]
        self.gen_degrees = [d for _, d in p.generators]
        if len(set(self.names)) != len(self.names):
            raise PresentationError(f"duplicate generator names in {self.names}")
        for nm, d in p.generators:
            if d <= 0 or d % 2:
                raise PresentationError(f"generator {nm} must have even positive degree, got {d}")
            if d > p.top_degree:
                raise PresentationError(f"generator {nm} of degree {d} exceeds top degree {p.top_degree}")
        self.top_degree = p.top_degree
        self.relations: list[tuple[int, Poly]] = []
        for text in p.relations:
            rel = parse_poly(text, self.names)
            degs = {self.mono_degree(m) for m in rel}
            if len(degs) > 1:
                raise PresentationError(f"relation {text!r} is not homogeneous (degrees {sorted(degs)})")
            if degs:
                self.relations.append((degs.pop(), rel))
        self.basis: dict[int, list[Monomial]] = {}
        self._reduce: dict[int, dict[Monomial, tuple[Fraction, ...]]] = {}
        for k in range(self.top_degree + 1):
            self._build_degree(k)
        self._mul_cache: dict[tuple[Monomial, Monomial], dict[int, tuple[Fraction, ...]]] = {}

    def mono_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.gen_degrees))

    def _build_degree(self, k: int) -> None:
        mons = sorted(_monomials_of_degree(self.gen_degrees, k), key=_leading_key, reverse=True)
        if not mons:
            self.basis[k] = []
            self._reduce[k] = {}
            return
        col = {m: i for i, m in enumerate(mons)}
        rows = []
        for dr, rel in self.relations:
            if dr > k:
                continue
            for mult in _monomials_of_degree(self.gen_degrees, k - dr):
                row = [Fraction(0)] * len(mons)
                for m, c in rel.items():
                    row[col[tuple(a + b for a, b in zip(m, mult))]] += c
                rows.append(row)
        red, pivots = linalg.rref(rows, len(mons)) if rows else ([], [])
        free = [i for i in range(len(mons)) if i not in pivots]
        # basis listed with the least leading monomial first (a1^2 before a1*a2)
        free_sorted = list(reversed(free))
        self.basis[k] = [mons[i] for i in free_sorted]
        pos = {i: j for j, i in enumerate(free_sorted)}
        table: dict[Monomial, tuple[Fraction, ...]] = {}
        for i in free:
            v = [Fraction(0)] * len(free)
            v[pos[i]] = Fraction(1)
            table[mons[i]] = tuple(v)
        for row, pc in zip(red, pivots):
            v = [Fraction(0)] * len(free)
            for i in free:
                if row[i]:
                    v[pos[i]] = -row[i]
            table[mons[pc]] = tuple(v)
        self._reduce[k] = table

    # -- queries -------------------------------------------------------------

    def dim(self, k: int) -> int:
        return len(self.basis.get(k, []))

    @cached_property
    def dims(self) -> dict[int, int]:
        return {k: len(b) for k, b in self.basis.items() if b}

    def even_dims(self) -> list[int]:
        return [self.dim(k) for k in range(0, self.top_degree + 1, 2)]

    def nonzero_top(self) -> int:
        return max(self.dims)

    def reduce_monomial(self, m: Monomial) -> tuple[int, tuple[Fraction, ...]] | None:
        k = self.mono_degree(m)
        if k > self.top_degree:
            return None
        return k, self._reduce[k][m]

    # -- element constructors ------------------------------------------------

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def one(self) -> "RingElement":
        return RingElement(self, {0: (Fraction(1),)})

    def gen(self, name: str) -> "RingElement":
        i = self.names.index(name)
        m = tuple(int(j == i) for j in range(len(self.names)))
        return self.from_poly({m: Fraction(1)})

    def from_poly(self, raw: Poly) -> "RingElement":
        comps: dict[int, list[Fraction]] = {}
        dropped = set()
        for m, c in raw.items():
            hit = self.reduce_monomial(m)
            if hit is None:
                dropped.add(self.mono_degree(m))
                continue
            k, vec = hit
            acc = comps.setdefault(k, [Fraction(0)] * len(vec))
            for i, x in enumerate(vec):
                if x:
                    acc[i] += c * x
        return RingElement(self, {k: tuple(v) for k, v in comps.items()}, frozenset(dropped))

    def __call__(self, text: str) -> "RingElement":
        return normal_form(self, text)

    def __repr__(self) -> str:
        label = self.name or "ring"
        return f"<GradedRing {label} gens={self.names} dims={self.even_dims()}>"

    def basis_product(self, a: Monomial, b: Monomial) -> dict[int, tuple[Fraction, ...]]:
        key = (a, b) if a <= b else (b, a)
        hit = self._mul_cache.get(key)
        if hit is None:
            m = tuple(x + y for x, y in zip(a, b))
            red = self.reduce_monomial(m)
            hit = {} if red is None else {red[0]: red[1]}
            self._mul_cache[key] = hit
        return hit


def build_ring(p: GradedRingPresentation, name: str | None = None) -> GradedRing:
    return GradedRing(p, name)


def normal_form(r: GradedRing, raw: str | Poly) -> "RingElement":
    """Reduced form of a raw polynomial; degrees above the truncation are dropped
    and listed in ``.truncated``."""
    if isinstance(raw, str):
        raw = parse_poly(raw, r.names)
    return r.from_poly(raw)


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: GradedRing
    comps: Mapping[int, tuple[Fraction, ...]]
    truncated: frozenset = field(default=frozenset())

    def __post_init__(self):
        clean = {k: tuple(Fraction(x) for x in v) for k, v in self.comps.items() if any(v)}
        object.__setattr__(self, "comps", clean)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "RingElement") -> None:
        if other.ring is not self.ring:
            raise RingError("elements of different rings")

    def _lift(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            self._check(other)
            return other
        c = Fraction(other)
        return RingElement(self.ring, {0: (c,)})

    def __add__(self, other) -> "RingElement":
        other = self._lift(other)
        out = {k: list(v) for k, v in self.comps.items()}
        for k, v in other.comps.items():
            acc = out.setdefault(k, [Fraction(0)] * len(v))
            for i, x in enumerate(v):
                acc[i] += x
        return RingElement(self.ring, {k: tuple(v) for k, v in out.items()})

    __radd__ = __add__

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, {k: tuple(-x for x in v) for k, v in self.comps.items()})

    def __sub__(self, other) -> "RingElement":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "RingElement":
        return self._lift(other) - self

    def __mul__(self, other) -> "RingElement":
        if not isinstance(other, RingElement):
            c = Fraction(other)
            return RingElement(self.ring, {k: tuple(c * x for x in v) for k, v in self.comps.items()})
        self._check(other)
        r = self.ring
        out: dict[int, list[Fraction]] = {}
        for ka, va in self.comps.items():
            for kb, vb in other.comps.items():
                if ka + kb > r.top_degree:
                    continue
                for i, x in enumerate(va):
                    if not x:
                        continue
                    for j, y in enumerate(vb):
                        if not y:
                            continue
                        for k, vec in r.basis_product(r.basis[ka][i], r.basis[kb][j]).items():
                            acc = out.setdefault(k, [Fraction(0)] * len(vec))
                            for t, z in enumerate(vec):
                                if z:
                                    acc[t] += x * y * z
        return RingElement(r, {k: tuple(v) for k, v in out.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RingElement":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self) -> "RingElement":
        """Inverse of a unit (degree-0 part nonzero); the rest is nilpotent."""
        c0 = self.comps.get(0, (Fraction(0),))[0]
        if c0 == 0:
            raise RingError("element is not a unit")
        x = self * (1 / c0) - 1
        out = self.ring.one()
        term = self.ring.one()
        for _ in range(self.ring.top_degree // 2 + 1):
            term = term * (-x)
            if term.is_zero():
                break
            out = out + term
        return out * (1 / c0)

    def __truediv__(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            return self * other.inverse()
        return self * (1 / Fraction(other))

    # -- comparison / access -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.one() * other
        if not isinstance(other, RingElement):
            return NotImplemented
        return other.ring is self.ring and dict(self.comps) == dict(other.comps)

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.comps.items())))

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, k: int) -> "RingElement":
        return RingElement(self.ring, {k: self.comps[k]} if k in self.comps else {})

    def coords(self, k: int) -> tuple[Fraction, ...]:
        return self.comps.get(k, (Fraction(0),) * self.ring.dim(k))

    def degrees(self) -> list[int]:
        return sorted(self.comps)

    def is_homogeneous(self, k: int) -> bool:
        return set(self.comps) <= {k}

    def to_poly(self) -> Poly:
        out: Poly = {}
        for k, v in self.comps.items():
            for m, c in zip(self.ring.basis[k], v):
                if c:
                    out[m] = c
        return out

    def __str__(self) -> str:
        terms = []
        for k in sorted(self.comps):
            for m, c in zip(self.ring.basis[k], self.comps[k]):
                terms.append((format_monomial(m, self.ring.names), c))
        return format_terms(terms)

    def __repr__(self) -> str:
        return f"RingElement({self})"

    def to_json(self) -> dict:
        return {str(k): [str(x) for x in v] for k, v in sorted(self.comps.items())}

    @classmethod
    def from_json(cls, ring: GradedRing, obj: Mapping) -> "RingElement":
        comps = {}
        for k, v in obj.items():
            k = int(k)
            if len(v) != ring.dim(k):
                raise RingError(f"degree {k} expects {ring.dim(k)} coordinates, got {len(v)}")
            comps[k] = tuple(Fraction(x) for x in v)
        return cls(ring, comps)


class RingMap:
    """Degree-preserving algebra map given on generators; checked on relations."""

    def __init__(self, source: GradedRing, target: GradedRing, images: Mapping[str, RingElement | str]):
        self.source = source
        self.target = target
        imgs = {}
        for nm, deg in zip(source.names, source.gen_degrees):
            if nm not in images:
                raise RingError(f"no image given for generator {nm}")
            img = images[nm]
            if isinstance(img, str):
                img = normal_form(target, img)
            if img.ring is not target:
                raise RingError(f"image of {nm} lives in a different ring")
            if not img.is_homogeneous(deg):
                raise RingError(f"image of {nm} is not homogeneous of degree {deg}")
            imgs[nm] = img
        self.images = imgs
        self._gen_list = [imgs[nm] for nm in source.names]
        self._cache: dict[Monomial, RingElement] = {}
        for deg, rel in source.relations:
            if not self.apply_poly(rel).is_zero():
                raise RingError(f"relation in degree {deg} of {source.names} does not map to zero")
        # the source truncation must not kill anything the target keeps
        for k in range(source.top_degree + 1, target.top_degree + 1):
            for m in _monomials_of_degree(source.gen_degrees, k):
                if not self.apply_poly({m: Fraction(1)}).is_zero():
                    raise RingError(f"source truncation at {source.top_degree} is not respected in degree {k}")

    def apply_poly(self, raw: Poly) -> RingElement:
        out = self.target.zero()
        for m, c in raw.items():
            out = out + self._image_monomial(m) * c
        return out

    def _image_monomial(self, m: Monomial) -> RingElement:
        hit = self._cache.get(m)
        if hit is None:
            hit = self.target.one()
            for img, e in zip(self._gen_list, m):
                if e:
                    hit = hit * img ** e
            self._cache[m] = hit
        return hit

    def __call__(self, x: RingElement) -> RingElement:
        if x.ring is not self.source:
            raise RingError("element is not in the source ring")
        return self.apply_poly(x.to_poly())

    def compose(self, other: "RingMap") -> "RingMap":
        """``self ∘ other``."""
        return RingMap(other.source, self.target, {nm: self(img) for nm, img in other.images.items()})

    def matrix(self, k: int) -> list[list[Fraction]]:
        """Matrix of the map on degree ``k`` (columns = source basis)."""
        cols = [self.apply_poly({m: Fraction(1)}).coords(k) for m in self.source.basis.get(k, [])]
        return linalg.transpose(cols, self.target.dim(k)) if cols else []


class Involution(RingMap):
    def __init__(self, ring: GradedRing, images: Mapping[str, RingElement | str]):
        super().__init__(ring, ring, images)
        for nm in ring.names:
            if self(self.images[nm]) != ring.gen(nm):
                raise RingError(f"map is not an involution: generator {nm} is not fixed by its square")


def swap_involution(ring: GradedRing) -> Involution:
    a, b = ring.names
    return Involution(ring, {a: b, b: a})


def all_monomials(r: GradedRing) -> Iterable[Monomial]:
    for k in range(r.top_degree + 1):
        yield from _monomials_of_degree(r.gen_degrees, k)


__all__ = [
    "GradedRingPresentation", "GradedRing", "RingElement", "RingMap", "Involution",
    "RingError", "PresentationError", "build_ring", "normal_form", "parse_poly",
    "swap_involution",
]
