"""Total Chern classes of bundles built from line bundles.

Bundles are described by a small expression tree (:class:`BundleExpr`);
:func:`chern_total` evaluates it to a :class:`TotalClass` in a given ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence, Union

from .presets import flag_ring, pair_ring, pair_to_flag_pullback
from .ring import GradedRing, RingElement, RingError, RingMap, RingSyntaxError, normal_form


class RankError(RingError):
    pass


@dataclass(frozen=True, eq=False)
class TotalClass:
    """A unit total Chern class together with the bundle rank (None if unknown)."""

    element: RingElement
    rank: int | None = None

    def __post_init__(self):
        c0 = self.element.coords(0)
        if tuple(c0) != (Fraction(1),):
            raise RingError(f"total class must start with 1, got degree-0 part {list(map(str, c0))}")

    @property
    def ring(self) -> GradedRing:
        return self.element.ring

    def c(self, k: int) -> RingElement:
        return self.element.component(2 * k)

    def __eq__(self, other) -> bool:
        if isinstance(other, TotalClass):
            return self.element == other.element
        if isinstance(other, RingElement):
            return self.element == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.element)

    def __str__(self) -> str:
        return str(self.element)


# -- expression tree -------------------------------------------------------

LineClass = Union[RingElement, str]


@dataclass(frozen=True)
class Line:
    c1: LineClass


@dataclass(frozen=True)
class Trivial:
    rank: int


@dataclass(frozen=True)
class WhitneySum:
    parts: tuple


@dataclass(frozen=True)
class InverseFromExactSequence:
    """The kernel ``E`` in ``0 -> E -> trivial -> (+) L_i -> 0``."""

    quotients: tuple
    trivial_rank: int | None = None


@dataclass(frozen=True)
class TensorWithLine:
    rank: int
    base: "BundleExpr"
    c1: LineClass


@dataclass(frozen=True)
class Pullback:
    map: RingMap
    base: "BundleExpr"


@dataclass(frozen=True)
class QuotientClass:
    num: "BundleExpr"
    den: "BundleExpr"


@dataclass(frozen=True)
class Known:
    total: RingElement | str
    rank: int | None = None


BundleExpr = Union[Line, Trivial, WhitneySum, InverseFromExactSequence, TensorWithLine,
                   Pullback, QuotientClass, Known]


def _line(r: GradedRing, c1: LineClass) -> RingElement:
    x = normal_form(r, c1) if isinstance(c1, str) else c1
    if x.ring is not r:
        raise RingError("line class belongs to a different ring")
    if not x.is_homogeneous(2):
        raise RingError(f"first Chern class {x} is not of degree 2")
    return x


def _add_ranks(*ranks):
    return None if any(x is None for x in ranks) else sum(ranks)


def chern_total(r: GradedRing, e: BundleExpr) -> TotalClass:
    if isinstance(e, Line):
        return TotalClass(r.one() + _line(r, e.c1), 1)
    if isinstance(e, Trivial):
        if e.rank < 0:
            raise RankError("negative trivial rank")
        return TotalClass(r.one(), e.rank)
    if isinstance(e, WhitneySum):
        out, rank = r.one(), 0
        for part in e.parts:
            t = chern_total(r, part)
            out = out * t.element
            rank = _add_ranks(rank, t.rank)
        return TotalClass(out, rank)
    if isinstance(e, InverseFromExactSequence):
        prod = r.one()
        for q in e.quotients:
            prod = prod * (r.one() + _line(r, q))
        rank = None
        if e.trivial_rank is not None:
            rank = e.trivial_rank - len(e.quotients)
            if rank < 0:
                raise RankError(f"trivial rank {e.trivial_rank} is smaller than {len(e.quotients)} quotients")
        return TotalClass(prod.inverse(), rank)
    if isinstance(e, TensorWithLine):
        base = chern_total(r, e.base)
        if base.rank is not None and base.rank != e.rank:
            raise RankError(f"declared rank {e.rank} differs from base rank {base.rank}")
        if any(k > 2 * e.rank for k in base.element.degrees()):
            raise RankError(f"class has Chern classes above rank {e.rank}")
        ell = _line(r, e.c1)
        powers = [r.one()]
        for _ in range(e.rank):
            powers.append(powers[-1] * ell)
        out = r.zero()
        for k in range(e.rank + 1):
            for i in range(k + 1):
                out = out + base.c(i) * powers[k - i] * comb(e.rank - i, k - i)
        return TotalClass(out, e.rank)
    if isinstance(e, Pullback):
        if e.map.target is not r:
            raise RingError("pullback map does not land in the evaluation ring")
        base = chern_total(e.map.source, e.base)
        return TotalClass(e.map(base.element), base.rank)
    if isinstance(e, QuotientClass):
        num, den = chern_total(r, e.num), chern_total(r, e.den)
        rank = None
        if num.rank is not None and den.rank is not None:
            rank = num.rank - den.rank
            if rank < 0:
                raise RankError(f"quotient of rank {num.rank} by rank {den.rank}")
        return TotalClass(num.element * den.element.inverse(), rank)
    if isinstance(e, Known):
        x = normal_form(r, e.total) if isinstance(e.total, str) else e.total
        return TotalClass(x, e.rank)
    raise TypeError(f"not a bundle expression: {e!r}")


# -- the two fixed computations --------------------------------------------

@dataclass(frozen=True, eq=False)
class ThetaResult:
    closed: TotalClass       # closed formula, pulled back to the pair ring
    proof_route: TotalClass  # product of the intermediate bundles
    flag_class: TotalClass   # closed formula in the flag ring itself
    pullback: RingMap

    @property
    def agree(self) -> bool:
        return self.closed == self.proof_route

    def __iter__(self):
        return iter((self.closed, self.proof_route))


def theta_rank(d: int, n: int) -> int | None:
    ambient = comb(d + n, n)
    return ambient - (2 * n + 1) if ambient >= 2 * n + 1 else None


def theta_expr(flag: GradedRing, d: int, n: int) -> BundleExpr:
    """Closed formula as a bundle: kernel of ``n+1`` copies of each of two
    quotient lines, plus one line."""
    ap, al = flag.gen("ap"), flag.gen("al")
    ambient = comb(d + n, n)
    lines = [ap * (d - 1)] * (n + 1) + [ap * (d - 3) + al] * (n + 1)
    kernel_rank = ambient if ambient >= 2 * n + 2 else None
    return WhitneySum((InverseFromExactSequence(tuple(lines), kernel_rank), Line(ap * (d - 2) + al)))


def chern_theta(d: int, n: int = 2) -> ThetaResult:
    """Chern class of the bundle of degree-``d`` forms singular at a point and
    vanishing on a line through it, computed two ways."""
    if d < 1 or n < 2:
        raise ValueError("need d >= 1 and n >= 2")
    flag = flag_ring(n)
    pair = pair_ring(n, ("ax", "ay"))
    pstar = pair_to_flag_pullback(flag, pair)
    rank = theta_rank(d, n)

    flag_cls = chern_total(flag, theta_expr(flag, d, n))
    closed = chern_total(pair, Pullback(pstar, theta_expr(flag, d, n)))
    if rank is not None and closed.rank is not None and closed.rank != rank:
        raise RankError(f"rank mismatch {closed.rank} != {rank}")

    ax, ay = pair.gen("ax"), pair.gen("ay")
    ambient = comb(d + n, n)
    zeta1 = chern_total(pair, InverseFromExactSequence((ax * (d - 1),) * (n + 1), ambient))
    tau_i = chern_total(pair, InverseFromExactSequence((ax * (d - 2) + ay,), ambient))
    tau = chern_total(pair, InverseFromExactSequence((ax * (d - 1) + ay,), ambient))
    route = zeta1.element * tau_i.element ** (n + 1) * tau.element.inverse()
    return ThetaResult(TotalClass(closed.element, rank), TotalClass(route, rank),
                       TotalClass(flag_cls.element, rank), pstar)


@dataclass(frozen=True, eq=False)
class XiEtaResult:
    xi: TotalClass
    eta: TotalClass
    c1_quotient: RingElement
    eta2: TotalClass
    lam: TotalClass

    def __iter__(self):
        return iter((self.xi, self.eta, self.c1_quotient))


def xi_eta_maps(flag: GradedRing, pair: GradedRing) -> tuple[RingMap, RingMap]:
    f1 = RingMap(flag, pair, {"ap": "a1", "al": "-a2"})
    f2 = RingMap(flag, pair, {"ap": "a2", "al": "-a1"})
    return f1, f2


def chern_xi_eta() -> XiEtaResult:
    """Classes of the two bundles over the ordered-pair space and ``c1`` of their quotient."""
    flag = flag_ring(2)
    pair = pair_ring(2, ("a1", "a2"))
    f1, f2 = xi_eta_maps(flag, pair)
    theta = theta_expr(flag, 4, 2)
    xi = chern_total(pair, QuotientClass(WhitneySum((Pullback(f1, theta), Pullback(f2, theta))),
                                         Trivial(comb(6, 2))))
    a1, a2 = pair.gen("a1"), pair.gen("a2")
    eta2_expr = InverseFromExactSequence((a1 * 2, a2 * 2), 6)
    lam_expr = InverseFromExactSequence((a1, a2), 3)
    eta2 = chern_total(pair, eta2_expr)
    lam = chern_total(pair, lam_expr)
    eta = chern_total(pair, TensorWithLine(eta2.rank, eta2_expr, lam.c(1) * 2))
    return XiEtaResult(xi, eta, xi.c(1) - eta.c(1), eta2, lam)


def expected_xi(pair: GradedRing) -> RingElement:
    """The closed rational expression for ``c(xi')`` written out directly."""
    a1, a2 = pair.gen("a1"), pair.gen("a2")
    one = pair.one()
    num = (one + a1 * 2 - a2) * (one + a2 * 2 - a1)
    den = ((one + a1 * 3) * (one + a1 - a2) * (one + a2 * 3) * (one + a2 - a1)) ** 3
    return num * den.inverse()


def total_from_lines(r: GradedRing, lines: Sequence[LineClass]) -> TotalClass:
    return chern_total(r, WhitneySum(tuple(Line(x) for x in lines)))


# -- JSON form ----------------------------------------------------------------

def bundle_from_json(obj, ring: GradedRing) -> BundleExpr:
    """Bundle expression over ``ring``; line classes are polynomial strings."""
    from .presets import ring_from_json

    if not isinstance(obj, dict) or len(obj) != 1:
        raise RingSyntaxError(f"bundle expression must be an object with one key, got {obj!r}")
    (kind, arg), = obj.items()
    if kind == "line":
        return Line(str(arg))
    if kind == "trivial":
        return Trivial(int(arg))
    if kind == "sum":
        return WhitneySum(tuple(bundle_from_json(x, ring) for x in arg))
    if kind == "kernel":
        return InverseFromExactSequence(tuple(str(q) for q in arg["quotients"]), arg.get("trivial_rank"))
    if kind == "tensor":
        return TensorWithLine(int(arg["rank"]), bundle_from_json(arg["of"], ring), str(arg["line"]))
    if kind == "pullback":
        source = ring_from_json(arg["from"])
        return Pullback(RingMap(source, ring, arg["images"]), bundle_from_json(arg["of"], source))
    if kind == "quotient":
        return QuotientClass(bundle_from_json(arg["num"], ring), bundle_from_json(arg["den"], ring))
    if kind == "known":
        return Known(str(arg["total"]), arg.get("rank"))
    raise RingSyntaxError(f"unknown bundle kind {kind!r}")


def eval_bundle_json(obj) -> TotalClass:
    """Evaluate ``{"ring": ..., "bundle": ...}``."""
    from .presets import ring_from_json

    ring = ring_from_json(obj["ring"])
    return chern_total(ring, bundle_from_json(obj["bundle"], ring))
