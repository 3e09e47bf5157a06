"""Multiplication ranks, circle-bundle cohomology and Tate-twisted Poincare data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .. import linalg
from ..twisted import TwistedDims
from .ring import GradedRing, Involution, RingElement, RingError


class MultRank(NamedTuple):
    rank: int
    kernel: int
    cokernel: int


def mult_matrix(r: GradedRing, e: RingElement, k: int) -> list[list[Fraction]]:
    """Columns are images of the degree-``k`` basis in degree ``k + 2``."""
    cols = []
    for m in r.basis.get(k, []):
        img = r.from_poly({m: Fraction(1)}) * e
        cols.append(list(img.coords(k + 2)))
    return cols


def _check_degree2(e: RingElement) -> None:
    if not e.is_homogeneous(2):
        raise RingError(f"{e} is not homogeneous of degree 2")


def mult_ranks(r: GradedRing, e: RingElement) -> dict[int, MultRank]:
    """Ranks of ``x -> e*x`` from each even degree to the next."""
    _check_degree2(e)
    out = {}
    for k in range(0, r.top_degree + 1, 2):
        cols = mult_matrix(r, e, k)
        rk = linalg.rank(cols, r.dim(k + 2)) if cols and r.dim(k + 2) else 0
        out[k] = MultRank(rk, r.dim(k) - rk, r.dim(k + 2) - rk)
    return out


def _action_matrix(act: Involution, k: int) -> list[list[Fraction]]:
    """Rows are images of basis vectors of degree ``k`` (in coordinates)."""
    r = act.source
    return [list(act(r.from_poly({m: Fraction(1)})).coords(k)) for m in r.basis.get(k, [])]


def _apply(rows_img: list[list[Fraction]], v) -> list[Fraction]:
    out = [Fraction(0)] * len(v)
    for c, img in zip(v, rows_img):
        if c:
            for j, x in enumerate(img):
                out[j] += c * x
    return out


def _anti_part(act_rows, vectors) -> list[list[Fraction]]:
    """``(v - sigma v)/2`` for each vector."""
    return [[(a - b) / 2 for a, b in zip(v, _apply(act_rows, v))] for v in vectors]


@dataclass(frozen=True)
class CircleBundleCohomology:
    total: dict[int, int]
    invariant: dict[int, int] | None
    anti_invariant: dict[int, int] | None
    base_dim: int

    def weight(self, k: int) -> int:
        return k if k % 2 == 0 else k + 1

    def borel_moore(self, part: str = "total") -> TwistedDims:
        """Borel-Moore homology of the punctured line bundle (complex dim ``base_dim + 1``)."""
        dims = {"total": self.total, "invariant": self.invariant, "anti": self.anti_invariant}[part]
        if dims is None:
            raise RingError("no involution was given, so there is no isotypic split")
        top = self.base_dim + 1
        return TwistedDims({(2 * top - k, top - self.weight(k) // 2): n for k, n in dims.items()})


def circle_bundle_cohomology(r: GradedRing, euler: RingElement,
                             act: Involution | None = None) -> CircleBundleCohomology:
    """Gysin sequence: even degrees from cokernels, odd degrees from kernels of ``euler``."""
    _check_degree2(euler)
    if act is not None:
        if act.source is not r:
            raise RingError("involution acts on a different ring")
        if act(euler) != euler:
            raise RingError("euler class is not fixed by the involution")
    total: dict[int, int] = {}
    inv: dict[int, int] = {}
    anti: dict[int, int] = {}
    top = r.nonzero_top()
    for k in range(0, top + 2):
        if k % 2 == 0:
            n = r.dim(k)
            image = mult_matrix(r, euler, k - 2) if k >= 2 else []
            rk = linalg.rank(image, n) if image and n else 0
            dim = n - rk
            if act is not None and dim:
                sig = _action_matrix(act, k)
                ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
                a_all = linalg.rank(_anti_part(sig, ident), n)
                a_img = linalg.rank(_anti_part(sig, image), n) if image else 0
                a = a_all - a_img
        else:
            src = k - 1
            cols = mult_matrix(r, euler, src)
            n = r.dim(src)
            if not n:
                continue
            if r.dim(src + 2):
                ker = linalg.kernel(linalg.transpose(cols, r.dim(src + 2)), n)
            else:
                ker = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
            dim = len(ker)
            if act is not None and dim:
                a = linalg.rank(_anti_part(_action_matrix(act, src), ker), n)
        if dim:
            total[k] = dim
            if act is not None:
                if a:
                    anti[k] = a
                if dim - a:
                    inv[k] = dim - a
    base_dim = r.nonzero_top() // 2
    return CircleBundleCohomology(total, inv if act else None, anti if act else None, base_dim)


def poincare_twisted(r: GradedRing) -> TwistedDims:
    """Classes of degree ``2k`` carry twist ``k``."""
    return TwistedDims({(k, k // 2): n for k, n in r.dims.items()})
