"""Named ring presentations used throughout."""

from __future__ import annotations

from functools import lru_cache

from .ring import GradedRing, GradedRingPresentation, RingMap

MAX_N = 4


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise ValueError(f"n must be in 1..{MAX_N}, got {n}")


def pair_ring(n: int = 2, names: tuple[str, str] = ("a1", "a2")) -> GradedRing:
    """Cohomology of ordered pairs of distinct points in CP^n (a point and a
    direction through it): ``x^{n+1} = y^{n+1} = sum x^i y^{n-i} = 0``."""
    return _pair_ring(n, tuple(names))


@lru_cache(maxsize=None)
def _pair_ring(n: int, names: tuple[str, str]) -> GradedRing:
    _check_n(n)
    x, y = names
    rels = [f"{x}^{n + 1}", f"{y}^{n + 1}", " + ".join(f"{x}^{i}*{y}^{n - i}" for i in range(n + 1))]
    p = GradedRingPresentation.of([(x, 2), (y, 2)], rels, 4 * n - 2)
    return GradedRing(p, f"pair-n{n}")


@lru_cache(maxsize=None)
def flag_ring(n: int = 2) -> GradedRing:
    """Cohomology of (point, line through it) flags in CP^n, generators ``ap``
    (point class) and ``al`` (line class)."""
    _check_n(n)
    rels = ["ap^%d" % (n + 1), " + ".join(f"ap^{i}*(al - ap)^{n - i}" for i in range(n + 1))]
    p = GradedRingPresentation.of([("ap", 2), ("al", 2)], rels, 4 * n - 2)
    return GradedRing(p, f"flag-n{n}")


@lru_cache(maxsize=None)
def projective_ring(n: int, name: str = "a") -> GradedRing:
    p = GradedRingPresentation.of([(name, 2)], [f"{name}^{n + 1}"], 2 * n)
    return GradedRing(p, f"cp{n}")


def pair_to_flag_pullback(flag: GradedRing, pair: GradedRing) -> RingMap:
    """``ap -> x``, ``al -> x + y``: the flag of the line through both points."""
    x, y = pair.names
    return RingMap(flag, pair, {"ap": x, "al": f"{x} + {y}"})


RING_PRESETS = {
    "pair-n2": lambda: pair_ring(2),
    "pair-n3": lambda: pair_ring(3, ("ax", "ay")),
    "flag-n2": lambda: flag_ring(2),
    "flag-n3": lambda: flag_ring(3),
    "cp1": lambda: projective_ring(1),
    "cp2": lambda: projective_ring(2),
}


def ring_preset(name: str) -> GradedRing:
    try:
        return RING_PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown ring preset {name!r}; choose from {sorted(RING_PRESETS)}") from None


def ring_from_json(obj) -> GradedRing:
    """A preset name or a presentation object."""
    if isinstance(obj, str):
        return ring_preset(obj)
    from .ring import GradedRingPresentation, build_ring

    return build_ring(GradedRingPresentation.from_json(obj), obj.get("name"))
