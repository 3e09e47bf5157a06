"""Borel-Moore homology bookkeeping with Tate twists.

Spaces are expression trees whose evaluation is a :class:`TwistedDims`.
Anything that cannot be derived from the combinators (for instance the
outcome of a long exact sequence) enters through a :class:`Script` as a
declared fact with a citation, so every non-mechanical step is visible in
the audit trail.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .cohring import circle_bundle_cohomology, normal_form, poincare_twisted, ring_preset, swap_involution
from .twisted import EMPTY, TwistedDims


class SpaceError(ValueError):
    pass


# -- axioms ----------------------------------------------------------------

@dataclass(frozen=True)
class AxiomEntry:
    dims: TwistedDims
    citation: str


class AxiomTable(Mapping[str, AxiomEntry]):
    def __init__(self, entries: Mapping[str, AxiomEntry]):
        for name, e in entries.items():
            if not e.citation.strip():
                raise SpaceError(f"axiom {name!r} has no citation")
        self._entries = dict(entries)

    def __getitem__(self, name: str) -> AxiomEntry:
        try:
            return self._entries[name]
        except KeyError:
            raise SpaceError(f"unknown axiom {name!r}; known: {sorted(self._entries)}") from None

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)


AXIOMS = AxiomTable({
    "B(CP2,2)±Q": AxiomEntry(
        TwistedDims({(2, 1): 1, (4, 2): 1, (6, 3): 1}),
        "unordered pairs of points in CP2 with sign coefficients: Q(i/2) in degrees i = 2, 4, 6 [Vassiliev]",
    ),
    "B(CP1,3)±Q": AxiomEntry(
        EMPTY, "unordered triples of points in CP1 with sign coefficients: all groups vanish [Vassiliev]"),
    "CP1 autojoin 2, reduced": AxiomEntry(
        EMPTY, "second self-join of CP1 is rationally acyclic, so its reduced homology vanishes [Vassiliev]"),
})


def axiom(name: str, table: AxiomTable = AXIOMS) -> TwistedDims:
    return table[name].dims


# -- expression nodes --------------------------------------------------------

@dataclass(frozen=True)
class Point:
    pass


@dataclass(frozen=True)
class ProjectiveSpace:
    n: int


@dataclass(frozen=True)
class CompactSmooth:
    dims: TwistedDims
    label: str = ""

    @classmethod
    def of_ring(cls, preset: str) -> "CompactSmooth":
        return cls(poincare_twisted(ring_preset(preset)), preset)


@dataclass(frozen=True)
class OpenCone:
    base: "SpaceExpr"


@dataclass(frozen=True)
class VectorBundleTotal:
    rank: int
    base: "SpaceExpr"


@dataclass(frozen=True)
class Product:
    left: "SpaceExpr"
    right: "SpaceExpr"


@dataclass(frozen=True)
class DisjointUnion:
    parts: tuple


@dataclass(frozen=True)
class DegreeShift:
    degree: int
    twist: int
    base: "SpaceExpr"


@dataclass(frozen=True)
class Axiom:
    name: str


@dataclass(frozen=True)
class Ref:
    """A value bound earlier in a script."""

    name: str


@dataclass(frozen=True)
class PuncturedLineBundle:
    """Nonzero vectors of a line bundle with first Chern class ``euler`` over a
    smooth base whose cohomology ring is ``ring``.  ``part`` selects the
    invariant or anti-invariant piece under the swap of the two generators."""

    ring: str
    euler: str
    part: str = "total"
    base_dim: int | None = None


SpaceExpr = Union[Point, ProjectiveSpace, CompactSmooth, OpenCone, VectorBundleTotal, Product,
                  DisjointUnion, DegreeShift, Axiom, Ref, PuncturedLineBundle]


def eval_space(e: SpaceExpr, env: Mapping[str, TwistedDims] | None = None,
               axioms: AxiomTable = AXIOMS) -> TwistedDims:
    env = env or {}

    def ev(x) -> TwistedDims:
        if isinstance(x, Point):
            return TwistedDims.single(0, 0)
        if isinstance(x, ProjectiveSpace):
            if x.n < 0:
                raise SpaceError("negative projective dimension")
            return TwistedDims({(2 * k, k): 1 for k in range(x.n + 1)})
        if isinstance(x, CompactSmooth):
            return x.dims
        if isinstance(x, OpenCone):
            # reduced homology of the base, one degree up
            inner = ev(x.base)
            reduced = inner.minus({(0, 0): 1}) if inner[(0, 0)] else inner
            return reduced.shift(1, 0)
        if isinstance(x, VectorBundleTotal):
            if x.rank < 0:
                raise SpaceError("negative bundle rank")
            return ev(x.base).shift(2 * x.rank, x.rank)
        if isinstance(x, Product):
            return ev(x.left).tensor(ev(x.right))
        if isinstance(x, DisjointUnion):
            out = EMPTY
            for part in x.parts:
                out = out + ev(part)
            return out
        if isinstance(x, DegreeShift):
            return ev(x.base).shift(x.degree, x.twist)
        if isinstance(x, Axiom):
            return axioms[x.name].dims
        if isinstance(x, Ref):
            if x.name not in env:
                raise SpaceError(f"reference to unbound name {x.name!r}")
            return env[x.name]
        if isinstance(x, PuncturedLineBundle):
            ring = ring_preset(x.ring)
            act = swap_involution(ring) if x.part != "total" else None
            coh = circle_bundle_cohomology(ring, normal_form(ring, x.euler), act)
            if x.base_dim is not None:
                coh = type(coh)(coh.total, coh.invariant, coh.anti_invariant, x.base_dim)
            return coh.borel_moore(x.part)
        raise SpaceError(f"not a space expression: {x!r}")

    return ev(e)


# -- scripts -----------------------------------------------------------------

@dataclass(frozen=True)
class DeclaredFact:
    name: str
    dims: TwistedDims
    citation: str


@dataclass(frozen=True)
class Let:
    name: str
    space: SpaceExpr


@dataclass(frozen=True)
class Script:
    steps: tuple
    result: str | None = None

    def __post_init__(self):
        if not self.steps:
            raise SpaceError("empty script")
        for s in self.steps:
            if isinstance(s, DeclaredFact) and not s.citation.strip():
                raise SpaceError(f"declared fact {s.name!r} has no citation")


@dataclass(frozen=True)
class ScriptResult:
    dims: TwistedDims
    audit: tuple[str, ...] = field(default=())
    bindings: Mapping[str, TwistedDims] = field(default_factory=dict)


def run_script(s: Script, axioms: AxiomTable = AXIOMS) -> ScriptResult:
    env: dict[str, TwistedDims] = {}
    audit: list[str] = []
    last = None
    for step in s.steps:
        if isinstance(step, DeclaredFact):
            if not step.citation.strip():
                raise SpaceError(f"declared fact {step.name!r} has no citation")
            env[step.name] = step.dims
            audit.append(f"declared {step.name} = {step.dims.describe()}  [{step.citation}]")
        elif isinstance(step, Let):
            env[step.name] = eval_space(step.space, env, axioms)
            audit.append(f"computed {step.name} = {env[step.name].describe()}")
        else:
            raise SpaceError(f"unknown script step {step!r}")
        last = step.name
    name = s.result or last
    if name not in env:
        raise SpaceError(f"script result {name!r} is not bound")
    return ScriptResult(env[name], tuple(audit), env)


# -- JSON form -----------------------------------------------------------------

def dims_from_json(obj) -> TwistedDims:
    if isinstance(obj, list) and obj and isinstance(obj[0], list):
        return TwistedDims({(i, m): n for i, m, n in obj})
    return TwistedDims.from_json(obj)


def space_from_json(obj) -> SpaceExpr:
    if obj == "point":
        return Point()
    if not isinstance(obj, Mapping) or len(obj) != 1:
        raise SpaceError(f"space expression must be an object with one key, got {obj!r}")
    (kind, arg), = obj.items()
    if kind == "point":
        return Point()
    if kind == "projective":
        return ProjectiveSpace(int(arg))
    if kind == "compact_smooth":
        if "ring" in arg:
            return CompactSmooth.of_ring(arg["ring"])
        return CompactSmooth(dims_from_json(arg["dims"]), arg.get("label", ""))
    if kind == "open_cone":
        return OpenCone(space_from_json(arg))
    if kind == "bundle":
        return VectorBundleTotal(int(arg["rank"]), space_from_json(arg["of"]))
    if kind == "product":
        if len(arg) < 2:
            raise SpaceError("product needs at least two factors")
        out = space_from_json(arg[0])
        for f in arg[1:]:
            out = Product(out, space_from_json(f))
        return out
    if kind == "union":
        return DisjointUnion(tuple(space_from_json(x) for x in arg))
    if kind == "shift":
        return DegreeShift(int(arg["degree"]), int(arg["twist"]), space_from_json(arg["of"]))
    if kind == "axiom":
        return Axiom(str(arg))
    if kind == "ref":
        return Ref(str(arg))
    if kind == "punctured_line_bundle":
        return PuncturedLineBundle(arg["ring"], arg["euler"], arg.get("part", "total"), arg.get("base_dim"))
    raise SpaceError(f"unknown space kind {kind!r}")


def space_to_json(e: SpaceExpr):
    if isinstance(e, Point):
        return "point"
    if isinstance(e, ProjectiveSpace):
        return {"projective": e.n}
    if isinstance(e, CompactSmooth):
        body = {"dims": e.dims.to_json()}
        if e.label:
            body["label"] = e.label
        return {"compact_smooth": body}
    if isinstance(e, OpenCone):
        return {"open_cone": space_to_json(e.base)}
    if isinstance(e, VectorBundleTotal):
        return {"bundle": {"rank": e.rank, "of": space_to_json(e.base)}}
    if isinstance(e, Product):
        return {"product": [space_to_json(e.left), space_to_json(e.right)]}
    if isinstance(e, DisjointUnion):
        return {"union": [space_to_json(p) for p in e.parts]}
    if isinstance(e, DegreeShift):
        return {"shift": {"degree": e.degree, "twist": e.twist, "of": space_to_json(e.base)}}
    if isinstance(e, Axiom):
        return {"axiom": e.name}
    if isinstance(e, Ref):
        return {"ref": e.name}
    if isinstance(e, PuncturedLineBundle):
        body = {"ring": e.ring, "euler": e.euler, "part": e.part}
        if e.base_dim is not None:
            body["base_dim"] = e.base_dim
        return {"punctured_line_bundle": body}
    raise SpaceError(f"not a space expression: {e!r}")


def script_from_json(obj) -> Script:
    steps = []
    for raw in obj["steps"]:
        if "declare" in raw:
            if not str(raw.get("citation", "")).strip():
                raise SpaceError(f"declared fact {raw['declare']!r} has no citation")
            steps.append(DeclaredFact(raw["declare"], dims_from_json(raw["dims"]), raw["citation"]))
        elif "let" in raw:
            steps.append(Let(raw["let"], space_from_json(raw["space"])))
        else:
            raise SpaceError(f"script step needs 'declare' or 'let': {raw!r}")
    return Script(tuple(steps), obj.get("result"))


def script_to_json(s: Script) -> dict:
    steps = []
    for st in s.steps:
        if isinstance(st, DeclaredFact):
            steps.append({"declare": st.name, "dims": st.dims.to_json(), "citation": st.citation})
        else:
            steps.append({"let": st.name, "space": space_to_json(st.space)})
    out: dict = {"steps": steps}
    if s.result:
        out["result"] = s.result
    return out


def declared_empty(citation: str) -> Script:
    return Script((DeclaredFact("vanishing", EMPTY, citation),))
