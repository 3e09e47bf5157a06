"""Order-theoretic checks on finite models of configuration-space stratifications.

Strata are atoms carrying an index and the dimension ``d`` of the linear
system of equations singular along a member.  Containments, boundary
behaviour (which strata a degenerate configuration implies, and which
stratum it is itself a member of) and subset homes of finite strata are
declared.  Only conditions that reduce to comparisons of indices are
checked; the topological ones are reported as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

LEVELS = ("five_minus", "five", "five_plus")


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryClass:
    """A family of configurations in the closure of a stratum but not in it.

    ``implies`` lists strata containing a configuration with the same linear
    system that contains the boundary configuration; ``member_of`` is the
    stratum the boundary configuration itself belongs to, if any.
    """

    name: str
    implies: tuple[int, ...]
    member_of: int | None = None
    unique: bool = True


@dataclass(frozen=True)
class Stratum:
    index: int
    name: str
    d: int
    boundary: tuple[BoundaryClass, ...] = ()
    finite: int | None = None
    subset_homes: Mapping[int, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Containment:
    lower: int
    upper: int
    proper: bool = True


@dataclass(frozen=True)
class StratificationModel:
    name: str
    strata: tuple[Stratum, ...]
    containments: tuple[Containment, ...] = ()
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        idx = [s.index for s in self.strata]
        if len(set(idx)) != len(idx):
            raise ModelError(f"duplicate stratum indices in {idx}")
        if sorted(idx) != list(range(1, len(idx) + 1)):
            raise ModelError(f"stratum indices must be 1..{len(idx)}, got {sorted(idx)}")
        valid = set(idx)
        for s in self.strata:
            if s.d < 0:
                raise ModelError(f"stratum {s.index} has negative d")
            for b in s.boundary:
                bad = [j for j in b.implies if j not in valid]
                if bad or (b.member_of is not None and b.member_of not in valid):
                    raise ModelError(f"boundary class {b.name!r} of stratum {s.index} references unknown strata")
            for size, home in s.subset_homes.items():
                if home not in valid:
                    raise ModelError(f"subset home {home} of stratum {s.index} is not a stratum")
        for c in self.containments:
            if c.lower not in valid or c.upper not in valid:
                raise ModelError(f"containment {c.lower}->{c.upper} references unknown strata")

    def stratum(self, i: int) -> Stratum:
        return next(s for s in self.strata if s.index == i)

    @property
    def d(self) -> list[int]:
        return [s.d for s in sorted(self.strata, key=lambda s: s.index)]

    # -- JSON ----------------------------------------------------------------

    @classmethod
    def from_json(cls, obj, name: str = "") -> "StratificationModel":
        rows = obj["strata"] if isinstance(obj, Mapping) else obj
        strata, cont = [], []
        for raw in rows:
            i = int(raw["index"])
            bcs = []
            for g in raw.get("geom", []):
                implies = tuple(g.get("implies", [g["target"]]))
                bcs.append(BoundaryClass(g["class"], implies, g.get("member_of"), g.get("unique", True)))
            homes = {int(h["size"]): int(h["home"]) for h in raw.get("subsets", [])}
            strata.append(Stratum(i, raw["name"], int(raw["d"]), tuple(bcs), raw.get("finite"), homes))
            for c in raw.get("contains", []):
                if isinstance(c, Mapping):
                    cont.append(Containment(int(c["index"]), i, c.get("proper", True)))
                else:
                    cont.append(Containment(int(c), i))
        notes = tuple(obj.get("notes", [])) if isinstance(obj, Mapping) else ()
        model_name = obj.get("name", name) if isinstance(obj, Mapping) else name
        return cls(model_name, tuple(strata), tuple(cont), notes)

    def to_json(self) -> dict:
        rows = []
        for s in sorted(self.strata, key=lambda s: s.index):
            row: dict = {"index": s.index, "name": s.name, "d": s.d}
            inner = [c for c in self.containments if c.upper == s.index]
            row["contains"] = [c.lower if c.proper else {"index": c.lower, "proper": False} for c in inner]
            geom = []
            for b in s.boundary:
                g: dict = {"class": b.name, "target": geom_target(s.index, b, strict=True)
                           or geom_target(s.index, b, strict=False), "implies": list(b.implies)}
                if b.member_of is not None:
                    g["member_of"] = b.member_of
                if not b.unique:
                    g["unique"] = False
                geom.append(g)
            row["geom"] = geom
            if s.finite is not None:
                row["finite"] = s.finite
                row["subsets"] = [{"size": k, "home": v} for k, v in sorted(s.subset_homes.items())]
            rows.append(row)
        out: dict = {"name": self.name, "strata": rows}
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def geom_target(i: int, b: BoundaryClass, strict: bool) -> int | None:
    """Largest admissible stratum the class implies (``< i`` or ``<= i``)."""
    ok = [j for j in b.implies if (j < i if strict else j <= i)]
    return max(ok) if ok else None


@dataclass(frozen=True)
class Finding:
    condition: str
    status: str  # pass | fail | reported | not machine-checkable
    detail: str = ""


@dataclass(frozen=True)
class Report:
    model: str
    level: str
    findings: tuple[Finding, ...]

    @property
    def passed(self) -> bool:
        return all(f.status != "fail" for f in self.findings)

    def failures(self) -> list[Finding]:
        return [f for f in self.findings if f.status == "fail"]

    def text(self) -> str:
        head = f"{self.model} at level {self.level}: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head] + [f"  [{f.status}] {f.condition}: {f.detail}" for f in self.findings])

    def to_json(self) -> dict:
        return {"model": self.model, "level": self.level, "passed": self.passed,
                "findings": [f.__dict__ for f in self.findings]}


def validate(m: StratificationModel, level: str = "five") -> Report:
    if level not in LEVELS:
        raise ModelError(f"level must be one of {LEVELS}")
    out: list[Finding] = [Finding("1", "not machine-checkable", "every singular locus lies in some stratum")]

    bad = [c for c in m.containments if c.proper and not c.lower < c.upper]
    out.append(Finding("2", "fail" if bad else "pass",
                       "; ".join(f"{c.lower} inside {c.upper} goes downward" for c in bad)
                       or f"{sum(c.proper for c in m.containments)} proper containments go upward"))
    out.append(Finding("3", "reported", "d = " + str(m.d)))
    out.append(Finding("4", "reported", f"{len(m.strata)} strata with distinct indices"))

    strict = level != "five_minus"
    problems = []
    for s in m.strata:
        for b in s.boundary:
            target = geom_target(s.index, b, strict)
            if target is None:
                rel = "<" if strict else "<="
                problems.append(f"{b.name!r} in stratum {s.index} implies nothing in a stratum {rel} {s.index}")
            elif not b.unique:
                problems.append(f"{b.name!r} in stratum {s.index} has no unique geometrization")
    label = {"five_minus": "5-", "five": "5", "five_plus": "5"}[level]
    out.append(Finding(label, "fail" if problems else "pass", "; ".join(problems) or "all boundary classes geometrize"))

    if level == "five_plus":
        open_ = []
        for s in m.strata:
            for b in s.boundary:
                if b.member_of is None or b.member_of > s.index:
                    open_.append(f"{b.name!r} in the closure of stratum {s.index} lies in no stratum of index <= {s.index}")
        out.append(Finding("5+", "fail" if open_ else "pass", "; ".join(open_) or "closures stay in lower strata"))

    out.append(Finding("6", "not machine-checkable", "local triviality of the incidence fibrations"))

    seven = []
    for s in m.strata:
        if s.finite is None:
            continue
        for size in range(1, s.finite):
            home = s.subset_homes.get(size)
            if home is None:
                seven.append(f"stratum {s.index}: no home for {size}-element subsets")
            elif home >= s.index:
                seven.append(f"stratum {s.index}: {size}-element subsets live in stratum {home}")
    out.append(Finding("7", "fail" if seven else "pass", "; ".join(seven) or "subsets of finite configurations sit lower"))
    return Report(m.name, level, tuple(out))


@dataclass(frozen=True)
class GeomRow:
    source: int
    cls: str
    target: int


def geom_table_check(m: StratificationModel, table: Iterable[GeomRow | Sequence],
                     expected_rows: int | None = None) -> Report:
    rows = [r if isinstance(r, GeomRow) else GeomRow(int(r[0]), str(r[1]), int(r[2])) for r in table]
    valid = {s.index for s in m.strata}
    out = []
    seen: dict[tuple[int, str], int] = {}
    for r in rows:
        tag = f"row {r.source}/{r.cls!r}"
        if r.source not in valid or r.target not in valid:
            out.append(Finding(tag, "fail", "references an unknown stratum"))
            continue
        if (r.source, r.cls) in seen and seen[(r.source, r.cls)] != r.target:
            out.append(Finding(tag, "fail", f"two targets {seen[(r.source, r.cls)]} and {r.target}"))
            continue
        seen[(r.source, r.cls)] = r.target
        if r.target < r.source:
            out.append(Finding(tag, "pass", f"-> {r.target}"))
        else:
            out.append(Finding(tag, "fail", f"target {r.target} is not below {r.source}"))
    if expected_rows is not None and expected_rows != len(rows):
        out.append(Finding("row count", "fail", f"{len(rows)} rows, expected {expected_rows}"))
    if not rows:
        out.append(Finding("table", "pass", "empty table"))
    return Report(m.name, "geometrization table", tuple(out))


def geom_rows(m: StratificationModel) -> list[GeomRow]:
    """The table implied by a model's boundary classes."""
    rows = []
    for s in m.strata:
        for b in s.boundary:
            t = geom_target(s.index, b, strict=True)
            if t is not None:
                rows.append(GeomRow(s.index, b.name, t))
    return rows


# -- built-in models ---------------------------------------------------------

def _b(name, implies, member_of=None):
    return BoundaryClass(name, tuple(implies), member_of)


def cubic_point_model() -> StratificationModel:
    """Singular loci of plane cubics as subsets of CP2; fails 5+."""
    strata = (
        Stratum(1, "points", 7),
        Stratum(2, "pairs of points", 4, (_b("two points collide", [1], 1),), 2, {1: 1}),
        Stratum(3, "lines", 3),
        Stratum(4, "three non-collinear points", 1, (
            _b("two of the points collide", [2], 2),
            _b("all three points collide", [1], 1),
            _b("three points on a line", [3]),
        ), 3, {1: 1, 2: 2}),
        Stratum(5, "whole plane", 0),
    )
    cont = (Containment(1, 2), Containment(1, 3), Containment(2, 3), Containment(1, 4), Containment(2, 4),
            Containment(1, 5), Containment(2, 5), Containment(3, 5), Containment(4, 5))
    return StratificationModel("cubic-points", strata, cont)


def cubic_point_model_fixed() -> StratificationModel:
    """The same with collinear triples inserted as their own stratum."""
    strata = (
        Stratum(1, "points", 7),
        Stratum(2, "pairs of points", 4, (_b("two points collide", [1], 1),), 2, {1: 1}),
        Stratum(3, "three collinear points", 3, (
            _b("two of the points collide", [2], 2),
            _b("all three points collide", [1], 1),
        ), 3, {1: 1, 2: 2}),
        Stratum(4, "lines", 3),
        Stratum(5, "three non-collinear points", 1, (
            _b("two of the points collide", [2], 2),
            _b("all three points collide", [1], 1),
            _b("three points on a line", [3, 4], 3),
        ), 3, {1: 1, 2: 2}),
        Stratum(6, "whole plane", 0),
    )
    cont = (Containment(1, 2), Containment(1, 3), Containment(2, 3), Containment(1, 4), Containment(2, 4),
            Containment(3, 4), Containment(1, 5), Containment(2, 5))
    cont += tuple(Containment(i, 6) for i in range(1, 6))
    return StratificationModel("cubic-points-fixed", strata, cont)


def trivial_model() -> StratificationModel:
    return StratificationModel("whole-space", (Stratum(1, "whole space", 0),))
