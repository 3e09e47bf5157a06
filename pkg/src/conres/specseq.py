"""Homological spectral sequences of Tate-twisted dimension data.

``d^r`` maps ``E^r_{p,q}`` to ``E^r_{p-r, q+r-1}``.  Differentials respect
weights, so they only act between equal twists.  A differential declared
nonzero has maximal rank on every twist its two ends share.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence, Union

from .twisted import TwistedDims

DEFAULT_SEARCH_BOUND = 2 ** 20
STATUSES = ("nonzero", "zero", "unknown")

Pos = tuple[int, int]


class SpectralSequenceError(ValueError):
    pass


class UnresolvedDifferential(SpectralSequenceError):
    pass


class InferenceError(SpectralSequenceError):
    pass


@dataclass(frozen=True)
class Page:
    """``(p, q) -> {twist: dim}``; the total degree of an entry is ``p + q``."""

    entries: Mapping[Pos, Mapping[int, int]]
    r: int = 1

    def __post_init__(self):
        clean: dict[Pos, dict[int, int]] = {}
        for (p, q), tw in self.entries.items():
            row = {}
            for m, n in tw.items():
                if n < 0:
                    raise SpectralSequenceError(f"negative dimension at {(p, q)} twist {m}")
                if n:
                    row[int(m)] = int(n)
            if row:
                clean[(int(p), int(q))] = dict(sorted(row.items()))
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], r: int = 1) -> "Page":
        """Rows of ``(p, q, twist[, dim])``."""
        acc: dict[Pos, dict[int, int]] = {}
        for row in rows:
            p, q, m, *rest = row
            n = rest[0] if rest else 1
            cell = acc.setdefault((p, q), {})
            cell[m] = cell.get(m, 0) + n
        return cls(acc, r)

    def rows(self) -> list[tuple[int, int, int, int]]:
        return [(p, q, m, n) for (p, q), tw in self.entries.items() for m, n in tw.items()]

    def get(self, p: int, q: int) -> dict[int, int]:
        return dict(self.entries.get((p, q), {}))

    def restrict(self, p_range: tuple[int, int] | None) -> "Page":
        if p_range is None:
            return self
        lo, hi = p_range
        return Page({k: v for k, v in self.entries.items() if lo <= k[0] <= hi}, self.r)

    def column(self, p: int) -> TwistedDims:
        return TwistedDims({(p + q, m): n for (pp, q), tw in self.entries.items() if pp == p
                            for m, n in tw.items()})

    def is_empty(self) -> bool:
        return not self.entries

    def euler_by_twist(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for (p, q), tw in self.entries.items():
            for m, n in tw.items():
                out[m] = out.get(m, 0) + (-1) ** ((p + q) % 2) * n
        return {m: v for m, v in sorted(out.items()) if v}

    def to_json(self) -> dict:
        return {"entries": [{"p": p, "q": q, "twist": m, "dim": n} for p, q, m, n in self.rows()]}

    @classmethod
    def from_json(cls, obj) -> "Page":
        rows = obj["entries"] if isinstance(obj, Mapping) else obj
        return cls.from_rows((e["p"], e["q"], e["twist"], e.get("dim", 1)) for e in rows)

    def describe(self) -> str:
        if not self.entries:
            return "(empty)"
        out = []
        for (p, q), tw in self.entries.items():
            body = " + ".join(f"Q({m})" if n == 1 else f"{n}Q({m})" for m, n in tw.items())
            out.append(f"({p},{q}): {body}")
        return "\n".join(out)


def totals(page: Page) -> TwistedDims:
    """Collapse along ``p``: dimensions by (total degree, twist)."""
    return TwistedDims(((p + q, m), n) for (p, q), tw in page.entries.items() for m, n in tw.items())


def page_from_columns(columns: Mapping[int, TwistedDims]) -> Page:
    """Column ``p`` holding total degrees ``i`` goes to ``(p, i - p)``."""
    return Page.from_rows((p, i - p, m, n) for p, dims in columns.items() for (i, m), n in dims.items())


@dataclass(frozen=True)
class DifferentialFact:
    r: int
    p: int
    q: int
    status: str = "nonzero"
    ranks: Mapping[int, int] | None = None  # explicit per-twist ranks, overriding "maximal"
    note: str = ""

    def __post_init__(self):
        if self.status not in STATUSES:
            raise SpectralSequenceError(f"bad status {self.status!r}")
        if self.r < 1:
            raise SpectralSequenceError("differential index r must be >= 1")
        if self.ranks is not None:
            object.__setattr__(self, "ranks", {int(k): int(v) for k, v in self.ranks.items()})

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.r, self.p, self.q)

    @property
    def target(self) -> Pos:
        return (self.p - self.r, self.q + self.r - 1)

    def label(self) -> str:
        return f"d{self.r}({self.p},{self.q})"

    def to_json(self) -> dict:
        out = {"r": self.r, "p": self.p, "q": self.q, "status": self.status}
        if self.ranks is not None:
            out["ranks"] = {str(k): v for k, v in sorted(self.ranks.items())}
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_json(cls, obj) -> "DifferentialFact":
        return cls(int(obj["r"]), int(obj["p"]), int(obj["q"]), obj.get("status", "nonzero"),
                   obj.get("ranks"), obj.get("note", ""))


def parse_label(text: str) -> tuple[int, int, int]:
    """``"d3(11,0)"`` -> ``(3, 11, 0)``."""
    t = text.strip()
    try:
        head, rest = t[1:].split("(", 1)
        p, q = rest.rstrip(")").split(",")
        return int(head), int(p), int(q)
    except ValueError:
        raise SpectralSequenceError(f"cannot parse differential label {text!r}") from None


# -- running -------------------------------------------------------------------

@dataclass(frozen=True)
class Cancellation:
    r: int
    p: int
    q: int
    twist: int
    rank: int


@dataclass(frozen=True)
class RunResult:
    page: Page
    cancellations: tuple[Cancellation, ...]
    pages: tuple[Page, ...]

    @property
    def totals(self) -> TwistedDims:
        return totals(self.page)


def run(page1: Page, facts: Iterable[DifferentialFact]) -> RunResult:
    by_key: dict[tuple[int, int, int], DifferentialFact] = {}
    for f in facts:
        if f.key in by_key and by_key[f.key] != f:
            raise SpectralSequenceError(f"conflicting facts for {f.label()}")
        by_key[f.key] = f
    page = page1
    used: set[tuple[int, int, int]] = set()
    log: list[Cancellation] = []
    pages = [page1]
    ps = [p for p, _ in page1.entries]
    max_r = (max(ps) - min(ps)) if ps else 0
    euler0 = page1.euler_by_twist()
    for r in range(page1.r, max_r + 1):
        out_rank: dict[Pos, dict[int, int]] = {}
        in_rank: dict[Pos, dict[int, int]] = {}
        for (p, q), src in page.entries.items():
            tgt_pos = (p - r, q + r - 1)
            tgt = page.entries.get(tgt_pos, {})
            shared = sorted(set(src) & set(tgt))
            fact = by_key.get((r, p, q))
            if fact is not None:
                used.add(fact.key)
            if not shared:
                if fact is not None and fact.status == "nonzero" and (fact.ranks is None or any(fact.ranks.values())):
                    raise SpectralSequenceError(
                        f"{fact.label()} is declared nonzero but its ends share no twist on E^{r}")
                continue
            if fact is None or fact.status == "unknown":
                raise UnresolvedDifferential(
                    f"d{r}({p},{q}) -> {tgt_pos} may be nonzero on twist(s) {shared} but has no zero/nonzero status")
            if fact.status == "zero":
                continue
            for m in shared:
                cap = min(src[m], tgt[m])
                rk = cap if fact.ranks is None else fact.ranks.get(m, 0)
                if rk > cap:
                    raise SpectralSequenceError(f"{fact.label()} rank {rk} on twist {m} exceeds {cap}")
                if rk:
                    out_rank.setdefault((p, q), {})[m] = rk
                    in_rank.setdefault(tgt_pos, {})[m] = rk
                    log.append(Cancellation(r, p, q, m, rk))
            if fact.ranks is not None:
                bad = set(fact.ranks) - set(shared)
                if any(fact.ranks[m] for m in bad):
                    raise SpectralSequenceError(f"{fact.label()} given rank on twist(s) {sorted(bad)} its ends do not share")
        if not out_rank:
            page = Page(page.entries, r + 1)
            continue
        new: dict[Pos, dict[int, int]] = {}
        for pos, tw in page.entries.items():
            row = dict(tw)
            for m in row:
                o = out_rank.get(pos, {}).get(m, 0)
                i = in_rank.get(pos, {}).get(m, 0)
                if o + i > row[m]:
                    raise SpectralSequenceError(
                        f"E^{r}{pos} twist {m}: incoming rank {i} plus outgoing rank {o} exceed dimension {row[m]}")
                row[m] -= o + i
            new[pos] = row
        page = Page(new, r + 1)
        pages.append(page)
        if page.euler_by_twist() != euler0:
            raise AssertionError("Euler characteristic per twist changed")
    stray = [f for k, f in by_key.items() if k not in used and f.status == "nonzero"]
    if stray:
        raise SpectralSequenceError(f"{stray[0].label()} is declared nonzero but never acts")
    return RunResult(Page(page.entries, max(page.r, max_r + 1)), tuple(log), tuple(pages))


# -- constraints ---------------------------------------------------------------

@dataclass(frozen=True)
class ForbiddenTotalDegrees:
    degrees: frozenset
    p_range: tuple[int, int] | None = None

    def check(self, einf: Page) -> str | None:
        hit = sorted({p + q for (p, q) in einf.restrict(self.p_range).entries} & set(self.degrees))
        return f"surviving classes in forbidden total degree(s) {hit}" if hit else None

    def describe(self) -> str:
        return f"ForbiddenTotalDegrees({_span(self.degrees)}{_prange(self.p_range)})"

    def to_json(self) -> dict:
        return _with_range({"kind": "forbidden_total_degrees", "degrees": sorted(self.degrees)}, self.p_range)


@dataclass(frozen=True)
class PrescribedTotals:
    totals: TwistedDims
    p_range: tuple[int, int] | None = None

    def check(self, einf: Page) -> str | None:
        got = totals(einf.restrict(self.p_range))
        return None if got == self.totals else f"totals {got.describe()} differ from prescribed {self.totals.describe()}"

    def describe(self) -> str:
        return f"PrescribedTotals({self.totals.describe()}{_prange(self.p_range)})"

    def to_json(self) -> dict:
        return _with_range({"kind": "prescribed_totals", "totals": self.totals.to_json()}, self.p_range)


@dataclass(frozen=True)
class BoundedTotals:
    """Survivors must fit inside the given dimensions (an upper bound)."""

    totals: TwistedDims
    p_range: tuple[int, int] | None = None

    def check(self, einf: Page) -> str | None:
        got = totals(einf.restrict(self.p_range))
        over = [k for k, n in got.items() if n > self.totals[k]]
        return f"totals exceed the bound at {over}" if over else None

    def describe(self) -> str:
        return f"BoundedTotals({self.totals.describe()}{_prange(self.p_range)})"

    def to_json(self) -> dict:
        return _with_range({"kind": "bounded_totals", "totals": self.totals.to_json()}, self.p_range)


Constraint = Union[ForbiddenTotalDegrees, PrescribedTotals, BoundedTotals]


def _span(values) -> str:
    v = sorted(values)
    if v and v == list(range(v[0], v[-1] + 1)) and len(v) > 2:
        return f"{{{v[0]}..{v[-1]}}}"
    return "{" + ",".join(map(str, v)) + "}"


def _prange(pr) -> str:
    return f", p in [{pr[0]},{pr[1]}]" if pr else ""


def _with_range(d: dict, pr) -> dict:
    if pr:
        d["p_range"] = list(pr)
    return d


def constraint_from_json(obj) -> Constraint:
    pr = tuple(obj["p_range"]) if obj.get("p_range") else None
    kind = obj["kind"]
    if kind == "forbidden_total_degrees":
        return ForbiddenTotalDegrees(frozenset(obj["degrees"]), pr)
    if kind == "prescribed_totals":
        return PrescribedTotals(TwistedDims.from_json(obj["totals"]), pr)
    if kind == "bounded_totals":
        return BoundedTotals(TwistedDims.from_json(obj["totals"]), pr)
    raise SpectralSequenceError(f"unknown constraint kind {kind!r}")


# -- inference -----------------------------------------------------------------

@dataclass(frozen=True)
class InferenceReport:
    unknowns: tuple[DifferentialFact, ...]
    assignments_tried: int
    satisfying: tuple[tuple[Mapping[int, int], ...], ...]
    verdicts: Mapping[str, str]
    resolved: tuple[DifferentialFact, ...]
    einf: tuple[Page, ...]

    @property
    def nothing_to_infer(self) -> bool:
        return not self.unknowns and self.assignments_tried == 0

    def forced(self, status: str) -> list[str]:
        return [lbl for lbl, v in self.verdicts.items() if v == status]

    def summary(self) -> str:
        if self.nothing_to_infer:
            return "nothing to infer"
        lines = []
        nz, z = self.forced("nonzero"), self.forced("zero")
        und = self.forced("undetermined")
        if nz:
            lines.append("forced nonzero: " + " ".join(nz))
        if z:
            lines.append("forced zero: " + " ".join(z))
        if und:
            lines.append("undetermined: " + " ".join(und))
        if not self.unknowns:
            lines.append("constraints satisfied")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "assignments_tried": self.assignments_tried,
            "satisfying": len(self.satisfying),
            "verdicts": dict(self.verdicts),
            "resolved": [f.to_json() for f in self.resolved],
        }


def search_bound() -> int:
    env = os.environ.get("CONRES_SEARCH_BOUND")
    return int(env) if env else DEFAULT_SEARCH_BOUND


def infer(page1: Page, facts: Sequence[DifferentialFact], constraints: Sequence[Constraint] = (),
          bound: int | None = None) -> InferenceReport:
    """Try every per-twist rank of the unknown differentials; keep the
    assignments whose limit page meets all constraints."""
    bound = search_bound() if bound is None else bound
    unknowns = tuple(f for f in facts if f.status == "unknown")
    known = [f for f in facts if f.status != "unknown"]
    if not unknowns and not constraints:
        return InferenceReport((), 0, (), {}, tuple(facts), ())

    choices: list[list[dict[int, int]]] = []
    for f in unknowns:
        src, tgt = page1.get(f.p, f.q), page1.get(*f.target)
        shared = sorted(set(src) & set(tgt))
        caps = [range(min(src[m], tgt[m]) + 1) for m in shared]
        choices.append([dict(zip(shared, combo)) for combo in itertools.product(*caps)])
    total = 1
    for c in choices:
        total *= len(c)
    if total > bound:
        raise InferenceError(f"{total} assignments exceed the search bound {bound}")

    satisfying: list[tuple[dict[int, int], ...]] = []
    einfs: list[Page] = []
    best: tuple[int, list[str]] | None = None
    tried = 0
    for combo in itertools.product(*choices):
        tried += 1
        trial = known + [replace(f, status="nonzero" if any(rk.values()) else "zero", ranks=rk)
                         for f, rk in zip(unknowns, combo)]
        try:
            res = run(page1, trial)
        except UnresolvedDifferential:
            raise
        except SpectralSequenceError:
            continue  # ranks not realizable on the later page
        failures = [f"{c.describe()}: {msg}" for c in constraints if (msg := c.check(res.page))]
        if failures:
            if best is None or len(failures) < best[0]:
                best = (len(failures), failures)
            continue
        satisfying.append(combo)
        einfs.append(res.page)
    if not satisfying:
        detail = best[1][0] if best else "no assignment is realizable"
        raise InferenceError(f"no assignment satisfies the constraints; closest violation: {detail}")

    verdicts: dict[str, str] = {}
    resolved: list[DifferentialFact] = list(known)
    for i, f in enumerate(unknowns):
        seen = [combo[i] for combo in satisfying]
        nonzero = [any(rk.values()) for rk in seen]
        if all(nonzero):
            verdict = "nonzero"
        elif not any(nonzero):
            verdict = "zero"
        else:
            verdict = "undetermined"
        verdicts[f.label()] = verdict
        if verdict == "undetermined":
            resolved.append(f)
        else:
            unique = all(rk == seen[0] for rk in seen)
            ranks = seen[0] if unique and verdict == "nonzero" else None
            resolved.append(replace(f, status=verdict, ranks=ranks, note="inferred"))
    return InferenceReport(unknowns, tried, tuple(satisfying), verdicts, tuple(resolved), tuple(einfs))
