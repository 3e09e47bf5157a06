"""End-to-end run of a case: strata checks, E1 assembly, inference, E-infinity, duality."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import bmspace, specseq, strata
from ..cohring import chern_xi_eta
from ..hodgepoly import MHPolynomial, dualize, undualize
from ..twisted import TwistedDims
from .loader import CaseError, CaseStudy, load_case

MATCH, MISMATCH, INCOMPLETE = "MATCH", "MISMATCH", "incomplete reference"


@dataclass
class Stage:
    name: str
    ok: bool = True
    lines: list[str] = field(default_factory=list)

    def log(self, line: str) -> None:
        self.lines.append(line)

    def fail(self, line: str) -> None:
        self.ok = False
        self.lines.append("FAIL: " + line)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "lines": list(self.lines)}


@dataclass
class CaseReport:
    name: str
    stages: list[Stage]
    polynomial: MHPolynomial | None
    expected: MHPolynomial | None
    verdict: str
    einf: specseq.Page | None = None

    @property
    def ok(self) -> bool:
        return self.verdict == MATCH

    def text(self) -> str:
        out = [f"case {self.name}"]
        for st in self.stages:
            out.append(f"[{'ok' if st.ok else 'FAIL'}] {st.name}")
            out.extend("    " + ln for ln in st.lines)
        if self.polynomial is not None:
            out.append(f"P_mH = {self.polynomial}")
        out.append(self.verdict)
        return "\n".join(out)

    def to_json(self) -> dict:
        return {
            "case": self.name,
            "stages": [s.to_json() for s in self.stages],
            "polynomial": None if self.polynomial is None else str(self.polynomial),
            "expected": None if self.expected is None else str(self.expected),
            "einf": None if self.einf is None else self.einf.to_json(),
            "verdict": self.verdict,
        }


def _fact(raw) -> specseq.DifferentialFact:
    return specseq.DifferentialFact(raw["r"], raw["p"], raw["q"], raw["status"], note=raw.get("note", ""))


def _column_dims(spec, bundle_rank: int = 0) -> tuple[TwistedDims, list[str]]:
    if "script" in spec:
        res = bmspace.run_script(bmspace.script_from_json(spec["script"]))
        dims, audit = res.dims, list(res.audit)
    elif "dims" in spec:
        dims, audit = bmspace.dims_from_json(spec["dims"]), ["declared"]
    else:
        dims, audit = bmspace.eval_space(bmspace.space_from_json(spec["space"])), []
    if bundle_rank:
        dims = dims.shift(2 * bundle_rank, bundle_rank)
    return dims, audit


def assemble_e1(case: CaseStudy) -> tuple[specseq.Page, list[str]]:
    """E1 from the column spaces, each crossed with ``C^d``."""
    cols, audit = {}, []
    for col in case.raw["columns"]:
        dims, steps = _column_dims(col, col["d"])
        cols[col["p"]] = dims
        audit.append(f"column {col['p']} (d={col['d']}): {dims.describe()}")
        audit.extend(f"  {s}" for s in steps)
    return specseq.page_from_columns(cols), audit


def stored_e1(case: CaseStudy) -> specseq.Page:
    return specseq.Page.from_json(case.raw["e1"])


class _Context:
    def __init__(self, case: CaseStudy, e1: specseq.Page):
        self.case = case
        self.e1 = e1
        self.exports: dict[str, TwistedDims] = {}
        self.derived: dict[tuple[int, int, int], specseq.DifferentialFact] = {}
        self.provenance: dict[tuple[int, int, int], str] = {}
        self.stored = [_fact(d) for d in case.raw["differentials"]]

    def current(self, f: specseq.DifferentialFact) -> specseq.DifferentialFact:
        return self.derived.get(f.key, f)

    def totals_for(self, c) -> TwistedDims:
        if "totals" in c:
            return bmspace.dims_from_json(c["totals"])
        if "totals_space" in c:
            return bmspace.eval_space(bmspace.space_from_json(c["totals_space"]))
        if "totals_from" in c:
            if c["totals_from"] not in self.exports:
                raise CaseError(f"instance {c['totals_from']!r} has not exported its totals")
            return self.exports[c["totals_from"]]
        if "totals_e1" in c:
            return specseq.totals(self.e1.restrict(tuple(c["totals_e1"])))
        if c.get("totals_expected"):
            return undualize(self.case.expected, self.case.ambient_dim)
        raise CaseError(f"constraint {c} names no totals")

    def constraint(self, c) -> specseq.Constraint:
        pr = tuple(c["p_range"]) if c.get("p_range") else None
        kind = c["kind"]
        if kind == "vanishing_bound":
            bound = self.case.vanishing_bound
            if bound is None:
                raise CaseError("vanishing_bound constraint in a case without a vanishing bound")
            top = 2 * self.case.ambient_dim - 1 - c.get("cone_shift", 0) - bound
            return specseq.ForbiddenTotalDegrees(frozenset(range(1, top + 1)), pr)
        if kind == "forbidden_total_degrees":
            return specseq.ForbiddenTotalDegrees(frozenset(c["degrees"]), pr)
        if kind == "prescribed_totals":
            return specseq.PrescribedTotals(self.totals_for(c), pr)
        if kind == "bounded_totals":
            return specseq.BoundedTotals(self.totals_for(c), pr)
        raise CaseError(f"unknown constraint kind {kind!r}")

    def page(self, spec) -> tuple[specseq.Page, tuple[int, int] | None]:
        if "from_e1" in spec:
            pr = tuple(spec["from_e1"])
            return self.e1.restrict(pr), pr
        if "columns" in spec:
            return specseq.page_from_columns({c["p"]: _column_dims(c)[0] for c in spec["columns"]}), None
        if "entries" in spec:
            return specseq.Page.from_json(spec["entries"]), None
        raise CaseError("inference page needs from_e1, columns or entries")


def _problem(ctx: _Context, inst):
    """Page, facts and concrete constraints of one inference instance."""
    page, pr = ctx.page(inst["page"])
    unknown_keys = {specseq.parse_label(lbl) for lbl in inst["unknowns"]}
    facts = [specseq.DifferentialFact(*k, "unknown") for k in sorted(unknown_keys)]
    if pr is not None:
        lo, hi = pr
        for f in ctx.stored:
            if f.key in unknown_keys or not (lo <= f.p <= hi and lo <= f.p - f.r <= hi):
                continue
            facts.append(ctx.current(f))
    return page, facts, [ctx.constraint(c) for c in inst.get("constraints", [])]


def inference_problem(case: CaseStudy | str, name: str):
    """The concrete problem of instance ``name``, after running the instances before it."""
    if not isinstance(case, CaseStudy):
        case = load_case(case)
    e1, _ = assemble_e1(case)
    ctx = _Context(case, e1)
    scratch = Stage("scratch")
    for inst in case.raw.get("inference", []):
        if inst["name"] == name:
            if "page" not in inst:
                raise CaseError(f"instance {name!r} is not a spectral sequence problem")
            return _problem(ctx, inst)
        _run_instance(ctx, inst, scratch)
    raise CaseError(f"case {case.name} has no inference instance {name!r}")


def _run_instance(ctx: _Context, inst, stage: Stage) -> None:
    name = inst["name"]
    if inst.get("description"):
        stage.log(f"{name}: {inst['description']}")
    if "chern_criterion" in inst:
        crit = inst["chern_criterion"]
        if crit["computation"] != "xi_eta":
            raise CaseError(f"unknown Chern computation {crit['computation']!r}")
        res = chern_xi_eta()
        pair = res.c1_quotient.ring
        direction = pair(crit["direction"])
        q, dvec = res.c1_quotient.coords(2), direction.coords(2)
        scale = next((a / b for a, b in zip(q, dvec) if b), None)
        ok = scale is not None and scale != 0 and all(a == scale * b for a, b in zip(q, dvec))
        stage.log(f"{name}: c1 of the quotient = {res.c1_quotient}; multiple of {direction}: {'yes' if ok else 'no'}")
        if not ok:
            stage.fail(f"{name}: criterion not met, {', '.join(inst['implies_nonzero'])} left open")
            return
        for lbl in inst["implies_nonzero"]:
            r, p, qq = specseq.parse_label(lbl)
            ctx.derived[(r, p, qq)] = specseq.DifferentialFact(r, p, qq, "nonzero", note=name)
            ctx.provenance[(r, p, qq)] = name
        stage.log(f"{name}: forced nonzero: {' '.join(inst['implies_nonzero'])}")
        return

    page, facts, constraints = _problem(ctx, inst)
    unknown_keys = {f.key for f in facts if f.status == "unknown"}
    report = specseq.infer(page, facts, constraints)
    stage.log(f"{name}: {' '.join(c.describe() for c in constraints) or 'no constraints'}; "
              f"{report.assignments_tried} assignments, {len(report.satisfying)} satisfying")
    stage.log(f"{name}: " + report.summary().replace("\n", "; "))
    for f in report.resolved:
        if f.key in unknown_keys and f.status != "unknown":
            ctx.derived[f.key] = f
            ctx.provenance[f.key] = name
    for lbl, want in inst.get("expect", {}).items():
        got = report.verdicts.get(lbl)
        if got != want:
            stage.fail(f"{name}: {lbl} is {got}, expected {want}")
    if inst.get("export"):
        tots = {specseq.totals(p) for p in report.einf}
        if len(tots) != 1:
            stage.fail(f"{name}: surviving totals are not determined ({len(tots)} possibilities)")
        else:
            ctx.exports[name] = tots.pop()
            stage.log(f"{name}: exported totals {ctx.exports[name].describe()}")


def _check_declarations(ctx: _Context, stage: Stage) -> None:
    for col in ctx.case.raw["columns"]:
        for step in col.get("script", {}).get("steps", []):
            src = step.get("from_inference")
            if not src:
                continue
            declared = bmspace.dims_from_json(step["dims"])
            got = ctx.exports.get(src)
            if got is None:
                stage.fail(f"column {col['p']}: {step['declare']} refers to {src!r}, which exported nothing")
            elif got != declared:
                stage.fail(f"column {col['p']}: declared {step['declare']} = {declared.describe()} "
                           f"but {src} gives {got.describe()}")
            else:
                stage.log(f"column {col['p']}: declared {step['declare']} = {declared.describe()} agrees with {src}")


def run_case(case: CaseStudy | str) -> CaseReport:
    if not isinstance(case, CaseStudy):
        case = load_case(case)
    stages: list[Stage] = []

    st = Stage("strata")
    model = strata.StratificationModel.from_json(case.raw)
    rep = strata.validate(model, "five")
    st.log(rep.text().splitlines()[0])
    for f in rep.failures():
        st.fail(f"condition {f.condition}: {f.detail}")
    rows = strata.geom_rows(model)
    table_rows = sum(len(s.get("geom", [])) for s in case.raw["strata"])
    tab = strata.geom_table_check(model, rows, table_rows)
    st.log(f"geometrization table: {len(rows)} rows, {'PASS' if tab.passed else 'FAIL'}")
    for f in tab.failures():
        st.fail(f"{f.condition}: {f.detail}")
    stages.append(st)

    st = Stage("E1 assembly")
    e1, audit = assemble_e1(case)
    st.lines.extend(audit)
    want = stored_e1(case)
    if e1 != want:
        st.fail(f"assembled E1 differs from the stored table:\n{e1.describe()}")
    else:
        st.log(f"assembled E1 agrees with the stored table ({len(e1.rows())} rows)")
    stages.append(st)

    st = Stage("inference")
    ctx = _Context(case, e1)
    for inst in case.raw.get("inference", []):
        try:
            _run_instance(ctx, inst, st)
        except specseq.SpectralSequenceError as exc:
            st.fail(f"{inst['name']}: {exc}")
    _check_declarations(ctx, st)
    for f in ctx.stored:
        got = ctx.derived.get(f.key)
        if got is None:
            st.log(f"{f.label()} {f.status}: stored, not derived")
        elif got.status != f.status:
            st.fail(f"{f.label()}: stored {f.status} but {ctx.provenance[f.key]} gives {got.status}")
        else:
            st.log(f"{f.label()} {f.status}: confirmed by {ctx.provenance[f.key]}")
        if f.note:
            st.log(f"  note on {f.label()}: {f.note}")
    stages.append(st)

    st = Stage("E-infinity")
    facts = [ctx.current(f) for f in ctx.stored]
    try:
        res = specseq.run(e1, facts)
    except (specseq.SpectralSequenceError, AssertionError) as exc:
        st.fail(str(exc))
        stages.append(st)
        return CaseReport(case.name, stages, None, case.expected, MISMATCH)
    st.log(f"{len(res.cancellations)} cancellations; Euler characteristic per twist {e1.euler_by_twist()} conserved")
    st.lines.extend(res.page.describe().splitlines())
    stages.append(st)

    st = Stage("duality")
    poly = dualize(res.totals, case.ambient_dim)
    expected = case.expected
    st.log(f"surviving totals {res.totals.describe()}")
    if expected is None:
        st.ok = False
        st.log("no reference polynomial to compare with")
        stages.append(st)
        return CaseReport(case.name, stages, poly, None, INCOMPLETE, res.page)
    match = poly == expected
    if not match:
        st.fail(f"expected {expected}")
    stages.append(st)

    verdict = MATCH if match and all(s.ok for s in stages) else MISMATCH
    return CaseReport(case.name, stages, poly, expected, verdict, res.page)
