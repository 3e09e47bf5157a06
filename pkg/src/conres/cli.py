"""Command-line front end.

Exit codes: 0 success, 2 malformed input or schema violation, 3 computation
error, 4 reference mismatch, incomplete reference or failed validation.
Results go to stdout (or ``--out``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bmspace, specseq, strata
from .casebook import CaseError, CaseSchemaError, case_names, load_case, run_case
from .casebook.references import REFERENCE_POLYNOMIALS, reference_polynomial
from .casebook.runner import assemble_e1, inference_problem, stored_e1, _column_dims
from .cohring import (
    GradedRingPresentation,
    PresentationError,
    RING_PRESETS,
    RingError,
    RingSyntaxError,
    build_ring,
    chern_theta,
    chern_xi_eta,
    eval_bundle_json,
    normal_form,
    ring_from_json,
)
from .hodgepoly import SPECIALIZATIONS, MHPolynomial, PolynomialError, divide_exact, dualize, parse_poly, specialize

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE, EXIT_MISMATCH = 0, 2, 3, 4

INFER_ALIASES = {"lastcolq": "quartic-p2/last-column"}
RUN_PRESETS = {"quartic-e1": "quartic-p2", "cubic-e1": "cubic-p2"}
STRATA_PRESETS = {
    "cubic-points": strata.cubic_point_model,
    "cubic-points-fixed": strata.cubic_point_model_fixed,
    "trivial": strata.trivial_model,
}


class InputError(ValueError):
    pass


# -- input helpers -------------------------------------------------------------

def _read_json(arg: str):
    """A file path, ``-`` for stdin, or inline JSON text."""
    try:
        if arg == "-":
            return json.load(sys.stdin)
        path = Path(arg)
        if path.exists():
            return json.loads(path.read_text())
        return json.loads(arg)
    except json.JSONDecodeError as exc:
        raise InputError(f"{arg!r} is neither a readable file nor valid JSON ({exc})") from None


def _need(args, what: str):
    if args.preset is None and args.input is None:
        raise InputError(f"give an input {what} or --preset")


def _poly_arg(text: str) -> MHPolynomial:
    if text in REFERENCE_POLYNOMIALS or text in case_names():
        return reference_polynomial(text)
    return parse_poly(text)


# -- ring ---------------------------------------------------------------------

def _ring(args):
    if args.preset:
        return ring_from_json(args.preset)
    if args.ring_file:
        return build_ring(GradedRingPresentation.from_json(_read_json(args.ring_file)))
    raise InputError("give --preset or --ring-file")


def cmd_ring(args):
    r = _ring(args)
    if args.action == "dims":
        dims = r.even_dims()
        return {"ring": r.name, "dims": dims, "top_degree": r.top_degree}, " ".join(map(str, dims))
    x = normal_form(r, args.expr)
    return {"ring": r.name, "input": args.expr, "normal_form": str(x), "element": x.to_json()}, str(x)


# -- chern --------------------------------------------------------------------

def cmd_chern(args):
    if args.action == "theta":
        res = chern_theta(args.d, args.n)
        lines, out = [], {"d": args.d, "n": args.n, "class": str(res.closed), "rank": res.closed.rank,
                          "flag_class": str(res.flag_class)}
        if args.check:
            out["routes_agree"] = res.agree
            out["proof_route"] = str(res.proof_route)
            lines.append("routes agree" if res.agree else "routes DISAGREE")
            if not res.agree:
                lines.append(f"proof route: {res.proof_route}")
        lines.append(f"c(theta) = {res.closed}")
        lines.append(f"in the flag ring: {res.flag_class}")
        code = EXIT_OK if res.agree or not args.check else EXIT_COMPUTE
        return out, "\n".join(lines), code
    if args.action == "xi-eta":
        res = chern_xi_eta()
        out = {"xi": str(res.xi), "eta": str(res.eta), "xi_rank": res.xi.rank, "eta_rank": res.eta.rank,
               "c1_quotient": str(res.c1_quotient)}
        text = "\n".join([f"c(xi') = {res.xi}", f"c(eta') = {res.eta}", f"c1(xi'/eta') = {res.c1_quotient}"])
        return out, text
    _need(args, "bundle file")
    obj = _read_json(args.input)
    tc = eval_bundle_json(obj)
    out = dict(obj)
    out.update({"total": str(tc), "rank": tc.rank})
    return out, f"c = {tc}" + (f"  (rank {tc.rank})" if tc.rank is not None else "")


# -- space --------------------------------------------------------------------

def _space_input(args):
    if args.preset:
        case, _, col = args.preset.rpartition("-col")
        if not case or not col.isdigit():
            raise InputError(f"space presets look like CASE-colP, e.g. quartic-p2-col2; got {args.preset!r}")
        spec = next((c for c in load_case(case).raw["columns"] if c["p"] == int(col)), None)
        if spec is None:
            raise InputError(f"case {case} has no column {col}")
        return spec
    _need(args, "space file")
    return _read_json(args.input)


def cmd_space(args):
    obj = _space_input(args)
    spec = obj if isinstance(obj, dict) and ({"space", "script", "dims"} & obj.keys()) else {"space": obj}
    dims, audit = _column_dims(spec, spec.get("d", 0))
    out = {k: v for k, v in spec.items() if k in ("space", "script", "dims", "d", "p")}
    out["result"] = dims.to_json()
    if audit:
        out["audit"] = audit
    return out, "\n".join(audit + [dims.describe()])


# -- spectral sequences -----------------------------------------------------------

def _ss_input(args):
    if args.preset:
        if args.action == "run":
            case = RUN_PRESETS.get(args.preset, args.preset.removesuffix("-e1"))
            c = load_case(case)
            return stored_e1(c), [specseq.DifferentialFact.from_json(d) for d in c.raw["differentials"]], []
        name = INFER_ALIASES.get(args.preset, args.preset)
        case, _, inst = name.partition("/")
        if not inst:
            raise InputError(f"inference presets look like CASE/INSTANCE or {sorted(INFER_ALIASES)}; got {name!r}")
        return inference_problem(case, inst)
    _need(args, "page file")
    obj = _read_json(args.input)
    if "page" not in obj and "entries" not in obj:
        raise InputError("expected an object with a 'page' (or a bare page with 'entries')")
    page = specseq.Page.from_json(obj.get("page", obj))
    facts = [specseq.DifferentialFact.from_json(f) for f in obj.get("facts", [])]
    cons = [specseq.constraint_from_json(c) for c in obj.get("constraints", [])]
    return page, facts, cons


def cmd_ss(args):
    page, facts, cons = _ss_input(args)
    base = {"page": page.to_json(), "facts": [f.to_json() for f in facts]}
    if args.action == "run":
        res = specseq.run(page, facts)
        base["survivors"] = res.page.to_json()["entries"]
        base["totals"] = res.totals.to_json()
        lines = ["survivors:" if res.page.entries else "survivors: none"]
        if res.page.entries:
            lines.append(res.page.describe())
        lines.append(f"totals: {res.totals.describe()}")
        return base, "\n".join(lines)
    base["constraints"] = [c.to_json() for c in cons]
    rep = specseq.infer(page, facts, cons)
    base["report"] = rep.to_json()
    return base, rep.summary()


# -- hodge --------------------------------------------------------------------

def cmd_hodge(args):
    if args.action == "dualize":
        obj = _read_json(args.totals)
        if isinstance(obj, dict) and "totals" in obj:
            dim = obj.get("dim", args.dim)
            obj = obj["totals"]
        else:
            dim = args.dim
        if dim is None:
            raise InputError("give --dim")
        dims = bmspace.dims_from_json(obj)
        p = dualize(dims, dim)
        return {"totals": dims.to_json(), "dim": dim, "polynomial": str(p)}, str(p)
    if args.action == "specialize":
        p = _poly_arg(args.poly)
        val = specialize(p, args.mode)
        return {"polynomial": str(p), "mode": args.mode, "value": str(val)}, str(val)
    p, q = _poly_arg(args.poly), _poly_arg(args.divisor)
    res = divide_exact(p, q)
    out = {"dividend": str(p), "divisor": str(q), "divisible": res.divisible,
           "quotient": None if res.quotient is None else str(res.quotient),
           "obstruction": None if res.obstruction is None else list(res.obstruction), "reason": res.reason}
    return out, res.summary()


# -- strata -------------------------------------------------------------------

def cmd_strata(args):
    if args.preset:
        if args.preset in STRATA_PRESETS:
            model = STRATA_PRESETS[args.preset]()
        else:
            c = load_case(args.preset)
            model = strata.StratificationModel.from_json(c.raw)
    else:
        _need(args, "model file")
        model = strata.StratificationModel.from_json(_read_json(args.input))
    rep = strata.validate(model, args.level)
    out = rep.to_json()
    out["model_data"] = model.to_json()
    return out, rep.text(), EXIT_OK if rep.passed else EXIT_MISMATCH


# -- case ---------------------------------------------------------------------

_STAGE_ALIASES = {"strata": "strata", "e1": "E1 assembly", "inference": "inference",
                  "einf": "E-infinity", "duality": "duality"}


def cmd_case(args):
    if args.action == "list":
        rows = []
        for n in case_names():
            c = load_case(n)
            rows.append({"name": n, "status": c.raw["status"], "title": c.raw.get("title", "")})
        return {"cases": rows}, "\n".join(f"{r['name']}\t{r['status']}\t{r['title']}" for r in rows)
    if args.action == "export":
        c = load_case(args.name)
        return c.to_json(), json.dumps(c.to_json(), indent=2)
    names = case_names() if args.all else [args.name]
    if not names or names == [None]:
        raise InputError("give a case name or --all")
    reports = [run_case(n) for n in names]
    texts = []
    for rep in reports:
        if args.stage:
            want = _STAGE_ALIASES[args.stage]
            st = [s for s in rep.stages if s.name == want]
            body = [f"[{'ok' if s.ok else 'FAIL'}] {s.name}\n" + "\n".join("    " + ln for ln in s.lines) for s in st]
            tail = [f"P_mH = {rep.polynomial}"] if rep.polynomial is not None else []
            texts.append("\n".join(body + tail + [rep.verdict]))
        else:
            texts.append(rep.text())
    code = EXIT_OK if all(r.ok for r in reports) else EXIT_MISMATCH
    out = reports[0].to_json() if len(reports) == 1 else {"reports": [r.to_json() for r in reports]}
    return out, "\n\n".join(texts), code


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the result to this file instead of stdout")

    ap = argparse.ArgumentParser(prog="conres", description="Conical-resolution computations over Q.")
    sub = ap.add_subparsers(dest="command", required=True)

    ring = sub.add_parser("ring", help="graded ring dimensions and normal forms")
    rs = ring.add_subparsers(dest="action", required=True)
    for name in ("dims", "nf"):
        p = rs.add_parser(name, parents=[common])
        p.add_argument("--preset", choices=sorted(RING_PRESETS))
        p.add_argument("--ring-file", help="presentation JSON")
        if name == "nf":
            p.add_argument("expr")
    ring.set_defaults(func=cmd_ring)

    chern = sub.add_parser("chern", help="total Chern classes")
    cs = chern.add_subparsers(dest="action", required=True)
    p = cs.add_parser("theta", parents=[common])
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--check", action="store_true", help="compare with the product of intermediate bundles")
    cs.add_parser("xi-eta", parents=[common])
    p = cs.add_parser("eval", parents=[common])
    p.add_argument("input", nargs="?")
    p.add_argument("--preset", default=None, help=argparse.SUPPRESS)
    chern.set_defaults(func=cmd_chern)

    space = sub.add_parser("space", help="Borel-Moore homology of space expressions")
    ss_ = space.add_subparsers(dest="action", required=True)
    p = ss_.add_parser("eval", parents=[common])
    p.add_argument("input", nargs="?")
    p.add_argument("--preset", help="a case column, e.g. quartic-p2-col2")
    space.set_defaults(func=cmd_space)

    ss = sub.add_parser("ss", help="spectral sequence runs and inference")
    sss = ss.add_subparsers(dest="action", required=True)
    for name in ("run", "infer"):
        p = sss.add_parser(name, parents=[common])
        p.add_argument("input", nargs="?")
        p.add_argument("--preset")
    ss.set_defaults(func=cmd_ss)

    hodge = sub.add_parser("hodge", help="mixed Hodge polynomials")
    hs = hodge.add_subparsers(dest="action", required=True)
    p = hs.add_parser("dualize", parents=[common])
    p.add_argument("totals", help="twisted dimensions as JSON text or file")
    p.add_argument("--dim", type=int, help="complex dimension of the ambient space")
    p = hs.add_parser("specialize", parents=[common])
    p.add_argument("poly")
    p.add_argument("--mode", choices=SPECIALIZATIONS, required=True)
    p = hs.add_parser("divide", parents=[common])
    p.add_argument("poly")
    p.add_argument("divisor")
    hodge.set_defaults(func=cmd_hodge)

    st = sub.add_parser("strata", help="stratification model checks")
    sts = st.add_subparsers(dest="action", required=True)
    p = sts.add_parser("validate", parents=[common])
    p.add_argument("input", nargs="?")
    p.add_argument("--preset", help=f"one of {sorted(STRATA_PRESETS)} or a case name")
    p.add_argument("--level", choices=strata.LEVELS, default="five")
    st.set_defaults(func=cmd_strata)

    case = sub.add_parser("case", help="bundled worked examples")
    cas = case.add_subparsers(dest="action", required=True)
    p = cas.add_parser("run", parents=[common])
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true")
    p.add_argument("--stage", choices=sorted(_STAGE_ALIASES))
    cas.add_parser("list", parents=[common])
    p = cas.add_parser("export", parents=[common])
    p.add_argument("name")
    case.set_defaults(func=cmd_case)
    return ap


def _emit(args, payload, text) -> None:
    body = json.dumps(payload, indent=2, sort_keys=True) if args.format == "json" else text
    if args.out:
        Path(args.out).write_text(body + "\n")
    else:
        print(body)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.func(args)
    except (InputError, CaseSchemaError, PresentationError, PolynomialError, bmspace.SpaceError,
            strata.ModelError, RingSyntaxError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RingError, specseq.SpectralSequenceError, ZeroDivisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    payload, text, *rest = result
    _emit(args, payload, text)
    return rest[0] if rest else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
