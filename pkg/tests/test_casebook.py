import copy
import json

import pytest

from conres.casebook import CaseError, CaseSchemaError, case_names, load_case, run_case
from conres.casebook.loader import case_from_json
from conres.casebook.references import REFERENCE_POLYNOMIALS, reference_polynomial
from conres.casebook.runner import INCOMPLETE, MATCH, assemble_e1, stored_e1


def test_bundled_cases():
    assert case_names() == ["cubic-p2", "cubic-p3", "quartic-p2"]


def test_quartic_case_shape():
    case = load_case("quartic-p2")
    assert [s["d"] for s in case.raw["strata"]] == [10, 9, 6, 5, 5, 4, 3, 1, 1, 1, 0]
    assert case.ambient_dim == 15
    assert case.complete and case.expected is not None


def test_cubic_p3_is_incomplete():
    case = load_case("cubic-p3")
    assert not case.complete
    assert case.expected is None


def test_load_by_path(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps(load_case("cubic-p2").raw))
    assert load_case(f).name == "cubic-p2"
    with pytest.raises(CaseError):
        load_case(tmp_path / "missing.json")
    with pytest.raises(CaseError, match="unknown case"):
        load_case("nope")


def test_invalid_json(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{")
    with pytest.raises(CaseSchemaError, match="invalid JSON"):
        load_case(f)


def _raw(name="cubic-p2"):
    return copy.deepcopy(load_case(name).raw)


def test_schema_error_carries_pointer():
    raw = _raw()
    raw["strata"][0]["d"] = "five"
    with pytest.raises(CaseSchemaError) as exc:
        case_from_json(raw)
    assert any(e.startswith("/strata/0/d") for e in exc.value.errors)


def test_schema_requires_one_of_space_or_script():
    raw = _raw()
    del raw["columns"][0]["space"]
    with pytest.raises(CaseSchemaError):
        case_from_json(raw)


@pytest.mark.parametrize("mutate, fragment", [
    (lambda r: r["columns"].pop(), "columns for"),
    (lambda r: r["columns"][0].__setitem__("d", 99), "differs from stratum"),
    (lambda r: r["columns"][1].__setitem__("p", 1), "repeated column"),
    (lambda r: r["inference"].append(copy.deepcopy(r["inference"][0])), "repeated instance"),
    (lambda r: r.__setitem__("expected", "1 + x"), "/expected"),
    (lambda r: r.__setitem__("expected", None), "needs an expected"),
])
def test_invariant_errors(mutate, fragment):
    raw = _raw()
    mutate(raw)
    with pytest.raises(CaseSchemaError) as exc:
        case_from_json(raw)
    assert any(fragment in e for e in exc.value.errors)


@pytest.mark.parametrize("name", ["quartic-p2", "cubic-p2"])
def test_complete_cases_match(name):
    rep = run_case(name)
    assert rep.verdict == MATCH
    assert rep.ok
    assert [s.name for s in rep.stages] == ["strata", "E1 assembly", "inference", "E-infinity", "duality"]
    assert all(s.ok for s in rep.stages)


def test_cubic_p3_reports_incomplete_reference():
    rep = run_case("cubic-p3")
    assert rep.verdict == INCOMPLETE
    assert not rep.ok
    assert rep.text().endswith("P_mH = 1\nincomplete reference")


@pytest.mark.parametrize("name", ["quartic-p2", "cubic-p2"])
def test_assembled_e1_equals_stored(name):
    case = load_case(name)
    page, _ = assemble_e1(case)
    assert page == stored_e1(case)


def test_runs_are_deterministic():
    for name in case_names():
        a = json.dumps(run_case(name).to_json(), sort_keys=True)
        b = json.dumps(run_case(name).to_json(), sort_keys=True)
        assert a == b


def test_stored_facts_are_confirmed_by_inference():
    lines = run_case("quartic-p2").stages[2].lines
    for label in ("d1(2,19)", "d1(2,21)", "d1(2,23)", "d3(11,0)", "d3(11,2)", "d3(6,10)"):
        assert any(line.strip().startswith(label) and "confirmed by" in line for line in lines), label


def test_mismatch_verdict_when_expected_is_wrong():
    raw = _raw()
    raw["expected"] = "1 + t^3u^{-2}v^{-2}"
    rep = run_case(case_from_json(raw))
    assert rep.verdict == "MISMATCH"
    assert not rep.ok


def test_stored_fact_contradicting_inference_fails():
    raw = _raw("quartic-p2")
    for d in raw["differentials"]:
        if (d["r"], d["p"], d["q"]) == (3, 6, 10):
            d["status"] = "nonzero"
    rep = run_case(case_from_json(raw))
    assert not rep.ok


def test_references():
    assert set(REFERENCE_POLYNOMIALS) == {"quartic-moduli", "cubic-surface-moduli"}
    assert str(reference_polynomial("quartic-moduli")) == "1 + t^2*(uv)^-1 + t^4*(uv)^-2 + t^6*(uv)^-3"
    assert reference_polynomial("cubic-p2") == load_case("cubic-p2").expected
    with pytest.raises(CaseError):
        reference_polynomial("cubic-p3")
