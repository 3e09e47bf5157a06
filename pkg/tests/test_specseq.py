import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conres import specseq
from conres.casebook import load_case
from conres.casebook.runner import inference_problem, stored_e1
from conres.specseq import (
    BoundedTotals,
    DifferentialFact,
    ForbiddenTotalDegrees,
    InferenceError,
    Page,
    PrescribedTotals,
    SpectralSequenceError,
    UnresolvedDifferential,
    infer,
    run,
    totals,
)
from conres.twisted import EMPTY, TwistedDims


def quartic():
    case = load_case("quartic-p2")
    return stored_e1(case), [DifferentialFact.from_json(d) for d in case.raw["differentials"]]


def test_quartic_run_survivors():
    page, facts = quartic()
    res = run(page, facts)
    assert res.page.rows() == [
        (1, 21, 11, 1), (1, 23, 12, 1), (1, 25, 13, 1), (3, 12, 7, 1), (3, 14, 8, 1), (3, 16, 9, 1),
        (5, 16, 10, 1), (6, 10, 7, 1), (8, 6, 6, 1)]
    assert res.totals == TwistedDims({(22, 11): 1, (24, 12): 1, (26, 13): 1, (15, 7): 1, (17, 8): 1,
                                      (19, 9): 1, (21, 10): 1, (16, 7): 1, (14, 6): 1})


def test_run_is_independent_of_fact_order():
    page, facts = quartic()
    assert run(page, facts).page == run(page, list(reversed(facts))).page


def test_unresolved_differential():
    page = Page.from_rows([(2, 0, 0), (1, 0, 0)])
    with pytest.raises(UnresolvedDifferential):
        run(page, [])
    with pytest.raises(UnresolvedDifferential):
        run(page, [DifferentialFact(1, 2, 0, "unknown")])


def test_twist_mismatch_never_cancels():
    page = Page.from_rows([(2, 0, 0), (1, 0, 1)])
    assert run(page, []).page == page.__class__(page.entries, 2)
    with pytest.raises(SpectralSequenceError):
        run(page, [DifferentialFact(1, 2, 0, "nonzero")])


def test_nonzero_fact_that_never_acts():
    page = Page.from_rows([(2, 0, 0)])
    with pytest.raises(SpectralSequenceError):
        run(page, [DifferentialFact(5, 9, 9, "nonzero")])


def test_rank_overflow():
    page = Page.from_rows([(3, 0, 0), (2, 0, 0), (1, 0, 0)])
    with pytest.raises(SpectralSequenceError):
        run(page, [DifferentialFact(1, 3, 0, "nonzero"), DifferentialFact(1, 2, 0, "nonzero")])


def test_explicit_partial_rank():
    page = Page.from_rows([(2, 0, 0, 2), (1, 0, 0, 3)])
    res = run(page, [DifferentialFact(1, 2, 0, "nonzero", ranks={0: 1})])
    assert res.page.rows() == [(1, 0, 0, 2), (2, 0, 0, 1)]


def test_empty_page_runs_to_empty():
    assert run(Page({}), []).page.is_empty()
    assert totals(Page({})) == EMPTY


def test_label_round_trip():
    f = DifferentialFact(3, 11, 0)
    assert f.label() == "d3(11,0)"
    assert specseq.parse_label(f.label()) == (3, 11, 0)
    assert f.target == (8, 2)
    with pytest.raises(SpectralSequenceError):
        specseq.parse_label("x")


def test_page_json_round_trip():
    page, _ = quartic()
    assert Page.from_json(page.to_json()) == page


# -- inference --------------------------------------------------------------------

def test_last_column_inference():
    page, facts, cons = inference_problem("quartic-p2", "last-column")
    rep = infer(page, facts, cons)
    assert rep.summary() == "forced nonzero: d1(2,1) d1(2,3) d1(3,5)"
    assert cons[0].describe() == "ForbiddenTotalDegrees({1..7})"


def test_top_strata_inference():
    page, _ = quartic()
    sub = page.restrict((8, 11))
    facts = [DifferentialFact(3, 11, 0, "unknown"), DifferentialFact(3, 11, 2, "unknown")]
    rep = infer(sub, facts, [PrescribedTotals(TwistedDims({(14, 6): 1}))])
    assert rep.verdicts == {"d3(11,0)": "nonzero", "d3(11,2)": "nonzero"}


def test_final_inference_forces_zero():
    page, facts, cons = inference_problem("quartic-p2", "final")
    rep = infer(page, facts, cons)
    assert rep.verdicts == {"d3(6,10)": "zero"}


def test_nothing_to_infer():
    assert infer(Page({}), []).summary() == "nothing to infer"


def test_inference_without_solutions():
    page = Page.from_rows([(2, 0, 0), (1, 0, 0)])
    with pytest.raises(InferenceError, match="closest violation"):
        infer(page, [DifferentialFact(1, 2, 0, "unknown")], [PrescribedTotals(TwistedDims({(5, 0): 1}))])


def test_search_bound(monkeypatch):
    page = Page.from_rows([(2, 0, 0, 5), (1, 0, 0, 5)])
    with pytest.raises(InferenceError, match="search bound"):
        infer(page, [DifferentialFact(1, 2, 0, "unknown")], [], bound=3)
    monkeypatch.setenv("CONRES_SEARCH_BOUND", "2")
    with pytest.raises(InferenceError):
        infer(page, [DifferentialFact(1, 2, 0, "unknown")], [])


def test_constraint_json_round_trip():
    for c in (ForbiddenTotalDegrees(frozenset({1, 2}), (1, 3)),
              PrescribedTotals(TwistedDims({(14, 6): 1})),
              BoundedTotals(TwistedDims({(1, 0): 2}), (0, 4))):
        assert specseq.constraint_from_json(c.to_json()) == c


# -- properties -----------------------------------------------------------------------

cells = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)),
    st.dictionaries(st.integers(0, 2), st.integers(1, 2), min_size=1, max_size=2),
    max_size=8)


def _all_facts(page: Page, statuses):
    """First-page facts with the given statuses where twists meet; zero everywhere later."""
    facts = []
    k = 0
    for (p, q), tw in page.entries.items():
        if set(tw) & set(page.get(p - 1, q)):
            facts.append(DifferentialFact(1, p, q, statuses[k % len(statuses)]))
            k += 1
    facts += [DifferentialFact(r, p, q, "zero") for r in range(2, 7) for (p, q) in page.entries]
    return facts


@settings(max_examples=80, deadline=None)
@given(cells, st.lists(st.sampled_from(["zero", "nonzero"]), min_size=1, max_size=6))
def test_euler_characteristic_conserved(entries, statuses):
    page = Page(entries)
    facts = _all_facts(page, statuses)
    try:
        res = run(page, facts)
    except SpectralSequenceError:
        assume(False)
    assert res.page.euler_by_twist() == page.euler_by_twist()
    for pg in res.pages:
        assert pg.euler_by_twist() == page.euler_by_twist()


@settings(max_examples=60, deadline=None)
@given(cells)
def test_bound_satisfied_by_e1_forces_nothing(entries):
    page = Page(entries)
    unknown = []
    for (p, q), tw in page.entries.items():
        tgt = page.get(p - 1, q)
        if set(tw) & set(tgt):
            unknown.append(DifferentialFact(1, p, q, "unknown"))
    assume(len(unknown) <= 4)
    zeros = [DifferentialFact(r, p, q, "zero") for r in range(2, 7) for (p, q) in page.entries]
    try:
        rep = infer(page, unknown + zeros, [BoundedTotals(totals(page))])
    except SpectralSequenceError:
        assume(False)
    assert "nonzero" not in rep.verdicts.values()
