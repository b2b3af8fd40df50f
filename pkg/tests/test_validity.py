import pytest

import oracles
from ddsl import io
from ddsl.checker import CheckContext, satisfies
from ddsl.complex import canonical_key
from ddsl.errors import BoundsTooLarge
from ddsl.formula import parse
from ddsl.validity import (
    TAUTOLOGIES,
    Counterexample,
    EnumerationBounds,
    ValidUpToBound,
    axiom_suite,
    check_validity,
    enumerate_models,
    estimate_candidates,
    update_schedule,
)


@pytest.mark.parametrize("bounds,expected", [
    ((1, 0, 1, 1), 1),
    ((1, 1, 1, 1), 2),
    ((2, 1, 1, 2), 12),
    ((1, 2, 2, 2), 14),
    ((2, 1, 2, 2), 56),
    ((3, 1, 2, 2), 629),
])
def test_enumeration_counts_match_brute_force(bounds, expected):
    b = EnumerationBounds(*bounds)
    raw = oracles.all_raw_models(b.agents, b.props, b.max_vertices_per_agent, b.max_facets)
    assert oracles.count_up_to_iso(raw) == expected
    models = list(enumerate_models(b))
    assert len(models) == expected
    assert len({canonical_key(m) for m in models}) == expected


def test_single_vertex_model():
    (m,) = enumerate_models(EnumerationBounds(1, 0, 1, 1))
    assert len(m.vertices) == 1 and len(m.facets) == 1


def test_enumeration_is_deterministic():
    b = EnumerationBounds(2, 1, 2, 2)
    first = [io.dumps(io.model_to_dict(m)) for m in enumerate_models(b)]
    assert first == [io.dumps(io.model_to_dict(m)) for m in enumerate_models(b)]


def test_bounds_too_large():
    b = EnumerationBounds(4, 2, 3, 4)
    assert estimate_candidates(b) > 5_000_000
    with pytest.raises(BoundsTooLarge):
        next(iter(enumerate_models(b)))


def test_custom_ceiling():
    b = EnumerationBounds(2, 1, 2, 2)
    with pytest.raises(BoundsTooLarge):
        list(enumerate_models(b, ceiling=1))


@pytest.mark.parametrize("args", [(0, 1, 1, 1), (1, -1, 1, 1), (1, 1, 0, 1), (1, 1, 1, 0)])
def test_invalid_bounds(args):
    with pytest.raises(ValueError):
        EnumerationBounds(*args)


def test_axiom_t_valid_up_to_bound():
    b = EnumerationBounds(3, 1, 2, 2)
    verdict = check_validity(parse("D{a} p@a -> p@a", agents=b.agents), b)
    assert isinstance(verdict, ValidUpToBound) and verdict
    assert verdict.models_checked == 629


@pytest.mark.parametrize("text", [
    "~D{a,b,c} p@c -> D{a,b,c} ~D{a,b,c} p@c",
    "D{a,b}(p@a & ~p@b) -> D{a,b,c}(p@a & ~p@b)",
])
def test_counterexamples_are_genuine(text):
    b = EnumerationBounds(3, 1, 2, 2)
    f = parse(text, agents=b.agents)
    verdict = check_validity(f, b)
    assert isinstance(verdict, Counterexample) and not verdict
    assert not satisfies(CheckContext(verdict.model), verdict.face, f)
    assert not oracles.sat(oracles.from_model(verdict.model), verdict.face, f)


def test_first_counterexample_in_enumeration_order():
    b = EnumerationBounds(2, 1, 2, 2)
    f = parse("p@a", agents=b.agents)
    verdict = check_validity(f, b)
    models = list(enumerate_models(b))
    first = next(
        (i, m) for i, m in enumerate(models)
        if any(not satisfies(CheckContext(m), x, f) for x in m.faces)
    )
    assert verdict.models_checked == first[0] + 1
    assert canonical_key(verdict.model) == canonical_key(first[1])


def test_dynamic_formula_validity():
    b = EnumerationBounds(2, 1, 2, 2)
    updates = update_schedule(0, b.agents, b.props)
    u = updates[0]
    s = sorted(u.simplex_names())[0]
    f = parse(f"[{u.name}.{s}] true", agents=b.agents)
    assert check_validity(f, b, updates)


def test_tautologies_hold():
    b = EnumerationBounds(2, 1, 2, 2)
    assert len(TAUTOLOGIES) >= 20
    for text in TAUTOLOGIES:
        assert check_validity(parse(text, agents=b.agents), b), text


def test_suite_without_reductions():
    report = axiom_suite(EnumerationBounds(2, 1, 1, 2), seed=1, include_reductions=False)
    names = {r.name for r in report.results}
    assert {"K", "T", "4", "WN (presence guarded)", "N (some D{a} true)"} <= names
    assert not any(n.startswith("R") for n in names)
    assert report.ok


def test_suite_expected_failures_are_found():
    report = axiom_suite(EnumerationBounds(3, 1, 2, 2), seed=0, per_schema=6)
    by_name = {r.name: r for r in report.results}
    for name in ["5", "monotonicity", "WN literal (negative half)"]:
        assert not by_name[name].holds
        assert by_name[name].status == "fails as expected"
    assert report.ok
