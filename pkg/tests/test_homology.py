from __future__ import annotations

from dataclasses import replace

import pytest
from hypothesis import assume, given, strategies as st

from app.errors import LevelOutOfRange, NotInLevelFiltration, NotInVerticalFiltration
from app.homology import (
    build_filtrations,
    edge_order,
    grc_span,
    pairing,
    quotient_dimension,
    residue_consistency,
    restrict,
    specialize,
    top_level,
    validate_adapted_basis,
    vanishing_relations,
)
from app.levels import validate_graph
from app.utils.linalg import as_vector, rank, span_contains, zero_vector
from helpers import cycle_vector, level_vector, with_cycle, with_vanishing, with_vertical_class
from strategies import adapted_fixtures, consistent_residues

G7_COLUMNS = (
    "delta1", "delta2", "alpha", "gamma1", "gamma2", "gamma5", "lambda1", "lambda2",
    "gamma3", "gamma4", "beta", "lambda3", "lambda4",
)


def test_column_order(g7, t1):
    assert g7.model.cycle_ids() == G7_COLUMNS
    assert t1.model.cycle_ids() == ("a0", "b0", "a1", "b1", "lambda1")


@pytest.mark.parametrize("name", ["t1", "t2", "g7"])
def test_checked_in_bases_are_adapted(request, name):
    fixture = request.getfixturevalue(name)

    assert validate_adapted_basis(fixture.model, fixture.graph).ok


def test_filtrations(g7):
    filtrations = build_filtrations(g7.model, g7.graph)

    assert len(filtrations.level(0)) == 13
    assert len(filtrations.vertical(0)) == 11
    assert len(filtrations.level(-1)) == len(filtrations.vertical(-1)) == 5
    assert filtrations.level(-2) == ()
    with pytest.raises(LevelOutOfRange):
        filtrations.vertical(-2)


def test_grc_span_lower_level(g7):
    span = grc_span(g7.model, g7.graph, -1)

    assert span.rank == 1
    assert [edges for edges, _ in span.vertical] == [("e3", "e6")]
    assert span.vertical[0][1] == level_vector(g7, -1, {"lambda4-": -1, "lambda5-": -1})
    assert span.basis == (level_vector(g7, -1, {"lambda4-": 1, "lambda5-": 1}),)
    assert span.horizontal == ()


def test_grc_span_matching_residues(g7, t2):
    span = grc_span(g7.model, g7.graph, 0)

    assert span.rank == 2
    assert [edge_id for edge_id, _ in span.horizontal] == ["e1", "e2"]
    assert span.vertical == ()
    # el par (+, −) de una arista separante es nulo y no aporta generador
    assert grc_span(t2.model, t2.graph, 0).rank == 0


def test_quotient_dimension(g7, t1):
    assert quotient_dimension(g7.model, g7.graph, 0) == 6
    assert quotient_dimension(g7.model, g7.graph, -1) == 5
    assert quotient_dimension(t1.model, t1.graph, -1) == 3


def test_restrict_and_specialize(g7):
    assert restrict(g7.model, cycle_vector(g7, {"gamma3": 2}), -1) == level_vector(g7, -1, {"a_D": 2})
    assert restrict(g7.model, cycle_vector(g7, {"gamma5": 1}), 0) == level_vector(g7, 0, {"gamma5": -1})
    with pytest.raises(NotInLevelFiltration):
        restrict(g7.model, cycle_vector(g7, {"alpha": 1}), -1)

    image = specialize(g7.model, g7.graph, cycle_vector(g7, {"lambda4": 1}), -1)
    assert image == level_vector(g7, -1, {"lambda5-": -1})
    with pytest.raises(NotInVerticalFiltration):
        specialize(g7.model, g7.graph, cycle_vector(g7, {"delta1": 1}), 0)


def test_pairing_and_top_level(g7):
    assert pairing(g7.model, cycle_vector(g7, {"delta1": 1, "delta2": 2}), "e3") == as_vector([3])[0]
    assert top_level(g7.model, cycle_vector(g7, {"gamma3": 1, "beta": 1})) == -1
    assert top_level(g7.model, cycle_vector(g7, {"gamma3": 1, "lambda1": 1})) == 0
    assert top_level(g7.model, zero_vector(g7.n)) is None


def test_vanishing_relations(g7, t1):
    assert vanishing_relations(g7.model, g7.graph) == (
        as_vector([0, 0, 1, 0, 0, 1]),
        as_vector([0, 0, 0, 1, 1, 0]),
    )
    assert vanishing_relations(t1.model, t1.graph) == ()


@pytest.mark.parametrize(
    ("cycle_id", "changes", "rule"),
    [
        ("delta2", {"intersections": {"e1": 1, "e2": 1, "e3": 1, "e6": 1}}, "KroneckerRule"),
        ("alpha", {"intersections": {"e1": 1}}, "AlphaCrossing"),
        ("gamma3", {"intersections": {"e2": 1}}, "LowerLevelCrossing"),
        ("lambda3", {"intersections": {"e4": 1}}, "VanishingIntersection"),
    ],
)
def test_crossing_rules(g7, cycle_id, changes, rule):
    report = validate_adapted_basis(with_cycle(g7, cycle_id, **changes).model, g7.graph)

    assert rule in report.rules()


def test_level_span_needs_every_restriction(g7):
    broken = with_cycle(g7, "gamma2", restriction=zero_vector(8))
    report = validate_adapted_basis(broken.model, broken.graph)

    assert "LevelSpan" in report.rules()


def test_vanishing_cycle_rules(g7):
    above = with_vanishing(g7, "e3", {"alpha": 1})
    assert "VanishingLevel" in validate_adapted_basis(above.model, above.graph).rules()

    unbalanced = with_vanishing(g7, "e3", {"lambda3": 1, "lambda4": 1})
    assert "GrcLift" in validate_adapted_basis(unbalanced.model, unbalanced.graph).rules()

    mislabelled = with_vertical_class(g7, -1, "e4", {"lambda5-": 1})
    assert "VanishingRestriction" in validate_adapted_basis(mislabelled.model, mislabelled.graph).rules()


def test_missing_level_homology(g7):
    levels = {0: g7.model.levels[0]}
    model = replace(g7.model, levels=levels)
    report = validate_adapted_basis(model, g7.graph)

    assert "MissingBoundaryCoordinates" in report.rules()


def test_zero_vanishing_cycle_cannot_be_crossed(t2):
    broken = with_cycle(t2, "a_u", intersections={"h": 1})
    rules = validate_adapted_basis(broken.model, broken.graph).rules()

    assert "VanishingIntersection" in rules
    assert "AlphaCrossing" in rules


def test_residue_consistency(g7, t1):
    assert residue_consistency(g7.model, g7.graph, g7.residues).ok
    assert residue_consistency(t1.model, t1.graph, {"e1": as_vector(["7-2*i"])[0]}).ok

    residues = dict(g7.residues)
    residues["e3"] = as_vector([1])[0]
    rules = residue_consistency(g7.model, g7.graph, residues).rules()
    assert "ResidueRelation" in rules
    assert "GlobalResidueCondition" in rules


@given(adapted_fixtures)
def test_generated_models_are_adapted(fixture):
    assert validate_graph(fixture.graph, fixture.mu).ok
    report = validate_adapted_basis(fixture.model, fixture.graph)

    assert report.ok, report.findings


@given(st.data())
def test_residues_from_a_functional_are_consistent(data):
    fixture = data.draw(adapted_fixtures)
    functional = data.draw(st.lists(st.integers(-3, 3), min_size=fixture.n, max_size=fixture.n))
    residues = consistent_residues(fixture, functional)

    assert residue_consistency(fixture.model, fixture.graph, residues).ok

    edges = edge_order(fixture.graph)
    relations = vanishing_relations(fixture.model, fixture.graph)
    constrained = [edge_id for index, edge_id in enumerate(edges) if any(row[index] for row in relations)]
    if constrained:
        perturbed = dict(residues)
        perturbed[constrained[0]] += as_vector([1])[0]
        assert not residue_consistency(fixture.model, fixture.graph, perturbed).ok


@given(adapted_fixtures)
def test_filtrations_are_nested_and_f_kills_the_lower_part(fixture):
    model, graph = fixture.model, fixture.graph
    filtrations = build_filtrations(model, graph)
    for level in graph.levels():
        lower = filtrations.level(level - 1)
        vertical = filtrations.vertical(level)
        assert span_contains(vertical, lower, model.n)
        assert span_contains(filtrations.level(level), vertical, model.n)

        images = [specialize(model, graph, vector, level, filtrations=filtrations) for vector in vertical]
        size = model.levels[level].dimension
        assert len(vertical) - rank(images, size) == len(lower)


@given(st.data())
def test_delta_cycle_meeting_a_horizontal_edge_of_another_level_breaks_kronecker(data):
    fixture = data.draw(adapted_fixtures)
    graph = fixture.graph
    candidates = [
        (cycle, edge.id)
        for cycle in fixture.model.cycles
        if cycle.crosses_horizontally
        for edge in graph.horizontal_edges()
        if graph.upper_level(edge) != cycle.level
    ]
    assume(candidates)
    cycle, edge_id = data.draw(st.sampled_from(candidates))
    broken = with_cycle(fixture, cycle.id, intersections={**cycle.intersections, edge_id: 1})

    assert "KroneckerRule" in validate_adapted_basis(broken.model, graph).rules()


def test_basis_declared_entirely_at_the_top_level_fails_to_span_below(t1):
    flattened = t1
    for cycle_id in ("a1", "b1", "lambda1"):
        flattened = with_cycle(flattened, cycle_id, level=0, restriction=zero_vector(2))
    report = validate_adapted_basis(flattened.model, flattened.graph)

    assert ("LevelSpan", "level -1") in [(finding.rule, finding.subject) for finding in report.findings]
