from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from app.boundary import (
    DELETED,
    BoundaryEquationSet,
    LevelBlock,
    REDUCED_TO_ZERO,
    boundary_dimensions,
    boundary_equations,
    classify_row,
    compare_blocks,
    coordfree_boundary,
    level_equations,
    rational_only,
    rref,
)
from app.errors import DimensionMismatch
from app.utils.linalg import as_vector, combine, scale, unit_vector, zero_vector
from app.utils.scalars import is_real
from helpers import cycle_vector, level_vector, with_cycle, with_equations
from strategies import adapted_fixtures


def test_g7_deletes_the_horizontal_crossing_row(g7):
    result = boundary_equations(g7)

    assert len(result.deleted()) == 1
    entry = result.deleted()[0]
    assert entry.row == 0
    assert entry.top_level == 0
    assert entry.edges == ("e1", "e2")
    assert entry.equation == cycle_vector(g7, {"delta1": 1, "delta2": "-5/3"})
    assert result.reduced_to_zero() == ()


def test_g7_level_blocks(g7):
    result = boundary_equations(g7)

    assert result.blocks[0].equations == (
        level_vector(g7, 0, {"alpha": 1, "gamma2": 1}),
        level_vector(g7, 0, {"gamma1": 1, "gamma5": -1}),
        level_vector(g7, 0, {"lambda1+": 1, "lambda2+": "-10/3"}),
    )
    assert result.blocks[-1].equations == (level_vector(g7, -1, {"a_D": 1, "b_D": -1}),)
    assert result.blocks[0].tag == "linear"
    assert result.blocks[-1].tag == "projective"
    assert boundary_dimensions(g7, result) == {0: 3, -1: 3}
    assert rational_only(result)


def test_g7_coordinate_free_boundary_agrees(g7):
    assert compare_blocks(boundary_equations(g7).blocks, coordfree_boundary(g7)) == ()


def test_single_level_blocks(t1, t2):
    result = boundary_equations(t1)
    assert result.blocks[0].equations == (level_vector(t1, 0, {"a0": 1}),)
    assert result.blocks[-1].equations == (level_vector(t1, -1, {"a1": 1, "b1": -1}),)
    assert boundary_dimensions(t1, result) == {0: 1, -1: 1}

    result = boundary_equations(t2)
    assert result.log == ()
    assert result.blocks[0].equations == (
        level_vector(t2, 0, {"a_u": 1, "b_w": -2}),
        level_vector(t2, 0, {"b_u": 1, "a_w": 3}),
    )
    assert boundary_dimensions(t2, result) == {0: 2}


def test_empty_system_gives_empty_blocks(g7):
    result = boundary_equations(g7, ())

    assert all(block.equations == () for block in result.blocks.values())
    assert result.log == ()
    assert boundary_dimensions(g7, result) == {0: 6, -1: 4}


def test_rref_and_classification(g7):
    reduced = rref(g7.equations, g7.n)

    assert reduced.rank == 5
    assert reduced.pivots == tuple(g7.model.index(name) for name in ("delta1", "alpha", "gamma1", "lambda1", "gamma3"))
    crossing = classify_row(g7, reduced.rows[0])
    assert crossing.top_level == 0
    assert crossing.crossed == ("e1", "e2")
    assert crossing.horizontal_crossing
    assert not classify_row(g7, reduced.rows[4]).horizontal_crossing
    assert classify_row(g7, zero_vector(g7.n)).top_level is None


def test_level_equations_keep_crossing_rows(g7):
    blocks = level_equations(g7)

    assert len(blocks[0]) == 4
    assert blocks[0][1] == cycle_vector(g7, {"alpha": 1, "gamma2": 1})
    assert blocks[-1] == (cycle_vector(g7, {"gamma3": 1, "gamma4": -1}),)


def test_row_reducing_to_zero_is_logged(g7):
    broken = with_equations(with_cycle(g7, "gamma2", restriction=zero_vector(8)), [{"gamma2": 1}])
    result = boundary_equations(broken)

    assert [entry.reason for entry in result.log] == [REDUCED_TO_ZERO]
    assert result.blocks[0].equations == ()


def test_gaussian_coefficients(t2):
    result = boundary_equations(with_equations(t2, [{"a_u": 1, "b_w": "i"}]))

    assert not rational_only(result)
    assert result.blocks[0].equations == (level_vector(t2, 0, {"a_u": 1, "b_w": "i"}),)


def test_dimension_mismatch(g7):
    with pytest.raises(DimensionMismatch):
        boundary_equations(g7, [as_vector([1, 2, 3])])


def test_compare_blocks_reports_differing_levels(g7):
    blocks = boundary_equations(g7).blocks
    assert compare_blocks(blocks, blocks) == ()
    assert compare_blocks(blocks, {0: blocks[0]}) == (-1,)


@given(adapted_fixtures)
def test_boundary_matches_coordinate_free_definition(fixture):
    result = boundary_equations(fixture)

    assert compare_blocks(result.blocks, coordfree_boundary(fixture)) == ()
    for entry in result.log:
        assert entry.reason == DELETED
        assert entry.edges


@given(st.data())
def test_boundary_depends_only_on_the_row_space(data):
    fixture = data.draw(adapted_fixtures)
    rows = fixture.equations
    multipliers = st.sampled_from([-2, -1, 0, 1, 3])
    mixed = []
    for index, row in enumerate(rows):
        terms = [(1, row)] + [(data.draw(multipliers), other) for other in rows[index + 1:]]
        mixed.append(combine(terms, fixture.n))
    if rows:
        mixed.append(combine([(data.draw(multipliers), row) for row in rows], fixture.n))

    original = boundary_equations(fixture)
    transformed = boundary_equations(fixture, mixed)
    assert compare_blocks(original.blocks, transformed.blocks) == ()
    assert len(original.deleted()) == len(transformed.deleted())

    again = boundary_equations(fixture, rref(fixture.equations, fixture.n).rows)
    assert compare_blocks(original.blocks, again.blocks) == ()


@given(adapted_fixtures)
def test_crossing_rows_do_not_change_the_coordinate_free_boundary(fixture):
    result = boundary_equations(fixture)
    rows = rref(fixture.equations, fixture.n).rows
    deleted = {entry.row for entry in result.deleted()}
    kept = [row for index, row in enumerate(rows) if index not in deleted]

    assert compare_blocks(coordfree_boundary(fixture), coordfree_boundary(fixture, kept)) == ()


def test_full_rank_lower_block_is_an_empty_projective_level(t1):
    rows = [cycle_vector(t1, {name: 1}) for name in ("a1", "b1", "lambda1")]
    result = boundary_equations(t1, rows)

    assert boundary_dimensions(t1, result) == {0: 2, -1: -1}


def test_block_larger_than_its_quotient_is_rejected(t1):
    oversized = LevelBlock(
        level=0,
        basis=t1.model.levels[0].basis,
        equations=(unit_vector(2, 0), unit_vector(2, 1), as_vector([1, 1])),
    )
    blocks = dict(boundary_equations(t1).blocks)
    blocks[0] = oversized

    with pytest.raises(DimensionMismatch):
        boundary_dimensions(t1, BoundaryEquationSet(blocks=blocks, log=()))


@given(adapted_fixtures)
def test_gaussian_rescaling_keeps_blocks_and_coefficient_field(fixture):
    result = boundary_equations(fixture)
    rotated = boundary_equations(fixture, [scale("i", row) for row in fixture.equations])

    assert compare_blocks(result.blocks, rotated.blocks) == ()
    assert rational_only(rotated) == rational_only(result)
    if all(is_real(value) for row in fixture.equations for value in row):
        assert rational_only(result)
