from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from app.boundary import rref
from app.errors import DimensionMismatch, InvalidMonodromyType, UnknownGenerator
from app.models import MonodromyType
from app.monodromy import (
    Generator,
    arc_log,
    edge_weights,
    forced_residue_equations,
    generators,
    monodromy_log,
    parse_generator,
    preserves,
    twist_matrix,
    twist_power,
    validate_monodromy_type,
)
from app.utils.linalg import as_vector, dot, in_span, integer_entries, nullspace
from strategies import adapted_fixtures, monodromy_types


def _identity(size):
    return [[int(row == column) for column in range(size)] for row in range(size)]


def test_generators(g7, t2):
    assert [str(generator) for generator in generators(g7)] == ["level:-1", "edge:e1", "edge:e2"]
    assert generators(t2) == (Generator("edge", "h"),)


@pytest.mark.parametrize(
    ("text", "expected"),
    [
        ("level:-1", Generator("level", -1)),
        ("-2", Generator("level", -2)),
        ("edge:e1", Generator("edge", "e1")),
        ("e1", Generator("edge", "e1")),
    ],
)
def test_parse_generator(text, expected):
    assert parse_generator(text) == expected


@pytest.mark.parametrize("text", ["level:x", "face:1", "edge:"])
def test_parse_generator_rejects_malformed_input(text):
    with pytest.raises(UnknownGenerator):
        parse_generator(text)


def test_dehn_twist_on_horizontal_edge(g7):
    operator = twist_matrix(g7, Generator("edge", "e1"))
    delta1, lambda1 = g7.model.index("delta1"), g7.model.index("lambda1")

    column = operator.column(delta1)
    assert column[delta1] == 1
    assert column[lambda1] == 1
    assert sum(abs(value) for value in column) == 2
    assert operator.column(g7.model.index("alpha")) == _identity(g7.n)[g7.model.index("alpha")]


def test_unknown_generators(g7):
    with pytest.raises(UnknownGenerator):
        twist_matrix(g7, Generator("edge", "e3"))
    with pytest.raises(UnknownGenerator):
        twist_matrix(g7, Generator("level", -5))
    with pytest.raises(UnknownGenerator):
        twist_matrix(g7, Generator("level", 0))


def test_twist_power_and_inverse(g7):
    generator = Generator("edge", "e2")
    cube = twist_power(g7, generator, 3)
    delta2, lambda2 = g7.model.index("delta2"), g7.model.index("lambda2")

    assert cube.column(delta2)[lambda2] == 3
    inverse = twist_power(g7, generator, -1)
    product = inverse.matrix * twist_matrix(g7, generator).matrix
    assert integer_entries(product) == _identity(g7.n)
    assert twist_power(g7, generator, 1).entries() == twist_matrix(g7, generator).entries()


def test_monodromy_logs_square_to_zero(g7, t1):
    for fixture in (g7, t1):
        for generator in generators(fixture):
            log = monodromy_log(fixture, generator)
            assert (log.matrix * log.matrix).is_zero_matrix


def test_validate_monodromy_type(g7):
    validate_monodromy_type(g7, g7.sigma)
    with pytest.raises(InvalidMonodromyType):
        validate_monodromy_type(g7, MonodromyType(levels={}, horizontal={"e1": 1, "e2": 1}))
    with pytest.raises(InvalidMonodromyType):
        validate_monodromy_type(g7, MonodromyType(levels={-1: 1}, horizontal={"e1": 0, "e2": 1}))
    with pytest.raises(InvalidMonodromyType):
        validate_monodromy_type(g7, MonodromyType(levels={-1: 1}, horizontal={"e1": 1, "e2": 1, "e9": 1}))


def test_edge_weights(g7, t1):
    assert edge_weights(g7, g7.sigma) == {"e1": 1, "e2": 2, "e3": 1, "e4": 1, "e5": 1, "e6": 1}
    assert edge_weights(t1, MonodromyType(levels={-1: 3})) == {"e1": 3}


def test_monodromy_type_arithmetic(g7):
    assert g7.sigma + g7.sigma == g7.sigma.scaled(2)


def test_arc_log(g7):
    operator = arc_log(g7, g7.sigma)
    lambda2, delta2 = g7.model.index("lambda2"), g7.model.index("delta2")

    assert operator.entries()[lambda2][delta2] == -2
    assert (operator.matrix * operator.matrix).is_zero_matrix


def test_preserves(g7):
    equations = rref(g7.equations, g7.n).rows

    assert preserves(equations, arc_log(g7, g7.sigma))
    uniform = MonodromyType(levels={-1: 1}, horizontal={"e1": 1, "e2": 1})
    assert not preserves(equations, arc_log(g7, uniform))
    assert preserves((), arc_log(g7, uniform))
    with pytest.raises(DimensionMismatch):
        preserves([as_vector([1, 0])], arc_log(g7, uniform))


def test_forced_residue_equations(g7):
    equations = rref(g7.equations, g7.n).rows
    forms = forced_residue_equations(g7, equations, g7.sigma)

    assert len(forms) == 5
    assert str(forms[0]) == "r_e1 - 10/3*r_e2"
    assert not forms[0].vacuous
    assert forms[0].raw == as_vector([1, "-10/3", "-2/3", 0, 0, "-2/3"])
    assert [form.vacuous for form in forms[1:]] == [True, True, True, True]


def test_forced_forms_need_a_complete_type(g7):
    equations = rref(g7.equations, g7.n).rows
    with pytest.raises(InvalidMonodromyType):
        forced_residue_equations(g7, equations, MonodromyType(levels={-1: 1}))


@given(st.data())
def test_arc_logs_are_nilpotent(data):
    fixture = data.draw(adapted_fixtures)
    sigma = data.draw(monodromy_types(fixture))
    operator = arc_log(fixture, sigma)

    assert (operator.matrix * operator.matrix).is_zero_matrix
    for generator in generators(fixture):
        product = twist_power(fixture, generator, -2).matrix * twist_power(fixture, generator, 2).matrix
        assert integer_entries(product) == _identity(fixture.n)


@given(st.data())
def test_twists_commute_and_arc_log_is_linear(data):
    fixture = data.draw(adapted_fixtures)
    twists = [twist_matrix(fixture, generator).matrix for generator in generators(fixture)]
    for left in twists:
        for right in twists:
            assert integer_entries(left * right) == integer_entries(right * left)

    first = data.draw(monodromy_types(fixture))
    second = data.draw(monodromy_types(fixture))
    combined = arc_log(fixture, first + second).matrix
    assert integer_entries(combined) == integer_entries(arc_log(fixture, first).matrix + arc_log(fixture, second).matrix)


@given(st.data())
def test_preserves_matches_kernel_membership(data):
    fixture = data.draw(adapted_fixtures.filter(lambda candidate: candidate.n <= 10))
    sigma = data.draw(monodromy_types(fixture))
    equations = rref(fixture.equations, fixture.n).rows
    entries = arc_log(fixture, sigma).entries()

    kernel = nullspace(equations, fixture.n) if equations else ()
    expected = True
    for vector in kernel:
        image = [dot([row[j] for row in entries], vector) for j in range(fixture.n)]
        if any(dot(row, image) for row in equations):
            expected = False

    assert preserves(equations, arc_log(fixture, sigma)) is expected


def test_all_ones_type_on_a_single_lower_level(t1):
    operator = arc_log(t1, MonodromyType(levels={-1: 1}))

    assert operator.entries() == monodromy_log(t1, Generator("level", -1)).entries()


@given(st.data())
def test_preserves_iff_forced_forms_are_implied_by_the_equations(data):
    fixture = data.draw(adapted_fixtures.filter(lambda candidate: candidate.n <= 10))
    sigma = data.draw(monodromy_types(fixture))
    equations = rref(fixture.equations, fixture.n).rows
    forms = forced_residue_equations(fixture, equations, sigma)

    # formas c con Σ c_e λ_e en el espacio de filas de A: se anulan contra todo el núcleo de A
    edges = forms[0].symbols if forms else ()
    kernel = nullspace(equations, fixture.n) if equations else ()
    constraints = [[dot(fixture.model.vanishing_class(edge_id), vector) for edge_id in edges] for vector in kernel]
    implied = nullspace(constraints, len(edges))
    expected = all(in_span(implied, form.reduced, len(edges)) for form in forms)

    assert preserves(equations, arc_log(fixture, sigma)) is expected
