"""Atajos para construir vectores por nombre y variantes de fixtures en los tests."""
from __future__ import annotations

from dataclasses import replace
from typing import Any, Mapping, Sequence

from app.models import Fixture
from app.utils.linalg import Vector, as_vector


def named_vector(names: Sequence[str], coefficients: Mapping[str, Any]) -> Vector:
    unknown = set(coefficients) - set(names)
    if unknown:
        raise KeyError(sorted(unknown))
    return as_vector(coefficients.get(name, 0) for name in names)


def cycle_vector(fixture: Fixture, coefficients: Mapping[str, Any]) -> Vector:
    return named_vector(fixture.model.cycle_ids(), coefficients)


def level_vector(fixture: Fixture, level: int, coefficients: Mapping[str, Any]) -> Vector:
    return named_vector(fixture.model.levels[level].basis, coefficients)


def with_cycle(fixture: Fixture, cycle_id: str, **changes: Any) -> Fixture:
    """Reemplaza campos de un ciclo sin tocar su posición en el orden de columnas."""

    cycles = tuple(replace(cycle, **changes) if cycle.id == cycle_id else cycle for cycle in fixture.model.cycles)
    return replace(fixture, model=replace(fixture.model, cycles=cycles))


def with_vanishing(fixture: Fixture, edge_id: str, coefficients: Mapping[str, int]) -> Fixture:
    vanishing = dict(fixture.model.vanishing)
    vanishing[edge_id] = tuple(int(coefficients.get(cycle_id, 0)) for cycle_id in fixture.model.cycle_ids())
    return replace(fixture, model=replace(fixture.model, vanishing=vanishing))


def with_vertical_class(fixture: Fixture, level: int, edge_id: str, coefficients: Mapping[str, Any]) -> Fixture:
    homology = fixture.model.levels[level]
    vertical = dict(homology.vertical)
    vertical[edge_id] = named_vector(homology.basis, coefficients)
    levels = dict(fixture.model.levels)
    levels[level] = replace(homology, vertical=vertical)
    return replace(fixture, model=replace(fixture.model, levels=levels))


def with_equations(fixture: Fixture, rows: Sequence[Mapping[str, Any]]) -> Fixture:
    return replace(fixture, equations=tuple(cycle_vector(fixture, row) for row in rows))
