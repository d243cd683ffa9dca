"""Álgebra lineal exacta sobre QQ_I apoyada en `DomainMatrix` de sympy.

Los vectores son tuplas de elementos de QQ_I; los subespacios se guardan como
la lista de filas no nulas de su forma escalonada reducida (RREF), que es única.
"""
from __future__ import annotations

from typing import Any, Iterable, List, Sequence, Tuple

from sympy.polys.domains import QQ_I, ZZ
from sympy.polys.matrices import DomainMatrix

from app.utils.scalars import to_scalar

Vector = Tuple[Any, ...]
Rows = Tuple[Vector, ...]


def zero_vector(size: int) -> Vector:
    return tuple(QQ_I.zero for _ in range(size))


def unit_vector(size: int, index: int) -> Vector:
    return tuple(QQ_I.one if position == index else QQ_I.zero for position in range(size))


def as_vector(values: Iterable[Any]) -> Vector:
    return tuple(to_scalar(value) for value in values)


def is_zero_vector(vector: Sequence[Any]) -> bool:
    return not any(vector)


def add(left: Sequence[Any], right: Sequence[Any]) -> Vector:
    return tuple(a + b for a, b in zip(left, right))


def scale(factor: Any, vector: Sequence[Any]) -> Vector:
    factor = to_scalar(factor)
    return tuple(factor * value for value in vector)


def combine(terms: Iterable[Tuple[Any, Sequence[Any]]], size: int) -> Vector:
    """Combinación lineal `sum(c * v)` de los pares (c, v)."""

    result = zero_vector(size)
    for factor, vector in terms:
        factor = to_scalar(factor)
        if factor:
            result = add(result, scale(factor, vector))
    return result


def dot(left: Sequence[Any], right: Sequence[Any]) -> Any:
    total = QQ_I.zero
    for a, b in zip(left, right):
        if a and b:
            total += to_scalar(a) * to_scalar(b)
    return total


def as_domain_matrix(rows: Sequence[Sequence[Any]], ncols: int) -> DomainMatrix:
    entries = [[to_scalar(value) for value in row] for row in rows]
    return DomainMatrix(entries, (len(entries), ncols), QQ_I)


def rref(rows: Sequence[Sequence[Any]], ncols: int) -> Tuple[Rows, Tuple[int, ...]]:
    """Filas no nulas de la RREF y sus columnas pivote."""

    if not rows or ncols == 0:
        return (), ()
    reduced, pivots = as_domain_matrix(rows, ncols).rref()
    nonzero = reduced.to_list()[: len(pivots)]
    return tuple(tuple(row) for row in nonzero), tuple(int(pivot) for pivot in pivots)


def rank(rows: Sequence[Sequence[Any]], ncols: int) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence[Any]], ncols: int) -> Rows:
    """Base de {x : rows · x = 0}."""

    if ncols == 0:
        return ()
    if not rows:
        return tuple(unit_vector(ncols, index) for index in range(ncols))
    basis = as_domain_matrix(rows, ncols).nullspace()
    return tuple(tuple(row) for row in basis.to_list())


def in_span(rows: Sequence[Sequence[Any]], vector: Sequence[Any], ncols: int) -> bool:
    if is_zero_vector(vector):
        return True
    return rank(list(rows) + [vector], ncols) == rank(rows, ncols)


def span_contains(rows: Sequence[Sequence[Any]], others: Sequence[Sequence[Any]], ncols: int) -> bool:
    if not others:
        return True
    return rank(list(rows) + list(others), ncols) == rank(rows, ncols)


def intersect(left: Sequence[Sequence[Any]], right: Sequence[Sequence[Any]], ncols: int) -> Rows:
    """RREF de span(left) ∩ span(right).

    Resuelve `sum(a_i u_i) - sum(b_j w_j) = 0`; cada solución aporta `sum(a_i u_i)`.
    """

    if not left or not right:
        return ()
    left = [tuple(to_scalar(value) for value in row) for row in left]
    right = [tuple(to_scalar(value) for value in row) for row in right]
    columns = left + [tuple(-value for value in row) for row in right]
    system = [[column[coordinate] for column in columns] for coordinate in range(ncols)]
    solutions = nullspace(system, len(columns))
    vectors = [
        combine(zip(solution[: len(left)], left), ncols)
        for solution in solutions
    ]
    return rref(vectors, ncols)[0]


def reduce_modulo(vector: Sequence[Any], basis: Sequence[Sequence[Any]], pivots: Sequence[int]) -> Vector:
    """Representante canónico de `vector` módulo el span de una RREF."""

    result = tuple(to_scalar(value) for value in vector)
    for row, pivot in zip(basis, pivots):
        factor = result[pivot]
        if factor:
            result = tuple(value - factor * entry for value, entry in zip(result, row))
    return result


def integer_matrix(rows: Sequence[Sequence[int]], size: int) -> DomainMatrix:
    return DomainMatrix([[ZZ(int(value)) for value in row] for row in rows], (len(rows), size), ZZ)


def integer_entries(matrix: DomainMatrix) -> List[List[int]]:
    return [[int(value) for value in row] for row in matrix.to_list()]
