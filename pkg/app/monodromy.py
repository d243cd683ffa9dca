"""Operadores de monodromía alrededor de los divisores de borde, logaritmos y residuos forzados."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from app.errors import DimensionMismatch, InvalidMonodromyType, NotNilpotent, UnknownGenerator
from app.homology import edge_order, pairing, vanishing_relations
from app.levels import prong_data
from app.models import Fixture, MonodromyType
from app.utils.linalg import Vector, dot, integer_entries, integer_matrix, is_zero_vector, reduce_modulo, rref, span_contains
from app.utils.scalars import format_linear_form, to_scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Generator:
    """Generador de la monodromía local: un nivel inferior o una arista horizontal."""

    kind: str
    key: Union[int, str]

    def __str__(self) -> str:
        return f"{self.kind}:{self.key}"


@dataclass(frozen=True)
class MonodromyOperator:
    tag: str
    matrix: DomainMatrix

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def entries(self) -> List[List[int]]:
        return integer_entries(self.matrix)

    def column(self, index: int) -> List[int]:
        return [row[index] for row in self.entries()]


@dataclass(frozen=True)
class ResidueForm:
    """Forma lineal en los r_e, cruda y reducida módulo las relaciones entre los λ_e."""

    row: int
    symbols: Tuple[str, ...]
    raw: Vector
    reduced: Vector

    @property
    def vacuous(self) -> bool:
        return is_zero_vector(self.reduced)

    def __str__(self) -> str:
        return format_linear_form(self.symbols, self.reduced, prefix="r_")


def parse_generator(text: str) -> Generator:
    """Acepta `level:-1`, `edge:e1` o las formas cortas `-1` / `e1`."""

    kind, _, key = text.partition(":") if ":" in text else ("", "", text)
    if not kind:
        kind = "level" if key.lstrip("-").isdigit() else "edge"
    if kind == "level":
        try:
            return Generator("level", int(key))
        except ValueError:
            raise UnknownGenerator(f"Invalid level generator: {text}", subject=text) from None
    if kind == "edge" and key:
        return Generator("edge", key)
    raise UnknownGenerator(f"Unsupported generator: {text}", subject=text)


def generators(fixture: Fixture) -> Tuple[Generator, ...]:
    """Niveles inferiores (descendente) y luego aristas horizontales (por id)."""

    graph = fixture.graph
    levels = tuple(Generator("level", level) for level in graph.lower_levels())
    edges = tuple(Generator("edge", edge_id) for edge_id in sorted(edge.id for edge in graph.horizontal_edges()))
    return levels + edges


def _generator_weights(fixture: Fixture, generator: Generator) -> Dict[str, int]:
    graph = fixture.graph
    if generator.kind == "edge":
        if not graph.has_edge(str(generator.key)) or not graph.is_horizontal(graph.edge(str(generator.key))):
            raise UnknownGenerator(f"Unknown horizontal edge generator: {generator.key}", subject=str(generator))
        return {str(generator.key): 1}
    if generator.kind == "level" and generator.key in graph.lower_levels():
        return dict(prong_data(graph, int(generator.key)).multiplicities)
    raise UnknownGenerator(f"Unknown generator: {generator}", subject=str(generator))


def _log_entries(fixture: Fixture, weights: Dict[str, int]) -> List[List[int]]:
    """N = −Σ_e w_e λ_e ⟨·, λ_e⟩, columna l = −Σ_e w_e ⟨γ_l, λ_e⟩ λ_e."""

    model = fixture.model
    size = model.n
    entries = [[0] * size for _ in range(size)]
    for edge_id, weight in weights.items():
        coordinates = model.vanishing_class(edge_id)
        row = model.pairing_row(edge_id)
        for k, coordinate in enumerate(coordinates):
            if not coordinate:
                continue
            for l, intersection in enumerate(row):
                if intersection:
                    entries[k][l] -= weight * coordinate * intersection
    return entries


def twist_matrix(fixture: Fixture, generator: Generator) -> MonodromyOperator:
    """T_k: twist de Dehn (arista horizontal) o multitwist con pesos m_{e,i} (nivel i)."""

    size = fixture.n
    log = _log_entries(fixture, _generator_weights(fixture, generator))
    entries = [[(1 if k == l else 0) - log[k][l] for l in range(size)] for k in range(size)]
    return MonodromyOperator(tag=str(generator), matrix=integer_matrix(entries, size))


def monodromy_log(fixture: Fixture, generator: Generator) -> MonodromyOperator:
    """N_k = I − T_k; verifica N_k² = 0."""

    size = fixture.n
    matrix = integer_matrix(_log_entries(fixture, _generator_weights(fixture, generator)), size)
    if not (matrix * matrix).is_zero_matrix:
        raise NotNilpotent(f"N_{generator} does not square to zero", subject=str(generator))
    return MonodromyOperator(tag=f"N[{generator}]", matrix=matrix)


def twist_power(fixture: Fixture, generator: Generator, power: int) -> MonodromyOperator:
    """T_k^m = I − m·N_k; vale para m negativo porque N_k² = 0."""

    log = monodromy_log(fixture, generator)
    identity = DomainMatrix.eye(fixture.n, ZZ)
    return MonodromyOperator(tag=f"{generator}^{power}", matrix=identity - log.matrix * ZZ(power))


def validate_monodromy_type(fixture: Fixture, sigma: MonodromyType) -> None:
    """σ debe dar un entero positivo a cada nivel inferior y a cada arista horizontal, y nada más."""

    graph = fixture.graph
    expected_levels = set(graph.lower_levels())
    expected_edges = {edge.id for edge in graph.horizontal_edges()}
    if set(sigma.levels) != expected_levels:
        raise InvalidMonodromyType(
            f"σ levels {sorted(sigma.levels)} differ from lower levels {sorted(expected_levels)}", subject="levels"
        )
    if set(sigma.horizontal) != expected_edges:
        raise InvalidMonodromyType(
            f"σ edges {sorted(sigma.horizontal)} differ from horizontal edges {sorted(expected_edges)}",
            subject="horizontal",
        )
    for key, value in [*sigma.levels.items(), *sigma.horizontal.items()]:
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise InvalidMonodromyType(f"σ entry {key} must be a positive integer, got {value}", subject=str(key))


def edge_weights(fixture: Fixture, sigma: MonodromyType) -> Dict[str, int]:
    """σ_e: declarado en aristas horizontales, derivado Σ_k m_{e,k} σ_k en verticales."""

    validate_monodromy_type(fixture, sigma)
    graph = fixture.graph
    weights: Dict[str, int] = {}
    for edge in graph.edges:
        if graph.is_horizontal(edge):
            weights[edge.id] = sigma.horizontal[edge.id]
            continue
        weights[edge.id] = sum(
            prong_data(graph, level).multiplicities[edge.id] * sigma.levels[level]
            for level in range(graph.lower_level(edge), graph.upper_level(edge))
        )
    return weights


def arc_log(fixture: Fixture, sigma: MonodromyType) -> MonodromyOperator:
    """N_σ = Σ σ_i N_i + Σ σ_e N_e."""

    validate_monodromy_type(fixture, sigma)
    size = fixture.n
    total = DomainMatrix.zeros((size, size), ZZ)
    for generator in generators(fixture):
        weight = sigma.levels[generator.key] if generator.kind == "level" else sigma.horizontal[generator.key]
        total = total + monodromy_log(fixture, generator).matrix * ZZ(weight)
    return MonodromyOperator(tag="N[sigma]", matrix=total)


def _check_columns(rows: Sequence[Sequence], size: int) -> None:
    for index, row in enumerate(rows):
        if len(row) != size:
            raise DimensionMismatch(f"Equation {index} has {len(row)} columns, expected {size}", subject=str(index))


def preserves(equations: Sequence[Sequence], operator: MonodromyOperator) -> bool:
    """N_σ(V) ⊆ V para V = {x : A·x = 0}: rank([A; A·Nᵀ]) = rank(A)."""

    size = operator.size
    if operator.matrix.shape != (size, size):
        raise DimensionMismatch(f"Operator shape {operator.matrix.shape} is not square")
    _check_columns(equations, size)
    if not equations:
        return True
    entries = operator.entries()
    images = [tuple(dot(row, entries[j]) for j in range(size)) for row in equations]
    return span_contains(equations, images, size)


def forced_residue_equations(
    fixture: Fixture, equations: Sequence[Sequence], sigma: MonodromyType
) -> List[ResidueForm]:
    """Para cada fila k, la forma Σ_l A_kl Σ_e ⟨γ_l, λ_e⟩ σ_e r_e reducida módulo las relaciones entre λ_e.

    Espera `equations` ya en RREF.
    """

    _check_columns(equations, fixture.n)
    weights = edge_weights(fixture, sigma)
    symbols = edge_order(fixture.graph)
    relations, pivots = rref(vanishing_relations(fixture.model, fixture.graph), len(symbols))

    forms: List[ResidueForm] = []
    for index, row in enumerate(equations):
        raw = tuple(pairing(fixture.model, row, edge_id) * to_scalar(weights[edge_id]) for edge_id in symbols)
        form = ResidueForm(row=index, symbols=symbols, raw=raw, reduced=reduce_modulo(raw, relations, pivots))
        if form.vacuous:
            logger.info("Forced residue form of row %s is vacuous", index)
        forms.append(form)
    return forms
