"""Ecuaciones del borde: RREF, clasificación por nivel superior, borrado de filas que cruzan nodos horizontales y restricción al nivel."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I

from app.errors import DimensionMismatch
from app.homology import FiltrationPair, GrcSpan, build_filtrations, grc_span, pairing, specialize, top_level
from app.levels import rescaling_monomial
from app.models import Fixture
from app.utils import linalg
from app.utils.linalg import Rows, Vector, is_zero_vector
from app.utils.scalars import is_real

logger = logging.getLogger(__name__)

DELETED = "horizontal-crossing"
REDUCED_TO_ZERO = "reduced-to-zero"


@dataclass(frozen=True)
class EquationMatrix:
    ncols: int
    rows: Rows
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


@dataclass(frozen=True)
class RowClassification:
    top_level: Optional[int]
    crossed: Tuple[str, ...]

    @property
    def horizontal_crossing(self) -> bool:
        return bool(self.crossed)


@dataclass(frozen=True)
class LevelBlock:
    """Ecuaciones de un nivel en la base de homología de borde, en RREF y reducidas módulo GRC."""

    level: int
    basis: Tuple[str, ...]
    equations: Rows

    @property
    def projective(self) -> bool:
        return self.level < 0

    @property
    def tag(self) -> str:
        return "projective" if self.projective else "linear"


@dataclass(frozen=True)
class LogEntry:
    row: int
    top_level: int
    reason: str
    equation: Vector
    edges: Tuple[str, ...] = ()


@dataclass(frozen=True)
class BoundaryEquationSet:
    blocks: Dict[int, LevelBlock]
    log: Tuple[LogEntry, ...]

    def deleted(self) -> Tuple[LogEntry, ...]:
        return tuple(entry for entry in self.log if entry.reason == DELETED)

    def reduced_to_zero(self) -> Tuple[LogEntry, ...]:
        return tuple(entry for entry in self.log if entry.reason == REDUCED_TO_ZERO)


def _check_columns(fixture: Fixture, rows: Sequence[Sequence]) -> None:
    for index, row in enumerate(rows):
        if len(row) != fixture.n:
            raise DimensionMismatch(
                f"Equation {index} has {len(row)} columns, expected {fixture.n}", subject=str(index)
            )


def rref(equations: Sequence[Sequence], ncols: int) -> EquationMatrix:
    """RREF canónica bajo el orden fijo de columnas; conserva el rango."""

    rows, pivots = linalg.rref(equations, ncols)
    return EquationMatrix(ncols=ncols, rows=rows, pivots=pivots)


def classify_row(fixture: Fixture, row: Sequence) -> RowClassification:
    """Nivel superior de la fila y aristas horizontales de ese nivel con Σ_l A_kl ⟨γ_l, λ_e⟩ ≠ 0."""

    _check_columns(fixture, [row])
    level = top_level(fixture.model, row)
    if level is None:
        return RowClassification(top_level=None, crossed=())
    crossed = tuple(
        sorted(edge.id for edge in fixture.graph.horizontal_edges(level) if pairing(fixture.model, row, edge.id))
    )
    return RowClassification(top_level=level, crossed=crossed)


def _top_level_part(fixture: Fixture, row: Sequence, level: int) -> Vector:
    """Conserva los coeficientes cuyo factor de reescalado respecto al nivel superior es la unidad."""

    surviving = {
        lower: rescaling_monomial(fixture.graph, level, lower).is_unit
        for lower in fixture.graph.levels()
        if lower <= level
    }
    return tuple(
        value if cycle.level <= level and surviving[cycle.level] else QQ_I.zero
        for value, cycle in zip(row, fixture.model.cycles)
    )


class _LevelMaps:
    """Filtraciones y spans GRC calculados una vez por llamada."""

    def __init__(self, fixture: Fixture) -> None:
        self.fixture = fixture
        self.filtrations: FiltrationPair = build_filtrations(fixture.model, fixture.graph)
        self._grc: Dict[int, GrcSpan] = {}

    def grc(self, level: int) -> GrcSpan:
        if level not in self._grc:
            self._grc[level] = grc_span(self.fixture.model, self.fixture.graph, level)
        return self._grc[level]

    def specialize(self, vector: Sequence, level: int) -> Vector:
        return specialize(
            self.fixture.model,
            self.fixture.graph,
            vector,
            level,
            filtrations=self.filtrations,
            grc=self.grc(level),
        )

    def block(self, level: int, vectors: Sequence[Vector]) -> LevelBlock:
        homology = self.fixture.model.levels[level]
        rows, _ = linalg.rref(vectors, homology.dimension)
        return LevelBlock(level=level, basis=homology.basis, equations=rows)


def boundary_equations(fixture: Fixture, equations: Optional[Sequence[Sequence]] = None) -> BoundaryEquationSet:
    """RREF, borrado de filas horizontal-crossing, restricción de cada fila a su nivel superior módulo GRC."""

    equations = fixture.equations if equations is None else equations
    _check_columns(fixture, equations)
    maps = _LevelMaps(fixture)
    reduced = rref(equations, fixture.n)

    collected: Dict[int, List[Vector]] = {level: [] for level in fixture.graph.levels()}
    log: List[LogEntry] = []
    for index, row in enumerate(reduced.rows):
        classification = classify_row(fixture, row)
        level = classification.top_level
        if classification.horizontal_crossing:
            logger.info("Deleting row %s: crosses horizontal edges %s", index, list(classification.crossed))
            log.append(LogEntry(row=index, top_level=level, reason=DELETED, equation=row, edges=classification.crossed))
            continue
        image = maps.specialize(_top_level_part(fixture, row, level), level)
        if is_zero_vector(image):
            logger.info("Row %s reduces to zero at level %s", index, level)
            log.append(LogEntry(row=index, top_level=level, reason=REDUCED_TO_ZERO, equation=row))
            continue
        logger.debug("Row %s restricted to level %s", index, level)
        collected[level].append(image)

    blocks = {level: maps.block(level, vectors) for level, vectors in collected.items()}
    return BoundaryEquationSet(blocks=blocks, log=tuple(log))


def coordfree_boundary(fixture: Fixture, equations: Optional[Sequence[Sequence]] = None) -> Dict[int, LevelBlock]:
    """Para cada nivel i, f_i(rowspace(A) ∩ W_i) en RREF."""

    equations = fixture.equations if equations is None else equations
    _check_columns(fixture, equations)
    maps = _LevelMaps(fixture)
    rowspace = rref(equations, fixture.n).rows

    blocks: Dict[int, LevelBlock] = {}
    for level in fixture.graph.levels():
        meet = linalg.intersect(rowspace, maps.filtrations.vertical(level), fixture.n)
        images = [maps.specialize(vector, level) for vector in meet]
        blocks[level] = maps.block(level, images)
    return blocks


def level_equations(fixture: Fixture, equations: Optional[Sequence[Sequence]] = None) -> Dict[int, Rows]:
    """Bloques A^{(i)}: filas de nivel superior i restringidas a las columnas de nivel i, con las horizontal-crossing."""

    equations = fixture.equations if equations is None else equations
    _check_columns(fixture, equations)
    blocks: Dict[int, List[Vector]] = {level: [] for level in fixture.graph.levels()}
    for row in rref(equations, fixture.n).rows:
        level = top_level(fixture.model, row)
        blocks[level].append(_top_level_part(fixture, row, level))
    return {level: tuple(rows) for level, rows in blocks.items()}


def boundary_dimensions(fixture: Fixture, result: BoundaryEquationSet) -> Dict[int, int]:
    """Dimensión de cada nivel de V^lim; los niveles inferiores se cuentan proyectivamente.

    Un nivel proyectivo con bloque de rango completo vale -1 (proyectivización vacía).
    """

    maps = _LevelMaps(fixture)
    dimensions: Dict[int, int] = {}
    for level, block in result.blocks.items():
        quotient = fixture.model.levels[level].dimension - maps.grc(level).rank
        if len(block.equations) > quotient:
            raise DimensionMismatch(
                f"Level {level} has {len(block.equations)} equations on a {quotient}-dimensional quotient",
                subject=str(level),
            )
        free = quotient - len(block.equations)
        dimensions[level] = free - 1 if block.projective else free
    return dimensions


def compare_blocks(left: Mapping[int, LevelBlock], right: Mapping[int, LevelBlock]) -> Tuple[int, ...]:
    """Niveles en los que las RREF canónicas difieren."""

    levels = sorted(set(left) | set(right), reverse=True)
    return tuple(
        level
        for level in levels
        if (left[level].equations if level in left else ()) != (right[level].equations if level in right else ())
    )


def rational_only(result: BoundaryEquationSet) -> bool:
    return all(is_real(value) for block in result.blocks.values() for row in block.equations for value in row)
