"""Bases Γ-adaptadas: filtraciones, spans GRC/MRH y los morfismos f_i / g_i."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from app.errors import (
    BoundaryError,
    DimensionMismatch,
    LevelOutOfRange,
    MissingBoundaryCoordinates,
    NotInLevelFiltration,
    NotInVerticalFiltration,
)
from app.levels import residue_components
from app.models import AdaptedBasisModel, EnhancedLevelGraph, Finding, LevelHomology, ValidationReport
from app.utils.linalg import (
    Rows,
    Vector,
    add,
    combine,
    dot,
    in_span,
    is_zero_vector,
    nullspace,
    rank,
    reduce_modulo,
    rref,
    unit_vector,
    zero_vector,
)
from app.utils.scalars import format_scalar, to_scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiltrationPair:
    """Bases RREF de L_i (filtración por niveles) y W_i (filtración vertical)."""

    ambient: int
    level_spans: Dict[int, Rows]
    vertical_spans: Dict[int, Rows]

    def level(self, level: int) -> Rows:
        if level in self.level_spans:
            return self.level_spans[level]
        if self.level_spans and level < min(self.level_spans):
            return ()
        raise LevelOutOfRange(f"Level {level} is not in the level image", subject=str(level))

    def vertical(self, level: int) -> Rows:
        if level not in self.vertical_spans:
            raise LevelOutOfRange(f"Level {level} is not in the level image", subject=str(level))
        return self.vertical_spans[level]


@dataclass(frozen=True)
class GrcSpan:
    """Generadores λ_Y (GRC vertical) y λ^+ − λ^- (MRH) de un nivel, más su RREF."""

    level: int
    dimension: int
    vertical: Tuple[Tuple[Tuple[str, ...], Vector], ...]
    horizontal: Tuple[Tuple[str, Vector], ...]
    basis: Rows
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def generators(self) -> Rows:
        return tuple(vector for _, vector in self.vertical) + tuple(vector for _, vector in self.horizontal)

    def reduce(self, vector: Sequence[Any]) -> Vector:
        return reduce_modulo(vector, self.basis, self.pivots)


def _level_homology(model: AdaptedBasisModel, level: int) -> LevelHomology:
    try:
        return model.levels[level]
    except KeyError:
        raise MissingBoundaryCoordinates(
            f"No boundary homology declared for level {level}", subject=f"level {level}"
        ) from None


def _check_length(model: AdaptedBasisModel, vector: Sequence[Any]) -> None:
    if len(vector) != model.n:
        raise DimensionMismatch(f"Expected {model.n} coordinates, got {len(vector)}")


def pairing(model: AdaptedBasisModel, vector: Sequence[Any], edge_id: str) -> Any:
    """⟨x, λ_e⟩ = Σ_l x_l ⟨γ_l, λ_e⟩."""

    return dot(vector, model.pairing_row(edge_id))


def top_level(model: AdaptedBasisModel, vector: Sequence[Any]) -> Optional[int]:
    levels = [cycle.level for value, cycle in zip(vector, model.cycles) if value]
    return max(levels) if levels else None


def build_filtrations(model: AdaptedBasisModel, graph: EnhancedLevelGraph) -> FiltrationPair:
    """L_i = span de ciclos con ℓ ≤ i; W_i = L_i ∩ {x : ⟨x, λ_e⟩ = 0 para e horizontal de nivel i}."""

    level_spans: Dict[int, Rows] = {}
    vertical_spans: Dict[int, Rows] = {}
    for level in graph.levels():
        indices = model.indices_at_most(level)
        level_spans[level] = tuple(unit_vector(model.n, index) for index in indices)

        horizontals = graph.horizontal_edges(level)
        if not horizontals:
            vertical_spans[level] = level_spans[level]
            continue

        constraints = [[model.cycles[index].pairing(edge.id) for index in indices] for edge in horizontals]
        embedded: List[Vector] = []
        for solution in nullspace(constraints, len(indices)):
            vector = list(zero_vector(model.n))
            for index, value in zip(indices, solution):
                vector[index] = value
            embedded.append(tuple(vector))
        vertical_spans[level] = rref(embedded, model.n)[0]
        logger.debug(
            "Level %s: dim L=%s dim W=%s", level, len(level_spans[level]), len(vertical_spans[level])
        )
    return FiltrationPair(ambient=model.n, level_spans=level_spans, vertical_spans=vertical_spans)


def grc_span(model: AdaptedBasisModel, graph: EnhancedLevelGraph, level: int) -> GrcSpan:
    """Span GRC_(i): un λ_Y por componente sin polos de Γ_{>i}, más un generador MRH por arista horizontal."""

    homology = _level_homology(model, level)
    size = homology.dimension

    vertical: List[Tuple[Tuple[str, ...], Vector]] = []
    for component in residue_components(graph, level):
        if component.has_pole:
            continue
        generator = zero_vector(size)
        for edge_id in component.edges:
            if edge_id not in homology.vertical:
                raise MissingBoundaryCoordinates(
                    f"Edge {edge_id} has no boundary class at level {level}", subject=edge_id
                )
            generator = add(generator, homology.vertical[edge_id])
        if is_zero_vector(generator):
            logger.debug("Skipping zero GRC generator for component %s", sorted(component.vertices))
            continue
        vertical.append((component.edges, generator))

    horizontal: List[Tuple[str, Vector]] = []
    for edge in graph.horizontal_edges(level):
        if edge.id not in homology.horizontal:
            raise MissingBoundaryCoordinates(
                f"Horizontal edge {edge.id} has no boundary classes at level {level}", subject=edge.id
            )
        plus, minus = homology.horizontal[edge.id]
        generator = add(plus, tuple(-value for value in minus))
        if not is_zero_vector(generator):
            horizontal.append((edge.id, generator))

    generators = [vector for _, vector in vertical] + [vector for _, vector in horizontal]
    basis, pivots = rref(generators, size)
    logger.debug("GRC span at level %s: %s generators, rank %s", level, len(generators), len(pivots))
    return GrcSpan(
        level=level,
        dimension=size,
        vertical=tuple(vertical),
        horizontal=tuple(horizontal),
        basis=basis,
        pivots=pivots,
    )


def _restriction_image(model: AdaptedBasisModel, vector: Sequence[Any], level: int) -> Vector:
    size = _level_homology(model, level).dimension
    terms = []
    for value, cycle in zip(vector, model.cycles):
        if value and cycle.level == level:
            terms.append((value, cycle.restriction or zero_vector(size)))
    return combine(terms, size)


def restrict(model: AdaptedBasisModel, vector: Sequence[Any], level: int) -> Vector:
    """g_i: extensión lineal de las restricciones declaradas, sin cociente GRC."""

    _check_length(model, vector)
    for value, cycle in zip(vector, model.cycles):
        if value and cycle.level > level:
            raise NotInLevelFiltration(
                f"Coordinate {cycle.id} has level {cycle.level} above {level}", subject=cycle.id
            )
    return _restriction_image(model, vector, level)


def specialize(
    model: AdaptedBasisModel,
    graph: EnhancedLevelGraph,
    vector: Sequence[Any],
    level: int,
    *,
    filtrations: Optional[FiltrationPair] = None,
    grc: Optional[GrcSpan] = None,
) -> Vector:
    """f_i: g_i seguido de la reducción canónica módulo GRC_(i); exige x ∈ W_i."""

    _check_length(model, vector)
    filtrations = filtrations or build_filtrations(model, graph)
    if not in_span(filtrations.vertical(level), vector, model.n):
        raise NotInVerticalFiltration(f"Vector is not in W_{level}", subject=str(level))
    grc = grc or grc_span(model, graph, level)
    return grc.reduce(_restriction_image(model, vector, level))


def quotient_dimension(model: AdaptedBasisModel, graph: EnhancedLevelGraph, level: int) -> int:
    return _level_homology(model, level).dimension - grc_span(model, graph, level).rank


def edge_order(graph: EnhancedLevelGraph) -> Tuple[str, ...]:
    return tuple(sorted(edge.id for edge in graph.edges))


def vanishing_relations(model: AdaptedBasisModel, graph: EnhancedLevelGraph) -> Rows:
    """RREF de las relaciones Σ c_e λ_e = 0, en el orden de `edge_order`."""

    edges = edge_order(graph)
    matrix = [[model.vanishing_class(edge_id)[index] for edge_id in edges] for index in range(model.n)]
    return rref(nullspace(matrix, len(edges)), len(edges))[0]


def _finding(rule: str, subject: str, message: str) -> Finding:
    return Finding(rule=rule, subject=subject, message=message)


def _structural_findings(model: AdaptedBasisModel, graph: EnhancedLevelGraph) -> List[Finding]:
    findings: List[Finding] = []
    levels = set(graph.levels())
    for level in graph.levels():
        if level not in model.levels:
            findings.append(
                _finding("MissingBoundaryCoordinates", f"level {level}", f"no boundary homology for level {level}")
            )
    for cycle in model.cycles:
        if cycle.level not in levels:
            findings.append(_finding("LevelOutOfRange", cycle.id, f"cycle {cycle.id} has level {cycle.level}"))
    for edge in graph.edges:
        if graph.is_horizontal(edge):
            homology = model.levels.get(graph.upper_level(edge))
            declared = homology is not None and edge.id in homology.horizontal
        else:
            homology = model.levels.get(graph.lower_level(edge))
            declared = homology is not None and edge.id in homology.vertical
        if not declared:
            findings.append(
                _finding("MissingBoundaryCoordinates", edge.id, f"edge {edge.id} has no declared boundary class")
            )
    return findings


def _crossing_findings(model: AdaptedBasisModel, graph: EnhancedLevelGraph) -> List[Finding]:
    findings: List[Finding] = []
    used: Dict[Tuple[int, str], str] = {}
    for cycle in model.cycles:
        for level in graph.levels():
            horizontals = graph.horizontal_edges(level)
            crossed = [edge.id for edge in horizontals if cycle.pairing(edge.id)]
            if level > cycle.level and crossed:
                findings.append(
                    _finding(
                        "LowerLevelCrossing",
                        cycle.id,
                        f"cycle {cycle.id} of level {cycle.level} meets horizontal {crossed} at level {level}",
                    )
                )
            if level != cycle.level:
                continue
            if cycle.crosses_horizontally:
                pairs = [cycle.pairing(edge.id) for edge in horizontals]
                # fuera de su nivel el delta no puede cortar ningún λ horizontal
                elsewhere = [
                    edge.id for edge in graph.horizontal_edges() if edge not in horizontals and cycle.pairing(edge.id)
                ]
                if sorted(pairs) != [0] * (len(pairs) - 1) + [1] or elsewhere:
                    findings.append(
                        _finding(
                            "KroneckerRule",
                            cycle.id,
                            f"delta cycle {cycle.id} pairs {pairs} with the horizontal edges of level {level}"
                            + (f" and meets horizontal {elsewhere} at other levels" if elsewhere else ""),
                        )
                    )
                    continue
                own = crossed[0]
                if (level, own) in used:
                    findings.append(
                        _finding(
                            "KroneckerRule",
                            cycle.id,
                            f"delta cycles {used[(level, own)]} and {cycle.id} cross the same edge {own}",
                        )
                    )
                used[(level, own)] = cycle.id
            elif crossed:
                findings.append(
                    _finding(
                        "AlphaCrossing",
                        cycle.id,
                        f"non-horizontal cycle {cycle.id} meets horizontal {crossed} at its own level",
                    )
                )
    return findings


def _vanishing_findings(model: AdaptedBasisModel, graph: EnhancedLevelGraph) -> List[Finding]:
    findings: List[Finding] = []
    edges = edge_order(graph)
    for edge_id in edges:
        coordinates = model.vanishing_class(edge_id)
        if not any(coordinates):
            crossing = [cycle.id for cycle in model.cycles if cycle.pairing(edge_id)]
            if crossing:
                findings.append(
                    _finding(
                        "VanishingIntersection",
                        edge_id,
                        f"λ_{edge_id} is zero but cycles {crossing} meet it",
                    )
                )
        for other_id in edges:
            value = sum(c * cycle.pairing(other_id) for c, cycle in zip(coordinates, model.cycles))
            if value:
                findings.append(
                    _finding(
                        "VanishingIntersection",
                        edge_id,
                        f"⟨λ_{edge_id}, λ_{other_id}⟩ = {value}",
                    )
                )
        edge = graph.edge(edge_id)
        lower = graph.lower_level(edge)
        above = [cycle.id for c, cycle in zip(coordinates, model.cycles) if c and cycle.level > lower]
        if above:
            findings.append(
                _finding(
                    "VanishingLevel",
                    edge_id,
                    f"λ_{edge_id} uses cycles {above} above level {lower}",
                )
            )
    return findings


def _level_findings(model: AdaptedBasisModel, graph: EnhancedLevelGraph, level: int) -> List[Finding]:
    findings: List[Finding] = []
    homology = model.levels[level]
    try:
        grc = grc_span(model, graph, level)
    except BoundaryError as exc:
        return [_finding(exc.rule, exc.subject or f"level {level}", str(exc))]

    for edges, _ in grc.vertical:
        lift = [0] * model.n
        for edge_id in edges:
            lift = [a + b for a, b in zip(lift, model.vanishing_class(edge_id))]
        offending = [cycle.id for value, cycle in zip(lift, model.cycles) if value and cycle.level >= level]
        if offending:
            findings.append(
                _finding("GrcLift", ",".join(edges), f"lifted λ_Y of {list(edges)} uses cycles {offending}")
            )

    declared: List[Tuple[str, Vector]] = [
        (edge.id, homology.vertical[edge.id]) for edge in graph.vertical_edges() if graph.lower_level(edge) == level
    ]
    declared += [(edge.id, homology.horizontal[edge.id][0]) for edge in graph.horizontal_edges(level)]
    for edge_id, boundary_class in declared:
        coordinates = model.vanishing_class(edge_id)
        if any(value and cycle.level > level for value, cycle in zip(coordinates, model.cycles)):
            continue
        image = grc.reduce(_restriction_image(model, coordinates, level))
        if image != grc.reduce(boundary_class):
            findings.append(
                _finding(
                    "VanishingRestriction",
                    edge_id,
                    f"f_{level}(λ_{edge_id}) does not match the declared boundary class",
                )
            )

    images = [
        grc.reduce(cycle.restriction or zero_vector(homology.dimension))
        for cycle in model.cycles
        if cycle.level == level and not cycle.crosses_horizontally
    ]
    expected = homology.dimension - grc.rank
    spanned = rank(images + list(grc.basis), homology.dimension)
    if len(images) != expected or spanned != homology.dimension:
        findings.append(
            _finding(
                "LevelSpan",
                f"level {level}",
                f"{len(images)} restricted cycles span {spanned - grc.rank} of {expected} quotient dimensions",
            )
        )
    return findings


def validate_adapted_basis(model: AdaptedBasisModel, graph: EnhancedLevelGraph) -> ValidationReport:
    """Revisa las condiciones de base Γ-adaptada; nunca lanza por fallos matemáticos."""

    findings = _structural_findings(model, graph)
    if not findings:
        findings += _crossing_findings(model, graph)
        findings += _vanishing_findings(model, graph)
        for level in graph.levels():
            findings += _level_findings(model, graph, level)
    for finding in findings:
        logger.warning("Basis finding %s on %s: %s", finding.rule, finding.subject, finding.message)
    return ValidationReport(tuple(findings))


def residue_consistency(
    model: AdaptedBasisModel, graph: EnhancedLevelGraph, residues: Mapping[str, Any]
) -> ValidationReport:
    """Residuos compatibles con las relaciones entre los λ_e y con la condición global de residuos."""

    findings: List[Finding] = []
    edges = edge_order(graph)
    values = [to_scalar(residues.get(edge_id, 0)) for edge_id in edges]

    for relation in vanishing_relations(model, graph):
        total = dot(relation, values)
        if total:
            support = [f"{format_scalar(c)}·λ_{edge_id}" for c, edge_id in zip(relation, edges) if c]
            findings.append(
                _finding(
                    "ResidueRelation",
                    ",".join(edge_id for c, edge_id in zip(relation, edges) if c),
                    f"relation {' + '.join(support)} = 0 gives residue sum {format_scalar(total)}",
                )
            )

    for level in graph.levels()[1:]:
        for component in residue_components(graph, level):
            if component.has_pole or not component.edges:
                continue
            total = dot([1] * len(component.edges), [residues.get(edge_id, 0) for edge_id in component.edges])
            if total:
                findings.append(
                    _finding(
                        "GlobalResidueCondition",
                        ",".join(component.edges),
                        f"residues at {list(component.edges)} sum to {format_scalar(total)} at level {level}",
                    )
                )

    for finding in findings:
        logger.warning("Residue finding %s on %s: %s", finding.rule, finding.subject, finding.message)
    return ValidationReport(tuple(findings))
