"""Grafos de niveles enriquecidos: validación, restricciones por nivel, prongs y monomios de escala."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple, Union

import networkx as nx

from app.errors import DegreeMismatch, LevelGap, LevelOutOfRange
from app.models import EnhancedLevelGraph, Finding, ValidationReport

logger = logging.getLogger(__name__)

RESTRICTION_MODES = ("at_most", "equal", "above")

Variable = Tuple[str, Union[int, str]]


@dataclass(frozen=True)
class ProngData:
    level: int
    lcm: int
    multiplicities: Dict[str, int]


@dataclass(frozen=True)
class ScalingMonomial:
    """Monomio en las variables t_i (niveles inferiores) y h_e (aristas horizontales)."""

    exponents: Tuple[Tuple[Variable, int], ...] = ()

    @classmethod
    def from_mapping(cls, exponents: Dict[Variable, int]) -> "ScalingMonomial":
        for variable, power in exponents.items():
            if power < 0:
                raise ValueError(f"Negative exponent for {variable}: {power}")
        return cls(tuple(sorted((key, value) for key, value in exponents.items() if value)))

    @classmethod
    def unit(cls) -> "ScalingMonomial":
        return cls()

    @classmethod
    def t(cls, level: int, power: int = 1) -> "ScalingMonomial":
        return cls.from_mapping({("t", level): power})

    @classmethod
    def h(cls, edge_id: str, power: int = 1) -> "ScalingMonomial":
        return cls.from_mapping({("h", edge_id): power})

    def as_dict(self) -> Dict[Variable, int]:
        return dict(self.exponents)

    def exponent(self, variable: Variable) -> int:
        return self.as_dict().get(variable, 0)

    @property
    def is_unit(self) -> bool:
        return not self.exponents

    def __mul__(self, other: "ScalingMonomial") -> "ScalingMonomial":
        merged = self.as_dict()
        for variable, power in other.exponents:
            merged[variable] = merged.get(variable, 0) + power
        return ScalingMonomial.from_mapping(merged)

    def __pow__(self, power: int) -> "ScalingMonomial":
        return ScalingMonomial.from_mapping({key: value * power for key, value in self.exponents})

    def __truediv__(self, other: "ScalingMonomial") -> "ScalingMonomial":
        merged = self.as_dict()
        for variable, power in other.exponents:
            merged[variable] = merged.get(variable, 0) - power
        return ScalingMonomial.from_mapping(merged)

    def __str__(self) -> str:
        if self.is_unit:
            return "1"
        factors = []
        for (symbol, index), power in self.exponents:
            name = f"{symbol}_{{{index}}}"
            factors.append(name if power == 1 else f"{name}^{power}")
        return "·".join(factors)


@dataclass(frozen=True)
class ResidueComponent:
    """Componente conexa Y de Γ_{>i} y las aristas que la unen con el nivel i."""

    level: int
    vertices: FrozenSet[str]
    has_pole: bool
    edges: Tuple[str, ...]


def _finding(rule: str, subject: str, message: str) -> Finding:
    return Finding(rule=rule, subject=subject, message=message)


def first_betti_number(graph: EnhancedLevelGraph) -> int:
    nx_graph = graph.to_networkx()
    components = nx.number_connected_components(nx_graph) if graph.vertices else 0
    return len(graph.edges) - len(graph.vertices) + components


def total_genus(graph: EnhancedLevelGraph) -> int:
    return sum(vertex.genus for vertex in graph.vertices) + first_betti_number(graph)


def validate_graph(graph: EnhancedLevelGraph, mu: Sequence[int]) -> ValidationReport:
    """Revisa niveles, prongs, estabilidad, conectividad y órdenes locales."""

    findings: List[Finding] = []

    for edge in graph.edges:
        upper, lower = graph.upper_level(edge), graph.lower_level(edge)
        if upper < lower:
            findings.append(_finding("EnhancementMismatch", edge.id, f"edge {edge.id} has ℓ(e+) < ℓ(e−)"))
        elif upper == lower and edge.prongs != 0:
            findings.append(
                _finding("EnhancementMismatch", edge.id, f"horizontal edge {edge.id} has κ={edge.prongs}, expected 0")
            )
        elif upper > lower and edge.prongs < 1:
            findings.append(
                _finding("EnhancementMismatch", edge.id, f"vertical edge {edge.id} has κ={edge.prongs}, expected ≥ 1")
            )

    levels = graph.levels()
    expected = tuple(range(0, -len(levels), -1))
    if levels != expected:
        findings.append(_finding("LevelGap", "levels", f"level image {list(levels)} is not {list(expected)}"))

    if graph.vertices and not nx.is_connected(graph.to_networkx()):
        findings.append(_finding("Disconnected", "graph", "graph is not connected"))

    for vertex in graph.vertices:
        if 2 * vertex.genus - 2 + graph.valence(vertex.id) <= 0:
            findings.append(_finding("Unstable", vertex.id, f"vertex {vertex.id} is not stable"))

    if levels == expected:
        for level in graph.lower_levels():
            if not graph.crossing_edges(level):
                findings.append(_finding("LevelGap", str(level), f"no vertical edge crosses level {level}"))

    for vertex_id, orders in _order_table(graph).items():
        vertex = graph.vertex(vertex_id)
        total = sum(orders.values())
        if total != 2 * vertex.genus - 2:
            findings.append(
                _finding(
                    "DegreeMismatch",
                    vertex_id,
                    f"orders at {vertex_id} sum to {total}, expected {2 * vertex.genus - 2}",
                )
            )

    leg_orders = [leg.order for leg in graph.legs]
    if leg_orders != list(mu):
        findings.append(_finding("DegreeMismatch", "mu", f"leg orders {leg_orders} differ from mu {list(mu)}"))
    genus = total_genus(graph)
    if sum(mu) != 2 * genus - 2:
        findings.append(_finding("DegreeMismatch", "global", f"Σμ = {sum(mu)} but 2g − 2 = {2 * genus - 2}"))

    for finding in findings:
        logger.warning("Graph finding %s on %s: %s", finding.rule, finding.subject, finding.message)
    return ValidationReport(tuple(findings))


def _check_level(graph: EnhancedLevelGraph, level: int) -> None:
    if level not in graph.levels():
        raise LevelOutOfRange(f"Level {level} is not in the level image {list(graph.levels())}", subject=str(level))


def restrict_levels(graph: EnhancedLevelGraph, mode: str, level: int) -> EnhancedLevelGraph:
    """Subgrafo inducido por los vértices con ℓ ≤ i, ℓ = i o ℓ > i."""

    if mode not in RESTRICTION_MODES:
        raise ValueError(f"Unsupported restriction mode: {mode}")
    _check_level(graph, level)

    predicates = {
        "at_most": lambda value: value <= level,
        "equal": lambda value: value == level,
        "above": lambda value: value > level,
    }
    keep = predicates[mode]
    vertices = tuple(vertex for vertex in graph.vertices if keep(vertex.level))
    kept_ids = {vertex.id for vertex in vertices}
    edges = tuple(edge for edge in graph.edges if edge.upper in kept_ids and edge.lower in kept_ids)
    legs = tuple(leg for leg in graph.legs if leg.vertex in kept_ids)
    return EnhancedLevelGraph(vertices=vertices, edges=edges, legs=legs)


def prong_data(graph: EnhancedLevelGraph, level: int) -> ProngData:
    """a_i = lcm de κ_e sobre aristas que cruzan el nivel i, y m_{e,i} = a_i / κ_e."""

    if level >= 0 or level not in graph.levels():
        raise LevelOutOfRange(f"Prong data is defined only for lower levels, got {level}", subject=str(level))
    crossing = graph.crossing_edges(level)
    if not crossing:
        raise LevelGap(f"No vertical edge crosses level {level}", subject=str(level))
    lcm = math.lcm(*(edge.prongs for edge in crossing))
    return ProngData(level=level, lcm=lcm, multiplicities={edge.id: lcm // edge.prongs for edge in crossing})


def _order_table(graph: EnhancedLevelGraph) -> Dict[str, Dict[str, int]]:
    table: Dict[str, Dict[str, int]] = {vertex.id: {} for vertex in graph.vertices}
    for leg in graph.legs:
        table[leg.vertex][f"leg:{leg.id}"] = leg.order
    for edge in graph.edges:
        if graph.is_horizontal(edge):
            table[edge.upper][f"q+:{edge.id}"] = -1
            table[edge.lower][f"q-:{edge.id}"] = -1
        else:
            table[edge.upper][f"q+:{edge.id}"] = edge.prongs - 1
            table[edge.lower][f"q-:{edge.id}"] = -edge.prongs - 1
    return table


def local_orders(graph: EnhancedLevelGraph, mu: Sequence[int]) -> Dict[str, Dict[str, int]]:
    """Orden de la diferencial en cada pierna y preimagen de nodo, por vértice."""

    table = _order_table(graph)
    for vertex_id, orders in table.items():
        genus = graph.vertex(vertex_id).genus
        if sum(orders.values()) != 2 * genus - 2:
            raise DegreeMismatch(
                f"Orders at {vertex_id} sum to {sum(orders.values())}, expected {2 * genus - 2}",
                subject=vertex_id,
            )
    if [leg.order for leg in graph.legs] != list(mu):
        raise DegreeMismatch(f"Leg orders differ from mu {list(mu)}", subject="mu")
    return table


def scaling_monomial(graph: EnhancedLevelGraph, level: int) -> ScalingMonomial:
    """scl[i] = ∏_{k=i}^{−1} t_k^{a_k}; scl[0] es la unidad."""

    _check_level(graph, level)
    monomial = ScalingMonomial.unit()
    for lower in range(level, 0):
        monomial = monomial * ScalingMonomial.t(lower, prong_data(graph, lower).lcm)
    return monomial


def plumbing_monomial(graph: EnhancedLevelGraph, edge_id: str) -> ScalingMonomial:
    """s_e = ∏ t_k^{m_{e,k}} para aristas verticales, s_e = h_e para horizontales."""

    if not graph.has_edge(edge_id):
        raise ValueError(f"Unknown edge: {edge_id}")
    edge = graph.edge(edge_id)
    if graph.is_horizontal(edge):
        return ScalingMonomial.h(edge.id)
    monomial = ScalingMonomial.unit()
    for lower in range(graph.lower_level(edge), graph.upper_level(edge)):
        multiplicity = prong_data(graph, lower).multiplicities[edge.id]
        monomial = monomial * ScalingMonomial.t(lower, multiplicity)
    return monomial


def rescaling_monomial(graph: EnhancedLevelGraph, upper: int, lower: int) -> ScalingMonomial:
    """scl[lower] / scl[upper]: factor con que un período de nivel `lower` entra en una ecuación de nivel `upper`."""

    if lower > upper:
        raise LevelOutOfRange(f"Level {lower} lies above level {upper}", subject=str(lower))
    return scaling_monomial(graph, lower) / scaling_monomial(graph, upper)


def check_plumbing_relation(graph: EnhancedLevelGraph) -> Dict[str, bool]:
    """Verifica scl[ℓ(e−)] = s_e^{κ_e} · scl[ℓ(e+)] en cada arista vertical."""

    results: Dict[str, bool] = {}
    for edge in graph.vertical_edges():
        left = scaling_monomial(graph, graph.lower_level(edge))
        right = plumbing_monomial(graph, edge.id) ** edge.prongs * scaling_monomial(graph, graph.upper_level(edge))
        results[edge.id] = left == right
        if not results[edge.id]:
            logger.warning("Plumbing relation fails at %s: %s != %s", edge.id, left, right)
    return results


def boundary_codimension(graph: EnhancedLevelGraph) -> int:
    """Número de parámetros de suavizado (t_i, h_e)."""

    return len(graph.lower_levels()) + len(graph.horizontal_edges())


def residue_components(graph: EnhancedLevelGraph, level: int) -> List[ResidueComponent]:
    """Componentes de Γ_{>i} con su marca de polo y las aristas que bajan al nivel i."""

    _check_level(graph, level)
    if level == max(graph.levels()):
        return []
    above = restrict_levels(graph, "above", level)
    components: List[ResidueComponent] = []
    ordered = sorted(
        (frozenset(component) for component in nx.connected_components(above.to_networkx())),
        key=lambda component: sorted(component),
    )
    for vertices in ordered:
        has_pole = any(leg.order < 0 for leg in above.legs if leg.vertex in vertices)
        edges = tuple(
            sorted(
                edge.id
                for edge in graph.edges
                if edge.upper in vertices and graph.lower_level(edge) == level
            )
        )
        components.append(ResidueComponent(level=level, vertices=vertices, has_pole=has_pole, edges=edges))
    return components
