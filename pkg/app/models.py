"""Tipos inmutables del dominio: grafos de niveles, bases adaptadas y fixtures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import networkx as nx

from app.utils.linalg import Vector

KIND_ORDER = {"delta": 0, "alpha": 1, "other": 2}


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int
    level: int


@dataclass(frozen=True)
class Edge:
    """Arista con extremo alto `upper` = v(e+) y extremo bajo `lower` = v(e−)."""

    id: str
    upper: str
    lower: str
    prongs: int


@dataclass(frozen=True)
class Leg:
    id: str
    vertex: str
    order: int


@dataclass(frozen=True)
class EnhancedLevelGraph:
    """Grafo estable con niveles y prongs; los niveles no se renormalizan al restringir."""

    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]
    legs: Tuple[Leg, ...] = ()

    def vertex(self, vertex_id: str) -> Vertex:
        for vertex in self.vertices:
            if vertex.id == vertex_id:
                return vertex
        raise KeyError(vertex_id)

    def edge(self, edge_id: str) -> Edge:
        for edge in self.edges:
            if edge.id == edge_id:
                return edge
        raise KeyError(edge_id)

    def has_edge(self, edge_id: str) -> bool:
        return any(edge.id == edge_id for edge in self.edges)

    def level_of(self, vertex_id: str) -> int:
        return self.vertex(vertex_id).level

    def upper_level(self, edge: Edge) -> int:
        return self.level_of(edge.upper)

    def lower_level(self, edge: Edge) -> int:
        return self.level_of(edge.lower)

    def is_horizontal(self, edge: Edge) -> bool:
        return self.upper_level(edge) == self.lower_level(edge)

    def levels(self) -> Tuple[int, ...]:
        """Imagen de la función de niveles, de arriba hacia abajo."""

        return tuple(sorted({vertex.level for vertex in self.vertices}, reverse=True))

    def lower_levels(self) -> Tuple[int, ...]:
        return tuple(level for level in self.levels() if level < 0)

    def horizontal_edges(self, level: Optional[int] = None) -> Tuple[Edge, ...]:
        return tuple(
            edge
            for edge in self.edges
            if self.is_horizontal(edge) and (level is None or self.upper_level(edge) == level)
        )

    def vertical_edges(self) -> Tuple[Edge, ...]:
        return tuple(edge for edge in self.edges if not self.is_horizontal(edge))

    def crossing_edges(self, level: int) -> Tuple[Edge, ...]:
        """Aristas verticales con ℓ(e+) > level ≥ ℓ(e−)."""

        return tuple(
            edge
            for edge in self.vertical_edges()
            if self.upper_level(edge) > level >= self.lower_level(edge)
        )

    def legs_at(self, vertex_id: str) -> Tuple[Leg, ...]:
        return tuple(leg for leg in self.legs if leg.vertex == vertex_id)

    def valence(self, vertex_id: str) -> int:
        half_edges = sum((edge.upper == vertex_id) + (edge.lower == vertex_id) for edge in self.edges)
        return half_edges + len(self.legs_at(vertex_id))

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        for vertex in self.vertices:
            graph.add_node(vertex.id, genus=vertex.genus, level=vertex.level)
        for edge in self.edges:
            graph.add_edge(edge.upper, edge.lower, key=edge.id, prongs=edge.prongs)
        return graph


@dataclass(frozen=True)
class Cycle:
    """Ciclo de la base ambiente.

    `restriction` son las coordenadas de su imagen declarada en la base del nivel `level`.
    """

    id: str
    level: int
    kind: str
    intersections: Dict[str, int] = field(default_factory=dict)
    restriction: Vector = ()

    def pairing(self, edge_id: str) -> int:
        return self.intersections.get(edge_id, 0)

    @property
    def crosses_horizontally(self) -> bool:
        return self.kind == "delta"


@dataclass(frozen=True)
class LevelHomology:
    """Base con nombre de la homología de borde de un nivel y las clases de borde de sus aristas.

    `vertical[e]` es λ_e^- para aristas con ℓ(e−) = level; `horizontal[e]` es el par (λ_e^+, λ_e^-).
    """

    level: int
    basis: Tuple[str, ...]
    vertical: Dict[str, Vector] = field(default_factory=dict)
    horizontal: Dict[str, Tuple[Vector, Vector]] = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class AdaptedBasisModel:
    """Base ambiente en el orden de columnas fijo más los datos de los ciclos evanescentes."""

    cycles: Tuple[Cycle, ...]
    vanishing: Dict[str, Tuple[int, ...]]
    levels: Dict[int, LevelHomology]

    @property
    def n(self) -> int:
        return len(self.cycles)

    def index(self, cycle_id: str) -> int:
        for position, cycle in enumerate(self.cycles):
            if cycle.id == cycle_id:
                return position
        raise KeyError(cycle_id)

    def cycle_ids(self) -> Tuple[str, ...]:
        return tuple(cycle.id for cycle in self.cycles)

    def indices_at(self, level: int) -> Tuple[int, ...]:
        return tuple(position for position, cycle in enumerate(self.cycles) if cycle.level == level)

    def indices_at_most(self, level: int) -> Tuple[int, ...]:
        return tuple(position for position, cycle in enumerate(self.cycles) if cycle.level <= level)

    def vanishing_class(self, edge_id: str) -> Tuple[int, ...]:
        return self.vanishing.get(edge_id, tuple(0 for _ in self.cycles))

    def pairing_row(self, edge_id: str) -> Tuple[int, ...]:
        """⟨γ_l, λ_e⟩ para todos los ciclos l."""

        return tuple(cycle.pairing(edge_id) for cycle in self.cycles)


def column_order(cycles: Iterable[Cycle]) -> Tuple[Cycle, ...]:
    """Nivel descendente; delta, alpha, other; luego orden de entrada."""

    indexed = list(enumerate(cycles))
    indexed.sort(key=lambda item: (-item[1].level, KIND_ORDER[item[1].kind], item[0]))
    return tuple(cycle for _, cycle in indexed)


@dataclass(frozen=True)
class MonodromyType:
    """Pesos σ_i por nivel inferior y σ_e por arista horizontal."""

    levels: Dict[int, int] = field(default_factory=dict)
    horizontal: Dict[str, int] = field(default_factory=dict)

    def __add__(self, other: "MonodromyType") -> "MonodromyType":
        levels = {key: self.levels.get(key, 0) + other.levels.get(key, 0) for key in {*self.levels, *other.levels}}
        horizontal = {
            key: self.horizontal.get(key, 0) + other.horizontal.get(key, 0)
            for key in {*self.horizontal, *other.horizontal}
        }
        return MonodromyType(levels=levels, horizontal=horizontal)

    def scaled(self, factor: int) -> "MonodromyType":
        return MonodromyType(
            levels={key: factor * value for key, value in self.levels.items()},
            horizontal={key: factor * value for key, value in self.horizontal.items()},
        )


@dataclass(frozen=True)
class Fixture:
    mu: Tuple[int, ...]
    graph: EnhancedLevelGraph
    model: AdaptedBasisModel
    equations: Tuple[Vector, ...] = ()
    residues: Optional[Dict[str, Any]] = None
    sigma: Optional[MonodromyType] = None
    name: Optional[str] = None

    @property
    def n(self) -> int:
        return self.model.n


@dataclass(frozen=True)
class Finding:
    rule: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: Tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    def rules(self) -> List[str]:
        return [finding.rule for finding in self.findings]

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.findings + other.findings)
