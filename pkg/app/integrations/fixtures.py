"""Lectura y escritura de fixtures (JSON o YAML) con el esquema documentado en docs/fixture_schema.md.

Secciones del documento:

- mu: lista de órdenes de las piernas, en el orden de `graph.legs`.
- graph: vertices (id | genus | level), edges (id | upper | lower | kappa), legs (id | vertex | order).
- level_homology: por nivel, `basis` (nombres) y `edges` con la clase de borde de cada arista;
  las aristas horizontales usan `{plus: {...}, minus: {...}}`.
- basis: ciclos (id | level | kind | intersections | restriction).
- vanishing_cycles: arista -> coordenadas enteras de λ_e en la base ambiente.
- equations: filas como mapas ciclo -> escalar.
- residues, sigma: opcionales.

Todos los mapas son dispersos: una entrada ausente vale cero.
"""
from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import yaml

from app.errors import ParseError
from app.models import (
    AdaptedBasisModel,
    Cycle,
    Edge,
    EnhancedLevelGraph,
    Fixture,
    Leg,
    LevelHomology,
    MonodromyType,
    Vertex,
    column_order,
)
from app.utils.linalg import Vector, zero_vector
from app.utils.scalars import parse_scalar, scalar_to_json

logger = logging.getLogger(__name__)

CYCLE_KINDS = ("alpha", "delta", "other")


def fixture_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _parse_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(path, f"expected integer, got {value!r}")
    return value


def _parse_str(value: Any, path: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise ParseError(path, f"expected identifier, got {value!r}")
    return str(value)


def _parse_scalar(value: Any, path: str) -> Any:
    try:
        return parse_scalar(value)
    except ValueError as exc:
        raise ParseError(path, str(exc)) from None


def _parse_level_key(value: Any, path: str) -> int:
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    try:
        return int(str(value))
    except ValueError:
        raise ParseError(path, f"expected level, got {value!r}") from None


def _mapping(value: Any, path: str) -> Mapping:
    if value is None:
        return {}
    if not isinstance(value, Mapping):
        raise ParseError(path, "expected mapping")
    return value


def _sequence(value: Any, path: str) -> List:
    if value is None:
        return []
    if not isinstance(value, list):
        raise ParseError(path, "expected list")
    return value


def _require(data: Mapping, key: str, path: str) -> Any:
    if key not in data:
        raise ParseError(f"{path}.{key}" if path else key, "missing field")
    return data[key]


def _unique(ids: Sequence[str], path: str) -> None:
    seen = set()
    for index, identifier in enumerate(ids):
        if identifier in seen:
            raise ParseError(f"{path}[{index}].id", f"duplicate id {identifier!r}")
        seen.add(identifier)


def _sparse_vector(data: Any, names: Sequence[str], path: str) -> Vector:
    positions = {name: index for index, name in enumerate(names)}
    vector = list(zero_vector(len(names)))
    for key, value in _mapping(data, path).items():
        name = str(key)
        if name not in positions:
            raise ParseError(f"{path}.{name}", f"unknown basis element {name!r}")
        vector[positions[name]] = _parse_scalar(value, f"{path}.{name}")
    return tuple(vector)


def _parse_graph(data: Mapping) -> EnhancedLevelGraph:
    vertices = []
    for index, item in enumerate(_sequence(_require(data, "vertices", "graph"), "graph.vertices")):
        path = f"graph.vertices[{index}]"
        item = _mapping(item, path)
        genus = _parse_int(_require(item, "genus", path), f"{path}.genus")
        if genus < 0:
            raise ParseError(f"{path}.genus", "genus must be non-negative")
        vertices.append(
            Vertex(
                id=_parse_str(_require(item, "id", path), f"{path}.id"),
                genus=genus,
                level=_parse_int(_require(item, "level", path), f"{path}.level"),
            )
        )
    _unique([vertex.id for vertex in vertices], "graph.vertices")
    vertex_ids = {vertex.id for vertex in vertices}

    edges = []
    for index, item in enumerate(_sequence(data.get("edges"), "graph.edges")):
        path = f"graph.edges[{index}]"
        item = _mapping(item, path)
        endpoints = {}
        for key in ("upper", "lower"):
            endpoint = _parse_str(_require(item, key, path), f"{path}.{key}")
            if endpoint not in vertex_ids:
                raise ParseError(f"{path}.{key}", f"unknown vertex {endpoint!r}")
            endpoints[key] = endpoint
        edges.append(
            Edge(
                id=_parse_str(_require(item, "id", path), f"{path}.id"),
                upper=endpoints["upper"],
                lower=endpoints["lower"],
                prongs=_parse_int(_require(item, "kappa", path), f"{path}.kappa"),
            )
        )
    _unique([edge.id for edge in edges], "graph.edges")

    legs = []
    for index, item in enumerate(_sequence(data.get("legs"), "graph.legs")):
        path = f"graph.legs[{index}]"
        item = _mapping(item, path)
        vertex = _parse_str(_require(item, "vertex", path), f"{path}.vertex")
        if vertex not in vertex_ids:
            raise ParseError(f"{path}.vertex", f"unknown vertex {vertex!r}")
        legs.append(
            Leg(
                id=_parse_str(_require(item, "id", path), f"{path}.id"),
                vertex=vertex,
                order=_parse_int(_require(item, "order", path), f"{path}.order"),
            )
        )
    _unique([leg.id for leg in legs], "graph.legs")
    return EnhancedLevelGraph(vertices=tuple(vertices), edges=tuple(edges), legs=tuple(legs))


def _parse_level_homology(data: Any, graph: EnhancedLevelGraph) -> Dict[int, LevelHomology]:
    levels: Dict[int, LevelHomology] = {}
    for key, item in _mapping(data, "level_homology").items():
        path = f"level_homology.{key}"
        level = _parse_level_key(key, path)
        item = _mapping(item, path)
        basis = tuple(
            _parse_str(name, f"{path}.basis[{index}]")
            for index, name in enumerate(_sequence(item.get("basis"), f"{path}.basis"))
        )
        if len(set(basis)) != len(basis):
            raise ParseError(f"{path}.basis", "duplicate basis names")

        vertical: Dict[str, Vector] = {}
        horizontal: Dict[str, Tuple[Vector, Vector]] = {}
        for edge_key, classes in _mapping(item.get("edges"), f"{path}.edges").items():
            edge_id = str(edge_key)
            edge_path = f"{path}.edges.{edge_id}"
            if not graph.has_edge(edge_id):
                raise ParseError(edge_path, f"unknown edge {edge_id!r}")
            if graph.is_horizontal(graph.edge(edge_id)):
                classes = _mapping(classes, edge_path)
                if set(classes) != {"plus", "minus"}:
                    raise ParseError(edge_path, "horizontal edges need exactly 'plus' and 'minus'")
                horizontal[edge_id] = (
                    _sparse_vector(classes["plus"], basis, f"{edge_path}.plus"),
                    _sparse_vector(classes["minus"], basis, f"{edge_path}.minus"),
                )
            else:
                vertical[edge_id] = _sparse_vector(classes, basis, edge_path)
        levels[level] = LevelHomology(level=level, basis=basis, vertical=vertical, horizontal=horizontal)
    return levels


def _parse_cycles(data: Any, graph: EnhancedLevelGraph, levels: Mapping[int, LevelHomology]) -> Tuple[Cycle, ...]:
    cycles = []
    for index, item in enumerate(_sequence(data, "basis")):
        path = f"basis[{index}]"
        item = _mapping(item, path)
        cycle_id = _parse_str(_require(item, "id", path), f"{path}.id")
        level = _parse_int(_require(item, "level", path), f"{path}.level")
        kind = _require(item, "kind", path)
        if kind not in CYCLE_KINDS:
            raise ParseError(f"{path}.kind", f"expected one of {list(CYCLE_KINDS)}, got {kind!r}")

        intersections: Dict[str, int] = {}
        for edge_key, value in _mapping(item.get("intersections"), f"{path}.intersections").items():
            edge_id = str(edge_key)
            if not graph.has_edge(edge_id):
                raise ParseError(f"{path}.intersections.{edge_id}", f"unknown edge {edge_id!r}")
            value = _parse_int(value, f"{path}.intersections.{edge_id}")
            if value:
                intersections[edge_id] = value

        restriction_data = item.get("restriction")
        if level in levels:
            restriction = _sparse_vector(restriction_data, levels[level].basis, f"{path}.restriction")
        elif restriction_data:
            raise ParseError(f"{path}.restriction", f"no boundary basis declared for level {level}")
        else:
            restriction = ()
        cycles.append(
            Cycle(id=cycle_id, level=level, kind=kind, intersections=intersections, restriction=restriction)
        )
    _unique([cycle.id for cycle in cycles], "basis")
    return column_order(cycles)


def _cycle_vector(data: Any, cycles: Sequence[Cycle], path: str) -> Vector:
    return _sparse_vector(data, [cycle.id for cycle in cycles], path)


def _parse_vanishing(data: Any, graph: EnhancedLevelGraph, cycles: Sequence[Cycle]) -> Dict[str, Tuple[int, ...]]:
    positions = {cycle.id: index for index, cycle in enumerate(cycles)}
    vanishing = {edge.id: [0] * len(cycles) for edge in graph.edges}
    for edge_key, coordinates in _mapping(data, "vanishing_cycles").items():
        edge_id = str(edge_key)
        path = f"vanishing_cycles.{edge_id}"
        if edge_id not in vanishing:
            raise ParseError(path, f"unknown edge {edge_id!r}")
        for cycle_key, value in _mapping(coordinates, path).items():
            cycle_id = str(cycle_key)
            if cycle_id not in positions:
                raise ParseError(f"{path}.{cycle_id}", f"unknown cycle {cycle_id!r}")
            vanishing[edge_id][positions[cycle_id]] = _parse_int(value, f"{path}.{cycle_id}")
    return {edge_id: tuple(values) for edge_id, values in vanishing.items()}


def _parse_equations(data: Any, cycles: Sequence[Cycle]) -> Tuple[Vector, ...]:
    known = {cycle.id for cycle in cycles}
    equations = []
    for index, item in enumerate(_sequence(data, "equations")):
        path = f"equations[{index}]"
        for key in _mapping(item, path):
            if str(key) not in known:
                raise ParseError(path, f"unknown cycle {str(key)!r}")
        equations.append(_cycle_vector(item, cycles, path))
    return tuple(equations)


def parse_sigma(data: Any, path: str = "sigma") -> MonodromyType:
    """Lee un tipo de monodromía `{levels: {nivel: m}, horizontal: {arista: m}}`; la positividad se valida aparte."""

    data = _mapping(data, path)
    unknown = set(data) - {"levels", "horizontal"}
    if unknown:
        raise ParseError(path, f"unexpected keys {sorted(map(str, unknown))}")
    levels = {
        _parse_level_key(key, f"{path}.levels.{key}"): _parse_int(value, f"{path}.levels.{key}")
        for key, value in _mapping(data.get("levels"), f"{path}.levels").items()
    }
    horizontal = {
        str(key): _parse_int(value, f"{path}.horizontal.{key}")
        for key, value in _mapping(data.get("horizontal"), f"{path}.horizontal").items()
    }
    return MonodromyType(levels=levels, horizontal=horizontal)


def parse_sigma_option(text: str) -> MonodromyType:
    """Valor de `--sigma`: ruta a un archivo, pares `-1=3,e1=1` o un mapa YAML en línea."""

    candidate = Path(text)
    if candidate.is_file():
        try:
            data = yaml.safe_load(candidate.read_text(encoding="utf-8"))
        except yaml.YAMLError as exc:
            raise ParseError(str(candidate), f"invalid YAML: {exc}") from None
        return parse_sigma(data, path=str(candidate))

    stripped = text.strip()
    if "=" in stripped and not stripped.startswith("{"):
        levels: Dict[int, int] = {}
        horizontal: Dict[str, int] = {}
        for item in stripped.split(","):
            key, separator, value = item.partition("=")
            key, value = key.strip(), value.strip()
            if not separator or not key:
                raise ParseError("--sigma", f"malformed entry {item!r}")
            try:
                weight = int(value)
            except ValueError:
                raise ParseError(f"--sigma.{key}", f"expected integer, got {value!r}") from None
            if key.startswith("level:"):
                levels[_parse_level_key(key[len("level:"):], f"--sigma.{key}")] = weight
            elif key.startswith("edge:"):
                horizontal[key[len("edge:"):]] = weight
            elif key.lstrip("-").isdigit():
                levels[int(key)] = weight
            else:
                horizontal[key] = weight
        return MonodromyType(levels=levels, horizontal=horizontal)

    try:
        data = yaml.safe_load(stripped)
    except yaml.YAMLError as exc:
        raise ParseError("--sigma", f"invalid YAML: {exc}") from None
    return parse_sigma(data, path="--sigma")


def parse_fixture(data: Union[bytes, str], source: str = "<fixture>") -> Fixture:
    """Convierte un documento en un `Fixture` con todas las referencias resueltas."""

    try:
        document = yaml.safe_load(data)
    except yaml.YAMLError as exc:
        raise ParseError(source, f"invalid document: {exc}") from None
    if not isinstance(document, Mapping):
        raise ParseError(source, "document must be a mapping")

    name = document.get("name")
    mu = tuple(
        _parse_int(value, f"mu[{index}]") for index, value in enumerate(_sequence(_require(document, "mu", ""), "mu"))
    )
    graph = _parse_graph(_mapping(_require(document, "graph", ""), "graph"))
    levels = _parse_level_homology(document.get("level_homology"), graph)
    cycles = _parse_cycles(document.get("basis"), graph, levels)
    model = AdaptedBasisModel(
        cycles=cycles,
        vanishing=_parse_vanishing(document.get("vanishing_cycles"), graph, cycles),
        levels=levels,
    )

    residues: Optional[Dict[str, Any]] = None
    if document.get("residues") is not None:
        residues = {}
        for key, value in _mapping(document["residues"], "residues").items():
            edge_id = str(key)
            if not graph.has_edge(edge_id):
                raise ParseError(f"residues.{edge_id}", f"unknown edge {edge_id!r}")
            residues[edge_id] = _parse_scalar(value, f"residues.{edge_id}")

    sigma = parse_sigma(document["sigma"]) if document.get("sigma") is not None else None
    fixture = Fixture(
        mu=mu,
        graph=graph,
        model=model,
        equations=_parse_equations(document.get("equations"), cycles),
        residues=residues,
        sigma=sigma,
        name=str(name) if name is not None else None,
    )
    logger.debug("Parsed fixture %s: n=%s, %s equations", source, fixture.n, len(fixture.equations))
    return fixture


def load_fixture(path: Path) -> Tuple[Fixture, str]:
    """Lee un fixture desde disco y devuelve también su digest sha256."""

    data = path.read_bytes()
    return parse_fixture(data, source=str(path)), fixture_digest(data)


def _sparse(names: Sequence[str], vector: Sequence[Any]) -> Dict[str, Any]:
    return {name: scalar_to_json(value) for name, value in zip(names, vector) if value}


def _dump_graph(graph: EnhancedLevelGraph) -> Dict[str, Any]:
    return {
        "vertices": [{"id": v.id, "genus": v.genus, "level": v.level} for v in graph.vertices],
        "edges": [{"id": e.id, "upper": e.upper, "lower": e.lower, "kappa": e.prongs} for e in graph.edges],
        "legs": [{"id": leg.id, "vertex": leg.vertex, "order": leg.order} for leg in graph.legs],
    }


def _dump_level_homology(levels: Mapping[int, LevelHomology]) -> Dict[str, Any]:
    dumped: Dict[str, Any] = {}
    for level in sorted(levels, reverse=True):
        homology = levels[level]
        edges: Dict[str, Any] = {}
        for edge_id, vector in homology.vertical.items():
            edges[edge_id] = _sparse(homology.basis, vector)
        for edge_id, (plus, minus) in homology.horizontal.items():
            edges[edge_id] = {"plus": _sparse(homology.basis, plus), "minus": _sparse(homology.basis, minus)}
        dumped[str(level)] = {"basis": list(homology.basis), "edges": edges}
    return dumped


def dump_fixture(fixture: Fixture) -> str:
    """Emisión JSON canónica; `parse_fixture(dump_fixture(f)) == f`."""

    model = fixture.model
    cycle_ids = model.cycle_ids()
    document: Dict[str, Any] = {}
    if fixture.name is not None:
        document["name"] = fixture.name
    document["mu"] = list(fixture.mu)
    document["graph"] = _dump_graph(fixture.graph)
    document["level_homology"] = _dump_level_homology(model.levels)
    document["basis"] = [
        {
            "id": cycle.id,
            "level": cycle.level,
            "kind": cycle.kind,
            "intersections": dict(cycle.intersections),
            "restriction": _sparse(model.levels[cycle.level].basis, cycle.restriction)
            if cycle.level in model.levels
            else {},
        }
        for cycle in model.cycles
    ]
    document["vanishing_cycles"] = {
        edge_id: {cycle_id: value for cycle_id, value in zip(cycle_ids, coordinates) if value}
        for edge_id, coordinates in model.vanishing.items()
    }
    document["equations"] = [_sparse(cycle_ids, row) for row in fixture.equations]
    if fixture.residues is not None:
        document["residues"] = {edge_id: scalar_to_json(value) for edge_id, value in fixture.residues.items()}
    if fixture.sigma is not None:
        document["sigma"] = {
            "levels": {str(level): value for level, value in sorted(fixture.sigma.levels.items(), reverse=True)},
            "horizontal": dict(sorted(fixture.sigma.horizontal.items())),
        }
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"
