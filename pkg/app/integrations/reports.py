"""Reportes deterministas: payloads serializables y su emisión en texto (YAML) o JSON."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Sequence

import yaml

from app.boundary import BoundaryEquationSet, LevelBlock, LogEntry
from app.homology import GrcSpan
from app.models import Fixture, MonodromyType, ValidationReport
from app.monodromy import MonodromyOperator, ResidueForm
from app.utils.scalars import format_linear_form, scalar_to_json


@dataclass
class Report:
    command: str
    source: str
    digest: str
    payload: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "fixture": self.source,
            "digest": self.digest,
            "exit_code": self.exit_code,
            "result": self.payload,
        }


def equation_payload(names: Sequence[str], vector: Sequence[Any]) -> Dict[str, Any]:
    return {
        "text": format_linear_form(names, vector),
        "coefficients": {name: scalar_to_json(value) for name, value in zip(names, vector) if value},
    }


def findings_payload(report: ValidationReport) -> List[Dict[str, str]]:
    ordered = sorted(report.findings, key=lambda finding: (finding.subject, finding.rule, finding.message))
    return [{"rule": f.rule, "subject": f.subject, "message": f.message} for f in ordered]


def block_payload(block: LevelBlock, dimension: int) -> Dict[str, Any]:
    return {
        "level": block.level,
        "tag": block.tag,
        "dimension": dimension,
        "equations": [equation_payload(block.basis, row) for row in block.equations],
    }


def log_payload(fixture: Fixture, entry: LogEntry) -> Dict[str, Any]:
    payload = {
        "row": entry.row,
        "top_level": entry.top_level,
        "reason": entry.reason,
        "equation": equation_payload(fixture.model.cycle_ids(), entry.equation),
    }
    if entry.edges:
        payload["edges"] = list(entry.edges)
    return payload


def boundary_payload(fixture: Fixture, result: BoundaryEquationSet, dimensions: Mapping[int, int]) -> Dict[str, Any]:
    return {
        "levels": [block_payload(result.blocks[level], dimensions[level]) for level in sorted(result.blocks, reverse=True)],
        "log": [log_payload(fixture, entry) for entry in result.log],
    }


def grc_payload(span: GrcSpan, basis: Sequence[str]) -> Dict[str, Any]:
    return {
        "level": span.level,
        "rank": span.rank,
        "residue_conditions": [
            {"edges": list(edges), "generator": equation_payload(basis, vector)} for edges, vector in span.vertical
        ],
        "matching_residues": [
            {"edge": edge_id, "generator": equation_payload(basis, vector)} for edge_id, vector in span.horizontal
        ],
    }


def form_payload(fixture: Fixture, equation: Sequence[Any], form: ResidueForm) -> Dict[str, Any]:
    return {
        "row": form.row,
        "equation": format_linear_form(fixture.model.cycle_ids(), equation),
        "form": format_linear_form(form.symbols, form.raw, prefix="r_"),
        "reduced": str(form),
        "vacuous": form.vacuous,
    }


def operator_payload(fixture: Fixture, operator: MonodromyOperator) -> Dict[str, Any]:
    return {"tag": operator.tag, "columns": list(fixture.model.cycle_ids()), "matrix": operator.entries()}


def sigma_payload(sigma: MonodromyType) -> Dict[str, Any]:
    return {
        "levels": {str(level): sigma.levels[level] for level in sorted(sigma.levels, reverse=True)},
        "horizontal": {edge_id: sigma.horizontal[edge_id] for edge_id in sorted(sigma.horizontal)},
    }


def render_json(reports: Sequence[Report], indent: int = 2) -> str:
    body: Any = reports[0].to_dict() if len(reports) == 1 else [report.to_dict() for report in reports]
    return json.dumps(body, indent=indent, ensure_ascii=False) + "\n"


def render_text(reports: Sequence[Report]) -> str:
    blocks = [
        yaml.safe_dump(report.to_dict(), sort_keys=False, allow_unicode=True, default_flow_style=False)
        for report in reports
    ]
    return "---\n".join(blocks)
