"""Definición abstracta de los comandos del CLI."""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from app.homology import residue_consistency, validate_adapted_basis
from app.levels import validate_graph
from app.models import Fixture, MonodromyType, ValidationReport


@dataclass(frozen=True)
class CommandOptions:
    sigma: Optional[MonodromyType] = None
    generator: Optional[str] = None


@dataclass
class CommandResult:
    payload: Dict[str, Any] = field(default_factory=dict)
    exit_code: int = 0


class BaseCommand(ABC):
    """Comando base que provee estructura compartida para los subcomandos."""

    def __init__(self, command_name: str, command_config: Dict[str, Any]) -> None:
        self.command_name = command_name
        self.command_config = command_config

    @abstractmethod
    def run(self, fixture: Fixture, options: CommandOptions) -> CommandResult:
        """Ejecuta el comando sobre un fixture ya leído."""

    def _validation_report(self, fixture: Fixture) -> ValidationReport:
        """Valida grafo, base adaptada y, si vienen declarados, los residuos."""

        report = validate_graph(fixture.graph, fixture.mu)
        if not report.ok:
            return report
        report = report.merged(validate_adapted_basis(fixture.model, fixture.graph))
        if report.ok and fixture.residues is not None:
            report = report.merged(residue_consistency(fixture.model, fixture.graph, fixture.residues))
        return report

    def _get_flag(self, key: str, default: bool = False) -> bool:
        """Obtiene un flag booleano de la configuración del comando."""

        return bool(self.command_config.get(key, default))

    def _get_list(self, key: str) -> List[str]:
        value = self.command_config.get(key) or []
        return [str(item) for item in value]
