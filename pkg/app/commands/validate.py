"""Comando `validate`: invariantes del grafo, de la base adaptada y de los residuos."""
from __future__ import annotations

from app.commands.base import BaseCommand, CommandOptions, CommandResult
from app.integrations.reports import findings_payload
from app.levels import boundary_codimension, total_genus
from app.models import Fixture


class ValidateCommand(BaseCommand):
    def run(self, fixture: Fixture, options: CommandOptions) -> CommandResult:
        report = self._validation_report(fixture)
        payload = {
            "valid": report.ok,
            "genus": total_genus(fixture.graph),
            "levels": list(fixture.graph.levels()),
            "codimension": boundary_codimension(fixture.graph),
            "findings": findings_payload(report),
        }
        return CommandResult(payload=payload, exit_code=0 if report.ok else 1)
