"""Comando `grc`: generadores de la condición global de residuos y de residuos horizontales por nivel."""
from __future__ import annotations

from app.commands.base import BaseCommand, CommandOptions, CommandResult
from app.homology import grc_span
from app.integrations.reports import findings_payload, grc_payload
from app.models import Fixture


class GrcCommand(BaseCommand):
    def run(self, fixture: Fixture, options: CommandOptions) -> CommandResult:
        report = self._validation_report(fixture)
        if not report.ok:
            return CommandResult(payload={"findings": findings_payload(report)}, exit_code=1)

        levels = [
            grc_payload(grc_span(fixture.model, fixture.graph, level), fixture.model.levels[level].basis)
            for level in fixture.graph.levels()
        ]
        return CommandResult(payload={"levels": levels})
