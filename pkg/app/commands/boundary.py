"""Comando `boundary`: ecuaciones de V^lim por nivel, con verificación libre de coordenadas opcional."""
from __future__ import annotations

import logging

from app.boundary import boundary_dimensions, boundary_equations, compare_blocks, coordfree_boundary, level_equations
from app.commands.base import BaseCommand, CommandOptions, CommandResult
from app.integrations.reports import boundary_payload, equation_payload, findings_payload
from app.models import Fixture

logger = logging.getLogger(__name__)


class BoundaryCommand(BaseCommand):
    def run(self, fixture: Fixture, options: CommandOptions) -> CommandResult:
        report = self._validation_report(fixture)
        if not report.ok:
            return CommandResult(payload={"findings": findings_payload(report)}, exit_code=1)

        result = boundary_equations(fixture)
        payload = boundary_payload(fixture, result, boundary_dimensions(fixture, result))
        exit_code = 0

        if self._get_flag("cross_check", True):
            differing = compare_blocks(result.blocks, coordfree_boundary(fixture))
            payload["cross_check"] = {"agrees": not differing, "levels": list(differing)}
            if differing:
                logger.warning("Coordinate-free boundary differs at levels %s", list(differing))
                exit_code = 1

        if self._get_flag("show_level_equations"):
            cycle_ids = fixture.model.cycle_ids()
            payload["level_equations"] = [
                {"level": level, "equations": [equation_payload(cycle_ids, row) for row in rows]}
                for level, rows in sorted(level_equations(fixture).items(), reverse=True)
            ]
        return CommandResult(payload=payload, exit_code=exit_code)
