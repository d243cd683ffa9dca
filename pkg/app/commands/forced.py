"""Comando `forced`: relaciones de residuos forzadas por la monodromía de un arco de tipo σ."""
from __future__ import annotations

from app.boundary import rref
from app.commands.base import BaseCommand, CommandOptions, CommandResult
from app.errors import InvalidMonodromyType
from app.integrations.reports import findings_payload, form_payload, sigma_payload
from app.models import Fixture
from app.monodromy import arc_log, edge_weights, forced_residue_equations, preserves


class ForcedCommand(BaseCommand):
    def run(self, fixture: Fixture, options: CommandOptions) -> CommandResult:
        sigma = options.sigma or fixture.sigma
        if sigma is None:
            raise InvalidMonodromyType("No monodromy type given: use --sigma or a 'sigma' block", subject="sigma")

        report = self._validation_report(fixture)
        if not report.ok:
            return CommandResult(payload={"findings": findings_payload(report)}, exit_code=1)

        equations = rref(fixture.equations, fixture.n).rows
        forms = forced_residue_equations(fixture, equations, sigma)
        show_vacuous = self._get_flag("show_vacuous", True)
        weights = edge_weights(fixture, sigma)
        payload = {
            "sigma": sigma_payload(sigma),
            "edge_weights": {edge_id: weights[edge_id] for edge_id in sorted(weights)},
            "preserves": preserves(equations, arc_log(fixture, sigma)),
            "forms": [
                form_payload(fixture, equations[form.row], form)
                for form in forms
                if show_vacuous or not form.vacuous
            ],
        }
        return CommandResult(payload=payload)
