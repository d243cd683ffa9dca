"""Comando `monodromy`: matrices T_k, sus logaritmos N_k y N_σ."""
from __future__ import annotations

from app.commands.base import BaseCommand, CommandOptions, CommandResult
from app.integrations.reports import findings_payload, operator_payload
from app.models import Fixture
from app.monodromy import arc_log, generators, monodromy_log, parse_generator, twist_matrix


class MonodromyCommand(BaseCommand):
    def run(self, fixture: Fixture, options: CommandOptions) -> CommandResult:
        report = self._validation_report(fixture)
        if not report.ok:
            return CommandResult(payload={"findings": findings_payload(report)}, exit_code=1)

        if options.generator is None and options.sigma is not None:
            return CommandResult(payload={"operators": [operator_payload(fixture, arc_log(fixture, options.sigma))]})

        selected = [parse_generator(options.generator)] if options.generator else list(generators(fixture))
        operators = []
        for generator in selected:
            operators.append(operator_payload(fixture, twist_matrix(fixture, generator)))
            if self._get_flag("show_log"):
                operators.append(operator_payload(fixture, monodromy_log(fixture, generator)))
        return CommandResult(payload={"operators": operators})
