"""Comando `report`: agrega validate, boundary, grc y forced (si hay σ)."""
from __future__ import annotations

from typing import Any, Dict, Type

from app.commands.base import BaseCommand, CommandOptions, CommandResult
from app.commands.boundary import BoundaryCommand
from app.commands.forced import ForcedCommand
from app.commands.grc import GrcCommand
from app.commands.validate import ValidateCommand
from app.errors import ConfigurationError
from app.models import Fixture

SECTION_MAP: Dict[str, Type[BaseCommand]] = {
    "validate": ValidateCommand,
    "boundary": BoundaryCommand,
    "grc": GrcCommand,
    "forced": ForcedCommand,
}

DEFAULT_SECTIONS = ["validate", "boundary", "grc", "forced"]


class ReportCommand(BaseCommand):
    def run(self, fixture: Fixture, options: CommandOptions) -> CommandResult:
        sections = self._get_list("sections") or DEFAULT_SECTIONS
        section_config: Dict[str, Any] = self.command_config.get("section_config", {})

        payload: Dict[str, Any] = {}
        exit_code = 0
        for section in sections:
            command_cls = SECTION_MAP.get(section)
            if not command_cls:
                raise ConfigurationError(f"Unsupported report section: {section}", subject=section)
            if section == "forced" and options.sigma is None and fixture.sigma is None:
                continue
            command = command_cls(section, section_config.get(section, {}))
            result = command.run(fixture, options)
            payload[section] = result.payload
            exit_code = max(exit_code, result.exit_code)
            if section == "validate" and result.exit_code:
                break
        return CommandResult(payload=payload, exit_code=exit_code)
