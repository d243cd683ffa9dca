from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Type

from app.commands.base import BaseCommand, CommandOptions
from app.commands.boundary import BoundaryCommand
from app.commands.forced import ForcedCommand
from app.commands.grc import GrcCommand
from app.commands.monodromy import MonodromyCommand
from app.commands.report import SECTION_MAP, ReportCommand
from app.commands.validate import ValidateCommand
from app.errors import BoundaryError, ConfigurationError, ParseError, UnknownGenerator
from app.integrations.fixtures import load_fixture, parse_sigma_option
from app.integrations.reports import Report, render_json, render_text
from app.settings import Settings, get_settings
from app.utils.logging import configure_logging

logger = logging.getLogger(__name__)

COMMAND_MAP: Dict[str, Type[BaseCommand]] = {
    "validate": ValidateCommand,
    "boundary": BoundaryCommand,
    "forced": ForcedCommand,
    "monodromy": MonodromyCommand,
    "grc": GrcCommand,
    "report": ReportCommand,
}

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2


def build_command(command: str, settings: Settings) -> BaseCommand:
    """Instancia el comando indicado con su configuración combinada."""

    command_cls = COMMAND_MAP.get(command)
    if not command_cls:
        raise ValueError(f"Unsupported command: {command}")

    command_config = settings.command_config(command)
    if command == "report":
        command_config["section_config"] = {name: settings.command_config(name) for name in SECTION_MAP}
    return command_cls(command, command_config)


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Boundary equations of linear subvarieties of strata")
    parser.add_argument("command", choices=sorted(COMMAND_MAP), help="Subcomando a ejecutar")
    parser.add_argument("fixture", nargs="?", help="Ruta al fixture (JSON o YAML)")
    parser.add_argument("--batch", help="Directorio con fixtures a procesar en orden")
    parser.add_argument("--format", choices=["text", "json"], help="Formato de salida")
    parser.add_argument("--sigma", help="Tipo de monodromía: archivo, pares '-1=3,e1=1' o mapa YAML")
    parser.add_argument("--generator", help="Generador de monodromía: 'level:-1', 'edge:e1', '-1' o 'e1'")
    parser.add_argument("--config", help="Ruta alternativa a config/commands.yaml")
    parser.add_argument("--log-level", help="Nivel de logging (DEBUG, INFO, WARNING, ...)")
    args = parser.parse_args(argv)
    if bool(args.fixture) == bool(args.batch):
        parser.error("give exactly one of FIXTURE or --batch")
    return args


def _fixture_paths(args: argparse.Namespace, settings: Settings) -> List[Path]:
    if args.fixture:
        return [Path(args.fixture)]
    directory = Path(args.batch)
    paths = {path for pattern in settings.batch_patterns for path in directory.glob(pattern) if path.is_file()}
    return sorted(paths)


def _error_report(command: str, source: str, digest: str, exc: BoundaryError, exit_code: int) -> Report:
    payload = {"error": {"rule": exc.rule, "subject": exc.subject or "", "message": str(exc)}}
    return Report(command=command, source=source, digest=digest, payload=payload, exit_code=exit_code)


def _run_one(command: BaseCommand, path: Path, options: CommandOptions) -> Report:
    digest = ""
    try:
        fixture, digest = load_fixture(path)
        logger.info("Running %s on %s (%s)", command.command_name, path, digest)
        result = command.run(fixture, options)
    except ParseError as exc:
        logger.error("Cannot parse %s: %s", path, exc)
        return _error_report(command.command_name, str(path), digest, exc, EXIT_PARSE)
    except (UnknownGenerator, ConfigurationError) as exc:
        logger.error("%s", exc)
        return _error_report(command.command_name, str(path), digest, exc, EXIT_PARSE)
    except BoundaryError as exc:
        logger.warning("%s failed on %s: %s", command.command_name, path, exc)
        return _error_report(command.command_name, str(path), digest, exc, EXIT_INVALID)
    except OSError as exc:
        logger.error("Cannot read %s: %s", path, exc)
        return _error_report(command.command_name, str(path), digest, ParseError(str(path), str(exc)), EXIT_PARSE)
    return Report(
        command=command.command_name,
        source=str(path),
        digest=digest,
        payload=result.payload,
        exit_code=result.exit_code,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    settings = get_settings(Path(args.config) if args.config else None)
    configure_logging((args.log_level or settings.log_level).upper())

    try:
        sigma = parse_sigma_option(args.sigma) if args.sigma else None
    except ParseError as exc:
        logger.error("Invalid --sigma: %s", exc)
        return EXIT_PARSE
    options = CommandOptions(sigma=sigma, generator=args.generator)

    command = build_command(args.command, settings)
    paths = _fixture_paths(args, settings)
    if not paths:
        logger.error("No fixtures found in %s", args.batch)
        return EXIT_PARSE

    reports = [_run_one(command, path, options) for path in paths]
    output_format = args.format or settings.output_format
    if reports:
        if output_format == "json":
            sys.stdout.write(render_json(reports, indent=settings.json_indent))
        else:
            sys.stdout.write(render_text(reports))
    logger.info("Processed %s fixtures", len(reports))
    return max((report.exit_code for report in reports), default=EXIT_OK)


if __name__ == "__main__":
    sys.exit(main())
