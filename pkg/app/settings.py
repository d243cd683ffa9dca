"""Configuración de la aplicación y carga de ajustes."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parents[1] / "config" / "commands.yaml"
DEFAULT_BATCH_PATTERNS = ["*.json", "*.yaml", "*.yml"]


@dataclass
class Settings:
    """Contiene los ajustes de ejecución cargados desde YAML."""

    commands_config: Dict[str, Any]
    default_command_config: Dict[str, Any]
    command_specific_config: Dict[str, Any]
    batch_patterns: List[str] = field(default_factory=lambda: list(DEFAULT_BATCH_PATTERNS))

    @property
    def output_format(self) -> str:
        return str(self.default_command_config.get("format", "text"))

    @property
    def json_indent(self) -> int:
        return int(self.default_command_config.get("json_indent", 2))

    @property
    def log_level(self) -> str:
        return str(self.default_command_config.get("log_level", "WARNING")).upper()

    def command_config(self, command: str) -> Dict[str, Any]:
        """Configuración `default` actualizada con la del comando."""

        merged = self.default_command_config.copy()
        merged.update(self.command_specific_config.get(command, {}) or {})
        return merged


def load_yaml_config(path: Path) -> Dict[str, Any]:
    """Carga la configuración YAML de los comandos."""

    with path.open("r", encoding="utf-8") as file:
        data: Dict[str, Any] = yaml.safe_load(file) or {}
    return data


def get_settings(config_path: Optional[Path] = None) -> Settings:
    """Lee la configuración YAML; no se consultan variables de entorno."""

    config_data = load_yaml_config(config_path or DEFAULT_CONFIG_PATH)
    batch = config_data.get("batch", {}) or {}
    return Settings(
        commands_config=config_data,
        default_command_config=config_data.get("default", {}) or {},
        command_specific_config=config_data.get("commands", {}) or {},
        batch_patterns=list(batch.get("patterns") or DEFAULT_BATCH_PATTERNS),
    )
