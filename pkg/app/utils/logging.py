"""Ayudas de configuración de logging."""
from __future__ import annotations

import logging
import sys
from typing import Union


def configure_logging(level: Union[int, str] = logging.WARNING) -> None:
    """Configura el logger raíz hacia stderr; stdout queda reservado para los reportes."""

    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )
