"""Escalares exactos: racionales gaussianos sobre `QQ_I` y su representación en texto."""
from __future__ import annotations

import re
from typing import Any, Sequence, Union

from sympy.polys.domains import QQ, QQ_I

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")

JsonScalar = Union[int, str]


def _parse_rational(text: str) -> Any:
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"Invalid rational: {text!r}")
    if "/" in text:
        numerator, denominator = text.split("/")
        if int(denominator) == 0:
            raise ValueError(f"Zero denominator in {text!r}")
        return QQ(int(numerator), int(denominator))
    return QQ(int(text))


def _parse_imaginary_coefficient(text: str) -> Any:
    if text in {"", "+"}:
        return QQ(1)
    if text == "-":
        return QQ(-1)
    return _parse_rational(text)


def parse_scalar(value: Any) -> Any:
    """Convierte un entero o un texto "p/q" / "p/q+r/s*i" en un elemento de QQ_I.

    Rechaza floats y booleanos: los datos de entrada deben ser exactos.
    """

    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"Inexact scalar: {value!r}")
    if isinstance(value, int):
        return QQ_I(value)
    if not isinstance(value, str):
        raise ValueError(f"Unsupported scalar type: {type(value).__name__}")

    text = value.replace(" ", "")
    if not text:
        raise ValueError("Empty scalar")
    if not text.endswith("i"):
        return QQ_I(_parse_rational(text), 0)

    body = text[:-1]
    if body.endswith("*"):
        body = body[:-1]
    split = max(body.rfind("+"), body.rfind("-"))
    if split <= 0:
        return QQ_I(0, _parse_imaginary_coefficient(body))
    real = _parse_rational(body[:split])
    imaginary = _parse_imaginary_coefficient(body[split:])
    return QQ_I(real, imaginary)


def to_scalar(value: Any) -> Any:
    """Normaliza enteros, elementos de QQ/QQ_I o texto a QQ_I."""

    if isinstance(value, QQ_I.dtype):
        return value
    if isinstance(value, (int, str)) and not isinstance(value, bool):
        return parse_scalar(value)
    return QQ_I.convert(value)


def _format_rational(value: Any) -> str:
    numerator = int(value.numerator)
    denominator = int(value.denominator)
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def format_scalar(value: Any) -> str:
    """Formato canónico: "p/q", "r/s*i" o "p/q+r/s*i"."""

    value = to_scalar(value)
    real, imaginary = value.x, value.y
    if not imaginary:
        return _format_rational(real)

    if imaginary == 1:
        imaginary_text = "i"
    elif imaginary == -1:
        imaginary_text = "-i"
    else:
        imaginary_text = f"{_format_rational(imaginary)}*i"

    if not real:
        return imaginary_text
    sign = "" if imaginary_text.startswith("-") else "+"
    return f"{_format_rational(real)}{sign}{imaginary_text}"


def scalar_to_json(value: Any) -> JsonScalar:
    """Enteros reales salen como `int`; el resto como texto exacto."""

    value = to_scalar(value)
    if not value.y and value.x.denominator == 1:
        return int(value.x.numerator)
    return format_scalar(value)


def is_real(value: Any) -> bool:
    return not to_scalar(value).y


def format_linear_form(names: Sequence[str], coefficients: Sequence[Any], prefix: str = "") -> str:
    """Texto "3*r_e1 - 10/3*r_e2"; la forma nula se escribe "0"."""

    terms = []
    for name, coefficient in zip(names, coefficients):
        coefficient = to_scalar(coefficient)
        if not coefficient:
            continue
        text = format_scalar(coefficient)
        symbol = f"{prefix}{name}"
        if text == "1":
            term = symbol
        elif text == "-1":
            term = f"-{symbol}"
        elif coefficient.y and coefficient.x:
            term = f"({text})*{symbol}"
        else:
            term = f"{text}*{symbol}"
        terms.append(term)
    if not terms:
        return "0"
    rendered = terms[0]
    for term in terms[1:]:
        rendered += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return rendered
