"""Tokenizing helpers shared by the CSV and JSON readers."""

import csv
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Tuple

from mfc.core.errors import MalformedInputError

_INF_TOKENS = {"inf": math.inf, "+inf": math.inf, "infinity": math.inf, "+infinity": math.inf}


def csv_rows(file_path: str) -> List[Tuple[int, List[str]]]:
    """Non-empty rows as (line number, stripped cells); lines starting with '#' are comments."""
    text = Path(file_path).read_text(encoding="utf-8-sig")
    rows = []
    for lineno, cells in enumerate(csv.reader(text.splitlines()), start=1):
        cells = [c.strip() for c in cells]
        if not cells or all(not c for c in cells) or cells[0].startswith("#"):
            continue
        rows.append((lineno, cells))
    if not rows:
        raise MalformedInputError(f"{file_path}: file is empty")
    return rows


def parse_real(token: Any, where: str, allow_inf: bool = False) -> float:
    """A real number from a CSV cell or JSON value; fractions such as '1/3' are accepted."""
    if isinstance(token, bool):
        raise MalformedInputError(f"{where}: expected a number, got {token!r}")
    if isinstance(token, (int, float)):
        value = float(token)
    else:
        text = str(token).strip()
        lowered = text.lower()
        if lowered in _INF_TOKENS:
            value = _INF_TOKENS[lowered]
        else:
            try:
                value = float(Fraction(text))
            except (ValueError, ZeroDivisionError):
                raise MalformedInputError(f"{where}: cannot parse {text!r} as a number") from None
    if math.isnan(value) or (math.isinf(value) and not allow_inf):
        raise MalformedInputError(f"{where}: {token!r} is not a finite number")
    return value


def parse_count(token: str, where: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise MalformedInputError(f"{where}: expected a positive integer, got {token!r}") from None
    if value < 1:
        raise MalformedInputError(f"{where}: expected a positive integer, got {value}")
    return value
