from typing import Any, Dict, List

from mfc.core.errors import MalformedInputError
from mfc.core.models import DiscreteSpace
from mfc.plugins.readers.common import csv_rows, parse_count, parse_real
from mfc.plugins.registry import InputReader, PluginRegistry


class SpaceCsvReader(InputReader):
    """First row `m,d`, then m rows of d coordinates."""

    kind = "space"

    @classmethod
    def get_supported_extensions(cls) -> List[str]:
        return [".csv"]

    def read(self, file_path: str, options: Dict[str, Any]) -> DiscreteSpace:
        rows = csv_rows(file_path)
        head_line, head = rows[0]
        if len(head) != 2:
            raise MalformedInputError(f"{file_path}:{head_line}: first row must be 'm,d'")
        m = parse_count(head[0], f"{file_path}:{head_line}")
        d = parse_count(head[1], f"{file_path}:{head_line}")
        body = rows[1:]
        if len(body) != m:
            raise MalformedInputError(f"{file_path}: expected {m} points, found {len(body)}")

        points = []
        for lineno, cells in body:
            if len(cells) != d:
                raise MalformedInputError(f"{file_path}:{lineno}: expected {d} coordinates, found {len(cells)}")
            points.append([parse_real(c, f"{file_path}:{lineno}") for c in cells])
        return DiscreteSpace(points)


PluginRegistry.register_reader(SpaceCsvReader)
