from typing import Any, Dict, List

from mfc.core.errors import MalformedInputError
from mfc.core.models import KernelMatrix
from mfc.plugins.readers.common import csv_rows, parse_count, parse_real
from mfc.plugins.registry import InputReader, PluginRegistry


class KernelCsvReader(InputReader):
    """First row m, then m rows of m entries; `inf` marks an infinite cost."""

    kind = "kernel"

    @classmethod
    def get_supported_extensions(cls) -> List[str]:
        return [".csv"]

    def read(self, file_path: str, options: Dict[str, Any]) -> KernelMatrix:
        rows = csv_rows(file_path)
        head_line, head = rows[0]
        if len(head) != 1:
            raise MalformedInputError(f"{file_path}:{head_line}: first row must hold only the size m")
        m = parse_count(head[0], f"{file_path}:{head_line}")
        body = rows[1:]
        if len(body) != m:
            raise MalformedInputError(f"{file_path}: expected {m} kernel rows, found {len(body)}")

        entries = []
        for lineno, cells in body:
            if len(cells) != m:
                raise MalformedInputError(f"{file_path}:{lineno}: expected {m} entries, found {len(cells)}")
            entries.append([parse_real(c, f"{file_path}:{lineno}", allow_inf=True) for c in cells])
        return KernelMatrix(entries)


PluginRegistry.register_reader(KernelCsvReader)
