import csv
import io
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

from mfc.core.errors import UnsupportedFormatError
from mfc.core.models import Report
from mfc.plugins.registry import OutputWriter, PluginRegistry


def format_cell(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def render_rows(rows: List[List[Any]]) -> str:
    buf = io.StringIO()
    # RFC 4180 line endings
    writer = csv.writer(buf, lineterminator="\r\n")
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


class CsvWriter(OutputWriter):
    @classmethod
    def get_supported_extensions(cls) -> List[str]:
        return [".csv"]

    def write(self, report: Report, output_path: str, options: Dict[str, Any]) -> None:
        if report.table is None:
            raise UnsupportedFormatError(f"'{report.command}' produces no table; use a .json output")
        out_p = Path(output_path)
        out_p.parent.mkdir(parents=True, exist_ok=True)
        with out_p.open("w", encoding="utf-8", newline="") as fh:
            fh.write(render_rows(report.table))


PluginRegistry.register_writer(CsvWriter)
