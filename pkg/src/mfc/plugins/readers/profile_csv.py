from typing import Any, Dict, List

from mfc.core.errors import MalformedInputError
from mfc.core.models import SphericalProfile
from mfc.plugins.readers.common import csv_rows, parse_real
from mfc.plugins.registry import InputReader, PluginRegistry


class ProfileCsvReader(InputReader):
    """Either `node,value` rows or a single `poly,c0,c1,...` row (monomial coefficients).

    The ultraspherical index comes from options["lam"].
    """

    kind = "profile"

    @classmethod
    def get_supported_extensions(cls) -> List[str]:
        return [".csv"]

    def read(self, file_path: str, options: Dict[str, Any]) -> SphericalProfile:
        lam = float(options.get("lam", 0.5))
        rows = csv_rows(file_path)

        first_line, first = rows[0]
        if first[0].lower() == "poly":
            if len(rows) != 1:
                raise MalformedInputError(f"{file_path}: a 'poly' profile is a single row")
            if len(first) < 2:
                raise MalformedInputError(f"{file_path}:{first_line}: 'poly' needs at least one coefficient")
            coeffs = [parse_real(c, f"{file_path}:{first_line}") for c in first[1:]]
            return SphericalProfile(lam=lam, poly=coeffs)

        nodes, values = [], []
        for lineno, cells in rows:
            if len(cells) != 2:
                raise MalformedInputError(f"{file_path}:{lineno}: expected 'node,value'")
            nodes.append(parse_real(cells[0], f"{file_path}:{lineno}"))
            values.append(parse_real(cells[1], f"{file_path}:{lineno}"))
        if len(set(nodes)) != len(nodes):
            raise MalformedInputError(f"{file_path}: profile nodes must be distinct")
        return SphericalProfile(lam=lam, nodes=nodes, values=values)


PluginRegistry.register_reader(ProfileCsvReader)
