import json
from pathlib import Path
from typing import Any, Dict, List, Union

from mfc.core.errors import MalformedInputError
from mfc.core.models import Mixture, MixtureAtom, ProbVector
from mfc.plugins.readers.common import parse_real
from mfc.plugins.registry import InputReader, PluginRegistry


def _vector(values: Any, where: str) -> ProbVector:
    if not isinstance(values, list):
        raise MalformedInputError(f"{where}: expected a list of weights")
    return ProbVector([parse_real(v, where) for v in values])


class MeasureJsonReader(InputReader):
    """`{"weights": [...]}` (or a bare list) gives a ProbVector;
    `{"atoms": [{"w": ..., "q": [...]}, ...]}` gives a Mixture. Weights may be fraction strings."""

    kind = "measure"

    @classmethod
    def get_supported_extensions(cls) -> List[str]:
        return [".json"]

    def read(self, file_path: str, options: Dict[str, Any]) -> Union[ProbVector, Mixture]:
        try:
            data = json.loads(Path(file_path).read_text(encoding="utf-8-sig"))
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"{file_path}: invalid JSON ({e.msg} at line {e.lineno})") from None

        if isinstance(data, list):
            return _vector(data, file_path)
        if not isinstance(data, dict):
            raise MalformedInputError(f"{file_path}: expected an object with 'weights' or 'atoms'")
        if "weights" in data:
            return _vector(data["weights"], f"{file_path}: weights")
        if "atoms" in data and isinstance(data["atoms"], list):
            atoms = []
            for i, atom in enumerate(data["atoms"]):
                where = f"{file_path}: atoms[{i}]"
                if not isinstance(atom, dict) or "w" not in atom or "q" not in atom:
                    raise MalformedInputError(f"{where}: each atom needs 'w' and 'q'")
                atoms.append(MixtureAtom(parse_real(atom["w"], where), _vector(atom["q"], where)))
            return Mixture(tuple(atoms))
        raise MalformedInputError(f"{file_path}: expected an object with 'weights' or 'atoms'")


PluginRegistry.register_reader(MeasureJsonReader)
