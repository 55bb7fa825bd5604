from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Tuple, Type

from mfc.core.models import Report


class InputReader(ABC):
    # data kind this reader produces: "kernel", "space", "profile" or "measure"
    kind: str = ""

    @classmethod
    @abstractmethod
    def get_supported_extensions(cls) -> List[str]:
        """e.g., ['.csv']"""
        pass

    @abstractmethod
    def read(self, file_path: str, options: Dict[str, Any]) -> Any:
        pass


class OutputWriter(ABC):
    @classmethod
    @abstractmethod
    def get_supported_extensions(cls) -> List[str]:
        """e.g., ['.json']"""
        pass

    @abstractmethod
    def write(self, report: Report, output_path: str, options: Dict[str, Any]) -> None:
        pass


class PluginRegistry:
    _readers: Dict[Tuple[str, str], Type[InputReader]] = {}
    _writers: Dict[str, Type[OutputWriter]] = {}

    @classmethod
    def register_reader(cls, reader_cls: Type[InputReader]) -> None:
        for ext in reader_cls.get_supported_extensions():
            cls._readers[(reader_cls.kind, ext.lower())] = reader_cls

    @classmethod
    def register_writer(cls, writer_cls: Type[OutputWriter]) -> None:
        for ext in writer_cls.get_supported_extensions():
            cls._writers[ext.lower()] = writer_cls

    @classmethod
    def get_reader(cls, kind: str, ext: str) -> Optional[Type[InputReader]]:
        return cls._readers.get((kind, ext.lower()))

    @classmethod
    def get_writer(cls, ext: str) -> Optional[Type[OutputWriter]]:
        return cls._writers.get(ext.lower())

    @classmethod
    def available_inputs(cls, kind: Optional[str] = None) -> List[str]:
        return sorted({ext for k, ext in cls._readers if kind is None or k == kind})

    @classmethod
    def available_outputs(cls) -> List[str]:
        return sorted(cls._writers.keys())
