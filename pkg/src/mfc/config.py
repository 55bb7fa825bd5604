import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from mfc.core.errors import MalformedInputError

logger = logging.getLogger(__name__)

CONFIG_ENV = "MFC_CONFIG"
DEFAULT_CONFIG_PATH = Path.home() / ".mean_field_convexity.json"


def config_path(override: Optional[str] = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(CONFIG_ENV)
    return Path(env) if env else DEFAULT_CONFIG_PATH


@dataclass
class AppConfig:
    """User defaults; every field can be overridden by a command-line flag."""
    lang: str = "en-US"
    tol: float = 1e-9
    resolution: int = 8
    bodies: str = "4"
    n_max: int = 16
    quadrature_order: int = 128
    grid_cap: int = 1_000_000
    seed: int = 0
    samples: int = 200

    @classmethod
    def from_run(cls, run: "RunConfig") -> "AppConfig":
        """The defaults a resolved run would leave behind when remembered."""
        return cls(
            lang=run.lang,
            tol=run.tol,
            resolution=run.resolution,
            bodies=",".join(str(n) for n in run.bodies),
            n_max=run.n_max,
            quadrature_order=run.quadrature_order,
            grid_cap=run.grid_cap,
            seed=run.seed,
            samples=run.samples,
        )

    def save(self, path: Optional[str] = None) -> None:
        target = config_path(path)
        try:
            target.write_text(json.dumps(asdict(self), ensure_ascii=False, indent=2), encoding="utf-8")
        except OSError as e:
            logger.warning("could not save config to %s: %s", target, e)

    @staticmethod
    def load(path: Optional[str] = None) -> "AppConfig":
        source = config_path(path)
        if not source.exists():
            return AppConfig()
        try:
            data = json.loads(source.read_text(encoding="utf-8"))
            if not isinstance(data, dict):
                raise ValueError("top level must be an object")
            defaults = AppConfig()
            values = {}
            for f in fields(AppConfig):
                default = getattr(defaults, f.name)
                raw = data.get(f.name, default)
                values[f.name] = type(default)(raw)
            cfg = AppConfig(**values)
        except (OSError, ValueError, TypeError) as e:
            logger.warning("ignoring unreadable config %s: %s", source, e)
            return AppConfig()
        logger.debug("loaded config from %s", source)
        return cfg


@dataclass
class RunConfig:
    """Fully resolved settings of one CLI run; embedded verbatim in its report."""
    command: str
    inputs: Dict[str, str] = field(default_factory=dict)
    tol: float = 1e-9
    resolution: int = 8
    bodies: List[int] = field(default_factory=lambda: [4])
    n_max: int = 16
    quadrature_order: int = 128
    grid_cap: int = 1_000_000
    seed: int = 0
    samples: int = 200
    points: int = 12
    lam: Optional[float] = None
    eps: Optional[float] = None
    shrink: bool = False
    values: Optional[List[float]] = None
    spec: Optional[Dict[str, Any]] = None
    out: Optional[str] = None
    lang: str = "en-US"

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise MalformedInputError(f"tol must be positive, got {self.tol!r}")
        if self.points < 1:
            raise MalformedInputError(f"points per sphere sample must be >= 1, got {self.points}")

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)
