import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from mfc.core.models import (
    EigenResult,
    ExpansionReport,
    Mixture,
    PDReport,
    ProbVector,
    Report,
    SphereCheck,
    SymmetricCoupling,
    Verdict,
)
from mfc.plugins.registry import OutputWriter, PluginRegistry


def plain(value: Any) -> Any:
    """JSON-safe copy: numpy values become Python ones, non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.generic):
        return plain(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return "nan"
        return "inf" if value > 0 else "-inf"
    return value


def render(payload: Dict[str, Any]) -> str:
    # insertion order is kept; floats use the shortest round-trip repr
    return json.dumps(plain(payload), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# Domain types in their documented JSON shapes
# ---------------------------------------------------------------------------

def encode_pd_report(r: PDReport) -> Dict[str, Any]:
    return {
        "mode": r.mode,
        "min_eigenvalue": r.min_eigenvalue,
        "verdict": r.verdict,
        "witness": None if r.witness is None else r.witness.tolist(),
        "tol": r.tol,
    }


def encode_prob(q: ProbVector) -> Dict[str, Any]:
    return {"weights": q.weights.tolist()}


def encode_mixture(nu: Optional[Mixture]) -> Optional[Dict[str, Any]]:
    if nu is None:
        return None
    return {"atoms": [{"w": a.weight, "q": a.q.weights.tolist()} for a in nu.atoms]}


def encode_verdict(v: Verdict) -> Dict[str, Any]:
    return {
        "decorrelated": v.decorrelated,
        "optimal_value": v.optimal_value,
        "product_value": v.product_value,
        "gap": v.gap,
        "unique_flag": v.unique_flag,
        "witness": encode_mixture(v.witness),
        "resolution": v.resolution,
        "tol": v.tol,
        "lp_value": v.lp_value,
        "lp_mixture": encode_mixture(v.lp_mixture),
    }


def encode_coupling(g: SymmetricCoupling) -> Dict[str, Any]:
    return {"N": g.N, "m": g.m, "states": g.states.tolist(), "weights": g.weights.tolist()}


def encode_expansion(r: ExpansionReport) -> Dict[str, Any]:
    return {
        "lam": r.lam,
        "n_max": r.n_max,
        "quadrature_order": r.quadrature_order,
        "coefficients": r.coefficients.tolist(),
        "classification": r.classification,
        "first_negative": r.first_negative,
        "tol": r.tol,
        "reconstruction_residual": r.reconstruction_residual,
    }


def encode_sphere_check(s: SphereCheck) -> Dict[str, Any]:
    return {
        "samples": s.samples,
        "points": s.points,
        "dimension": s.dimension,
        "seed": s.seed,
        "min_eigenvalue": s.min_eigenvalue,
        "failures": s.failures,
    }


def encode_eigen(e: EigenResult) -> Dict[str, Any]:
    return {"eigenvalues": e.eigenvalues.tolist(), "eigenvectors": e.eigenvectors.T.tolist(), "sweeps": e.sweeps}


class JsonWriter(OutputWriter):
    @classmethod
    def get_supported_extensions(cls) -> List[str]:
        return [".json"]

    def write(self, report: Report, output_path: str, options: Dict[str, Any]) -> None:
        out_p = Path(output_path)
        out_p.parent.mkdir(parents=True, exist_ok=True)
        with out_p.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write(render(report.payload))


PluginRegistry.register_writer(JsonWriter)
