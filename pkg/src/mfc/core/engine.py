import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

import mfc
import mfc.plugins  # Ensure plugins are registered
from mfc.config import RunConfig
from mfc.core import basis, energy, mixture_opt, nbody, space_kernel, spectral
from mfc.core.errors import (
    InfiniteEntryError,
    KernelSpecError,
    MalformedInputError,
    MfcError,
    UnsupportedFormatError,
    WitnessError,
)
from mfc.core.models import (
    Circulant,
    DiagPolicy,
    Gaussian,
    KernelMatrix,
    KernelSpec,
    LogKernel,
    Mixture,
    PowerLaw,
    ProbVector,
    Report,
)
from mfc.plugins.registry import PluginRegistry
from mfc.plugins.writers.json_writer import (
    encode_coupling,
    encode_eigen,
    encode_expansion,
    encode_mixture,
    encode_pd_report,
    encode_prob,
    encode_sphere_check,
    encode_verdict,
)
from mfc.i18n.i18n import i18n
from mfc.utils.digest import file_sha256

logger = logging.getLogger(__name__)

# input role -> data kind understood by the reader registry
INPUT_KINDS = {"kernel": "kernel", "marginal": "measure", "space": "space", "profile": "profile"}


def kernel_spec_from_dict(spec: Dict[str, Any]) -> KernelSpec:
    """Recipe used by `build`: {"kind": power_law|log|gaussian|circulant, ...parameters}."""
    kind = spec.get("kind")
    diag = spec.get("diag")
    if diag is None or str(diag).lower() == "inf":
        policy = DiagPolicy.infinite()
    else:
        try:
            policy = DiagPolicy.cap(float(diag))
        except ValueError:
            raise KernelSpecError(f"diagonal must be a number or 'inf', got {diag!r}") from None
    if kind == "power_law":
        if spec.get("s") is None:
            raise KernelSpecError("power_law needs an exponent s")
        return PowerLaw(float(spec["s"]), policy)
    if kind == "log":
        return LogKernel(policy)
    if kind == "gaussian":
        return Gaussian(float(spec.get("width", 1.0)))
    if kind == "circulant":
        if not spec.get("profile"):
            raise KernelSpecError("circulant needs profile values")
        return Circulant(tuple(float(v) for v in spec["profile"]))
    raise KernelSpecError(f"unknown kernel kind {kind!r}")


class AnalysisEngine:
    """
    Routes one CLI run: loads inputs through the reader registry, calls the core modules,
    and assembles the report. Knows nothing about parsing or output formats.
    """

    @staticmethod
    def load(role: str, path: str, options: Optional[Dict[str, Any]] = None) -> Any:
        kind = INPUT_KINDS[role]
        ext = Path(path).suffix.lower()
        reader_cls = PluginRegistry.get_reader(kind, ext)
        if not reader_cls:
            raise UnsupportedFormatError(i18n.t("err_no_reader", kind=kind, ext=ext))
        logger.info("reading %s from %s", kind, path)
        try:
            return reader_cls().read(path, options or {})
        except MfcError as e:
            if path in str(e):
                raise
            # name the offending file in the diagnostic
            raise type(e)(f"{path}: {e}") from e

    @staticmethod
    def write(report: Report, output_path: str, options: Optional[Dict[str, Any]] = None) -> None:
        ext = Path(output_path).suffix.lower()
        writer_cls = PluginRegistry.get_writer(ext)
        if not writer_cls:
            raise UnsupportedFormatError(i18n.t("err_no_writer", ext=ext))
        writer_cls().write(report, output_path, options or {})
        logger.info("wrote %s report to %s", report.command, output_path)

    @classmethod
    def run(cls, cfg: RunConfig) -> Report:
        handlers: Dict[str, Callable[[RunConfig], Report]] = {
            "analyze": cls.analyze,
            "verdict": cls.verdict,
            "nbody": cls.nbody,
            "expand": cls.expand,
            "spectrum": cls.spectrum,
            "witness": cls.witness,
            "build": cls.build,
        }
        if cfg.command not in handlers:
            raise MalformedInputError(f"unknown command {cfg.command!r}")
        logger.info("running %s", cfg.command)
        report = handlers[cfg.command](cfg)
        report.payload = cls._envelope(cfg, report.payload)
        return report

    @staticmethod
    def _envelope(cfg: RunConfig, result: Dict[str, Any]) -> Dict[str, Any]:
        inputs = {role: {"path": path, "sha256": file_sha256(path)} for role, path in sorted(cfg.inputs.items())}
        return {
            "tool": {"name": "mfc", "version": mfc.__version__},
            "command": cfg.command,
            "config": cfg.as_dict(),
            "inputs": inputs,
            "result": result,
        }

    @classmethod
    def _required(cls, cfg: RunConfig, role: str) -> Any:
        path = cfg.inputs.get(role)
        if not path:
            raise MalformedInputError(i18n.t("err_missing_flag", command=cfg.command, flag=f"--{role}"))
        options = {"lam": cfg.lam} if role == "profile" and cfg.lam is not None else {}
        return cls.load(role, path, options)

    @classmethod
    def _kernel_and_marginal(cls, cfg: RunConfig):
        c = cls._required(cfg, "kernel")
        mu = cls._required(cfg, "marginal")
        if not isinstance(mu, ProbVector):
            raise MalformedInputError(f"{cfg.inputs['marginal']}: the marginal must be a 'weights' vector")
        return c, mu

    # -- subcommands ---------------------------------------------------------

    @classmethod
    def analyze(cls, cfg: RunConfig) -> Report:
        c: KernelMatrix = cls._required(cfg, "kernel")
        if not c.is_finite:
            raise InfiniteEntryError(f"{cfg.inputs['kernel']}: kernel has infinite entries; cannot classify")
        full = spectral.pd_test(c, cfg.tol)
        balanced = spectral.balanced_pd_test(c, cfg.tol)
        result = {
            "m": c.m,
            "full": encode_pd_report(full),
            "balanced": encode_pd_report(balanced),
            "eigenvalues": spectral.symmetric_eigen(c).eigenvalues.tolist(),
            "balanced_eigenvalues": spectral.balanced_spectrum(c).eigenvalues.tolist(),
        }
        return Report(command="analyze", payload=result)

    @classmethod
    def verdict(cls, cfg: RunConfig) -> Report:
        c, mu = cls._kernel_and_marginal(cfg)
        v = mixture_opt.decorrelation_verdict(c, mu, cfg.resolution, cfg.tol, cfg.grid_cap)
        result = encode_verdict(v)
        result["witness_gap"] = None if v.witness is None else energy.convexity_gap(c, v.witness)
        return Report(command="verdict", payload=result, decorrelated=v.decorrelated)

    @classmethod
    def nbody(cls, cfg: RunConfig) -> Report:
        c, mu = cls._kernel_and_marginal(cfg)
        product = energy.energy(c, mu)
        rows: List[Dict[str, Any]] = []
        for n in cfg.bodies:
            gamma, value = nbody.solve_nbody_lp(c, mu, n, cfg.grid_cap)
            rows.append({"N": n, "value": value, "coupling": encode_coupling(gamma)})
        values = [r["value"] for r in rows]
        eff = spectral.effective_tol(c.entries[np.isfinite(c.entries)], cfg.tol)
        result = {
            "marginal": encode_prob(mu),
            "product_value": product,
            "rows": rows,
            "nondecreasing": all(b >= a - eff for a, b in zip(values, values[1:])),
            "below_product": all(v <= product + eff for v in values),
        }
        table: List[List[Any]] = [["N", "value"]] + [[r["N"], r["value"]] for r in rows]
        return Report(command="nbody", payload=result, table=table)

    @classmethod
    def expand(cls, cfg: RunConfig) -> Report:
        profile = cls._required(cfg, "profile")
        rep = basis.expand_profile(profile, cfg.n_max, cfg.quadrature_order, cfg.tol)
        result = encode_expansion(rep)
        result["sphere_check"] = None
        if cfg.samples > 0 and rep.classification != "not_PD":
            try:
                check = basis.sphere_check(profile, cfg.samples, cfg.points, cfg.seed)
                result["sphere_check"] = encode_sphere_check(check)
            except KernelSpecError as e:
                # lam with no sphere behind it, or a node table not covering [-1, 1]
                logger.info("sphere check skipped: %s", e)
        table: List[List[Any]] = [["n", "coefficient"]] + [[n, a] for n, a in enumerate(rep.coefficients.tolist())]
        return Report(command="expand", payload=result, table=table)

    @classmethod
    def spectrum(cls, cfg: RunConfig) -> Report:
        if cfg.values:
            spec = basis.circulant_spectrum(cfg.values)
            eff = spectral.effective_tol(np.asarray(cfg.values, dtype=float), cfg.tol)
            rest = spec[1:]
            result: Dict[str, Any] = {
                "source": "circulant",
                "profile": list(cfg.values),
                "spectrum": spec.tolist(),
                "verdict": spectral.verdict_for(float(spec.min()), eff),
                "balanced_verdict": spectral.verdict_for(float(rest.min()), eff) if rest.size else "positive_definite",
            }
            table = [["k", "eigenvalue"]] + [[k, lam] for k, lam in enumerate(spec.tolist())]
            return Report(command="spectrum", payload=result, table=table)

        if not cfg.inputs.get("kernel"):
            raise MalformedInputError(i18n.t("err_missing_flag", command="spectrum", flag="--values | --kernel"))
        c: KernelMatrix = cls._required(cfg, "kernel")
        if not c.is_finite:
            raise InfiniteEntryError(f"{cfg.inputs['kernel']}: kernel has infinite entries; no spectrum")
        full = spectral.symmetric_eigen(c)
        result = {
            "source": "kernel",
            "full": encode_eigen(full),
            "balanced": encode_eigen(spectral.balanced_spectrum(c)),
        }
        table = [["k", "eigenvalue"]] + [[k, lam] for k, lam in enumerate(full.eigenvalues.tolist())]
        return Report(command="spectrum", payload=result, table=table)

    @classmethod
    def witness(cls, cfg: RunConfig) -> Report:
        c, mu = cls._kernel_and_marginal(cfg)
        if not c.is_finite:
            raise InfiniteEntryError(f"{cfg.inputs['kernel']}: witnesses need a finite kernel")
        eff = spectral.effective_tol(c.entries, cfg.tol)
        _, local, directions = mixture_opt.support_spectrum(c, mu)
        if not local.size or local[0] >= -eff:
            raise WitnessError("no negative balanced direction on the support of the marginal")
        d = spectral.canonical_sign(spectral.unit_zero_sum(directions[:, 0]))
        nu: Mixture = mixture_opt.two_point_witness(c, mu, d, cfg.eps, cfg.shrink)
        limit = mixture_opt.max_feasible_eps(mu, d)
        step = cfg.eps if cfg.eps is not None else limit
        if cfg.shrink and step > limit * (1.0 + 1e-12):
            step = limit
        result = {
            "direction": d.tolist(),
            "eps": step,
            "max_eps": limit,
            "mixture": encode_mixture(nu),
            "product_value": energy.energy(c, mu),
            "mixture_energy": energy.mixture_energy(c, nu),
            "convexity_gap": energy.convexity_gap(c, nu),
            "predicted_gap": step * step * energy.quadratic(c, d),
        }
        return Report(command="witness", payload=result)

    @classmethod
    def build(cls, cfg: RunConfig) -> Report:
        space = cls._required(cfg, "space")
        if not cfg.spec:
            raise MalformedInputError("build needs a kernel kind")
        c = space_kernel.build_kernel(space, kernel_spec_from_dict(cfg.spec))
        entries = c.entries.tolist()
        result = {
            "m": c.m,
            "finite": c.is_finite,
            "entries": entries,
            "max_finite_entry": c.max_abs(),
        }
        table: List[List[Any]] = [[c.m]] + entries
        return Report(command="build", payload=result, table=table)
