import argparse
import logging
import sys
from typing import List, Optional

import mfc.plugins  # Ensure plugins are registered
from mfc.config import AppConfig, RunConfig
from mfc.core.engine import AnalysisEngine
from mfc.core.errors import MalformedInputError, MfcError
from mfc.core.models import Report
from mfc.i18n.i18n import i18n
from mfc.plugins.writers.json_writer import render

logger = logging.getLogger("mfc.cli")

EXIT_OK = 0
EXIT_CORRELATED = 1
EXIT_INPUT = 2

INPUT_FLAGS = ("kernel", "marginal", "space", "profile")


def parse_bodies(text: str) -> List[int]:
    """'4', '2..6' or '2,3,5' -> sorted distinct body counts."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(part))
        except ValueError:
            raise MalformedInputError(f"cannot parse body count {part!r}") from None
    if not out:
        raise MalformedInputError(f"no body counts in {text!r}")
    return sorted(out)


def parse_values(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise MalformedInputError(f"cannot parse values {text!r}") from None


def _spec_from_args(args: argparse.Namespace) -> Optional[dict]:
    if args.command != "build":
        return None
    spec = {"kind": args.kind}
    if args.kind == "power_law":
        spec.update({"s": args.s, "diag": args.diag})
    elif args.kind == "log":
        spec.update({"diag": args.diag})
    elif args.kind == "gaussian":
        spec.update({"width": args.width})
    elif args.kind == "circulant":
        spec.update({"profile": parse_values(args.values) if args.values else []})
    return spec


def resolve_config(args: argparse.Namespace, defaults: AppConfig) -> RunConfig:
    """Flags override the stored defaults."""

    def pick(name: str):
        value = getattr(args, name, None)
        return getattr(defaults, name) if value is None else value

    def pick_local(name: str, default):
        value = getattr(args, name, None)
        return default if value is None else value

    inputs = {k: getattr(args, k) for k in INPUT_FLAGS if getattr(args, k, None)}
    values = None
    if args.command == "spectrum" and getattr(args, "values", None):
        values = parse_values(args.values)
    return RunConfig(
        command=args.command,
        inputs=inputs,
        tol=pick("tol"),
        resolution=pick("resolution"),
        bodies=parse_bodies(pick("bodies")),
        n_max=pick("n_max"),
        quadrature_order=pick("quadrature_order"),
        grid_cap=pick("grid_cap"),
        seed=pick("seed"),
        samples=pick("samples"),
        points=pick_local("points", 12),
        lam=getattr(args, "lam", None),
        eps=getattr(args, "eps", None),
        shrink=bool(getattr(args, "shrink", False)),
        values=values,
        spec=_spec_from_args(args),
        out=args.out,
        lang=pick("lang"),
    )


def _emit(report: Report, out: Optional[str]) -> None:
    if out:
        AnalysisEngine.write(report, out)
        print(i18n.t("log_success", target=out), file=sys.stderr)
    else:
        sys.stdout.write(render(report.payload))


def _summary(report: Report) -> Optional[str]:
    result = report.payload.get("result", {})
    if report.command == "verdict":
        key = "verdict_decorrelated" if report.decorrelated else "verdict_correlated"
        return i18n.t(key, gap=f"{result['gap']:.6g}")
    if report.command == "analyze":
        return i18n.t("analyze_summary", full=result["full"]["verdict"], balanced=result["balanced"]["verdict"])
    if report.command == "expand":
        return i18n.t("expand_summary", classification=result["classification"])
    if report.command == "witness":
        return i18n.t("witness_summary", gap=f"{result['convexity_gap']:.6g}", eps=f"{result['eps']:.6g}")
    if report.command == "nbody":
        return "\n".join(i18n.t("nbody_row", n=r["N"], value=f"{r['value']:.6g}") for r in result["rows"])
    return None


def run_cmd(args: argparse.Namespace) -> int:
    defaults = AppConfig.load(args.config)
    i18n.set_locale(args.lang or defaults.lang)
    try:
        cfg = resolve_config(args, defaults)
        if args.save_config:
            AppConfig.from_run(cfg).save(args.config)
        print(i18n.t("log_start", command=cfg.command), file=sys.stderr)
        report = AnalysisEngine.run(cfg)
        _emit(report, cfg.out)
    except (MfcError, OSError) as e:
        print(i18n.t("log_fail", command=args.command, err=str(e)), file=sys.stderr)
        return EXIT_INPUT

    line = _summary(report)
    if line:
        print(line, file=sys.stderr)
    if report.command == "verdict" and not report.decorrelated:
        return EXIT_CORRELATED
    return EXIT_OK


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=None, help="Relative tolerance (default 1e-9)")
    p.add_argument("--out", default=None, help="Output file; .json report or .csv table (default: JSON on stdout)")
    p.add_argument("--lang", default=None, help="Language for diagnostics (en-US, zh-TW)")
    p.add_argument("--config", default=None, help="Config file (default ~/.mean_field_convexity.json)")
    p.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    p.add_argument("--save-config", action="store_true", help="Remember this run's settings as the new defaults")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfc", description=i18n.t("app_title"))
    subparsers = parser.add_subparsers(dest="command", required=True)

    analyze_parser = subparsers.add_parser("analyze", help="Full and balanced positive definiteness of a kernel")
    analyze_parser.add_argument("--kernel", required=True, help="Kernel CSV")

    verdict_parser = subparsers.add_parser("verdict", help="Is the product state optimal for a marginal?")
    verdict_parser.add_argument("--kernel", required=True, help="Kernel CSV")
    verdict_parser.add_argument("--marginal", required=True, help="Marginal JSON")
    verdict_parser.add_argument("--grid", "--resolution", dest="resolution", type=int, default=None,
                                help="Grid resolution r (default 8)")
    verdict_parser.add_argument("--grid-cap", type=int, default=None, help="Maximum number of grid atoms")

    nbody_parser = subparsers.add_parser("nbody", help="Finite-N symmetric coupling LPs")
    nbody_parser.add_argument("--kernel", required=True, help="Kernel CSV")
    nbody_parser.add_argument("--marginal", required=True, help="Marginal JSON")
    nbody_parser.add_argument("-N", "--bodies", default=None, help="Body counts: 4, 2..6 or 2,3,5")
    nbody_parser.add_argument("--grid-cap", type=int, default=None, help="Maximum number of multiset states")

    expand_parser = subparsers.add_parser("expand", help="Ultraspherical expansion of a sphere profile")
    expand_parser.add_argument("--profile", required=True, help="Profile CSV")
    expand_parser.add_argument("--lam", type=float, required=True, help="Index lambda = (d - 1) / 2")
    expand_parser.add_argument("--n-max", type=int, default=None, help="Highest degree (default 16)")
    expand_parser.add_argument("--quad-order", dest="quadrature_order", type=int, default=None,
                               help="Quadrature order (default 128)")
    expand_parser.add_argument("--samples", type=int, default=None, help="Random sphere samples, 0 disables")
    expand_parser.add_argument("--points", type=int, default=None, help="Points per sphere sample (default 12)")
    expand_parser.add_argument("--seed", type=int, default=None, help="Sampling seed (default 0)")

    spectrum_parser = subparsers.add_parser("spectrum", help="Circulant DFT spectrum or kernel eigenvalues")
    source = spectrum_parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--values", help="Circulant profile l_0,...,l_{n-1}")
    source.add_argument("--kernel", help="Kernel CSV")

    witness_parser = subparsers.add_parser("witness", help="Two-point mixture beating the product state")
    witness_parser.add_argument("--kernel", required=True, help="Kernel CSV")
    witness_parser.add_argument("--marginal", required=True, help="Marginal JSON")
    witness_parser.add_argument("--eps", type=float, default=None, help="Step size (default: largest feasible)")
    witness_parser.add_argument("--shrink", action="store_true", help="Clip an oversized --eps to the simplex")

    build_parser_ = subparsers.add_parser("build", help="Kernel CSV from a space CSV and a recipe")
    build_parser_.add_argument("--space", required=True, help="Space CSV")
    build_parser_.add_argument("--kind", required=True, choices=["power_law", "log", "gaussian", "circulant"])
    build_parser_.add_argument("--s", type=float, default=None, help="Power-law exponent")
    build_parser_.add_argument("--diag", default="inf", help="Diagonal of singular kernels: a cap or 'inf'")
    build_parser_.add_argument("--width", type=float, default=1.0, help="Gaussian width")
    build_parser_.add_argument("--values", default=None, help="Circulant profile l_0,...,l_{n-1}")

    for p in (analyze_parser, verdict_parser, nbody_parser, expand_parser, spectrum_parser, witness_parser,
              build_parser_):
        _common(p)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    return run_cmd(args)


if __name__ == "__main__":
    sys.exit(main())
