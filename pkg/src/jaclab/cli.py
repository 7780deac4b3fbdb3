"""jaclab command line: every command emits one JSON report; text output renders it."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from . import __version__
from .algebra import AlgebraError, format_rational, format_ratfunc
from .config import AnalysisConfig
from .corpus import corpus_entry, corpus_list
from .extension import automorphisms_dim1, extension_degree, minpoly_annihilation_check
from .fibers import (
    FiberSolver,
    asymptotic_samples,
    image_probe,
    parity_report,
    properness_at,
    scan_fibers,
)
from .maps import (
    MapParseError,
    RatMap,
    SingularBase,
    everywhere_defined_verdict,
    jacobian_determinant,
    jacobian_matrix,
    keller_check,
    leading_principal_minors,
    lift_plus,
    nonsingular_verdict,
    parse_map,
    serialize,
)
from .verdict import gather_evidence, invertibility_verdict, lift_fiber_equivalence

EXIT_OK = 0
EXIT_NOT_INVERTIBLE = 1
EXIT_UNKNOWN = 2
EXIT_PARSE = 3
EXIT_ANALYSIS = 4
EXIT_IO = 5
EXIT_USAGE = 64

VERDICT_EXIT = {"INVERTIBLE": EXIT_OK, "NOT_INVERTIBLE": EXIT_NOT_INVERTIBLE, "UNKNOWN": EXIT_UNKNOWN}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would read as UNKNOWN
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# inputs


def load_map_source(ref: str) -> str:
    """A map file path, or ``corpus:<name>`` for a built-in example."""
    if ref.startswith("corpus:"):
        return corpus_entry(ref.split(":", 1)[1]).source
    with open(ref) as fh:
        return fh.read()


def parse_point(text: str, n: int) -> tuple[Fraction, ...]:
    parts = [p.strip() for p in text.replace(";", ",").split(",") if p.strip()]
    try:
        pt = tuple(Fraction(p) for p in parts)
    except ValueError as exc:
        raise AlgebraError("BadPoint", f"cannot read point {text!r}") from exc
    if len(pt) != n:
        raise AlgebraError("DimensionMismatch", f"point {text!r} has {len(pt)} coordinates, map has {n}")
    return pt


def _config(args) -> AnalysisConfig:
    cfg = AnalysisConfig.load(args.config) if getattr(args, "config", None) else AnalysisConfig()
    updates = {}
    for key in ("seed", "samples", "region", "out", "grid"):
        v = getattr(args, key, None)
        if v is not None:
            updates[key] = v
    return replace(cfg, **updates)


# ---------------------------------------------------------------------------
# reports


def _names(F: RatMap) -> list[str]:
    return F.names


def jacobian_report(F: RatMap) -> dict:
    names = _names(F)
    ok, c = keller_check(F)
    return {
        "jacobian": format_ratfunc(jacobian_determinant(F), names),
        "matrix": [[format_ratfunc(e, names) for e in row] for row in jacobian_matrix(F)],
        "leading_principal_minors": [format_ratfunc(m, names) for m in leading_principal_minors(F)],
        "keller": {"is_keller": ok, "constant": None if c is None else format_rational(c)},
    }


def check_report(F: RatMap, cfg: AnalysisConfig) -> dict:
    ok, c = keller_check(F)
    return {
        "keller": {"is_keller": ok, "constant": None if c is None else format_rational(c)},
        "everywhere_defined": everywhere_defined_verdict(F, cfg.sampling()).to_json(),
        "nonsingular": nonsingular_verdict(F, cfg.sampling()).to_json(),
    }


def lift_report(F: RatMap, cfg: AnalysisConfig) -> dict:
    verdict = nonsingular_verdict(F, cfg.sampling())
    lifted = lift_plus(F, verdict, cfg.sampling())
    out = {"base_nonsingular": verdict.to_json(), "lift": serialize(lifted),
           "lift_jacobian": format_ratfunc(jacobian_determinant(lifted), lifted.names)}
    if F.n <= 2:
        out["fiber_equivalence"] = lift_fiber_equivalence(F, cfg.lift_samples, cfg.seed)
    return out


def degree_report(F: RatMap, cfg: AnalysisConfig) -> dict:
    rep = extension_degree(F, cfg.seed)
    out = rep.to_json()
    out["annihilation_check"] = minpoly_annihilation_check(F, rep, cfg.seed)
    if F.n == 1:
        auts = automorphisms_dim1(F)
        out["automorphisms"] = [g.to_json() for g in auts]
        out["galois"] = len(auts) == rep.degree
    return out


def run_analysis(source: str, cfg: AnalysisConfig) -> dict:
    """The full pipeline; deterministic for a fixed configuration."""
    F = parse_map(source)
    report: dict = {"config": cfg.to_json(), "map": serialize(F), "n": F.n}
    report["jacobian"] = jacobian_report(F)
    region = cfg.region_for(F.n) if F.n <= 2 else None
    ev = gather_evidence(F, cfg.seed, cfg.samples, region, cfg.sampling())
    report["everywhere_defined"] = ev.defined.to_json()
    report["nonsingular"] = ev.nonsingular.to_json()
    if F.n <= 2:
        try:
            ext = extension_degree(F, cfg.seed)
            report["extension"] = ext.to_json()
            report["extension"]["annihilation_check"] = minpoly_annihilation_check(F, ext, cfg.seed)
        except AlgebraError as exc:
            report["extension"] = {"error": exc.code, "message": exc.message}
            ext = None
        report["fibers"] = ev.histogram.to_json()
        if ext is not None:
            report["parity"] = parity_report(ext.degree, ev.histogram.N_hat)
        candidates = asymptotic_samples(F)
        report["asymptotic_candidates"] = candidates
        solver = FiberSolver(F, cfg.seed)
        prop = []
        for cand in candidates[:4]:
            y = tuple(Fraction(v).limit_denominator(1000) for v in cand["point"])
            prop.append(properness_at(F, y, cfg.schedule(), cfg.seed, solver).to_json())
        report["properness"] = prop
    verdict = invertibility_verdict(F, cfg.seed, cfg.samples, region, evidence=ev)
    report["conditions"] = verdict.conditions.to_json()
    v = verdict.to_json()
    v.pop("conditions", None)
    report["verdict"] = v
    return report


# ---------------------------------------------------------------------------
# rendering


def _render(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines += _render(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines += _render(v, indent + 1)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return lines


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    s = str(v)
    return s if len(s) <= 160 else s[:157] + "..."


def emit(report: dict, cfg: AnalysisConfig, as_json: bool) -> None:
    text = json.dumps(report, indent=2)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text + "\n")
    if as_json:
        print(text)
    else:
        print("\n".join(_render(report)))


# ---------------------------------------------------------------------------
# commands


def _cmd_map(fn):
    def run(args, cfg):
        F = parse_map(load_map_source(args.file))
        return fn(F, args, cfg), EXIT_OK
    return run


@_cmd_map
def cmd_jacobian(F, args, cfg):
    return jacobian_report(F)


@_cmd_map
def cmd_check(F, args, cfg):
    return check_report(F, cfg)


@_cmd_map
def cmd_lift(F, args, cfg):
    return lift_report(F, cfg)


@_cmd_map
def cmd_degree(F, args, cfg):
    return degree_report(F, cfg)


@_cmd_map
def cmd_fiber(F, args, cfg):
    y = parse_point(args.at, F.n)
    return FiberSolver(F, cfg.seed).solve(y).to_json()


@_cmd_map
def cmd_scan(F, args, cfg):
    out = scan_fibers(F, cfg.region_for(F.n), cfg.samples, cfg.seed).to_json()
    out["config"] = cfg.to_json()
    return out


@_cmd_map
def cmd_proper(F, args, cfg):
    y = parse_point(args.at, F.n)
    return properness_at(F, y, cfg.schedule(), cfg.seed).to_json()


@_cmd_map
def cmd_image(F, args, cfg):
    region = cfg.region_for(F.n) if cfg.region else None
    cells = image_probe(F, region, cfg.grid, cfg.seed)
    return {"grid": cfg.grid, "region": cfg.region or "-2:2", "empty_cells": cells, "count": len(cells)}


def cmd_verdict(args, cfg):
    F = parse_map(load_map_source(args.file))
    region = cfg.region_for(F.n) if F.n <= 2 else None
    ev = gather_evidence(F, cfg.seed, cfg.samples, region, cfg.sampling())
    v = invertibility_verdict(F, cfg.seed, cfg.samples, region, evidence=ev)
    return v.to_json(), VERDICT_EXIT[v.status]


def cmd_analyze(args, cfg):
    report = run_analysis(load_map_source(args.file), cfg)
    return report, VERDICT_EXIT[report["verdict"]["status"]]


def cmd_corpus(args, cfg):
    if args.emit:
        entry = corpus_entry(args.emit)
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(entry.source)
        else:
            sys.stdout.write(entry.source)
        return None, EXIT_OK
    return {"entries": [e.to_json() for e in corpus_list()]}, EXIT_OK


COMMANDS = {
    "jacobian": (cmd_jacobian, "Jacobian matrix, determinant, minors, Keller check"),
    "check": (cmd_check, "everywhere-defined, nonsingular and Keller verdicts"),
    "lift": (cmd_lift, "the lift F+(x, z) = (F(x), z / j(F)(x)) with j(F+) = 1"),
    "degree": (cmd_degree, "extension degree, minimal polynomial, n=1 automorphisms"),
    "fiber": (cmd_fiber, "exact fiber over one target"),
    "scan": (cmd_scan, "fiber-size histogram over random targets"),
    "proper": (cmd_proper, "properness at a target"),
    "image": (cmd_image, "grid cells with provably empty fibers"),
    "verdict": (cmd_verdict, "invertibility verdict (exit 0/1/2 = INVERTIBLE/NOT_INVERTIBLE/UNKNOWN)"),
    "analyze": (cmd_analyze, "full analysis report"),
    "corpus": (cmd_corpus, "list built-in maps or emit one as a map file"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, help="seed for every random choice (default 42)")
    common.add_argument("--samples", type=int, help="fiber-scan targets (default 500)")
    common.add_argument("--region", help="sampling region, '-20:20' or per axis 'a:b,c:d'")
    common.add_argument("--out", help="also write the JSON report to this file")
    common.add_argument("--json", action="store_true", help="print JSON instead of the text rendering")
    common.add_argument("--config", help="JSON configuration file (a report's 'config' block)")

    parser = _Parser(prog="jaclab", description="Exact invertibility analysis of rational maps.")
    parser.add_argument("--version", action="version", version=f"jaclab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name != "corpus":
            p.add_argument("file", help="map file, or corpus:<name>")
        if name in ("fiber", "proper"):
            p.add_argument("--at", required=True, help="target point, e.g. '1, 2'")
        if name == "image":
            p.add_argument("--grid", type=int, help="cells per axis (default 16)")
        if name == "corpus":
            p.add_argument("--emit", metavar="NAME", help="write this entry's map file")
    return parser


def _glue_values(argv: list[str]) -> list[str]:
    # '--region -20:20' would otherwise be read as an unknown option
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in ("--region", "--at") and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        fn, _ = COMMANDS[args.command]
        report, code = fn(args, cfg)
    except MapParseError as exc:
        return _fail(args, EXIT_PARSE, exc.code, exc.message, line=exc.line, column=exc.column)
    except SingularBase as exc:
        return _fail(args, EXIT_ANALYSIS, exc.code, exc.message, verdict=exc.verdict.to_json())
    except AlgebraError as exc:
        return _fail(args, EXIT_ANALYSIS, exc.code, exc.message)
    except (OSError, KeyError, ValueError) as exc:
        return _fail(args, EXIT_IO, type(exc).__name__, str(exc))
    if report is not None:
        emit(report, cfg, args.json)
    return code


def _fail(args, code: int, kind: str, message: str, **extra) -> int:
    err = {"error": kind, "message": message, **{k: v for k, v in extra.items() if v is not None}}
    if getattr(args, "json", False):
        print(json.dumps(err, indent=2))
    else:
        print(f"error [{kind}]: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
