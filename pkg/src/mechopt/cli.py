"""
Command-line entry point.

    mechopt evaluate --config run.json [--output-dir DIR]
    mechopt optimize --config run.json
    mechopt singularity-map --config run.json
    mechopt bracket-search --config run.json

Exit codes: 0 success, 1 runtime failure, 2 unreadable or malformed
config, 3 invariant violation, 4 no feasible actuator bracket.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from mechopt.config import ConfigError, load_config
from mechopt.design import design_objective, objective_terms, optimize_design
from mechopt.errors import DomainError
from mechopt.mechanism import ReducedDesignParameters
from mechopt.workspace import _summarize, scan_grid

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_INVARIANT = 3
EXIT_NO_BRACKET = 4


def _fmt(value):
    return format(float(value), ".17g")


def _csv(header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(doc):
    return json.dumps(doc, indent=2) + "\n"


def _write_all(out_dir, files):
    """Write every file to a temp name first, then rename them into place."""
    out_dir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.", suffix=".tmp")
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
            staged.append((tmp, out_dir / name))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, dest in staged:
        os.replace(tmp, dest)


def _design_dict(design, reduced=None):
    doc = {
        "a1": design.a1.tolist(),
        "a2": design.a2.tolist(),
        "b1": design.b1.tolist(),
        "b2": design.b2.tolist(),
        "h": design.h,
    }
    if reduced is not None:
        doc["reduced"] = {"r_a": reduced.r_a, "r_b": reduced.r_b,
                          "gamma_rad": reduced.gamma, "h": reduced.h}
    return doc


def cmd_evaluate(cfg):
    design = cfg.design
    scan = scan_grid(design, cfg.workspace)
    evaluation = _summarize(scan, cfg.actuator)
    rows = (
        [_fmt(a), _fmt(b), _fmt(r[0]), _fmt(r[1]), _fmt(dx), "1" if cov else "0", _fmt(det)]
        for a, b, r, dx, cov, det in zip(
            scan.alpha, scan.beta, scan.rho, scan.dexterity, scan.covered, scan.det_j
        )
    )
    header = ["alpha_rad", "beta_rad", "rho1_m", "rho2_m", "dexterity", "covered", "det_j"]
    report = evaluation.to_dict()
    report["objective"] = design_objective(design, cfg.workspace, cfg.actuator,
                                           cfg.objective, evaluation)
    _write_all(cfg.output_dir, {
        "evaluation.json": _json(report),
        "workspace_map.csv": _csv(header, rows),
    })
    return EXIT_OK


def cmd_optimize(cfg):
    result, design, evaluation = optimize_design(
        cfg.seed_vector, cfg.space, cfg.workspace, cfg.actuator, cfg.objective, cfg.optimizer
    )
    reduced = None
    if cfg.space.kind.value == "reduced4":
        reduced = ReducedDesignParameters(*result.best_x)
    report = {
        "space": cfg.space.kind.value,
        "seed_x": [float(v) for v in cfg.seed_vector],
        **result.to_dict(),
        "design": _design_dict(design, reduced),
        "objective_terms": objective_terms(design, cfg.workspace, cfg.actuator,
                                           cfg.objective, evaluation),
        "evaluation": evaluation.to_dict(),
    }
    trace = ([str(i), _fmt(f)] for i, f in result.trace)
    _write_all(cfg.output_dir, {
        "optimization.json": _json(report),
        "trace.csv": _csv(["eval_index", "best_f"], trace),
    })
    return EXIT_OK


def cmd_singularity_map(cfg):
    scan = scan_grid(cfg.design, cfg.workspace)
    rows = ([_fmt(a), _fmt(b), _fmt(det)] for a, b, det in zip(scan.alpha, scan.beta, scan.det_j))
    _write_all(cfg.output_dir, {
        "singularity_map.csv": _csv(["alpha_rad", "beta_rad", "det_j"], rows),
    })
    return EXIT_OK


def cmd_bracket_search(cfg):
    scan = scan_grid(cfg.design, cfg.workspace)
    evaluation = _summarize(scan, cfg.actuator)
    lengths = scan.rho[scan.covered]
    report = {
        "brackets": [list(b) for b in evaluation.feasible_brackets],
        "length_range": [float(lengths.min()), float(lengths.max())] if lengths.size else None,
        "n_points": evaluation.n_points,
        "n_covered": evaluation.n_covered,
        "actuator": {
            "min_closed_length": cfg.actuator.min_closed_length,
            "stroke": cfg.actuator.stroke,
            "search_step": cfg.actuator.search_step,
        },
    }
    _write_all(cfg.output_dir, {"brackets.json": _json(report)})
    if not evaluation.feasible_brackets:
        print("no feasible actuator bracket for the covered workspace", file=sys.stderr)
        return EXIT_NO_BRACKET
    return EXIT_OK


COMMANDS = {
    "evaluate": cmd_evaluate,
    "optimize": cmd_optimize,
    "singularity-map": cmd_singularity_map,
    "bracket-search": cmd_bracket_search,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mechopt",
        description="Analyse and optimise 2-UPS + 1-U remote-centre-of-motion mechanisms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--output-dir", help="overrides output_dir from the config")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"invalid value: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if args.output_dir:
        cfg.output_dir = Path(args.output_dir)
    try:
        return COMMANDS[args.command](cfg)
    except DomainError as exc:
        print(f"invalid value: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except Exception as exc:  # noqa: BLE001 - report every other failure as exit 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
