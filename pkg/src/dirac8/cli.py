"""Command-line entry point: ``dirac8 {verify,classify,evolve,symmetries}``.

Exit status: 0 success, 1 failed check, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import dump
from .clifford import build_gamma_set
from .config import COMMANDS, ConfigError, RunConfig, load_config, parse_override
from .evolution import fmt, evolve, gaussian_packet
from .fields import Grid
from .projectors import ProjectorSpec
from .spectral import LABEL_KEYS, classify_modes
from .symmetry import check_coupling_scheme

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _write(out: Path, name: str, text: str) -> None:
    (out / name).write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def run_verify(cfg: RunConfig, out: Path) -> int:
    from .verify import run_suite

    checks = run_suite(cfg)
    failed = [c for c in checks if not c.passed]
    report = {
        "n_checks": len(checks),
        "n_failed": len(failed),
        "passed": not failed,
        "checks": [c.as_dict() for c in checks],
    }
    _write(out, "verify_report.json", _json(report))
    if failed:
        c = failed[0]
        print(f"verify: {len(failed)} check(s) failed; first: {c.name} residual {c.residual:.3e} > {c.tolerance:.3e}",
              file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def run_classify(cfg: RunConfig, out: Path) -> int:
    gs = build_gamma_set()
    momenta = cfg.sample_momenta()
    table = []
    rows = []
    for p in momenta:
        modes = classify_modes(gs, p, cfg.mass)
        recs = []
        for mode in modes:
            recs.append({
                "epsilon": mode.epsilon,
                "sigma": mode.sigma,
                "rep_label": mode.rep_label,
                "energy": mode.energy,
                "basis": json.loads(dump.matrix_record(mode.basis.T, mode.rep_label))["data"],
            })
            rows.append([*p, mode.epsilon, mode.sigma, mode.rep_label, mode.energy])
        table.append({"p": [float(x) for x in p], "m": cfg.mass, "modes": recs})
    if "json" in cfg.formats:
        _write(out, "classify.json", _json(table))
    if "csv" in cfg.formats:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p1", "p2", "p3", "epsilon", "sigma", "rep_label", "energy"])
        for r in rows:
            w.writerow([fmt(r[0]), fmt(r[1]), fmt(r[2]), r[3], r[4], r[5], fmt(r[6])])
        _write(out, "classify.csv", buf.getvalue())
    return EXIT_OK


def run_evolve(cfg: RunConfig, out: Path) -> int:
    gs = build_gamma_set()
    grid = Grid(cfg.dims, cfg.n, cfg.length)
    try:
        f = gaussian_packet(grid, cfg.packet_center, cfg.packet_width, cfg.packet_momentum, gs, cfg.mass,
                            sector=cfg.packet_sector, seed=cfg.seed)
        pre = ProjectorSpec.parse(cfg.precondition) if cfg.precondition else None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if pre is not None:
        from .projectors import constrain

        f = constrain(f, pre, gs).normalized()
    final, series = evolve(f, cfg.model, cfg.dt, cfg.steps, gs)
    if "csv" in cfg.formats:
        _write(out, "observables.csv", series.to_csv())
    if "json" in cfg.formats:
        _write(out, "observables.json", series.to_json() + "\n")
    if cfg.snapshots:
        _write(out, "snapshot_initial.jsonl", dump.field_snapshot(f))
        _write(out, "snapshot_final.jsonl", dump.field_snapshot(final))
    return EXIT_OK


def run_symmetries(cfg: RunConfig, out: Path) -> int:
    gs = build_gamma_set()
    samples = cfg.sample_momenta(count=max(8, cfg.n_momenta), offset=11)
    holdout = cfg.sample_momenta(count=3, offset=12)
    report = check_coupling_scheme(gs, cfg.mass, samples, holdout, restrict=cfg.monomial_filter)
    _write(out, "symmetries.json", _json(report))
    if not report["passed"]:
        print(f"symmetries: missing arrows {report['missing']}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


RUNNERS = {"verify": run_verify, "classify": run_classify, "evolve": run_evolve, "symmetries": run_symmetries}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dirac8", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("-c", "--config", help="JSON config file (flat key/value)")
    ap.add_argument("-o", "--out", default="dirac8-out", help="output directory")
    ap.add_argument("-s", "--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override one config key (value parsed as JSON when possible)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = dict(parse_override(s) for s in args.set)
        cfg = load_config(args.config, overrides, command=args.command)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write(out, "resolved_config.json", cfg.to_json())
        return RUNNERS[cfg.command](cfg, out)
    except ConfigError as exc:
        print(json.dumps({"error": "config", "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
