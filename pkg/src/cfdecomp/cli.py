"""Command line harness.

Config files are flat YAML mappings::

    scenario: cellfree        # cellfree | singlecell | general
    L: 20
    K: 10
    beams_per_ap: 1
    alpha: 4.0
    P_t_over_sigma2: 0.0      # dB, with sigma^2 = 1
    region_size: 1.0          # square side or disc radius
    min_distance: 0.001
    algorithm: rc-netdecomp   # rc-netdecomp | user-centric | ap-centric | spectral-m
    sweep: R_th               # R_th | S | M, must match the algorithm
    values: [0, 2, 4]
    realizations: 50
    master_seed: 1

Exit codes: 0 success, 1 configuration error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import yaml

from . import selftest
from .evaluate import MetricsReport
from .graph import Partition
from .montecarlo import (
    ALGORITHMS, SINGLECELL, SWEEP_VARIABLE, Scenario, decompose, monte_carlo,
)
from .netdecomp import rc_netdecomp
from .svg import render_snapshot
from .topology import DEFAULT_MIN_DISTANCE, Topology

CSV_COLUMNS = ("sweep_value", "R_bar", "R_min_bar", "R_var_bar", "M_star_bar",
               "C_max_bar", "P_off_bar", "realizations")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str = "cellfree"
    L: int = 20
    K: int = 10
    beams_per_ap: int = 1
    alpha: float = 4.0
    P_t_over_sigma2: float = 0.0
    region_size: float = 1.0
    min_distance: float = DEFAULT_MIN_DISTANCE
    algorithm: str = "rc-netdecomp"
    sweep: str = "R_th"
    values: tuple = (0.0,)
    realizations: int = 50
    master_seed: int = 0

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        if "values" in data:
            v = data["values"]
            data["values"] = tuple(v) if isinstance(v, (list, tuple)) else (v,)
        try:
            cfg = cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            data = yaml.safe_load(Path(path).read_text())
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a flat key: value mapping")
        return cls.from_mapping(data)

    def scenario_obj(self) -> Scenario:
        try:
            return Scenario(self.scenario, int(self.L), int(self.K), int(self.beams_per_ap),
                            float(self.alpha), float(self.P_t_over_sigma2), float(self.region_size),
                            float(self.min_distance))
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from exc

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if SWEEP_VARIABLE[self.algorithm] != self.sweep:
            raise ConfigError(f"{self.algorithm} sweeps {SWEEP_VARIABLE[self.algorithm]}, "
                              f"not {self.sweep}")
        if not self.values:
            raise ConfigError("sweep value list is empty")
        if int(self.realizations) < 1:
            raise ConfigError("realizations must be positive")
        sc = self.scenario_obj()
        for v in self.values:
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ConfigError(f"sweep value {v!r} is not a number")
            if self.sweep == "R_th" and not v >= 0:
                raise ConfigError("R_th values must be non-negative")
            if self.sweep in ("S", "M") and (v != int(v) or not 1 <= v <= sc.N):
                raise ConfigError(f"{self.sweep}={v} must be an integer in 1..{sc.N}")
        if self.algorithm == "ap-centric":
            if sc.kind == "general":
                raise ConfigError("ap-centric needs a cellfree or singlecell scenario")


def sweep_value(cfg: ExperimentConfig, v):
    return float(v) if cfg.sweep == "R_th" else int(v)


def run_experiment(cfg: ExperimentConfig, out_dir) -> list[tuple[float, MetricsReport]]:
    """Run every sweep point, then write ``results.csv`` and ``results.json``."""
    out = Path(out_dir)
    sc = cfg.scenario_obj()
    rows, detail = [], []
    for v in cfg.values:
        v = sweep_value(cfg, v)
        run = monte_carlo(sc, cfg.algorithm, v, int(cfg.realizations), int(cfg.master_seed))
        rows.append((v, run.report))
        detail.append({"sweep_value": v, "samples": [s._asdict() for s in run.samples]})
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / "results.csv", rows)
    sidecar = {"config": {**asdict(cfg), "values": list(cfg.values)},
               "seeds": run.seeds, "points": detail}
    (out / "results.json").write_text(json.dumps(sidecar, indent=1) + "\n")
    return rows


def write_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for value, rep in rows:
            writer.writerow([repr(value), repr(rep.R_bar), repr(rep.R_min_bar), repr(rep.R_var_bar),
                             repr(rep.M_star_bar), repr(rep.C_max_bar), repr(rep.P_off_bar),
                             rep.realizations])


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: (int(v) if k == "realizations" else float(v)) for k, v in row.items()}
                for row in csv.DictReader(fh)]


def _style(sc: Scenario) -> str:
    return "singlecell" if sc.kind == SINGLECELL else "cellfree"


def cmd_decompose(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    sc = cfg.scenario_obj()
    seed = cfg.master_seed if args.seed is None else args.seed
    value = sweep_value(cfg, cfg.values[0] if args.param is None else args.param)
    topo, gains = sc.realize(seed)
    report = {"seed": seed, "algorithm": cfg.algorithm, cfg.sweep: value}
    if cfg.algorithm == "rc-netdecomp":
        res = rc_netdecomp(gains, value, sc.P_t, sc.sigma2, seed)
        part = res.partition
        report.update(res.to_dict())
    else:
        part = decompose(sc, cfg.algorithm, value, topo, gains, seed)
        report.update({"M_star": part.M, "partition": part.to_text().splitlines()})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report, indent=1) + "\n")
    topo.save(out / "topology.json")
    part.save(out / "partition.txt")
    if args.svg:
        (out / "snapshot.svg").write_text(render_snapshot(topo, part, _style(sc)))
    print(f"M* = {part.M} subnetworks -> {out}")
    return 0


def cmd_sweep(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.seed is not None:
        cfg = ExperimentConfig.from_mapping({**asdict(cfg), "master_seed": args.seed})
    for value, rep in run_experiment(cfg, args.out):
        print(f"{cfg.sweep}={value}: M*={rep.M_star_bar:.2f} Cmax={rep.C_max_bar:.2f} "
              f"R={rep.R_bar:.3f} Rmin={rep.R_min_bar:.3f} Poff={rep.P_off_bar:.3f}")
    return 0


def cmd_snapshot(args) -> int:
    try:
        topo = Topology.load(args.topology)
        part = Partition.load(args.partition)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError(f"cannot read inputs: {exc}") from exc
    style = args.style or ("singlecell" if topo.L == 1 and topo.N > 1 else "cellfree")
    Path(args.out).write_text(render_snapshot(topo, part, style))
    return 0


def cmd_selftest(args) -> int:
    return 0 if selftest.run(args.seed or 0) else 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cfdecomp", description="Rate-constrained cell-free network decomposition")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", help="decompose one random topology")
    d.add_argument("--config", required=True)
    d.add_argument("--out", default="decompose_out")
    d.add_argument("--seed", type=int)
    d.add_argument("--param", type=float, help="R_th, S or M (default: first sweep value)")
    d.add_argument("--svg", action="store_true")
    d.set_defaults(func=cmd_decompose)

    s = sub.add_parser("sweep", help="Monte Carlo sweep -> results.csv / results.json")
    s.add_argument("--config", required=True)
    s.add_argument("--out", default="sweep_out")
    s.add_argument("--seed", type=int, help="override master_seed")
    s.set_defaults(func=cmd_sweep)

    n = sub.add_parser("snapshot", help="render a saved topology + partition to SVG")
    n.add_argument("topology")
    n.add_argument("partition")
    n.add_argument("--out", default="snapshot.svg")
    n.add_argument("--style", choices=("cellfree", "singlecell"))
    n.set_defaults(func=cmd_snapshot)

    t = sub.add_parser("selftest", help="run randomised invariant checks")
    t.add_argument("--seed", type=int, default=0)
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - any runtime failure maps to exit 2
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
