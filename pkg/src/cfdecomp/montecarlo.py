"""Monte Carlo evaluation of decomposition algorithms over random topologies."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .baselines import angular_distance_matrix, ap_centric, ap_distance_matrix, user_centric
from .evaluate import MetricsReport, RealizationMetrics, aggregate, partition_metrics
from .graph import Partition, edge_weights
from .meganode import build_meganodes
from .netdecomp import rc_netdecomp
from .spectral import mway_partition
from .topology import (
    DEFAULT_MIN_DISTANCE, SQUARE, GainMatrix, Region, Topology, beamspace_gains,
    generate_singlecell_topology, generate_topology,
)

CELLFREE = "cellfree"
SINGLECELL = "singlecell"
GENERAL = "general"
SCENARIOS = (CELLFREE, SINGLECELL, GENERAL)

RC_NETDECOMP = "rc-netdecomp"
USER_CENTRIC = "user-centric"
AP_CENTRIC = "ap-centric"
# inner loop of rc-netdecomp at a fixed subnetwork count
SPECTRAL_M = "spectral-m"
ALGORITHMS = (RC_NETDECOMP, USER_CENTRIC, AP_CENTRIC, SPECTRAL_M)
SWEEP_VARIABLE = {RC_NETDECOMP: "R_th", USER_CENTRIC: "S", AP_CENTRIC: "M", SPECTRAL_M: "M"}


class SimulationError(RuntimeError):
    def __init__(self, seed: int, cause: Exception):
        super().__init__(f"realization with seed {seed} failed: {cause}")
        self.seed = seed


@dataclass(frozen=True)
class Scenario:
    """Network layout and link budget. ``snr_db`` is P_t / sigma^2 with sigma^2 = 1."""

    kind: str = CELLFREE
    L: int = 20
    K: int = 10
    beams_per_ap: int = 1
    alpha: float = 4.0
    snr_db: float = 0.0
    region_size: float = 1.0
    min_distance: float = DEFAULT_MIN_DISTANCE

    def __post_init__(self):
        if self.kind not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.kind!r}")
        if self.L < 1 or self.K < 1 or self.beams_per_ap < 1:
            raise ValueError("L, K and beams_per_ap must be positive")
        if self.kind == CELLFREE and self.beams_per_ap != 1:
            raise ValueError("cell-free scenario has one beam per AP")
        if self.kind == SINGLECELL and self.L != 1:
            raise ValueError("single-cell scenario has exactly one AP")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    @property
    def N(self) -> int:
        return self.L * self.beams_per_ap

    @property
    def P_t(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    sigma2 = 1.0

    def topology(self, seed: int) -> Topology:
        if self.kind == SINGLECELL:
            return generate_singlecell_topology(seed, self.K, self.beams_per_ap, self.region_size)
        return generate_topology(seed, Region(SQUARE, self.region_size), self.L, self.K,
                                 self.beams_per_ap)

    def realize(self, seed: int) -> tuple[Topology, GainMatrix]:
        topo = self.topology(seed)
        return topo, beamspace_gains(topo, self.alpha, self.min_distance)

    def beam_distances(self, topology: Topology) -> np.ndarray:
        if self.kind == CELLFREE:
            return ap_distance_matrix(topology)
        if self.kind == SINGLECELL:
            return angular_distance_matrix(self.beams_per_ap)
        raise ValueError("ap-centric clustering needs a cellfree or singlecell scenario")

    def to_dict(self) -> dict:
        return asdict(self)


def realization_seed(master_seed: int, index: int) -> int:
    return int(np.random.SeedSequence([int(master_seed), int(index)]).generate_state(1, np.uint64)[0])


def decompose(scenario: Scenario, algorithm: str, param, topology: Topology,
              gains: GainMatrix, seed: int = 0) -> Partition:
    w = edge_weights(gains)
    if algorithm == RC_NETDECOMP:
        return rc_netdecomp(gains, float(param), scenario.P_t, scenario.sigma2, seed, w).partition
    if algorithm == USER_CENTRIC:
        return user_centric(w, int(param))
    if algorithm == AP_CENTRIC:
        return ap_centric(scenario.beam_distances(topology), int(param), w)
    if algorithm == SPECTRAL_M:
        return mway_partition(build_meganodes(w), int(param), seed)
    raise ValueError(f"unknown algorithm {algorithm!r}")


class MonteCarloRun(NamedTuple):
    report: MetricsReport
    samples: list[RealizationMetrics]
    seeds: list[int]


def monte_carlo(scenario: Scenario, algorithm: str, param, realizations: int,
                master_seed: int = 0) -> MonteCarloRun:
    """Average metrics over independent topologies seeded by (master_seed, index)."""
    if realizations < 1:
        raise ValueError("realizations must be at least 1")
    seeds = [realization_seed(master_seed, i) for i in range(realizations)]
    samples = []
    for seed in seeds:
        try:
            topo, gains = scenario.realize(seed)
            part = decompose(scenario, algorithm, param, topo, gains, seed)
            samples.append(partition_metrics(part, gains, scenario.P_t, scenario.sigma2))
        except Exception as exc:
            raise SimulationError(seed, exc) from exc
    return MonteCarloRun(aggregate(samples), samples, seeds)
