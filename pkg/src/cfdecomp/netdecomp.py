"""Rate-constrained network decomposition.

The per-user rate constraint ``R >= R_th`` is replaced by its Jensen lower
bound, which turns into a budget on the sumcut. The largest subnetwork count
whose spectral M-way partition fits the budget is found by binary search
over ``M in [1, N]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Partition, WeightMatrix, edge_weights, sumcut
from .meganode import build_meganodes
from .spectral import laplacian, mway_partition, smallest_eigenvectors
from .topology import GainMatrix


@dataclass(frozen=True)
class RateBudget:
    R_th: float
    beta: float
    budget: float

    @property
    def feasible_at_M1(self) -> bool:
        return self.budget >= 0


@dataclass
class DecompositionResult:
    partition: Partition
    sumcut_achieved: float
    budget: RateBudget
    feasible: bool
    per_M_trace: list[tuple[int, float]] = field(default_factory=list)

    @property
    def M_star(self) -> int:
        return self.partition.M

    def to_dict(self) -> dict:
        budget = self.budget.budget
        return {
            "M_star": self.M_star,
            "feasible": self.feasible,
            "R_th": self.budget.R_th,
            "beta": self.budget.beta,
            "budget": "inf" if math.isinf(budget) else budget,
            "sumcut": self.sumcut_achieved,
            "trace": [{"M": m, "sumcut": s} for m, s in self.per_M_trace],
            "partition": self.partition.to_text().splitlines(),
        }


def compute_beta(gains: GainMatrix, P_t: float, sigma2: float) -> float:
    if not P_t > 0 or sigma2 < 0:
        raise ValueError("need P_t > 0 and sigma2 >= 0")
    peak = gains.values.max(axis=1)
    if np.any(peak <= 0):
        raise ValueError("user with zero best-beam gain")
    return float(np.sum(sigma2 / (P_t * peak)))


def sumcut_budget(K: int, R_th: float, beta: float) -> float:
    """Largest sumcut whose rate lower bound still reaches ``R_th``.

    ``R_th == 0`` gives ``inf``.
    """
    if R_th < 0:
        raise ValueError("R_th must be non-negative")
    if R_th == 0:
        return math.inf
    try:
        headroom = 2.0 * K / math.expm1(R_th * math.log(2.0))
    except OverflowError:
        headroom = 0.0
    return headroom - 2.0 * beta


def rate_budget(gains: GainMatrix, R_th: float, P_t: float, sigma2: float) -> RateBudget:
    beta = compute_beta(gains, P_t, sigma2)
    return RateBudget(float(R_th), beta, sumcut_budget(gains.K, R_th, beta))


def rc_netdecomp(gains: GainMatrix, R_th: float, P_t: float, sigma2: float,
                 seed: int = 0, weights: WeightMatrix | None = None) -> DecompositionResult:
    """Binary search for the most subnetworks whose sumcut fits the budget."""
    w = edge_weights(gains) if weights is None else weights
    budget = rate_budget(gains, R_th, P_t, sigma2)
    mg = build_meganodes(w)
    N = mg.n
    embedding = None
    best = Partition.grand_coalition(w.K, N)
    best_cut = 0.0
    trace = []
    lo, hi = 1, N + 1
    while lo < hi - 1:
        M = (lo + hi) // 2
        if embedding is None and 1 < M < N:
            embedding = smallest_eigenvectors(laplacian(mg), N)
        part = mway_partition(mg, M, seed, embedding=embedding)
        cost = sumcut(part, w)
        trace.append((M, cost))
        if cost <= budget.budget:
            lo, best, best_cut = M, part, cost
        else:
            hi = M
    return DecompositionResult(best, best_cut, budget, budget.budget >= best_cut, trace)
