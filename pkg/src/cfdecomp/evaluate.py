"""Per-user rates under a decomposition and the aggregate metrics.

A user's SINR takes signal from its best beam and interference from every
beam outside its subnetwork; intra-subnetwork interference is assumed
cancelled by zero-forcing, which needs at least as many beams as users in
the subnetwork (otherwise all its users get rate 0).
"""
from __future__ import annotations

import math
import warnings
from typing import NamedTuple, Sequence

import numpy as np

from .graph import Partition, WeightMatrix, sumcut
from .topology import GainMatrix


def zf_infeasible(partition: Partition) -> np.ndarray:
    """Mask of users whose subnetwork has more users than beams."""
    users = np.bincount(partition.user_labels, minlength=partition.M)
    beams = np.bincount(partition.beam_labels, minlength=partition.M)
    return (users > beams)[partition.user_labels]


def user_sinrs(partition: Partition, gains: GainMatrix, P_t: float, sigma2: float) -> np.ndarray:
    g = gains.values
    if (partition.K, partition.N) != g.shape:
        raise ValueError("partition and gains disagree on K or N")
    signal = P_t * g.max(axis=1)
    outside = partition.user_labels[:, None] != partition.beam_labels[None, :]
    noise = P_t * (g * outside).sum(axis=1) + sigma2
    with np.errstate(divide="ignore"):
        mu = np.where(noise > 0, signal / np.where(noise > 0, noise, 1.0), math.inf)
    mu[zf_infeasible(partition)] = 0.0
    return mu


def user_sinr(k: int, partition: Partition, gains: GainMatrix, P_t: float, sigma2: float) -> float:
    return float(user_sinrs(partition, gains, P_t, sigma2)[k])


def user_rate(mu):
    return np.log2(1.0 + np.asarray(mu, dtype=float)) if np.ndim(mu) else math.log2(1.0 + mu)


def user_rates(partition: Partition, gains: GainMatrix, P_t: float, sigma2: float) -> np.ndarray:
    return user_rate(user_sinrs(partition, gains, P_t, sigma2))


def per_user_rate(partition: Partition, gains: GainMatrix, P_t: float, sigma2: float) -> float:
    return float(np.mean(user_rates(partition, gains, P_t, sigma2)))


def rate_lower_bound(partition: Partition, w: WeightMatrix, beta: float, K: int | None = None) -> float:
    """Jensen lower bound ``log2(1 + K / (beta + sumcut / 2))``."""
    K = w.K if K is None else K
    x = beta + 0.5 * sumcut(partition, w)
    return math.inf if x <= 0 else math.log2(1.0 + K / x)


class RealizationMetrics(NamedTuple):
    R: float
    R_min: float
    R_var: float
    M_star: int
    C_max: int
    P_off: float
    ap_sleep: float


def partition_metrics(partition: Partition, gains: GainMatrix, P_t: float, sigma2: float) -> RealizationMetrics:
    rates = user_rates(partition, gains, P_t, sigma2)
    mean = float(np.mean(rates))
    with np.errstate(invalid="ignore"):
        var = float(np.mean((rates - mean) ** 2))
    idle = np.bincount(partition.user_labels, minlength=partition.M) == 0
    beam_off = idle[partition.beam_labels]
    owners = gains.beam_owner
    L = int(owners.max()) + 1
    on_per_ap = np.bincount(owners, weights=~beam_off, minlength=L)
    return RealizationMetrics(
        R=mean,
        R_min=float(rates.min()),
        R_var=var,
        M_star=partition.M,
        C_max=int(partition.sizes().max()),
        P_off=float(beam_off.mean()),
        ap_sleep=float(np.mean(on_per_ap == 0)),
    )


class MetricsReport(NamedTuple):
    R_bar: float
    R_min_bar: float
    R_var_bar: float
    M_star_bar: float
    C_max_bar: float
    P_off_bar: float
    realizations: int
    ap_sleep_bar: float = 0.0


def aggregate(samples: Sequence[RealizationMetrics]) -> MetricsReport:
    """Arithmetic means over realizations; non-finite ones are dropped with a warning."""
    kept = [s for s in samples if all(math.isfinite(v) for v in s)]
    if len(kept) < len(samples):
        warnings.warn(f"{len(samples) - len(kept)} realization(s) with infinite rate excluded",
                      RuntimeWarning, stacklevel=2)
    if not kept:
        raise ValueError("no finite realizations to aggregate")
    n = len(kept)

    def mean(field: str) -> float:
        return math.fsum(getattr(s, field) for s in kept) / n

    return MetricsReport(
        R_bar=mean("R"),
        R_min_bar=mean("R_min"),
        R_var_bar=mean("R_var"),
        M_star_bar=mean("M_star"),
        C_max_bar=mean("C_max"),
        P_off_bar=mean("P_off"),
        realizations=n,
        ap_sleep_bar=mean("ap_sleep"),
    )
