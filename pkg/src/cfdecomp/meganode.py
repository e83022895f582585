"""Coarsening of the bipartite graph into one meganode per beam.

Meganode ``i`` holds beam ``i`` plus every user whose best beam is ``i``.
Cuts are preserved exactly, so an M-way mincut over meganodes lifts to an
M-way mincut over users and beams in which every subnetwork has a beam.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Partition, WeightMatrix


@dataclass(frozen=True)
class MeganodeGraph:
    w_tilde: np.ndarray
    best_beam: np.ndarray

    @property
    def n(self) -> int:
        return self.w_tilde.shape[0]

    @property
    def K(self) -> int:
        return len(self.best_beam)

    @property
    def members(self) -> list[tuple[int, list[int]]]:
        """``(beam, users)`` for every meganode."""
        return [(i, np.flatnonzero(self.best_beam == i).tolist()) for i in range(self.n)]


def build_meganodes(w: WeightMatrix) -> MeganodeGraph:
    K, N = w.w.shape
    owner = np.zeros((N, K))
    owner[w.best_beam, np.arange(K)] = 1.0
    # to_beam[i, j]: weight from the users of meganode i to beam j
    to_beam = owner @ w.w
    w_tilde = to_beam + to_beam.T
    np.fill_diagonal(w_tilde, 0.0)
    w_tilde.setflags(write=False)
    return MeganodeGraph(w_tilde, np.asarray(w.best_beam))


def _check_assignment(mg: MeganodeGraph, assignment) -> np.ndarray:
    a = np.asarray(assignment, dtype=np.int64).reshape(-1)
    if a.shape != (mg.n,):
        raise ValueError(f"assignment must label all {mg.n} meganodes")
    used = np.unique(a)
    if used[0] != 0 or not np.array_equal(used, np.arange(len(used))):
        raise ValueError("subnetwork labels must be exactly 0..M-1 with none empty")
    return a


def lift_partition(mg: MeganodeGraph, assignment) -> Partition:
    a = _check_assignment(mg, assignment)
    return Partition(a[mg.best_beam], a)


def meganode_cut(mg: MeganodeGraph, assignment, m: int) -> float:
    a = _check_assignment(mg, assignment)
    inside = a == m
    return float(mg.w_tilde[np.ix_(inside, ~inside)].sum())


def meganode_sumcut(mg: MeganodeGraph, assignment) -> float:
    a = np.asarray(assignment).reshape(-1)
    return float(mg.w_tilde[a[:, None] != a[None, :]].sum())
