"""Comparison decompositions: user-centric virtual cells and AP-centric
agglomerative clustering with minimax linkage."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Partition, WeightMatrix
from .topology import Topology, beam_directions


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller root index stays representative
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo


def top_beams(w: WeightMatrix, S: int) -> np.ndarray:
    """Indices of each user's S strongest beams, ties by lowest index."""
    # stable sort on -w keeps lower indices first among equal weights
    return np.argsort(-w.w, axis=1, kind="stable")[:, :S]


def user_centric(w: WeightMatrix, S: int) -> Partition:
    """Merge every user's S-beam virtual cell with all cells it overlaps.

    Beams chosen by nobody stay as singleton (switched-off) subnetworks.
    """
    K, N = w.w.shape
    if not 1 <= S <= N:
        raise ValueError(f"need 1 <= S <= {N}, got S={S}")
    cells = top_beams(w, S)
    uf = UnionFind(N)
    for cell in cells:
        for n in cell[1:]:
            uf.union(int(cell[0]), int(n))
    beam_labels = np.array([uf.find(n) for n in range(N)])
    return Partition(beam_labels[cells[:, 0]], beam_labels)


def minimax_radius(cluster, dist: np.ndarray) -> tuple[int, float]:
    """Member minimising its largest distance to the cluster, and that distance."""
    members = np.asarray(sorted(int(c) for c in cluster))
    if members.size == 0:
        raise ValueError("empty cluster")
    sub = np.asarray(dist)[np.ix_(members, members)]
    sub = np.maximum(sub, sub.T)
    reach = sub.max(axis=1)
    i = int(np.argmin(reach))
    return int(members[i]), float(reach[i])


@dataclass
class LinkageState:
    clusters: list[list[int]]
    history: list[tuple[int, int, float]] = field(default_factory=list)


def minimax_linkage(dist: np.ndarray, M: int) -> LinkageState:
    """Agglomerate singletons until M clusters remain.

    Each step merges the pair whose union has the smallest minimax radius.
    Clusters are identified by their lowest member; ties go to the
    lexicographically smallest pair of identifiers.
    """
    dist = np.asarray(dist, dtype=float)
    N = dist.shape[0]
    if not 1 <= M <= N:
        raise ValueError(f"need 1 <= M <= {N}, got M={M}")
    clusters = {i: [i] for i in range(N)}
    radius = {}
    for a in range(N):
        for b in range(a + 1, N):
            radius[a, b] = minimax_radius([a, b], dist)[1]
    state = LinkageState([])
    while len(clusters) > M:
        (a, b), best_r = min(radius.items(), key=lambda kv: (kv[1], kv[0]))
        clusters[a] = sorted(clusters[a] + clusters.pop(b))
        state.history.append((a, b, best_r))
        radius = {k: v for k, v in radius.items() if a not in k and b not in k}
        for c in clusters:
            if c != a:
                key = (min(a, c), max(a, c))
                radius[key] = minimax_radius(clusters[a] + clusters[c], dist)[1]
    state.clusters = [clusters[c] for c in sorted(clusters)]
    return state


def ap_centric(dist: np.ndarray, M: int, w: WeightMatrix) -> Partition:
    """Cluster beams by minimax linkage, then attach users to their best beam."""
    state = minimax_linkage(dist, M)
    beam_labels = np.empty(w.N, dtype=np.int64)
    for label, members in enumerate(state.clusters):
        beam_labels[members] = label
    return Partition(beam_labels[w.best_beam], beam_labels)


def beam_angular_distance(theta_i: float, theta_j: float) -> float:
    """Wrap-around separation of two beam directions in cos space.

    The first and last DFT beams are treated as adjacent.
    """
    hi, lo = max(math.cos(theta_i), math.cos(theta_j)), min(math.cos(theta_i), math.cos(theta_j))
    return min(hi - lo, lo - hi + 2.0)


def angular_distance_matrix(N: int) -> np.ndarray:
    c = beam_directions(N)
    gap = np.abs(c[:, None] - c[None, :])
    return np.minimum(gap, 2.0 - gap)


def ap_distance_matrix(topology: Topology) -> np.ndarray:
    """Euclidean distance between the APs owning each pair of beams."""
    pos = topology.ap_positions[topology.beam_owner]
    delta = pos[:, None, :] - pos[None, :, :]
    return np.hypot(delta[..., 0], delta[..., 1])
