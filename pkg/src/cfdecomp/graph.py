"""Weighted user-beam bipartite graph, partitions and cut functions.

The adjacency matrix ``[[0, W], [W^T, 0]]`` is kept implicit: every cut only
touches user-beam pairs, so all functions work on ``W`` directly.

Subnetwork labels are 0-based. A :class:`Partition` is always stored in
canonical form, with subnetworks numbered by their lowest beam index, so two
partitions compare equal iff they group the vertices identically.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .topology import GainMatrix


@dataclass(frozen=True)
class WeightMatrix:
    """Per-user normalised gains; ``w[k, best_beam[k]] == 1``."""

    w: np.ndarray
    best_beam: np.ndarray

    @property
    def K(self) -> int:
        return self.w.shape[0]

    @property
    def N(self) -> int:
        return self.w.shape[1]


def edge_weights(gains: GainMatrix | np.ndarray) -> WeightMatrix:
    g = np.asarray(gains.values if isinstance(gains, GainMatrix) else gains, dtype=float)
    if g.ndim != 2 or g.size == 0:
        raise ValueError("gains must be a non-empty K x N matrix")
    best = np.argmax(g, axis=1)  # first maximum wins ties
    peak = g[np.arange(g.shape[0]), best]
    if np.any(~(peak > 0)):
        raise ValueError("user with an all-zero gain row")
    w = g / peak[:, None]
    w[np.arange(g.shape[0]), best] = 1.0
    w.setflags(write=False)
    best.setflags(write=False)
    return WeightMatrix(w, best)


def adjacency(w: WeightMatrix) -> np.ndarray:
    """Dense (K+N) x (K+N) adjacency; users first, then beams."""
    K, N = w.w.shape
    a = np.zeros((K + N, K + N))
    a[:K, K:] = w.w
    a[K:, :K] = w.w.T
    return a


def _canonical(user_labels: np.ndarray, beam_labels: np.ndarray):
    uniq, first, inv = np.unique(beam_labels, return_index=True, return_inverse=True)
    rank = np.empty(len(uniq), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(uniq))
    return rank[np.searchsorted(uniq, user_labels)], rank[inv.reshape(-1)]


class Partition:
    """Disjoint cover of users and beams; every subnetwork holds a beam."""

    __slots__ = ("user_labels", "beam_labels", "M")

    def __init__(self, user_labels, beam_labels):
        u = np.asarray(user_labels, dtype=np.int64).reshape(-1)
        b = np.asarray(beam_labels, dtype=np.int64).reshape(-1)
        if b.size == 0:
            raise ValueError("partition needs at least one beam")
        beam_ids = set(b.tolist())
        stray = set(u.tolist()) - beam_ids
        if stray:
            raise ValueError(f"subnetworks {sorted(stray)} contain no beam")
        u, b = _canonical(u, b)
        u.setflags(write=False)
        b.setflags(write=False)
        self.user_labels = u
        self.beam_labels = b
        self.M = len(beam_ids)

    @classmethod
    def grand_coalition(cls, K: int, N: int) -> "Partition":
        return cls(np.zeros(K, dtype=np.int64), np.zeros(N, dtype=np.int64))

    @property
    def K(self) -> int:
        return len(self.user_labels)

    @property
    def N(self) -> int:
        return len(self.beam_labels)

    def users(self, m: int) -> np.ndarray:
        return np.flatnonzero(self.user_labels == m)

    def beams(self, m: int) -> np.ndarray:
        return np.flatnonzero(self.beam_labels == m)

    def sizes(self) -> np.ndarray:
        """Vertex count (users + beams) of each subnetwork."""
        return (np.bincount(self.user_labels, minlength=self.M)
                + np.bincount(self.beam_labels, minlength=self.M))

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return (np.array_equal(self.user_labels, other.user_labels)
                and np.array_equal(self.beam_labels, other.beam_labels))

    __hash__ = None

    def __repr__(self):
        return f"Partition(M={self.M}, K={self.K}, N={self.N})"

    def to_text(self) -> str:
        """One line per subnetwork: ``users: 0 4 | beams: 1 2``."""
        lines = []
        for m in range(self.M):
            us = "".join(f" {k}" for k in self.users(m))
            bs = "".join(f" {n}" for n in self.beams(m))
            lines.append(f"users:{us} | beams:{bs}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Partition":
        users, beams = {}, {}
        for m, line in enumerate(ln for ln in text.splitlines() if ln.strip()):
            left, right = line.split("|")
            u_part = left.split(":", 1)[1].split()
            b_part = right.split(":", 1)[1].split()
            users.update((int(k), m) for k in u_part)
            beams.update((int(n), m) for n in b_part)
        if sorted(users) != list(range(len(users))) or sorted(beams) != list(range(len(beams))):
            raise ValueError("partition file does not cover every vertex exactly once")
        return cls([users[k] for k in range(len(users))], [beams[n] for n in range(len(beams))])

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "Partition":
        return cls.from_text(Path(path).read_text())


def _check_shape(partition: Partition, w: WeightMatrix):
    if (partition.K, partition.N) != w.w.shape:
        raise ValueError("partition and weight matrix disagree on K or N")


def cut_of_set(user_mask, beam_mask, w: WeightMatrix) -> float:
    """Weight crossing the boundary of an arbitrary vertex set."""
    ww = w.w
    user_mask = np.asarray(user_mask, dtype=bool)
    beam_mask = np.asarray(beam_mask, dtype=bool)
    return float(ww[np.ix_(user_mask, ~beam_mask)].sum()
                 + ww[np.ix_(~user_mask, beam_mask)].sum())


def cut(partition: Partition, m: int, w: WeightMatrix) -> float:
    _check_shape(partition, w)
    if not 0 <= m < partition.M:
        raise ValueError(f"no subnetwork {m} in a partition with M={partition.M}")
    return cut_of_set(partition.user_labels == m, partition.beam_labels == m, w)


def sumcut(partition: Partition, w: WeightMatrix) -> float:
    _check_shape(partition, w)
    crossing = partition.user_labels[:, None] != partition.beam_labels[None, :]
    return float(2.0 * w.w[crossing].sum())
