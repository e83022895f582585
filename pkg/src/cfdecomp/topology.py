"""Random network topologies and beamspace channel gains.

Gains follow ``|g_{k,n}|^2 = d^-alpha * D_{k,n}`` where ``d`` is the
user-to-AP distance and ``D`` the power gain of a DFT beam formed by a
horizontal half-wavelength linear array at the AP. Single-beam APs are
omnidirectional (``D = 1``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

SQUARE = "square"
DISC = "disc"

# Distances below this (in region units) are clamped before the power law.
DEFAULT_MIN_DISTANCE = 1e-3
_SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class Region:
    """Square ``[0, size]^2`` or disc of radius ``size`` centred at the origin."""

    shape: str = SQUARE
    size: float = 1.0

    def __post_init__(self):
        if self.shape not in (SQUARE, DISC):
            raise ValueError(f"unknown region shape {self.shape!r}")
        if not self.size > 0:
            raise ValueError("region has zero area")

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        if self.shape == SQUARE:
            return np.all((points >= 0.0) & (points <= self.size), axis=1)
        return np.hypot(points[:, 0], points[:, 1]) <= self.size

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        if self.shape == SQUARE:
            return rng.uniform(0.0, self.size, size=(count, 2))
        r = self.size * np.sqrt(rng.uniform(0.0, 1.0, size=count))
        phi = rng.uniform(0.0, 2.0 * np.pi, size=count)
        return np.column_stack([r * np.cos(phi), r * np.sin(phi)])

    @property
    def center(self) -> np.ndarray:
        if self.shape == SQUARE:
            return np.array([self.size / 2.0, self.size / 2.0])
        return np.zeros(2)


def _frozen(a, dtype=float) -> np.ndarray:
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Topology:
    region: Region
    ap_positions: np.ndarray
    user_positions: np.ndarray
    beams_per_ap: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "ap_positions", _frozen(self.ap_positions).reshape(-1, 2))
        object.__setattr__(self, "user_positions", _frozen(self.user_positions).reshape(-1, 2))
        object.__setattr__(self, "beams_per_ap", _frozen(self.beams_per_ap, dtype=np.int64).reshape(-1))
        if len(self.ap_positions) < 1 or len(self.user_positions) < 1:
            raise ValueError("topology needs at least one AP and one user")
        if len(self.beams_per_ap) != len(self.ap_positions):
            raise ValueError("beams_per_ap must have one entry per AP")
        if np.any(self.beams_per_ap < 1):
            raise ValueError("every AP needs at least one beam")

    @property
    def L(self) -> int:
        return len(self.ap_positions)

    @property
    def K(self) -> int:
        return len(self.user_positions)

    @property
    def N(self) -> int:
        return int(self.beams_per_ap.sum())

    @property
    def beam_owner(self) -> np.ndarray:
        return np.repeat(np.arange(self.L), self.beams_per_ap)

    def __eq__(self, other):
        if not isinstance(other, Topology):
            return NotImplemented
        return (
            self.region == other.region
            and self.seed == other.seed
            and np.array_equal(self.ap_positions, other.ap_positions)
            and np.array_equal(self.user_positions, other.user_positions)
            and np.array_equal(self.beams_per_ap, other.beams_per_ap)
        )

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "region": {"shape": self.region.shape, "size": self.region.size},
            "ap_positions": self.ap_positions.tolist(),
            "user_positions": self.user_positions.tolist(),
            "beams_per_ap": self.beams_per_ap.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Topology":
        return cls(
            region=Region(**data["region"]),
            ap_positions=data["ap_positions"],
            user_positions=data["user_positions"],
            beams_per_ap=data["beams_per_ap"],
            seed=data.get("seed"),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path) -> "Topology":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class GainMatrix:
    """K x N linear beamspace power gains and the AP owning each beam."""

    values: np.ndarray
    beam_owner: np.ndarray = field(default=None)

    def __post_init__(self):
        values = _frozen(self.values)
        if values.ndim != 2:
            raise ValueError("gain matrix must be 2-D")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("gains must be finite and non-negative")
        if np.any(values.max(axis=1) <= 0):
            raise ValueError("every user needs a strictly positive gain")
        owner = np.arange(values.shape[1]) if self.beam_owner is None else self.beam_owner
        owner = _frozen(owner, dtype=np.int64)
        if owner.shape != (values.shape[1],):
            raise ValueError("beam_owner must have one entry per beam")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "beam_owner", owner)

    @property
    def K(self) -> int:
        return self.values.shape[0]

    @property
    def N(self) -> int:
        return self.values.shape[1]


def generate_topology(
    seed: int,
    region: Region | None = None,
    L: int = 1,
    K: int = 1,
    beams_per_ap: int | Sequence[int] = 1,
) -> Topology:
    """Drop ``L`` APs then ``K`` users i.i.d. uniformly over ``region``."""
    region = Region() if region is None else region
    if L < 1 or K < 1:
        raise ValueError("L and K must be positive")
    beams = np.broadcast_to(np.asarray(beams_per_ap, dtype=np.int64), (L,))
    rng = np.random.default_rng(seed)
    aps = region.sample(rng, L)
    users = region.sample(rng, K)
    return Topology(region, aps, users, beams, seed=int(seed))


def generate_singlecell_topology(seed: int, K: int, N: int, radius: float = 1.0) -> Topology:
    """One N-beam AP at the centre of a disc with K uniformly dropped users."""
    if K < 1 or N < 1:
        raise ValueError("K and N must be positive")
    region = Region(DISC, radius)
    rng = np.random.default_rng(seed)
    users = region.sample(rng, K)
    return Topology(region, region.center.reshape(1, 2), users, [N], seed=int(seed))


def dft_beam_gain(cos_theta, beam_index, N: int):
    """Power gain of DFT beam ``beam_index`` (1-based) of an N-element array.

    Vectorised over ``cos_theta`` and ``beam_index``. At the removable
    singularity the analytic limit ``N`` is returned.
    """
    cos_theta = np.asarray(cos_theta, dtype=float)
    n = np.asarray(beam_index)
    if N < 1 or np.any(n < 1) or np.any(n > N):
        raise ValueError("beam index out of range")
    psi = (-(N + 1) / 2.0 + n) * np.pi
    den = np.sin(np.pi / 2.0 * cos_theta - psi / N)
    num = np.sin(N * np.pi / 2.0 * cos_theta - psi)
    singular = np.abs(den) < _SINGULAR_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = num**2 / (N * den**2)
    gain = np.where(singular, float(N), gain)
    return gain if gain.ndim else float(gain)


def beam_directions(N: int) -> np.ndarray:
    """cos of the main direction of each of the N DFT beams (peak of the gain)."""
    n = np.arange(1, N + 1)
    psi = (-(N + 1) / 2.0 + n) * np.pi
    return 2.0 * psi / (N * np.pi)


def beamspace_gains(
    topology: Topology, alpha: float, min_distance: float = DEFAULT_MIN_DISTANCE
) -> GainMatrix:
    """General multi-AP multi-beam gains ``d^-alpha * D``."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    delta = topology.user_positions[:, None, :] - topology.ap_positions[None, :, :]
    dist = np.hypot(delta[..., 0], delta[..., 1])  # K x L
    path = np.maximum(dist, min_distance) ** (-alpha)
    columns = []
    for l, n_l in enumerate(topology.beams_per_ap):
        n_l = int(n_l)
        if n_l == 1:
            columns.append(path[:, l:l + 1])
            continue
        if np.any(dist[:, l] == 0):
            raise ValueError(f"user co-located with multi-beam AP {l}: angle undefined")
        cos_theta = delta[:, l, 0] / dist[:, l]
        pattern = dft_beam_gain(cos_theta[:, None], np.arange(1, n_l + 1)[None, :], n_l)
        columns.append(path[:, l:l + 1] * pattern)
    return GainMatrix(np.hstack(columns), topology.beam_owner)


def cellfree_gains(
    topology: Topology, alpha: float, min_distance: float = DEFAULT_MIN_DISTANCE
) -> GainMatrix:
    if np.any(topology.beams_per_ap != 1):
        raise ValueError("cell-free gains need exactly one beam per AP")
    return beamspace_gains(topology, alpha, min_distance)


def singlecell_gains(
    topology: Topology, alpha: float, N: int | None = None,
    min_distance: float = DEFAULT_MIN_DISTANCE,
) -> GainMatrix:
    if topology.L != 1:
        raise ValueError("single-cell gains need exactly one AP")
    if N is not None and int(topology.beams_per_ap[0]) != N:
        topology = Topology(topology.region, topology.ap_positions,
                            topology.user_positions, [N], topology.seed)
    dist = np.hypot(*(topology.user_positions - topology.ap_positions[0]).T)
    if np.any(dist == 0):
        raise ValueError("user at the AP position: angle undefined")
    return beamspace_gains(topology, alpha, min_distance)
