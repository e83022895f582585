"""M-way mincut of the meganode graph by spectral clustering.

The unnormalised Laplacian ``L = D - W~`` is diagonalised densely
(Householder tridiagonalisation followed by implicit-shift QL), its ``M``
lowest eigenvectors embed the meganodes in R^M and k-means groups the rows.
An exhaustive solver is provided as an oracle for small graphs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import Partition
from .meganode import MeganodeGraph, lift_partition, meganode_sumcut

KMEANS_RESTARTS = 20
BRUTEFORCE_MAX_N = 12


class EigenError(RuntimeError):
    pass


def laplacian(mg: MeganodeGraph) -> np.ndarray:
    w = np.asarray(mg.w_tilde, dtype=float)
    return np.diag(w.sum(axis=1)) - w


def tridiagonalize(a: np.ndarray):
    """Householder reduction ``a = Q T Q^T``; returns ``(diag, offdiag, Q)``."""
    t = np.array(a, dtype=float)
    n = t.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = t[k + 1:, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        v = x.copy()
        v[0] += math.copysign(alpha, x[0])
        v /= np.linalg.norm(v)
        # H = I - 2 v v^T applied on both sides of the trailing block
        t[k + 1:, k:] -= 2.0 * np.outer(v, v @ t[k + 1:, k:])
        t[k:, k + 1:] -= 2.0 * np.outer(t[k:, k + 1:] @ v, v)
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
    return np.diag(t).copy(), np.diag(t, -1).copy(), q


def tridiagonal_ql(d: np.ndarray, e: np.ndarray, z: np.ndarray, tol: float = 1e-12,
                   max_iter: int = 60):
    """Implicit-shift QL on a symmetric tridiagonal matrix, in place.

    ``d`` is the diagonal, ``e`` the sub-diagonal (length n-1) and the
    columns of ``z`` are rotated along so that on return they hold the
    eigenvectors matching ``d``.
    """
    n = len(d)
    e = np.append(np.asarray(e, dtype=float), 0.0)
    zt = z.T  # rows of zt are columns of z, contiguous updates
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd or abs(e[m]) < 1e-300:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise EigenError("QL iteration did not converge")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                zi, zi1 = zt[i].copy(), zt[i + 1].copy()
                zt[i + 1] = s * zi + c * zi1
                zt[i] = c * zi - s * zi1
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, z


def symmetric_eig(a: np.ndarray, tol: float = 1e-12):
    """All eigenpairs of a symmetric matrix, eigenvalues ascending.

    Ties keep the order of the QL solve. Each eigenvector is signed so its
    largest-magnitude entry is positive.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    if n == 1:
        return a[0].copy(), np.ones((1, 1))
    d, e, q = tridiagonalize(a)
    d, z = tridiagonal_ql(d, e, q, tol=tol)
    order = np.argsort(d, kind="stable")
    vals, vecs = d[order], z[:, order]
    peak = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[peak, np.arange(n)])
    signs[signs == 0] = 1.0
    return vals, vecs * signs


@dataclass(frozen=True)
class SpectralEmbedding:
    Y: np.ndarray
    eigenvalues: np.ndarray


def smallest_eigenvectors(L: np.ndarray, M: int) -> SpectralEmbedding:
    L = np.asarray(L, dtype=float)
    if not 1 <= M <= L.shape[0]:
        raise ValueError(f"need 1 <= M <= {L.shape[0]}, got M={M}")
    vals, vecs = symmetric_eig(L)
    return SpectralEmbedding(vecs[:, :M], vals[:M])


def _sq_dists(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    return ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def _seed_centers(points: np.ndarray, M: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    chosen = [int(rng.integers(n))]
    closest = ((points - points[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, M):
        total = closest.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=closest / total))
        else:
            free = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(free))
        chosen.append(nxt)
        closest = np.minimum(closest, ((points - points[nxt]) ** 2).sum(axis=1))
    return points[chosen].copy()


def _repair_empty(points, labels, centers, M):
    counts = np.bincount(labels, minlength=M)
    for j in np.flatnonzero(counts == 0):
        spread = ((points - centers[labels]) ** 2).sum(axis=1)
        spread[counts[labels] <= 1] = -1.0
        donor = int(np.argmax(spread))
        counts[labels[donor]] -= 1
        labels[donor] = j
        counts[j] = 1
        centers[j] = points[donor]
    return labels


def kmeans(rows: np.ndarray, M: int, seed, max_iter: int = 300) -> np.ndarray:
    """Lloyd's k-means with k-means++ seeding; returns labels in ``0..M-1``.

    Every cluster ends non-empty: an empty cluster takes over the point
    farthest from its centroid among clusters with more than one member.
    """
    points = np.asarray(rows, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = len(points)
    if not 1 <= M <= n:
        raise ValueError(f"need 1 <= M <= {n}, got M={M}")
    if M == 1:
        return np.zeros(n, dtype=np.int64)
    if M == n:
        return np.arange(n, dtype=np.int64)
    rng = np.random.default_rng(seed)
    centers = _seed_centers(points, M, rng)
    labels = np.full(n, -1, dtype=np.int64)
    for _ in range(max_iter):
        new = np.argmin(_sq_dists(points, centers), axis=1)
        new = _repair_empty(points, new, centers, M)
        if np.array_equal(new, labels):
            break
        labels = new
        for j in range(M):
            centers[j] = points[labels == j].mean(axis=0)
    return labels


def _relabel(labels: np.ndarray) -> np.ndarray:
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inv.reshape(-1)]


def restart_seeds(seed: int, M: int, restarts: int = KMEANS_RESTARTS) -> list[list[int]]:
    return [[int(seed), int(M), r] for r in range(restarts)]


def mway_partition(mg: MeganodeGraph, M: int, seed: int = 0, *,
                   embedding: SpectralEmbedding | None = None,
                   restarts: int = KMEANS_RESTARTS) -> Partition:
    """Spectral M-way partition; the k-means restart with least sumcut wins.

    ``embedding`` may carry precomputed eigenvectors for at least ``M``
    columns, which lets a caller probing several ``M`` diagonalise once.
    """
    N = mg.n
    if not 1 <= M <= N:
        raise ValueError(f"need 1 <= M <= {N}, got M={M}")
    if M == 1:
        return lift_partition(mg, np.zeros(N, dtype=np.int64))
    if M == N:
        return lift_partition(mg, np.arange(N))
    if embedding is None:
        embedding = smallest_eigenvectors(laplacian(mg), M)
    Y = embedding.Y[:, :M]
    best, best_cost = None, math.inf
    for rs in restart_seeds(seed, M, restarts):
        labels = _relabel(kmeans(Y, M, rs))
        cost = meganode_sumcut(mg, labels)
        if cost < best_cost:
            best, best_cost = labels, cost
    return lift_partition(mg, best)


def bruteforce_assignment(w_tilde: np.ndarray, M: int) -> tuple[np.ndarray, float]:
    """Exact minimum-sumcut assignment of meganodes to exactly M labels.

    Depth-first over restricted-growth strings (label-permutation canonical),
    pruning partial assignments whose cost already reaches the incumbent.
    """
    w = np.asarray(w_tilde, dtype=float)
    N = w.shape[0]
    if N > BRUTEFORCE_MAX_N:
        raise ValueError(f"bruteforce limited to N <= {BRUTEFORCE_MAX_N}, got {N}")
    if not 1 <= M <= N:
        raise ValueError(f"need 1 <= M <= {N}, got M={M}")
    labels = np.zeros(N, dtype=np.int64)
    best = {"cost": math.inf, "labels": None}

    def visit(i: int, used: int, cost: float):
        if cost >= best["cost"]:
            return
        if N - i < M - used:
            return
        if i == N:
            best["cost"], best["labels"] = cost, labels.copy()
            return
        prev = labels[:i]
        for lab in range(min(used + 1, M)):
            # every earlier meganode with a different label adds a crossing edge
            add = 2.0 * w[i, :i][prev != lab].sum()
            labels[i] = lab
            visit(i + 1, max(used, lab + 1), cost + add)

    visit(0, 0, 0.0)
    return best["labels"], best["cost"]


def bruteforce_mincut(mg: MeganodeGraph, M: int) -> Partition:
    labels, _ = bruteforce_assignment(mg.w_tilde, M)
    return lift_partition(mg, labels)
