"""Hard and soft centroid clustering used as timing baselines.

Both kernels take an ``(n, 2)`` array of (direct trust, average precision)
points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    n_iter: int
    inertia: list[float]


@dataclass
class FCMResult:
    membership: np.ndarray
    centroids: np.ndarray
    n_iter: int


def _sq_dists(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def kmeans(points, k: int = 3, max_iter: int = 100, tol: float = 1e-4, seed=None) -> KMeansResult:
    """Lloyd's algorithm with centroids seeded from the data.

    An emptied cluster is re-seeded at the point farthest from its current
    centroid.  ``inertia`` records the objective after each assignment.
    """
    x = np.asarray(points, dtype=float)
    n = len(x)
    if k < 1 or n == 0:
        raise ValueError("need k >= 1 and at least one point")
    rng = np.random.default_rng(seed)
    centroids = x[rng.choice(n, size=k, replace=n < k)].copy()
    inertia = []
    labels = np.zeros(n, dtype=np.intp)
    it = 0
    for it in range(1, max_iter + 1):
        d = _sq_dists(x, centroids)
        labels = d.argmin(axis=1)
        closest = d[np.arange(n), labels]
        inertia.append(float(closest.sum()))

        new = centroids.copy()
        counts = np.bincount(labels, minlength=k)
        for j in range(k):
            if counts[j]:
                new[j] = x[labels == j].mean(axis=0)
            else:
                far = int(closest.argmax())
                new[j] = x[far]
                closest[far] = 0.0
        shift = np.sqrt(((new - centroids) ** 2).sum(axis=1)).max()
        centroids = new
        if shift < tol:
            break
    return KMeansResult(labels, centroids, it, inertia)


def fuzzy_cmeans(points, c: int = 3, m: float = 2.0, max_iter: int = 100, tol: float = 1e-4, seed=None) -> FCMResult:
    x = np.asarray(points, dtype=float)
    n = len(x)
    if c < 1 or m <= 1 or n == 0:
        raise ValueError("need c >= 1, m > 1 and at least one point")
    rng = np.random.default_rng(seed)
    u = rng.random((n, c))
    u /= u.sum(axis=1, keepdims=True)
    power = 2.0 / (m - 1.0)
    centroids = np.zeros((c, x.shape[1]))
    it = 0
    for it in range(1, max_iter + 1):
        um = u ** m
        weight = um.sum(axis=0)
        live = weight > 0
        # a centroid with no membership mass keeps its previous position
        centroids[live] = (um.T @ x)[live] / weight[live, None]
        d = np.sqrt(_sq_dists(x, centroids))
        zero = d == 0.0
        hit = zero.any(axis=1)
        # (d_min / d)^power lies in [0, 1], so tiny distances cannot overflow
        with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
            ratio = (d.min(axis=1, keepdims=True) / d) ** power
            new = ratio / ratio.sum(axis=1, keepdims=True)
        if hit.any():
            new[hit] = 0.0
            new[hit, zero[hit].argmax(axis=1)] = 1.0
        delta = np.abs(new - u).max()
        u = new
        if delta < tol:
            break
    return FCMResult(u, centroids, it)
