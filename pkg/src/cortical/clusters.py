"""Summarise learned input samples as discrete mass points."""

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from models.errors import ConfigurationError


@dataclass(frozen=True)
class MassPoint:
    center: np.ndarray
    mass: float


def cluster_mass_points(samples: np.ndarray, eps: float) -> list[MassPoint]:
    """
    Greedy agglomeration into eps-balls.

    The unassigned sample with the most unassigned neighbours within `eps`
    seeds a cluster that absorbs all of them; repeat until every sample is
    assigned. Ties go to the lowest sample index. Clusters are returned
    sorted by their first coordinate and masses sum to 1.

    Args:
        samples: Shape `(d, N)` or a flat vector of scalar samples.
        eps: Ball radius.
    """
    if not eps > 0:
        raise ConfigurationError(f"eps must be positive, got {eps}.")
    points = np.asarray(samples, dtype=np.float64)
    points = points.reshape(1, -1) if points.ndim == 1 else points
    points = points.T
    n = points.shape[0]
    if n == 0:
        raise ConfigurationError("Cannot cluster an empty sample set.")

    tree = cKDTree(points)
    neighbours = tree.query_ball_point(points, r=eps)
    unassigned = np.ones(n, dtype=bool)
    clusters: list[MassPoint] = []
    while unassigned.any():
        counts = np.array(
            [np.count_nonzero(unassigned[nb]) if unassigned[i] else -1 for i, nb in enumerate(neighbours)]
        )
        seed = int(np.argmax(counts))
        members = [j for j in neighbours[seed] if unassigned[j]]
        unassigned[members] = False
        clusters.append(MassPoint(center=points[members].mean(axis=0), mass=len(members) / n))
    return sorted(clusters, key=lambda c: float(c.center[0]))
