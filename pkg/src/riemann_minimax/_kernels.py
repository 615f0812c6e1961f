"""Compiled inner loop for long Euclidean reference runs.

Mirrors the fraction-step loop of :mod:`riemann_minimax.solver` on flat
space with the harmonic schedule and deterministic tie-breaking.
"""

import numba
import numpy as np

from .geometry import TIE_RTOL


@numba.njit(cache=True)
def _farthest(points, x):
    n, d = points.shape
    dist = np.empty(n)
    dmax = 0.0
    for i in range(n):
        s = 0.0
        for j in range(d):
            diff = points[i, j] - x[j]
            s += diff * diff
        dist[i] = np.sqrt(s)
        if dist[i] > dmax:
            dmax = dist[i]
    for i in range(n):
        if dist[i] >= dmax * (1.0 - TIE_RTOL):
            return i, dmax
    return 0, dmax


@numba.njit(cache=True)
def euclid_harmonic_run(points, start, iterations):
    """Final center and radius after ``iterations`` steps of ``c += (f - c) / (k + 1)``."""
    d = points.shape[1]
    x = points[start].copy()
    f, radius = _farthest(points, x)
    if radius == 0.0:
        return x, radius
    for k in range(1, iterations + 1):
        t = 1.0 / (k + 1)
        for j in range(d):
            x[j] = x[j] + t * (points[f, j] - x[j])
        f, radius = _farthest(points, x)
    return x, radius
