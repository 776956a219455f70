"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The loop versions are written in the subset of Python that numba compiles
in nopython mode. The numpy versions vectorize over units/rules instead of
looping and are used when numba is missing or when the environment variable
``HYDROGRAN_DISABLE_NUMBA`` is set to anything other than ``""``/``"0"``.

Both paths implement the same arithmetic; results agree to rounding error.
"""

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
NUMBA_DISABLED = os.environ.get("HYDROGRAN_DISABLE_NUMBA", "") not in ("", "0")
BACKEND = "numba" if HAVE_NUMBA and not NUMBA_DISABLED else "numpy"


# ---------------------------------------------------------------------------
# loop kernels (compiled by numba when available)


def _som_epoch_loop(codebook, grid, data, order, lr, sigma):
    n_units, dim = codebook.shape
    inv2s2 = 1.0 / (2.0 * sigma * sigma)
    for t in range(order.shape[0]):
        x = data[order[t]]
        best = 0
        best_d2 = np.inf
        for u in range(n_units):
            d2 = 0.0
            for k in range(dim):
                diff = x[k] - codebook[u, k]
                d2 += diff * diff
            if d2 < best_d2:
                best_d2 = d2
                best = u
        gr = grid[best, 0]
        gc = grid[best, 1]
        for u in range(n_units):
            dr = grid[u, 0] - gr
            dc = grid[u, 1] - gc
            a = lr * np.exp(-(dr * dr + dc * dc) * inv2s2)
            for k in range(dim):
                codebook[u, k] += a * (x[k] - codebook[u, k])
    return codebook


def _bmu_loop(codebook, data):
    n = data.shape[0]
    n_units, dim = codebook.shape
    idx = np.empty(n, dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    for i in range(n):
        best = 0
        best_d2 = np.inf
        for u in range(n_units):
            d2 = 0.0
            for k in range(dim):
                diff = data[i, k] - codebook[u, k]
                d2 += diff * diff
            if d2 < best_d2:
                best_d2 = d2
                best = u
        idx[i] = best
        dist[i] = np.sqrt(best_d2)
    return idx, dist


def _firing_loop(centers, widths, X):
    n = X.shape[0]
    n_rules, dim = centers.shape
    w = np.empty((n, n_rules), dtype=np.float64)
    for i in range(n):
        for r in range(n_rules):
            s = 0.0
            for j in range(dim):
                z = (X[i, j] - centers[r, j]) / widths[r, j]
                s += z * z
            w[i, r] = np.exp(-0.5 * s)
    return w


# ---------------------------------------------------------------------------
# numpy kernels


def _som_epoch_numpy(codebook, grid, data, order, lr, sigma):
    inv2s2 = 1.0 / (2.0 * sigma * sigma)
    for t in order:
        x = data[t]
        diff = x - codebook
        best = int(np.argmin(np.einsum("ij,ij->i", diff, diff)))
        g = grid - grid[best]
        a = lr * np.exp(-np.einsum("ij,ij->i", g, g) * inv2s2)
        codebook += a[:, None] * diff
    return codebook


def _bmu_numpy(codebook, data):
    # direct differences, not the |a|^2-2ab+|b|^2 expansion: ties must stay exact
    diff = data[:, None, :] - codebook[None, :, :]
    exact = np.einsum("nuk,nuk->nu", diff, diff)
    idx = np.argmin(exact, axis=1)
    dist = np.sqrt(exact[np.arange(data.shape[0]), idx])
    return idx.astype(np.int64), dist


def _firing_numpy(centers, widths, X):
    z = (X[:, None, :] - centers[None, :, :]) / widths[None, :, :]
    return np.exp(-0.5 * np.einsum("nrj,nrj->nr", z, z))


numpy_kernels = SimpleNamespace(
    name="numpy",
    som_epoch=_som_epoch_numpy,
    bmu=_bmu_numpy,
    firing=_firing_numpy,
)

if HAVE_NUMBA:
    numba_kernels = SimpleNamespace(
        name="numba",
        som_epoch=numba.njit(cache=True)(_som_epoch_loop),
        bmu=numba.njit(cache=True)(_bmu_loop),
        firing=numba.njit(cache=True)(_firing_loop),
    )
else:  # pragma: no cover
    numba_kernels = None

active = numba_kernels if BACKEND == "numba" else numpy_kernels


def som_epoch(codebook, grid, data, order, lr, sigma):
    """One online SOM pass over ``data[order]``; updates ``codebook`` in place."""
    return active.som_epoch(codebook, grid, data, order, float(lr), float(sigma))


def bmu(codebook, data):
    """Return (unit index, Euclidean distance) for each row of ``data``.

    Ties resolve to the lowest unit index.
    """
    return active.bmu(codebook, data)


def firing(centers, widths, X):
    """Unnormalized Gaussian product firing strengths, shape (n, rules)."""
    return active.firing(centers, widths, X)
