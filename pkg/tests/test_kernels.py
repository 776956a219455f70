"""The numba and numpy kernel paths must agree."""

import numpy as np
import pytest

from hydrogran import kernels

pytestmark = pytest.mark.skipif(kernels.numba_kernels is None, reason="numba not installed")

BACKENDS = [kernels.numpy_kernels, kernels.numba_kernels]


def _grid(rows, cols):
    r, c = np.divmod(np.arange(rows * cols), cols)
    return np.column_stack([r, c]).astype(np.float64)


@pytest.mark.parametrize("seed", range(5))
def test_som_epoch_agrees(seed):
    rng = np.random.default_rng(seed)
    data = rng.random((80, 5))
    code = rng.random((12, 5))
    order = rng.permutation(80).astype(np.int64)
    a = kernels.numpy_kernels.som_epoch(code.copy(), _grid(3, 4), data, order, 0.3, 1.5)
    b = kernels.numba_kernels.som_epoch(code.copy(), _grid(3, 4), data, order, 0.3, 1.5)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_bmu_agrees(seed):
    rng = np.random.default_rng(seed)
    data = rng.random((200, 4))
    code = rng.random((9, 4))
    ia, da = kernels.numpy_kernels.bmu(code, data)
    ib, db = kernels.numba_kernels.bmu(code, data)
    np.testing.assert_array_equal(ia, ib)
    np.testing.assert_allclose(da, db, rtol=0, atol=1e-12)


@pytest.mark.parametrize("k", BACKENDS, ids=lambda k: k.name)
def test_bmu_tie_lowest_index(k):
    code = np.array([[0.0, 0.0], [5.0, 5.0], [1.0, 0.0], [9.0, 9.0], [9.0, 8.0], [-1.0, 0.0]])
    idx, dist = k.bmu(code, np.array([[0.0, 0.0], [0.5, 0.0]]))
    assert idx.tolist() == [0, 0]
    np.testing.assert_allclose(dist, [0.0, 0.5])


@pytest.mark.parametrize("seed", range(3))
def test_firing_agrees(seed):
    rng = np.random.default_rng(seed)
    X = rng.random((30, 4))
    c = rng.random((3, 4))
    s = rng.uniform(0.1, 0.6, (3, 4))
    np.testing.assert_allclose(
        kernels.numpy_kernels.firing(c, s, X), kernels.numba_kernels.firing(c, s, X), rtol=1e-13
    )


def test_backend_flag_is_consistent():
    assert kernels.BACKEND in ("numba", "numpy")
    assert kernels.active.name == kernels.BACKEND
