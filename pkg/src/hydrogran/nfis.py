"""First-order Takagi-Sugeno neuro-fuzzy model.

Rules have Gaussian premises on each of the four condition inputs (product
t-norm) and linear consequents. Training alternates a least-squares pass on
the consequents with a gradient step on premise centers and widths.

Arrays used throughout::

    centers   (R, D)      premise centers
    widths    (R, D)      premise widths (> 0)
    coefs     (R, D+1)    consequent coefficients, column 0 is the bias
    X         (n, D)      normalized condition inputs
    y         (n,)        normalized target
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NumericError, SizeError, ValidationError

INIT_WIDTH_FLOOR = 0.05
TRAIN_WIDTH_FLOOR = 0.01
RIDGE = 1e-8
UNDERFLOW = 1e-300
KMEANS_ITERS = 25

INPUT_SYMBOLS = ("p", "s", "d", "f")


@dataclass(frozen=True)
class FuzzyRule:
    centers: tuple
    widths: tuple
    coefs: tuple


@dataclass
class TsModel:
    centers: np.ndarray
    widths: np.ndarray
    coefs: np.ndarray

    def __post_init__(self):
        self.centers = np.array(self.centers, dtype=np.float64, ndmin=2)
        self.widths = np.array(self.widths, dtype=np.float64, ndmin=2)
        self.coefs = np.array(self.coefs, dtype=np.float64, ndmin=2)
        R, D = self.centers.shape
        if R < 1:
            raise SizeError("a TS model needs at least one rule")
        if self.widths.shape != (R, D) or self.coefs.shape != (R, D + 1):
            raise SizeError(
                f"inconsistent shapes: centers {self.centers.shape}, "
                f"widths {self.widths.shape}, coefs {self.coefs.shape}"
            )
        if np.any(self.widths <= 0):
            raise ValidationError("all premise widths must be > 0")
        for name in ("centers", "widths", "coefs"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise NumericError(f"non-finite entries in {name}")

    @property
    def n_rules(self):
        return self.centers.shape[0]

    @property
    def input_dim(self):
        return self.centers.shape[1]

    @property
    def rules(self):
        return [
            FuzzyRule(tuple(c), tuple(s), tuple(p))
            for c, s, p in zip(self.centers.tolist(), self.widths.tolist(), self.coefs.tolist())
        ]

    def copy(self):
        return TsModel(self.centers.copy(), self.widths.copy(), self.coefs.copy())


@dataclass(frozen=True)
class NfisTrainConfig:
    epochs: int = 60
    learn_rate: float = 0.5
    seed: int = 0
    error_level: float = 0.0

    def __post_init__(self):
        if self.epochs < 0:
            raise ValidationError("epochs must be >= 0")
        if not (np.isfinite(self.learn_rate) and self.learn_rate > 0):
            raise ValidationError("learn_rate must be finite and positive")
        if self.error_level < 0:
            raise ValidationError("error_level must be >= 0")


def split_xy(records):
    """Split normalized (n, D+1) records into inputs and target (last column)."""
    arr = np.asarray(records, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise SizeError(f"expected (n, D+1) records, got shape {arr.shape}")
    return np.ascontiguousarray(arr[:, :-1]), arr[:, -1].copy()


def kmeans(X, k, seed, iters=KMEANS_ITERS):
    """Lloyd's algorithm from k distinct sampled points.

    Returns (centers, labels). An emptied cluster keeps its previous center.
    """
    X = np.asarray(X, dtype=np.float64)
    rng = np.random.default_rng(seed)
    centers = X[rng.choice(X.shape[0], size=k, replace=False)].copy()
    labels = np.zeros(X.shape[0], dtype=int)
    for _ in range(iters):
        d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = np.argmin(d2, axis=1)
        new = centers.copy()
        for j in range(k):
            members = X[labels == j]
            if len(members):
                new[j] = members.mean(axis=0)
        if np.array_equal(new, centers):
            break
        centers = new
    d2 = ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return centers, np.argmin(d2, axis=1)


def init_model(n_rules, granules, seed, input_dim=4):
    """Place rule centers by k-means on the granules' condition columns.

    ``granules`` may carry the target as a trailing column; only the first
    ``input_dim`` columns are clustered.
    """
    G = np.asarray(granules, dtype=np.float64)
    if G.ndim != 2 or G.shape[0] == 0:
        raise SizeError("granules must be a non-empty 2-D array")
    if n_rules < 1:
        raise SizeError("n_rules must be >= 1")
    if n_rules > G.shape[0]:
        raise SizeError(f"n_rules={n_rules} exceeds number of granules {G.shape[0]}")
    X = G[:, :input_dim]
    centers, labels = kmeans(X, n_rules, seed)
    widths = np.full_like(centers, INIT_WIDTH_FLOOR)
    for j in range(n_rules):
        members = X[labels == j]
        if len(members) > 1:
            widths[j] = np.maximum(members.std(axis=0), INIT_WIDTH_FLOOR)
    return TsModel(centers, widths, np.zeros((n_rules, input_dim + 1)))


def _check_inputs(model, X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != model.input_dim:
        raise SizeError(f"input has dimension {X.shape[1]}, model expects {model.input_dim}")
    return np.ascontiguousarray(X)


def _forward(model, X):
    """Return (normalized weights, rule outputs, prediction, fallback mask)."""
    w = kernels.firing(model.centers, model.widths, X)
    f = model.coefs[:, 0][None, :] + X @ model.coefs[:, 1:].T
    total = w.sum(axis=1)
    under = total < UNDERFLOW
    wbar = np.zeros_like(w)
    ok = ~under
    wbar[ok] = w[ok] / total[ok, None]
    if np.any(under):
        d2 = ((X[under, None, :] - model.centers[None, :, :]) ** 2).sum(axis=2)
        wbar[under, np.argmin(d2, axis=1)] = 1.0
    y = (wbar * f).sum(axis=1)
    return wbar, f, y, under


def normalized_firing(model, X):
    wbar, _, _, _ = _forward(model, _check_inputs(model, X))
    return wbar


def predict(model, X):
    X = _check_inputs(model, X)
    return _forward(model, X)[2]


def evaluate(model, x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise SizeError("evaluate expects a single condition vector")
    return float(predict(model, x)[0])


def fit_consequents_lse(model, records):
    """Least-squares consequents with the premises frozen.

    Solves the ridge-damped normal equations of the weighted linear system.
    """
    X, y = split_xy(records)
    X = _check_inputs(model, X)
    if X.shape[0] == 0:
        raise SizeError("cannot fit consequents on empty data")
    wbar, _, _, _ = _forward(model, X)
    ext = np.hstack([np.ones((X.shape[0], 1)), X])
    # Phi[n, r*(D+1) + k] = wbar[n, r] * ext[n, k]
    phi = (wbar[:, :, None] * ext[:, None, :]).reshape(X.shape[0], -1)
    A = phi.T @ phi
    A[np.diag_indices_from(A)] += RIDGE
    b = phi.T @ y
    try:
        p = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"consequent least-squares system is singular: {exc}") from None
    if not np.all(np.isfinite(p)):
        raise NumericError("consequent least-squares produced non-finite coefficients")
    return TsModel(model.centers.copy(), model.widths.copy(), p.reshape(model.coefs.shape))


def premise_gradient(model, X, y):
    """Mean squared error and its gradient w.r.t. centers and widths.

    Rows in the underflow fallback contribute no premise gradient.
    """
    X = _check_inputs(model, X)
    y = np.asarray(y, dtype=np.float64)
    wbar, f, out, under = _forward(model, X)
    resid = out - y
    n = X.shape[0]
    # d out / d c_rj = wbar_r (f_r - out) (x_j - c_rj) / s_rj^2
    g = wbar * (f - out[:, None]) * (2.0 * resid / n)[:, None]
    g[under] = 0.0
    diff = X[:, None, :] - model.centers[None, :, :]
    s2 = model.widths ** 2
    grad_c = np.einsum("nr,nrj->rj", g, diff) / s2
    grad_s = np.einsum("nr,nrj->rj", g, diff * diff) / (s2 * model.widths)
    return float(np.mean(resid ** 2)), grad_c, grad_s


def rmse(predicted, actual):
    """Root mean square error, sqrt(sum((t - t*)^2) / m)."""
    p = np.asarray(predicted, dtype=np.float64).ravel()
    a = np.asarray(actual, dtype=np.float64).ravel()
    if p.shape != a.shape:
        raise SizeError(f"length mismatch: {p.size} predictions vs {a.size} targets")
    if p.size == 0:
        raise SizeError("RMSE needs at least one value")
    return float(np.sqrt(np.sum((p - a) ** 2) / p.size))


def train_hybrid(model, records, cfg):
    """Hybrid LSE + gradient-descent training.

    Each epoch refits the consequents, scores the training RMSE and then
    takes one gradient step on the premises. The best-scoring parameters
    seen are returned, so the result never scores worse than epoch 1.
    Stops early once the training RMSE is at or below ``cfg.error_level``
    (when positive).
    """
    if cfg.epochs == 0:
        return model.copy()
    X, y = split_xy(records)
    X = _check_inputs(model, X)
    if X.shape[0] == 0:
        raise SizeError("cannot train on empty data")
    current = model.copy()
    best, best_err = None, np.inf
    for epoch in range(cfg.epochs):
        current = fit_consequents_lse(current, records)
        _, grad_c, grad_s = premise_gradient(current, X, y)
        err = rmse(predict(current, X), y)
        if err < best_err:
            best, best_err = current.copy(), err
        if cfg.error_level > 0 and err <= cfg.error_level:
            break
        for name, g in (("centers", grad_c), ("widths", grad_s)):
            bad = np.argwhere(~np.isfinite(g))
            if len(bad):
                r, j = bad[0]
                raise NumericError(f"non-finite gradient for {name}[{r},{j}] at epoch {epoch}")
        current = TsModel(
            current.centers - cfg.learn_rate * grad_c,
            np.maximum(current.widths - cfg.learn_rate * grad_s, TRAIN_WIDTH_FLOOR),
            current.coefs,
        )
    return best


def format_rules(model, decimals=6):
    """Rule-base dump, one rule per line."""
    if model.input_dim != len(INPUT_SYMBOLS):
        syms = [f"x{j + 1}" for j in range(model.input_dim)]
    else:
        syms = list(INPUT_SYMBOLS)
    fmt = f"{{:.{decimals}f}}"
    lines = []
    for c, s, p in zip(model.centers, model.widths, model.coefs):
        premise = " AND ".join(
            f"{sym}~N({fmt.format(cj)},{fmt.format(sj)})" for sym, cj, sj in zip(syms, c, s)
        )
        terms = " + ".join(f"{fmt.format(pj)}·{sym}" for sym, pj in zip(syms, p[1:]))
        lines.append(f"IF {premise} THEN y = {fmt.format(p[0])} + {terms}")
    return "\n".join(lines) + "\n"
