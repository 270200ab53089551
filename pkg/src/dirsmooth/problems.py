"""Objective functions, synthetic problem generators, dataset ingestion and
reference-optimum computation.

All objectives expose ``value``, ``gradient``, ``hessian_vector_product`` and
``smoothness_constant``. Points are plain 1-D float64 numpy arrays. Objectives
are immutable after construction and safe to share between threads/processes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import (
    DataFormatError,
    DimensionMismatchError,
    ReferenceSolveError,
    SeparableDataError,
    StepSizeError,
    UnsupportedObjectiveError,
)

__all__ = [
    "Objective",
    "QuadraticObjective",
    "LogisticObjective",
    "ReferenceSolution",
    "IngestOptions",
    "make_power_law_quadratic",
    "make_synthetic_logistic",
    "load_dataset_csv",
    "compute_reference_solution",
    "default_x0",
    "sigmoid",
]


def sigmoid(z):
    """Numerically stable logistic sigmoid, elementwise."""
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _as_point(x, dim, name="x"):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != dim:
        raise DimensionMismatchError(
            f"{name} has shape {x.shape}, expected ({dim},)"
        )
    return x


class Objective:
    """Interface shared by all objectives.

    Subclasses set ``dim`` and ``is_convex`` and implement ``value`` and
    ``gradient``; ``hessian_vector_product`` is optional.
    """

    dim: int
    is_convex: bool = True
    tag: str = "objective"

    def value(self, x) -> float:
        raise NotImplementedError

    def gradient(self, x) -> np.ndarray:
        raise NotImplementedError

    def gradient_many(self, X) -> np.ndarray:
        """Gradients at each row of X. Default falls back to a Python loop;
        subclasses override with a vectorized path."""
        X = np.asarray(X, dtype=float)
        return np.stack([self.gradient(row) for row in X])

    def hessian_vector_product(self, x, v) -> np.ndarray:
        raise UnsupportedObjectiveError(
            f"{type(self).__name__} does not support Hessian-vector products"
        )

    def smoothness_constant(self) -> float:
        raise UnsupportedObjectiveError(
            f"{type(self).__name__} has no known global smoothness constant"
        )


class QuadraticObjective(Objective):
    """f(x) = x'Bx/2 - c'x with B symmetric positive semi-definite.

    ``B`` may be a dense (d, d) matrix or a 1-D array of diagonal entries.
    """

    def __init__(self, B, c=None):
        B = np.asarray(B, dtype=float)
        if B.ndim == 1:
            self.diag = B.copy()
            self.B = None
            d = B.shape[0]
            lam_max = float(self.diag.max(initial=0.0))
            if np.any(self.diag < -1e-12 * max(lam_max, 1.0)):
                raise ValueError("diagonal quadratic is not PSD")
        elif B.ndim == 2 and B.shape[0] == B.shape[1]:
            scale = max(float(np.abs(B).max()), 1.0)
            if not np.allclose(B, B.T, rtol=0.0, atol=1e-12 * scale):
                raise ValueError("B is not symmetric within 1e-12 relative")
            self.B = 0.5 * (B + B.T)
            self.diag = None
            d = B.shape[0]
            lam = np.linalg.eigvalsh(self.B)
            if lam[0] < -1e-12 * max(lam[-1], 1.0):
                raise ValueError(f"B is not PSD: lambda_min = {lam[0]:.3e}")
        else:
            raise ValueError(f"B must be (d,) or (d, d), got shape {B.shape}")
        self.dim = d
        self.c = np.zeros(d) if c is None else _as_point(c, d, "c")
        if not np.all(np.isfinite(self.c)):
            raise ValueError("c has non-finite entries")
        self.is_convex = True
        self.tag = f"quadratic(d={d})"
        self._L = None

    def matvec(self, v):
        if self.diag is not None:
            return self.diag * v
        return self.B @ v

    def value(self, x) -> float:
        x = _as_point(x, self.dim)
        return 0.5 * float(x @ self.matvec(x)) - float(self.c @ x)

    def gradient(self, x) -> np.ndarray:
        x = _as_point(x, self.dim)
        return self.matvec(x) - self.c

    def gradient_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if self.diag is not None:
            return X * self.diag[None, :] - self.c[None, :]
        return X @ self.B - self.c[None, :]

    def hessian_vector_product(self, x, v) -> np.ndarray:
        _as_point(x, self.dim)
        return self.matvec(_as_point(v, self.dim, "v"))

    def smoothness_constant(self) -> float:
        if self._L is None:
            if self.diag is not None:
                self._L = float(self.diag.max())
            else:
                self._L = float(np.linalg.eigvalsh(self.B)[-1])
        return self._L


class LogisticObjective(Objective):
    """Unregularized logistic regression on labels in {-1, +1}.

    f(x) = sum_i log(1 + exp(-y_i a_i'x)). The global smoothness constant is
    lambda_max(A'A)/4, the tight bound on the Hessian at x = 0.
    """

    def __init__(self, A, y):
        A = np.asarray(A, dtype=float)
        y = np.asarray(y, dtype=float)
        if A.ndim != 2:
            raise ValueError(f"A must be 2-D, got shape {A.shape}")
        if y.shape != (A.shape[0],):
            raise ValueError(f"y has shape {y.shape}, expected ({A.shape[0]},)")
        if not np.all(np.isfinite(A)):
            raise ValueError("data matrix contains non-finite entries")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ValueError("labels must be exactly -1 or +1")
        self.A = A
        self.y = y
        self.n, self.dim = A.shape
        self.is_convex = True
        self.tag = f"logistic(n={self.n},d={self.dim})"
        self._L = None

    def margins(self, x) -> np.ndarray:
        x = _as_point(x, self.dim)
        return self.y * (self.A @ x)

    def value(self, x) -> float:
        return float(np.logaddexp(0.0, -self.margins(x)).sum())

    def gradient(self, x) -> np.ndarray:
        s = sigmoid(-self.margins(x))
        return -(self.A.T @ (self.y * s))

    def gradient_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        Z = (X @ self.A.T) * self.y[None, :]
        S = sigmoid(-Z)
        return -(S * self.y[None, :]) @ self.A

    def hessian_vector_product(self, x, v) -> np.ndarray:
        z = self.margins(x)
        v = _as_point(v, self.dim, "v")
        w = sigmoid(z) * sigmoid(-z)
        return self.A.T @ (w * (self.A @ v))

    def smoothness_constant(self) -> float:
        if self._L is None:
            self._L = _power_iteration_gram(self.A, tol=1e-10) / 4.0
        return self._L


def _power_iteration_gram(A, tol=1e-10, max_iters=100_000):
    """Largest eigenvalue of A'A by power iteration on v -> A'(Av)."""
    n, d = A.shape
    rng = np.random.default_rng(np.random.SeedSequence((0x5EED, n, d)))
    v = rng.standard_normal(d)
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(max_iters):
        w = A.T @ (A @ v)
        lam_new = float(v @ w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        if abs(lam_new - lam) <= tol * max(abs(lam_new), 1e-300):
            return lam_new
        lam = lam_new
    return lam


@dataclass
class ReferenceSolution:
    """Reference optimum: the point, its value, the achieved gradient norm
    and a tag naming the method that produced it."""

    x_star: np.ndarray
    f_star: float
    grad_norm: float
    method_tag: str

    def to_dict(self) -> dict:
        return {
            "x_star": [float(v) for v in self.x_star],
            "f_star": float(self.f_star),
            "grad_norm": float(self.grad_norm),
            "method_tag": self.method_tag,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def from_dict(cls, d) -> "ReferenceSolution":
        return cls(
            x_star=np.asarray(d["x_star"], dtype=float),
            f_star=float(d["f_star"]),
            grad_norm=float(d["grad_norm"]),
            method_tag=str(d["method_tag"]),
        )

    @classmethod
    def load(cls, path) -> "ReferenceSolution":
        return cls.from_dict(json.loads(Path(path).read_text()))


def make_power_law_quadratic(d, alpha, L, seed, rotate=True) -> QuadraticObjective:
    """Quadratic with eigenvalues lambda_i proportional to i^(-alpha),
    rescaled so lambda_max = L exactly.

    A seeded orthogonal rotation is applied unless ``rotate`` is False, and
    the linear term c is drawn from the same seeded stream. Bit-identical
    output for a fixed seed.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    if alpha <= 0 or L <= 0:
        raise ValueError("alpha and L must be positive")
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0xA11CE)))
    lam = np.arange(1, d + 1, dtype=float) ** (-float(alpha))
    lam *= L / lam.max()
    if rotate and d > 1:
        Q, R = np.linalg.qr(rng.standard_normal((d, d)))
        Q *= np.sign(np.diag(R))[None, :]
        B = (Q * lam) @ Q.T
        B = 0.5 * (B + B.T)
        obj = QuadraticObjective(B, rng.standard_normal(d))
    else:
        obj = QuadraticObjective(lam, rng.standard_normal(d))
    obj.tag = f"power_law(d={d},alpha={alpha:g},L={L:g},seed={seed})"
    return obj


def make_synthetic_logistic(n, d, seed, flip=0.15, scale=1.0) -> LogisticObjective:
    """Non-separable logistic problem: Gaussian features, labels from a random
    hyperplane with a flipped fraction to guarantee a finite minimizer."""
    if not 0.0 < flip < 0.5:
        raise ValueError("flip fraction must be in (0, 0.5)")
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0x10615)))
    A = scale * rng.standard_normal((n, d))
    w = rng.standard_normal(d)
    y = np.sign(A @ w + 0.3 * rng.standard_normal(n))
    y[y == 0.0] = 1.0
    idx = rng.choice(n, size=max(1, int(round(flip * n))), replace=False)
    y[idx] *= -1.0
    obj = LogisticObjective(A, y)
    obj.tag = f"synthetic_logistic(n={n},d={d},seed={seed})"
    return obj


def default_x0(dim, seed) -> np.ndarray:
    """Seeded starting point with Kaiming-style scale sqrt(2/d)."""
    rng = np.random.default_rng(np.random.SeedSequence((int(seed), 0xBEEF)))
    return rng.standard_normal(dim) * np.sqrt(2.0 / dim)


@dataclass
class IngestOptions:
    """Options for ``load_dataset_csv``.

    ``split_seed`` set to an int requests a seeded 80-20 train/test split and
    changes the return value to a (train, test) pair.
    """

    add_bias: bool = False
    standardize: bool = False
    split_seed: int | None = None
    test_fraction: float = 0.2


def load_dataset_csv(path, options: IngestOptions | None = None):
    """Read a comma-separated dataset: last column is the label, the rest are
    real features. A non-numeric first row is treated as a header. Labels in
    {0, 1} are mapped to {-1, +1}.
    """
    options = options or IngestOptions()
    lines = Path(path).read_text().splitlines()
    rows = [ln for ln in lines if ln.strip() != ""]
    if not rows:
        raise DataFormatError(f"{path}: file is empty")

    def parse_row(line, row_idx):
        cells = line.split(",")
        vals = []
        for col_idx, cell in enumerate(cells):
            try:
                vals.append(float(cell))
            except ValueError:
                raise DataFormatError(
                    f"{path}: cannot parse row {row_idx}, column {col_idx}: {cell!r}"
                ) from None
        return vals

    start = 0
    try:
        first = parse_row(rows[0], 0)
    except DataFormatError:
        start = 1
        if len(rows) == 1:
            raise DataFormatError(f"{path}: only a header row present") from None
        first = parse_row(rows[1], 1)
    arity = len(first)
    if arity < 2:
        raise DataFormatError(f"{path}: rows need at least one feature and a label")

    data = []
    for i in range(start, len(rows)):
        vals = parse_row(rows[i], i)
        if len(vals) != arity:
            raise DataFormatError(
                f"{path}: row {i} has {len(vals)} columns, expected {arity}"
            )
        data.append(vals)
    data = np.asarray(data, dtype=float)
    X, labels = data[:, :-1], data[:, -1]

    uniq = set(np.unique(labels).tolist())
    if uniq <= {0.0, 1.0}:
        y = 2.0 * labels - 1.0
    elif uniq <= {-1.0, 1.0}:
        y = labels.copy()
    else:
        raise DataFormatError(
            f"{path}: labels must be in {{0,1}} or {{-1,+1}}, found {sorted(uniq)}"
        )

    if options.standardize:
        mean = X.mean(axis=0)
        std = X.std(axis=0)
        std[std == 0.0] = 1.0
        X = (X - mean) / std
    if options.add_bias:
        X = np.hstack([X, np.ones((X.shape[0], 1))])

    if options.split_seed is None:
        return LogisticObjective(X, y)

    n = X.shape[0]
    rng = np.random.default_rng(np.random.SeedSequence((int(options.split_seed), 0x5137)))
    perm = rng.permutation(n)
    n_test = int(round(options.test_fraction * n))
    test_idx = perm[:n_test]
    train_idx = perm[n_test:]
    return (
        LogisticObjective(X[train_idx], y[train_idx]),
        LogisticObjective(X[test_idx], y[test_idx]),
    )


def compute_reference_solution(obj, tol=1e-10, max_iters=200_000) -> ReferenceSolution:
    """Reference optimum with ||grad f(x*)|| <= tol.

    Quadratics are solved exactly (linear solve / least squares). Other convex
    objectives run gradient descent with step-sizes strongly adapted to the
    point-wise directional smoothness, with plateau and separability guards.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not obj.is_convex:
        raise UnsupportedObjectiveError("reference solving requires a convex objective")

    if isinstance(obj, QuadraticObjective):
        return _solve_quadratic_reference(obj)
    return _solve_gd_reference(obj, tol, max_iters)


def _solve_quadratic_reference(obj) -> ReferenceSolution:
    if obj.diag is not None:
        lam = obj.diag
        x = np.zeros(obj.dim)
        nz = lam > 1e-14 * max(lam.max(initial=0.0), 1.0)
        x[nz] = obj.c[nz] / lam[nz]
        if np.any(np.abs(obj.c[~nz]) > 1e-12 * (1.0 + np.abs(obj.c).max())):
            raise ReferenceSolveError(
                "quadratic is unbounded below: c has mass on a null eigendirection",
                best_x=x,
            )
    else:
        try:
            x = np.linalg.solve(obj.B, obj.c)
        except np.linalg.LinAlgError:
            x, *_ = np.linalg.lstsq(obj.B, obj.c, rcond=None)
    g = obj.gradient(x)
    gn = float(np.linalg.norm(g))
    if gn > 1e-8 * (1.0 + float(np.linalg.norm(obj.c))):
        raise ReferenceSolveError(
            f"linear solve residual {gn:.3e} too large; quadratic may be unbounded",
            best_x=x,
            best_grad_norm=gn,
        )
    return ReferenceSolution(x, obj.value(x), gn, "linear_solve")


def _solve_gd_reference(obj, tol, max_iters) -> ReferenceSolution:
    from .stepsizes import RootSolveConfig, solve_strongly_adapted
    from .smoothness import SmoothnessKind

    cfg = RootSolveConfig(tol=1e-10)
    x = np.zeros(obj.dim)
    best_x, best_gn = x, float(np.linalg.norm(obj.gradient(x)))
    window, last_window_best = 500, np.inf
    norm_cap = 1e8 * (1.0 + np.linalg.norm(x))

    k = 0
    while k < max_iters:
        g = obj.gradient(x)
        gn = float(np.linalg.norm(g))
        if gn < best_gn:
            best_x, best_gn = x.copy(), gn
        if gn <= tol:
            _raise_if_separated(obj, x)
            return ReferenceSolution(x, obj.value(x), gn, "adapted_D_gd")
        if np.linalg.norm(x) > norm_cap:
            _raise_if_separated(obj, x)
            raise ReferenceSolveError(
                "iterates diverged: no finite minimizer suspected",
                best_x=best_x,
                best_grad_norm=best_gn,
            )
        try:
            eta = solve_strongly_adapted(obj, x, SmoothnessKind.POINT_WISE_D, cfg)
        except StepSizeError as exc:
            raise ReferenceSolveError(
                f"adapted step solve failed at iteration {k}: {exc}",
                best_x=best_x,
                best_grad_norm=best_gn,
            ) from exc
        x = x - eta * g
        k += 1
        if k % window == 0:
            if best_gn > last_window_best * (1.0 - 1e-6):
                _raise_if_separated(obj, x)
                raise ReferenceSolveError(
                    f"gradient norm plateaued at {best_gn:.3e} > tol {tol:.1e}",
                    best_x=best_x,
                    best_grad_norm=best_gn,
                )
            last_window_best = best_gn
    raise ReferenceSolveError(
        f"max_iters={max_iters} exhausted with grad norm {best_gn:.3e}",
        best_x=best_x,
        best_grad_norm=best_gn,
    )


def _raise_if_separated(obj, x):
    # A near-stationary point with strictly positive margins certifies that
    # the data is separable, so the infimum is not attained.
    if isinstance(obj, LogisticObjective) and np.all(obj.margins(x) > 0.0):
        raise SeparableDataError(
            "data is linearly separable (all margins positive at the solver's "
            "iterate); the logistic infimum is not attained",
            best_x=x,
            best_grad_norm=float(np.linalg.norm(obj.gradient(x))),
        )
