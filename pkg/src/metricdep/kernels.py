"""Kernel and semimetric catalogue, Gram/distance matrices, and the two
conversion formulas between positive-definite kernels and semimetrics of
negative type.

A kernel k and a semimetric d2 are linked by

    d2(x, y) = k(x, x) + k(y, y) - 2 k(x, y)
    k(x, y)  = (d2(x, w) + d2(y, w) - d2(x, y)) / 2    for an anchor point w

so every kernel induces a semimetric of negative type and every semimetric
of negative type induces a kernel (up to the choice of anchor).  Negative
type of a finite distance matrix D is certified by positive semidefiniteness
of -0.5 * J D J with J the centering projection (Schoenberg's condition).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

_MATERN_NUS = (0.5, 1.5, 2.5)


class InputError(ValueError):
    """User-supplied data or parameters are malformed."""


def as_points(pts) -> np.ndarray:
    """Coerce to an (n, p) float array; a 1-D input is read as n scalar points."""
    a = np.asarray(pts, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise InputError(f"expected points as an (n, p) array, got shape {a.shape}")
    if a.shape[0] == 0:
        raise InputError("empty point set")
    if not np.all(np.isfinite(a)):
        raise InputError("point coordinates must be finite")
    return a


def _as_single(x) -> np.ndarray:
    """Coerce one point (scalar or 1-D vector) to a (1, p) array."""
    a = np.asarray(x, dtype=float)
    if a.ndim == 0:
        a = a[None]
    if a.ndim != 1:
        raise InputError(f"expected a single point, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("point coordinates must be finite")
    return a[None, :]


def _check_same_dim(xs, ys, what="points"):
    if xs.shape[1] != ys.shape[1]:
        raise InputError(
            f"dimension mismatch between {what}: {xs.shape[1]} vs {ys.shape[1]}"
        )


# ---------------------------------------------------------------------------
# kernels


@dataclass(frozen=True)
class LinearKernel:
    """k(x, y) = <x, y>."""

    def one(self, x):
        return _as_single(x)

    def pairwise(self, xs, ys):
        xs, ys = as_points(xs), as_points(ys)
        _check_same_dim(xs, ys)
        return xs @ ys.T

    def self_diag(self, xs):
        xs = as_points(xs)
        return np.einsum("ij,ij->i", xs, xs)

    @property
    def spec(self):
        return "linear"


@dataclass(frozen=True)
class GaussianKernel:
    """k(x, y) = exp(-||x - y||^2 / (2 sigma^2)).

    ``sigma=None`` marks an unresolved bandwidth: call
    :func:`resolve_bandwidth` with the data before evaluating (the median
    heuristic fills it in).
    """

    sigma: float | None = None

    def __post_init__(self):
        if self.sigma is not None and not self.sigma > 0:
            raise InputError(f"gaussian bandwidth must be > 0, got {self.sigma}")

    def _check_resolved(self):
        if self.sigma is None:
            raise InputError(
                "gaussian bandwidth unresolved; use resolve_bandwidth(kernel, data)"
            )

    def one(self, x):
        return _as_single(x)

    def pairwise(self, xs, ys):
        self._check_resolved()
        xs, ys = as_points(xs), as_points(ys)
        _check_same_dim(xs, ys)
        sq = cdist(xs, ys, "sqeuclidean")
        return np.exp(sq / (-2.0 * self.sigma**2))

    def self_diag(self, xs):
        self._check_resolved()
        return np.ones(as_points(xs).shape[0])

    @property
    def spec(self):
        if self.sigma is None:
            return "gaussian"
        return f"gaussian:sigma={self.sigma!r}"


@dataclass(frozen=True)
class MaternKernel:
    """Matern kernel with half-integer smoothness nu in {1/2, 3/2, 5/2}.

    Closed forms in r = ||x - y||:
        nu = 1/2:  exp(-r/l)
        nu = 3/2:  (1 + sqrt(3) r/l) exp(-sqrt(3) r/l)
        nu = 5/2:  (1 + sqrt(5) r/l + 5 r^2/(3 l^2)) exp(-sqrt(5) r/l)
    """

    nu: float
    ell: float = 1.0

    def __post_init__(self):
        if self.nu not in _MATERN_NUS:
            raise InputError(f"matern smoothness must be one of {_MATERN_NUS}, got {self.nu}")
        if not self.ell > 0:
            raise InputError(f"matern lengthscale must be > 0, got {self.ell}")

    def one(self, x):
        return _as_single(x)

    def pairwise(self, xs, ys):
        xs, ys = as_points(xs), as_points(ys)
        _check_same_dim(xs, ys)
        r = cdist(xs, ys, "euclidean")
        if self.nu == 0.5:
            return np.exp(-r / self.ell)
        if self.nu == 1.5:
            t = (np.sqrt(3.0) / self.ell) * r
            return (1.0 + t) * np.exp(-t)
        t = (np.sqrt(5.0) / self.ell) * r
        return (1.0 + t + t**2 / 3.0) * np.exp(-t)

    def self_diag(self, xs):
        return np.ones(as_points(xs).shape[0])

    @property
    def spec(self):
        return f"matern:nu={self.nu!r},ell={self.ell!r}"


@dataclass(frozen=True, eq=False)
class DistanceInducedKernel:
    """Kernel built from a negative-type semimetric with an anchor point:

        k(x, y) = (d2(x, w) + d2(y, w) - d2(x, y)) / 2

    ``anchor=None`` means the deterministic default: the origin for vector
    data, the first point (index 0) for an explicit distance matrix.
    """

    base: object
    anchor: object = None

    def _anchor_row(self, xs):
        if self.anchor is None:
            if isinstance(self.base, ExplicitSemimetric):
                return np.zeros(1, dtype=np.intp)
            return np.zeros((1, xs.shape[1]))
        return self.base.one(self.anchor)

    def one(self, x):
        return self.base.one(x)

    def pairwise(self, xs, ys):
        xs, ys = self.base.coerce(xs), self.base.coerce(ys)
        w = self._anchor_row(xs)
        dxw = self.base.pairwise(xs, w)[:, 0]
        dyw = self.base.pairwise(ys, w)[:, 0]
        return 0.5 * (dxw[:, None] + dyw[None, :] - self.base.pairwise(xs, ys))

    def self_diag(self, xs):
        # k(x, x) = d2(x, w)
        xs = self.base.coerce(xs)
        return self.base.pairwise(xs, self._anchor_row(xs))[:, 0]

    @property
    def spec(self):
        if self.anchor is None:
            anchor = "origin"
        else:
            anchor = "(" + ";".join(repr(float(v)) for v in np.atleast_1d(self.anchor)) + ")"
        return f"induced_kernel:base=({self.base.spec}),anchor={anchor}"


# ---------------------------------------------------------------------------
# semimetrics


@dataclass(frozen=True)
class EuclideanSquared:
    """d2(x, y) = ||x - y||^2, the canonical semimetric of negative type."""

    def one(self, x):
        return _as_single(x)

    def coerce(self, pts):
        return as_points(pts)

    def pairwise(self, xs, ys):
        xs, ys = as_points(xs), as_points(ys)
        _check_same_dim(xs, ys)
        return cdist(xs, ys, "sqeuclidean")

    @property
    def spec(self):
        return "euclid2"


@dataclass(frozen=True, eq=False)
class KernelInducedSemimetric:
    """d2(x, y) = k(x, x) + k(y, y) - 2 k(x, y) for a positive-definite k."""

    base: object

    def one(self, x):
        return self.base.one(x)

    def coerce(self, pts):
        return as_points(pts)

    def pairwise(self, xs, ys):
        xs, ys = as_points(xs), as_points(ys)
        dx = self.base.self_diag(xs)
        dy = self.base.self_diag(ys)
        out = dx[:, None] + dy[None, :] - 2.0 * self.base.pairwise(xs, ys)
        # PSD of the kernel makes this >= 0 up to roundoff
        out = np.maximum(out, 0.0)
        # d2(x, x) = 0 holds algebraically; pin it down where the diagonal
        # and cross evaluations take different floating-point paths
        if xs is ys:
            np.fill_diagonal(out, 0.0)
        elif xs.shape[0] == 1 and ys.shape[0] == 1 and np.array_equal(xs, ys):
            out[0, 0] = 0.0
        return out

    @property
    def spec(self):
        return f"induced_metric:base=({self.base.spec})"


@dataclass(frozen=True, eq=False)
class ExplicitSemimetric:
    """A user-supplied square distance matrix; points are row indices."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"explicit distance matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputError("explicit distance matrix must be finite")
        scale = np.abs(m).max() if m.size else 0.0
        if np.abs(m - m.T).max() > 1e-10 * (1.0 + scale):
            raise InputError("explicit distance matrix must be symmetric")
        if np.abs(np.diagonal(m)).max() > 1e-12 * (1.0 + scale):
            raise InputError("explicit distance matrix must have a zero diagonal")
        if m.min() < 0:
            raise InputError("explicit distance matrix must be nonnegative")
        m = 0.5 * (m + m.T)
        np.fill_diagonal(m, 0.0)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self):
        return self.matrix.shape[0]

    def one(self, x):
        idx = np.asarray(x)
        if idx.ndim != 0 or not np.issubdtype(idx.dtype, np.integer):
            f = np.asarray(x, dtype=float)
            if f.ndim != 0 or f != int(f):
                raise InputError("points of an explicit semimetric are integer indices")
            idx = np.asarray(int(f))
        return self.coerce(idx[None])

    def coerce(self, pts):
        idx = np.asarray(pts)
        if idx.ndim != 1:
            idx = idx.reshape(-1)
        if not np.issubdtype(idx.dtype, np.integer):
            f = np.asarray(idx, dtype=float)
            if np.any(f != np.round(f)):
                raise InputError("points of an explicit semimetric are integer indices")
            idx = np.round(f).astype(np.intp)
        if idx.size == 0:
            raise InputError("empty point set")
        if idx.min() < 0 or idx.max() >= self.n:
            raise InputError(
                f"index out of range for explicit {self.n}x{self.n} matrix: "
                f"[{idx.min()}, {idx.max()}]"
            )
        return idx.astype(np.intp)

    def pairwise(self, xs, ys):
        xs, ys = self.coerce(xs), self.coerce(ys)
        return self.matrix[np.ix_(xs, ys)]

    @property
    def spec(self):
        return "explicit"


# ---------------------------------------------------------------------------
# operations


def kernel_eval(kernel, x, y) -> float:
    """Evaluate k(x, y) for a single pair of points."""
    return float(kernel.pairwise(kernel.one(x), kernel.one(y))[0, 0])


def semimetric_eval(metric, x, y) -> float:
    """Evaluate d2(x, y) for a single pair of points."""
    return float(metric.pairwise(metric.one(x), metric.one(y))[0, 0])


def induced_semimetric(kernel) -> KernelInducedSemimetric:
    """Semimetric of negative type generated by a kernel:
    d2(x, y) = k(x, x) + k(y, y) - 2 k(x, y)."""
    return KernelInducedSemimetric(kernel)


def induced_kernel(metric, anchor=None) -> DistanceInducedKernel:
    """Kernel generated by a negative-type semimetric and an anchor point w:
    k(x, y) = (d2(x, w) + d2(y, w) - d2(x, y)) / 2.

    The default anchor is the origin (index 0 for explicit matrices).  Any
    anchor yields a valid kernel; the induced Gram matrices are positive
    semidefinite exactly when the semimetric is of negative type.
    """
    if anchor is not None:
        anchor = np.asarray(anchor) if not np.isscalar(anchor) else anchor
    return DistanceInducedKernel(metric, anchor)


def gram_matrix(kernel, pts) -> np.ndarray:
    """Symmetric Gram matrix of a kernel on a point set.

    For a distance-induced kernel the base distance matrix is validated for
    negative type first, so an invalid user matrix fails loudly here rather
    than producing an indefinite Gram.
    """
    if isinstance(kernel, DistanceInducedKernel):
        pts_c = kernel.base.coerce(pts)
        report = validate_negative_type(distance_matrix(kernel.base, pts_c))
        if not report.valid:
            raise InputError(
                "base semimetric is not of negative type on these points "
                f"(worst eigenvalue {report.worst_eigenvalue:.6g})"
            )
        k = kernel.pairwise(pts_c, pts_c)
    else:
        k = kernel.pairwise(pts, pts)
    return 0.5 * (k + k.T)


def distance_matrix(metric, pts) -> np.ndarray:
    """Symmetric distance matrix with an exactly zero diagonal."""
    d = metric.pairwise(pts, pts)
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return np.maximum(d, 0.0)


@dataclass(frozen=True)
class NegativeTypeResult:
    valid: bool
    worst_eigenvalue: float


def validate_negative_type(d_matrix, tol: float = 1e-8) -> NegativeTypeResult:
    """Schoenberg check: D is of negative type iff -0.5 * J D J is PSD,
    J = I - (1/n) ones.

    ``valid`` holds iff the smallest eigenvalue of -0.5 J D J is at least
    ``-tol`` times the largest absolute eigenvalue; the smallest eigenvalue
    is reported either way.
    """
    d = np.asarray(d_matrix, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise InputError(f"distance matrix must be square, got shape {d.shape}")
    if not np.all(np.isfinite(d)):
        raise InputError("distance matrix must be finite")
    scale = np.abs(d).max() if d.size else 0.0
    if np.abs(d - d.T).max() > 1e-10 * (1.0 + scale):
        raise InputError("distance matrix must be symmetric")
    if np.abs(np.diagonal(d)).max() > 1e-12 * (1.0 + scale):
        raise InputError("distance matrix must have a zero diagonal")
    d = 0.5 * (d + d.T)
    row = d.mean(axis=1, keepdims=True)
    g = -0.5 * (d - row - row.T + d.mean())
    g = 0.5 * (g + g.T)
    eig = np.linalg.eigvalsh(g)
    worst = float(eig[0])
    largest = float(np.abs(eig).max())
    return NegativeTypeResult(valid=worst >= -tol * largest, worst_eigenvalue=worst)


def median_heuristic(*samples, max_points: int = 2000) -> float:
    """Median of pairwise Euclidean distances over the pooled sample.

    The pooled sample is the row-stack of all inputs (which must share a
    dimension).  Above ``max_points`` rows an evenly spaced subsample keeps
    the computation cheap while staying deterministic.  Falls back to 1.0
    when the median distance is zero (degenerate data).
    """
    pooled = np.vstack([as_points(s) for s in samples])
    if pooled.shape[0] > max_points:
        step = pooled.shape[0] / max_points
        pooled = pooled[(np.arange(max_points) * step).astype(int)]
    if pooled.shape[0] < 2:
        return 1.0
    med = float(np.median(pdist(pooled)))
    return med if med > 0 else 1.0


def resolve_bandwidth(obj, *samples):
    """Replace any unresolved Gaussian bandwidth inside a kernel or
    semimetric by the median heuristic of the given samples."""
    if isinstance(obj, GaussianKernel) and obj.sigma is None:
        return GaussianKernel(median_heuristic(*samples))
    if isinstance(obj, KernelInducedSemimetric):
        return KernelInducedSemimetric(resolve_bandwidth(obj.base, *samples))
    if isinstance(obj, DistanceInducedKernel):
        return DistanceInducedKernel(resolve_bandwidth(obj.base, *samples), obj.anchor)
    return obj


# ---------------------------------------------------------------------------
# spec strings
#
# Grammar: NAME or NAME:key=value,key=value where a value may be a number, a
# word, a parenthesised nested spec, or a parenthesised ;-separated vector.
#   gaussian:sigma=0.5      matern:nu=1.5,ell=2.0      linear      euclid2
#   induced_kernel:base=euclid2,anchor=origin
#   induced_metric:base=(gaussian:sigma=0.5)
#   induced_kernel:base=(matern:nu=2.5,ell=0.7),anchor=(0.5;-1.0)


def _split_top(text, sep):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise InputError(f"unbalanced parentheses in spec {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise InputError(f"unbalanced parentheses in spec {text!r}")
    parts.append("".join(cur))
    return parts


def _parse_head(text):
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1].strip()
    head, *rest = _split_top(text, ":")
    args = {}
    if rest:
        for item in _split_top(":".join(rest), ","):
            if "=" not in item:
                raise InputError(f"malformed argument {item!r} in spec {text!r}")
            key, value = item.split("=", 1)
            args[key.strip()] = value.strip()
    return head.strip().lower(), args


def _need_float(args, key, spec):
    if key not in args:
        raise InputError(f"spec {spec!r} requires {key}=...")
    raw = args.pop(key)
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"could not parse {key}={raw!r} in spec {spec!r}") from None


def parse_anchor(text):
    """Anchor values: 'origin' or 'first' (the default), or '(v1;v2;...)'."""
    text = text.strip()
    if text.lower() in ("origin", "first", "default"):
        return None
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    try:
        values = [float(v) for v in text.split(";") if v.strip() != ""]
    except ValueError:
        raise InputError(f"could not parse anchor {text!r}") from None
    if not values:
        raise InputError("empty anchor")
    return np.array(values)


def _opt_float(args, key, spec, default):
    if key not in args:
        return default
    return _need_float(args, key, spec)


def parse_kernel(text):
    """Parse a kernel spec string (see module grammar)."""
    head, args = _parse_head(text)
    if head == "linear":
        kernel = LinearKernel()
    elif head == "gaussian":
        kernel = GaussianKernel(_opt_float(args, "sigma", text, None))
    elif head == "matern":
        nu = _need_float(args, "nu", text)
        ell = _opt_float(args, "ell", text, 1.0)
        kernel = MaternKernel(nu, ell)
    elif head == "induced_kernel":
        if "base" not in args:
            raise InputError(f"spec {text!r} requires base=...")
        base = parse_semimetric(args.pop("base"))
        anchor = parse_anchor(args.pop("anchor")) if "anchor" in args else None
        kernel = DistanceInducedKernel(base, anchor)
    else:
        raise InputError(f"unknown kernel family {head!r}")
    if args:
        raise InputError(f"unknown arguments {sorted(args)} for kernel {head!r}")
    return kernel


def parse_semimetric(text):
    """Parse a semimetric spec string (see module grammar)."""
    head, args = _parse_head(text)
    if head == "euclid2":
        metric = EuclideanSquared()
    elif head == "induced_metric":
        if "base" not in args:
            raise InputError(f"spec {text!r} requires base=...")
        metric = KernelInducedSemimetric(parse_kernel(args.pop("base")))
    else:
        raise InputError(f"unknown semimetric family {head!r}")
    if args:
        raise InputError(f"unknown arguments {sorted(args)} for semimetric {head!r}")
    return metric
