"""Plug-in (V-statistic) estimators of metric covariance, HSIC and distance
covariance, and a seeded permutation independence test.

All estimators are exact empirical-measure plug-ins: each population
expectation is replaced by the full with-replacement sample average.  This
keeps the algebraic identities between the measures (trace identity,
dCov = 4 HSIC under induced kernels) exact at every finite n, not just
asymptotically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import InputError, distance_matrix, gram_matrix, resolve_bandwidth

ESTIMATORS = ("mcov", "mcov_trace", "hsic", "dcov")

_MAX_SEED = 2**63


def double_center(a: np.ndarray) -> np.ndarray:
    """Row/column mean subtraction; equals J a J with J = I - (1/n) ones."""
    row = a.mean(axis=1, keepdims=True)
    col = a.mean(axis=0, keepdims=True)
    return a - row - col + a.mean()


def _paired(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    nx = x.shape[0] if x.ndim else 0
    ny = y.shape[0] if y.ndim else 0
    if nx != ny:
        raise InputError(f"paired sample sides differ in length: {nx} vs {ny}")
    if nx < 2:
        raise InputError(f"need at least 2 paired observations, got {nx}")
    return x, y


def _dim(a):
    a = np.asarray(a)
    return 1 if a.ndim == 1 else a.shape[-1]


def _pool(x, y):
    """Both sides when they share a dimension (for bandwidth resolution)."""
    return (x, y) if _dim(x) == _dim(y) else None


def mcov_plugin(x, y, metric) -> float:
    """Metric covariance of a paired sample, distance form.

    Both sides must live in the same space as the semimetric.  Returns

        0.5 * ( mean_{i,j} d2(x_i, y_j) - mean_i d2(x_i, y_i) )

    which is the plug-in of (1/4) E E' { d2(X,Y') + d2(X',Y) - 2 d2(X,Y) }.
    The value is signed: coupled pairs closer than re-paired ones give a
    positive value, farther gives negative.
    """
    x, y = _paired(x, y)
    metric = resolve_bandwidth(metric, x, y)
    d = metric.pairwise(x, y)
    return 0.5 * (d.mean() - np.diagonal(d).mean())


def mcov_trace(x, y, kernel) -> float:
    """Metric covariance in its kernel (feature-space trace) form:

        mean_i k(x_i, y_i) - mean_{i,j} k(x_i, y_j)

    Equals :func:`mcov_plugin` with the kernel's induced semimetric, for any
    anchor, since the expression depends on k only through the semimetric.
    """
    x, y = _paired(x, y)
    kernel = resolve_bandwidth(kernel, x, y)
    k = kernel.pairwise(x, y)
    return np.diagonal(k).mean() - k.mean()


def hsic_vstat(x, y, kernel, kernel_y=None) -> float:
    """Hilbert-Schmidt independence criterion, biased V-statistic:

        (1/n^2) Tr(K H L H),   H = I - (1/n) ones

    evaluated via double-centered Gram matrices.  Nonnegative up to roundoff.
    """
    est = centered_grams(x, y, kernel, kernel_y)
    return float((est.k_centered * est.l_centered).sum()) / est.n**2


def dcov_vstat(x, y, metric, metric_y=None) -> float:
    """Distance covariance, biased V-statistic of the three-term form:

        mean_{ij}[A_ij B_ij] + mean(A) mean(B) - 2 mean_i[rowmean(A)_i rowmean(B)_i]

    with A, B the semimetric matrices of the two sides.
    """
    x, y = _paired(x, y)
    if metric_y is None:
        metric_y = metric
    pool = _pool(x, y)
    a = distance_matrix(resolve_bandwidth(metric, *(pool or (x,))), x)
    b = distance_matrix(resolve_bandwidth(metric_y, *(pool or (y,))), y)
    return float((a * b).mean() + a.mean() * b.mean() - 2.0 * (a.mean(axis=1) * b.mean(axis=1)).mean())


@dataclass(frozen=True)
class CrossCovEstimate:
    """Double-centered Gram matrices K~ = HKH, L~ = HLH of a paired sample;
    the empirical image of the feature-space cross-covariance operator."""

    k_centered: np.ndarray
    l_centered: np.ndarray
    n: int


def centered_grams(x, y, kernel, kernel_y=None) -> CrossCovEstimate:
    x, y = _paired(x, y)
    if kernel_y is None:
        kernel_y = kernel
    pool = _pool(x, y)
    kernel = resolve_bandwidth(kernel, *(pool or (x,)))
    kernel_y = resolve_bandwidth(kernel_y, *(pool or (y,)))
    k = gram_matrix(kernel, x)
    l = gram_matrix(kernel_y, y)
    return CrossCovEstimate(double_center(k), double_center(l), k.shape[0])


# ---------------------------------------------------------------------------
# permutation test


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    permutations: int
    seed: int
    estimator: str
    alternative: str

    def to_dict(self):
        return {
            "statistic": self.statistic,
            "p_value": self.p_value,
            "B": self.permutations,
            "seed": self.seed,
            "estimator": self.estimator,
            "alternative": self.alternative,
        }


def _perm_rng(seed: int, index: int) -> np.random.Generator:
    # Counter-based sub-stream: permutation `index` of master `seed` is the
    # same under any execution schedule.
    return np.random.Generator(np.random.Philox(key=[seed, index]))


def _check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < _MAX_SEED:
        raise InputError(f"seed must be in [0, 2^63), got {seed}")
    return seed


def _prepare_stat(estimator, x, y, metric, kernel, metric_y, kernel_y):
    """Precompute matrices and return a statistic of a y-side permutation."""
    n = np.asarray(x).shape[0]
    rows = np.arange(n)
    if estimator == "mcov":
        if metric is None:
            raise InputError("mcov needs a semimetric")
        x, y = _paired(x, y)
        d = resolve_bandwidth(metric, x, y).pairwise(x, y)
        grand = d.mean()

        def stat(perm):
            return 0.5 * (grand - d[rows, perm].mean())

    elif estimator == "mcov_trace":
        if kernel is None:
            raise InputError("mcov_trace needs a kernel")
        x, y = _paired(x, y)
        k = resolve_bandwidth(kernel, x, y).pairwise(x, y)
        grand = k.mean()

        def stat(perm):
            return k[rows, perm].mean() - grand

    elif estimator == "hsic":
        if kernel is None:
            raise InputError("hsic needs a kernel")
        est = centered_grams(x, y, kernel, kernel_y)
        kc, lc = est.k_centered, est.l_centered
        nsq = est.n**2

        def stat(perm):
            return float((kc * lc[np.ix_(perm, perm)]).sum()) / nsq

    elif estimator == "dcov":
        if metric is None:
            raise InputError("dcov needs a semimetric")
        x, y = _paired(x, y)
        if metric_y is None:
            metric_y = metric
        pool = _pool(x, y)
        a = distance_matrix(resolve_bandwidth(metric, *(pool or (x,))), x)
        b = distance_matrix(resolve_bandwidth(metric_y, *(pool or (y,))), y)
        a_row, b_row = a.mean(axis=1), b.mean(axis=1)
        const = a.mean() * b.mean()

        def stat(perm):
            bp = b[np.ix_(perm, perm)]
            return float((a * bp).mean() + const - 2.0 * (a_row * b_row[perm]).mean())

    else:
        raise InputError(f"unknown estimator {estimator!r}; expected one of {ESTIMATORS}")
    return stat


def permutation_test(
    x,
    y,
    estimator: str,
    *,
    metric=None,
    kernel=None,
    metric_y=None,
    kernel_y=None,
    B: int = 999,
    seed: int = 0,
    alternative: str | None = None,
) -> TestResult:
    """Permutation independence test for any of the four statistics.

    Only the y side is re-paired.  The p-value uses the add-one convention
    p = (1 + #{permuted >= observed}) / (B + 1), on absolute values for the
    two-sided alternative.  Signed statistics (mcov, mcov_trace) default to
    ``two_sided``; nonnegative ones (hsic, dcov) to ``greater``.  Kernel and
    distance matrices are computed once (unresolved bandwidths frozen via the
    median heuristic before testing) and permuted by index, and permutation b
    draws from a counter-based substream of ``seed``, so the result is
    deterministic for fixed inputs no matter the execution order.
    """
    B = int(B)
    if B < 1:
        raise InputError(f"number of permutations must be >= 1, got {B}")
    seed = _check_seed(seed)
    if alternative is None:
        alternative = "two_sided" if estimator in ("mcov", "mcov_trace") else "greater"
    if alternative not in ("two_sided", "greater"):
        raise InputError(f"unknown alternative {alternative!r}")

    x, y = _paired(x, y)
    stat = _prepare_stat(estimator, x, y, metric, kernel, metric_y, kernel_y)
    n = x.shape[0]
    observed = stat(np.arange(n))

    count = 0
    for b in range(1, B + 1):
        perm = _perm_rng(seed, b).permutation(n)
        t = stat(perm)
        if alternative == "two_sided":
            count += abs(t) >= abs(observed)
        else:
            count += t >= observed
    p_value = (1.0 + count) / (B + 1.0)
    return TestResult(
        statistic=float(observed),
        p_value=p_value,
        permutations=B,
        seed=seed,
        estimator=estimator,
        alternative=alternative,
    )
