"""Exact population values of the dependence measures on finite-support
joint distributions, and their Mercer-basis decompositions.

A joint law with m x m' support points admits closed finite-sum evaluation
of every expectation in the dependence measures, so this module is the
ground truth against which the sample estimators are checked.  The Mercer
decompositions make the structural difference between the two measures
computable: metric covariance is the single sum

    sum_j  lambda_j cov[e_j(X), e_j(Y)]

over one eigenbasis (signed terms, cancellation possible), while HSIC is
the double sum

    sum_{i,j}  lambda_i lambda_j cov[e_i(X), e_j(Y)]^2

over all basis pairs (nonnegative terms, no cancellation).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .kernels import (
    InputError,
    distance_matrix,
    gram_matrix,
    induced_semimetric,
)

_EIG_CUTOFF = 1e-12  # relative to the largest eigenvalue


def _as_support(points, name):
    a = np.asarray(points, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2 or a.shape[0] == 0:
        raise InputError(f"{name} must be a nonempty (m, p) array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError(f"{name} must be finite")
    return a


def _has_duplicate_rows(a):
    if a.shape[0] < 2:
        return False
    order = np.lexsort(a.T)
    return bool(np.any(np.all(a[order][1:] == a[order][:-1], axis=1)))


@dataclass(frozen=True, eq=False)
class DiscreteJoint:
    """A finite-support joint law: support points for each side and an
    (m, m') matrix of joint probabilities summing to one.

    Support points must be distinct within each side; merging duplicates is
    the caller's job, since silently summing their probabilities would change
    the meaning of ``probs``.
    """

    support_x: np.ndarray
    support_y: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        sx = _as_support(self.support_x, "support_x")
        sy = _as_support(self.support_y, "support_y")
        p = np.asarray(self.probs, dtype=float)
        if p.shape != (sx.shape[0], sy.shape[0]):
            raise InputError(
                f"probability matrix shape {p.shape} does not match supports "
                f"({sx.shape[0]}, {sy.shape[0]})"
            )
        if not np.all(np.isfinite(p)):
            raise InputError("probabilities must be finite")
        if p.min() < 0:
            raise InputError(f"probabilities must be nonnegative, min is {p.min()}")
        total = p.sum()
        if abs(total - 1.0) > 1e-12:
            raise InputError(f"probabilities must sum to 1, got {total!r}")
        if _has_duplicate_rows(sx):
            raise InputError("support_x contains duplicate points")
        if _has_duplicate_rows(sy):
            raise InputError("support_y contains duplicate points")
        object.__setattr__(self, "support_x", sx)
        object.__setattr__(self, "support_y", sy)
        object.__setattr__(self, "probs", p)

    @property
    def px(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    @property
    def py(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    def sample(self, n, seed):
        """Draw n i.i.d. pairs; returns (x, y) arrays of shape (n, p), (n, q)."""
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        flat = self.probs.reshape(-1)
        idx = rng.choice(flat.size, size=n, p=flat / flat.sum())
        a, b = np.unravel_index(idx, self.probs.shape)
        return self.support_x[a], self.support_y[b]

    @classmethod
    def from_dict(cls, doc):
        try:
            return cls(doc["support_x"], doc["support_y"], doc["P"])
        except KeyError as missing:
            raise InputError(f"joint document is missing key {missing}") from None

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as err:
            raise InputError(f"invalid JSON for joint distribution: {err}") from None
        return cls.from_dict(doc)

    def to_dict(self):
        return {
            "support_x": self.support_x.tolist(),
            "support_y": self.support_y.tolist(),
            "P": self.probs.tolist(),
        }


def product_joint(support_x, px, support_y, py) -> DiscreteJoint:
    """The independent coupling of two marginals."""
    px, py = np.asarray(px, float), np.asarray(py, float)
    return DiscreteJoint(support_x, support_y, np.outer(px / px.sum(), py / py.sum()))


# ---------------------------------------------------------------------------
# exact measures


def exact_mcov(joint: DiscreteJoint, metric) -> float:
    """Exact metric covariance of a finite-support joint:

        (1/4) sum_{ab, a'b'} P_ab P_a'b' [d2(x_a, y_b') + d2(x_a', y_b) - 2 d2(x_a, y_b)]

    which the marginal factorization reduces to
    0.5 * (px' D py - sum(P * D)) at O(m m') cost.
    """
    d = metric.pairwise(joint.support_x, joint.support_y)
    return 0.5 * (float(joint.px @ d @ joint.py) - float((joint.probs * d).sum()))


def _three_term(mx, my, probs, px, py):
    """E E'[Mx My] + E[Mx] E[My] - 2 E_{XY}[E'Mx E'My] for square kernels or
    distance matrices Mx (on support_x) and My (on support_y)."""
    t1 = float(((probs.T @ mx @ probs) * my).sum())
    t2 = float(px @ mx @ px) * float(py @ my @ py)
    t3 = float((mx @ px) @ probs @ (my @ py))
    return t1 + t2 - 2.0 * t3


def exact_dcov(joint: DiscreteJoint, metric_x, metric_y=None) -> float:
    """Exact distance covariance: the three-term expression evaluated as a
    finite sum over the support."""
    if metric_y is None:
        metric_y = metric_x
    dx = distance_matrix(metric_x, joint.support_x)
    dy = distance_matrix(metric_y, joint.support_y)
    return _three_term(dx, dy, joint.probs, joint.px, joint.py)


def exact_hsic(joint: DiscreteJoint, kernel, kernel_y=None) -> float:
    """Exact HSIC: squared Hilbert-Schmidt norm of the population
    cross-covariance operator.

    Computed two independent ways and cross-checked: as the quadratic form
    sum((W' K W) * L) with W = P - px py', and as the three-term expansion
    in the kernels.  Disagreement beyond roundoff means a numerical problem
    and raises.
    """
    if kernel_y is None:
        kernel_y = kernel
    kx = gram_matrix(kernel, joint.support_x)
    ly = gram_matrix(kernel_y, joint.support_y)
    w = joint.probs - np.outer(joint.px, joint.py)
    hs_norm = float(((w.T @ kx @ w) * ly).sum())
    expanded = _three_term(kx, ly, joint.probs, joint.px, joint.py)
    scale = 1.0 + abs(hs_norm)
    if abs(hs_norm - expanded) > 1e-9 * scale:
        raise RuntimeError(
            f"HSIC cross-check failed: {hs_norm!r} (HS norm) vs {expanded!r} (three-term)"
        )
    return max(hs_norm, 0.0)


# ---------------------------------------------------------------------------
# Mercer machinery


@dataclass(frozen=True, eq=False)
class MercerSystem:
    """Eigensystem of a kernel on a finite support w.r.t. a reference
    probability measure mu: eigenvalues (descending), eigenfunction values
    ``functions[i, j] = e_j(support[i])``, orthonormal in L2(mu), with
    sum_j lambda_j e_j(u) e_j(v) reconstructing k(u, v) on the support.
    """

    eigenvalues: np.ndarray
    functions: np.ndarray
    mu: np.ndarray
    support: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """sum_j lambda_j e_j(u) e_j(v), the kernel matrix the system encodes."""
        return (self.functions * self.eigenvalues) @ self.functions.T


def mercer_basis(kernel, support, mu) -> MercerSystem:
    """Solve the weighted kernel eigenproblem on a finite support.

    With M = diag(mu) and K the Gram matrix, the symmetric eigenproblem
    M^(1/2) K M^(1/2) = U Lam U' gives eigenfunctions e_j = M^(-1/2) u_j that
    are orthonormal in L2(mu).  Eigenvalues below 1e-12 of the largest are
    dropped (they carry only roundoff noise amplified by M^(-1/2)).
    """
    support = _as_support(support, "support")
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (support.shape[0],):
        raise InputError(f"mu must have one weight per support point, got shape {mu.shape}")
    if mu.min() <= 0:
        raise InputError(
            "reference weights must be strictly positive; drop zero-weight points first"
        )
    if abs(mu.sum() - 1.0) > 1e-10:
        raise InputError(f"reference weights must sum to 1, got {mu.sum()!r}")
    if _has_duplicate_rows(support):
        raise InputError("support contains duplicate points")

    k = gram_matrix(kernel, support)
    root = np.sqrt(mu)
    a = k * np.outer(root, root)
    a = 0.5 * (a + a.T)
    eigvals, vecs = np.linalg.eigh(a)
    order = np.argsort(eigvals)[::-1]
    eigvals, vecs = eigvals[order], vecs[:, order]
    keep = eigvals > _EIG_CUTOFF * max(eigvals[0], 0.0)
    functions = vecs[:, keep] / root[:, None]
    return MercerSystem(eigenvalues=eigvals[keep], functions=functions, mu=mu, support=support)


def _union_support(joint: DiscreteJoint):
    """Union of the two supports (same space), with index maps back into it
    and the symmetric reference measure mu = (px + py)/2 lifted onto it."""
    sx, sy = joint.support_x, joint.support_y
    if sx.shape[1] != sy.shape[1]:
        raise InputError(
            "supports live in different dimensions "
            f"({sx.shape[1]} vs {sy.shape[1]}); a common space is required"
        )
    points = list(sx)
    ix = np.arange(sx.shape[0])
    iy = np.empty(sy.shape[0], dtype=int)
    for b, point in enumerate(sy):
        match = np.nonzero(np.all(sx == point, axis=1))[0]
        if match.size:
            iy[b] = match[0]
        else:
            iy[b] = len(points)
            points.append(point)
    union = np.vstack(points)
    mu = np.zeros(union.shape[0])
    np.add.at(mu, ix, 0.5 * joint.px)
    np.add.at(mu, iy, 0.5 * joint.py)
    return union, ix, iy, mu


@dataclass(frozen=True, eq=False)
class McovDecomposition:
    """Metric covariance split along one Mercer basis: terms
    lambda_j cov[e_j(X), e_j(Y)] are signed and may cancel."""

    total: float
    eigenvalues: np.ndarray
    covariances: np.ndarray
    terms: np.ndarray
    system: MercerSystem


@dataclass(frozen=True, eq=False)
class HsicDecomposition:
    """HSIC split over all Mercer basis pairs: terms
    lambda_i lambda_j cov[e_i(X), e_j(Y)]^2 are all nonnegative."""

    total: float
    eigenvalues: np.ndarray
    covariances: np.ndarray
    terms: np.ndarray
    system: MercerSystem


def _basis_on_supports(joint, kernel):
    union, ix, iy, mu = _union_support(joint)
    if mu.min() <= 0:
        raise InputError(
            "a support point has zero marginal probability; drop it before decomposing"
        )
    system = mercer_basis(kernel, union, mu)
    return system, system.functions[ix], system.functions[iy]


def mercer_mcov_decomposition(joint: DiscreteJoint, kernel) -> McovDecomposition:
    """Decompose metric covariance (with the kernel's induced semimetric)
    into per-eigenfunction covariance terms.

    The reference measure is mu = (px + py)/2 on the union support, which is
    positive wherever the law puts mass, so the decomposition total equals
    the exact metric covariance.
    """
    system, ex, ey = _basis_on_supports(joint, kernel)
    cross = np.einsum("ab,aj,bj->j", joint.probs, ex, ey)
    covs = cross - (joint.px @ ex) * (joint.py @ ey)
    terms = system.eigenvalues * covs
    return McovDecomposition(
        total=float(terms.sum()),
        eigenvalues=system.eigenvalues,
        covariances=covs,
        terms=terms,
        system=system,
    )


def mercer_hsic_decomposition(joint: DiscreteJoint, kernel) -> HsicDecomposition:
    """Decompose HSIC (same kernel on both sides) over all basis pairs."""
    system, ex, ey = _basis_on_supports(joint, kernel)
    covs = ex.T @ (joint.probs @ ey) - np.outer(joint.px @ ex, joint.py @ ey)
    terms = np.outer(system.eigenvalues, system.eigenvalues) * covs**2
    return HsicDecomposition(
        total=float(terms.sum()),
        eigenvalues=system.eigenvalues,
        covariances=covs,
        terms=terms,
        system=system,
    )


def cancellation_joint() -> DiscreteJoint:
    """The discrete orthogonal-subspaces witness: Z uniform on {-1, +1},
    X = (Z, 0), Y = (0, Z).

    X and Y are deterministically dependent, yet every cross distance
    ||x - y|| equals sqrt(2), so metric covariance vanishes for the squared
    Euclidean semimetric and for the semimetric induced by any radial kernel,
    while HSIC with a Gaussian kernel is strictly positive.  Its Mercer
    single-sum has individually nonzero terms that cancel exactly.
    """
    support_x = np.array([[-1.0, 0.0], [1.0, 0.0]])
    support_y = np.array([[0.0, -1.0], [0.0, 1.0]])
    probs = np.array([[0.5, 0.0], [0.0, 0.5]])
    return DiscreteJoint(support_x, support_y, probs)


def empirical_joint(x, y) -> DiscreteJoint:
    """The empirical law of a paired sample, as a DiscreteJoint.

    V-statistics are plug-ins of the empirical measure, so any estimator in
    :mod:`metricdep.estimators` applied to (x, y) equals the corresponding
    exact_* value of this joint (up to floating-point regrouping).  This is
    also the memory-friendly route to V-statistics at very large n when the
    data take few distinct values.
    """
    from .kernels import as_points

    x, y = as_points(x), as_points(y)
    if x.shape[0] != y.shape[0]:
        raise InputError("paired sample sides differ in length")
    ux, ax = np.unique(x, axis=0, return_inverse=True)
    uy, ay = np.unique(y, axis=0, return_inverse=True)
    counts = np.zeros((ux.shape[0], uy.shape[0]))
    np.add.at(counts, (ax.reshape(-1), ay.reshape(-1)), 1.0)
    return DiscreteJoint(ux, uy, counts / x.shape[0])
