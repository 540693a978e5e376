"""
Kernels, semimetrics, and the bridge between them
=================================================

A positive-definite kernel k and a semimetric d2 of negative type encode the
same geometry: d2 is the squared feature-space distance of k, and k can be
rebuilt from d2 once an anchor point is fixed.  This script walks the
catalogue and both conversion directions, then certifies negative type on
finite matrices with the Schoenberg eigenvalue condition.
"""

import numpy as np

from metricdep import (
    EuclideanSquared,
    GaussianKernel,
    LinearKernel,
    MaternKernel,
    distance_matrix,
    gram_matrix,
    induced_kernel,
    induced_semimetric,
    kernel_eval,
    median_heuristic,
    semimetric_eval,
    validate_negative_type,
)

rng = np.random.default_rng(0)

# --- the catalogue -----------------------------------------------------------

x, y = np.array([1.0, 2.0]), np.array([3.0, 4.0])
print("linear      k(x,y) =", kernel_eval(LinearKernel(), x, y))
print("gaussian    k(x,y) =", kernel_eval(GaussianKernel(1.0), x, y))
print("matern 3/2  k(x,y) =", kernel_eval(MaternKernel(1.5, 2.0), x, y))

# --- kernel -> semimetric ----------------------------------------------------

# d2(x, y) = k(x,x) + k(y,y) - 2 k(x,y); for the linear kernel this is the
# squared Euclidean distance
d2_lin = induced_semimetric(LinearKernel())
print("\ninduced d2 from linear:", semimetric_eval(d2_lin, x, y),
      " squared distance:", float(((x - y) ** 2).sum()))

# --- semimetric -> kernel ----------------------------------------------------

# any anchor works; the origin recovers the linear kernel from euclid2
k_back = induced_kernel(EuclideanSquared())
print("induced k from euclid2 at origin:", kernel_eval(k_back, x, y),
      " <x,y>:", float(x @ y))

# the round trip is exact for any anchor
anchor = rng.standard_normal(2)
d2_round = induced_semimetric(induced_kernel(EuclideanSquared(), anchor))
pts = rng.standard_normal((5, 2))
gap = np.abs(d2_round.pairwise(pts, pts) - EuclideanSquared().pairwise(pts, pts)).max()
print("round-trip gap over random points:", gap)

# --- Gram and distance matrices ----------------------------------------------

pts = rng.standard_normal((40, 3))
gram = gram_matrix(GaussianKernel(0.8), pts)
print("\nGaussian Gram: diagonal =", gram[0, 0], " smallest eigenvalue =",
      np.linalg.eigvalsh(gram)[0])

dmat = distance_matrix(EuclideanSquared(), pts)
report = validate_negative_type(dmat)
print("squared-Euclidean matrix of negative type?", report.valid,
      " worst eigenvalue:", report.worst_eigenvalue)

# --- a matrix that is NOT of negative type ------------------------------------

# sqrt-distances (1, 1, 3) violate the triangle inequality, so these numbers
# cannot be squared distances of any Hilbert-space embedding
violator = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 9.0], [1.0, 9.0, 0.0]])
report = validate_negative_type(violator)
print("violator valid?", report.valid, " worst eigenvalue:", report.worst_eigenvalue,
      " (exact value -5/6)")

# --- bandwidth selection -------------------------------------------------------

sample = rng.standard_normal((200, 2))
print("\nmedian-heuristic sigma for this sample:", median_heuristic(sample))
