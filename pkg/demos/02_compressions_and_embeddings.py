"""Depth-3 and depth-5 certificates from isometry families.

An isometry family (a_i, b_i, c_j, d_j, p, q) with a_i b_j = delta_ij p
and c_i d_j = delta_ij q factors the doubly-compressed matrix [p x_ij q]
at depth 3 with cost at most ||x||.  Matrix-unit families give corner
embeddings x_ij -> x_ij (x) e_rs, and pinching the diagonal corners
together gives the depth-5 diagonal embedding x_ij -> x_ij (x) 1_n.
"""

import numpy as np

from oplength import (
    corner_embedding_certificate,
    cost,
    diagonal_embedding_certificate,
    diagonal_partition,
    evaluate,
    factor_through_family,
    family_from_projections,
    operator_norm,
)
from oplength.instances import random_instance

n, k = 3, 12
x = random_instance(n, k, seed=1)
print(f"instance: {n}x{n} over M_{k}, ||x|| = {operator_norm(x):.4f}")

# Compression through orthogonal copies of a trace-1/n projection.
p = diagonal_partition(n, k).projections[0]
fam = family_from_projections(p, p, n)
cert = factor_through_family(x, fam)
mid = max(np.linalg.norm(e, 2) for e in cert.diags[1].entries)
print(
    f"compression [p x p]: depth {cert.d}, cost {cost(cert):.4f} <= ||x||, "
    f"max middle entry norm {mid:.4f}"
)

# Corner embedding into the (1, 2) matrix unit of M_n(M_k).
corner = corner_embedding_certificate(x, 1, 2)
print(f"corner embedding: depth {corner.d}, cost {cost(corner):.4f}")

# Diagonal embedding x_ij -> x_ij (x) 1_n at depth exactly 5.
diag = diagonal_embedding_certificate(x)
val = evaluate(diag)
print(
    f"diagonal embedding: depth {diag.d}, cost {cost(diag):.4f}, "
    f"image norm {operator_norm(val):.4f}"
)
