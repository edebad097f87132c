"""Build, evaluate, and verify a factorization certificate.

A certificate represents a matrix over M_k as an alternating product
alpha_0 D_1 alpha_1 ... D_d alpha_d of scalar matrices (acting by
inflation) and block-diagonal matrices.  Its cost -- the product of the
factor norms -- is a certified upper bound on the operator norm.
"""

import numpy as np

from oplength import (
    add,
    cost,
    evaluate,
    operator_norm,
    pad,
    universal_depth1,
    verify,
)
from oplength.instances import random_instance

x = random_instance(n=3, k=4, seed=0)
print(f"instance: 3x3 over M_4, ||x|| = {operator_norm(x):.4f}")

# The universal depth-1 construction works for any square input: its
# scalar factors are 0/1 matrices depending only on n.
cert = universal_depth1(x)
print(f"depth {cert.d} certificate, widths {cert.widths}, cost {cost(cert):.4f}")

report = verify(cert, x, tol=1e-9)
print(f"verified: {report.passed} (reconstruction error {report.recon_error:.2e})")
print(f"cost/||x|| ratio: {report.ratio:.4f}")

# Padding with unit factors raises the depth without changing the value
# or the cost; certificates of equal depth can be added.
deeper = pad(cert)
print(f"padded to depth {deeper.d}: cost drift {abs(cost(deeper) - cost(cert)):.2e}")

doubled = add(cert, cert)
print(
    f"add(cert, cert): evaluates to 2x "
    f"(error {operator_norm(evaluate(doubled) - 2 * x):.2e}), "
    f"cost {cost(doubled):.4f} <= {2 * cost(cert):.4f}"
)
