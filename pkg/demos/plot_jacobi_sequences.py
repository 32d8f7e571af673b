"""
Jacobi sequences of a product measure
=====================================

For a product of one-dimensional measures the Omega forms are diagonal and
the alpha matrices read off the one-dimensional recurrences.
"""

from favard import factor_moments, jacobi_pipeline, product_jacobi_closed_form, stieltjes
from favard.catalog import SHIPPED
from favard.moments import build_moments

spec = SHIPPED["gaussian_uniform"]
N = 4
dec, cap, jac = jacobi_pipeline(build_moments(spec, 2 * N), N)
recs = [stieltjes(factor_moments(f, 2 * N), N) for f in spec.factors]

for n in range(N):
    W, lams = product_jacobi_closed_form(recs, n)
    print(f"level {n}: basis {list(jac.basis(n))}")
    print("  W      ", [str(jac.omega_form[n][i, i]) for i in range(len(W))])
    print("  closed ", [str(W[i, i]) for i in range(len(W))])
    print("  same   ", (jac.omega_form[n] == W).all() and all((a == b).all() for a, b in zip(jac.alpha[n], lams)))

# operator versus bilinear form: they differ by the symmetric-power Gram
print(jac.omega_form[2])
print(jac.omega_op(2))
