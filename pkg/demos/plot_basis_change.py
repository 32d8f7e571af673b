"""
Changing coordinates
====================

Rerun everything in the coordinates Y = X R and compare with the lifted
original data.
"""

from favard import RATIONAL, build_moments, check_basis_covariance, jacobi_in_basis, jacobi_pipeline
from favard.catalog import SHIPPED

m = build_moments(SHIPPED["gaussian2"], 6)
jac = jacobi_pipeline(m, 3)[2]

R = RATIONAL.array([[1, 1], [0, 1]])
primed = jacobi_in_basis(m, R, 3)

# level 1 is the covariance of the new coordinates
print(primed.omega_form[1])

for n in range(4):
    print(check_basis_covariance(jac, primed, R, n).line(), "at level", n)
