"""
Moments back from the Jacobi data
=================================

The interacting Fock picture: creation, preservation and annihilation fields
built from (Omega_n, alpha_n) alone reproduce every mixed moment.
"""

import itertools

from favard import build_fock_fields, build_moments, jacobi_pipeline, reconstruct_moments
from favard.catalog import SHIPPED
from favard.polyalg import word_to_index

m = build_moments(SHIPPED["two_point2"], 8)
jac = jacobi_pipeline(m, 4)[2]
fields = build_fock_fields(jac)

print("Omega ranks:", jac.omega_rank)

for word in itertools.product((1, 2), repeat=4):
    got = reconstruct_moments(jac, word, fields)
    print(word, got, m[word_to_index(word, 2)])
