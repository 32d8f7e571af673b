"""
Creation, preservation and annihilation
=======================================

Multiplying a level-n orthogonal polynomial by X_j only reaches levels
n-1, n and n+1.  The three blocks are the CAP matrices.
"""

from favard import build_cap, build_moments, check_quantum_decomposition, decompose
from favard.catalog import SHIPPED

m = build_moments(SHIPPED["exponential"], 10)
dec = decompose(m, 5)
cap = build_cap(dec, m)

# monic Laguerre recurrence: X q_n = q_{n+1} + (2n+1) q_n + n^2 q_{n-1}
for lvl in cap:
    minus = lvl.aminus[0][0, 0] if lvl.level else "-"
    print(lvl.level, lvl.aplus[0][0, 0], lvl.azero[0][0, 0], minus)

print(check_quantum_decomposition(cap, dec, m).line())

# in d = 3 the creators commute and A-(n+1) is the Gram-adjoint of A+(n)
m3 = build_moments(SHIPPED["uniform_exponential_gaussian"], 6)
dec3 = decompose(m3, 3)
cap3 = build_cap(dec3, m3)
G = dec3.grams
lhs = G[1] @ cap3[2].aminus[1]
rhs = cap3[1].aplus[1].T @ G[2]
print("adjoint residual:", (lhs - rhs).max(), (rhs - lhs).max())
