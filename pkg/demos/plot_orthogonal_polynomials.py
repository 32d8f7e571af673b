"""
Monic orthogonal polynomials from moments
=========================================

Gram-Schmidt by total degree, run on nothing but a moment table.
"""

from favard import Atomic, Product, Uniform, build_moments, decompose
from favard.catalog import SHIPPED

# Uniform(-1, 1): the monic Legendre polynomials come out exactly
m = build_moments(Product((Uniform(-1, 1),)), 8)
dec = decompose(m, 4)
for n, (q,) in enumerate(dec.monic):
    print(f"q_{n} = {q}   <q,q> = {dec.grams[n][0, 0]}")

# two independent Gaussians: level 2 is spanned by He2(X1), X1 X2, He2(X2)
dec2 = decompose(build_moments(SHIPPED["gaussian2"], 4), 2)
print(dec2.levels[2].entries, dec2.monic[2])

# a finitely supported measure: the level-2 Gram is singular
coin = build_moments(Atomic((((1,), "1/2"), ((-1,), "1/2"))), 6)
dec3 = decompose(coin, 3)
print("ranks per level:", dec3.ranks)
print("q_2 =", dec3.monic[2][0], "has zero norm but is still a monic polynomial")
