"""Moving a base point changes mu but keeps mu-bar."""

from welded_milnor import parse_based
from welded_milnor.milnor import mu_bar
from welded_milnor.moves import BaseShift, apply

d, p = parse_based("O2+ U1+ ; O1+ O4- U2+ O5+ U3+ O3+ ; U4- U5+")
q = p
for _ in range(3):
    d, q = apply(d, q, BaseShift(2, 1))

for label, base in (("p ", p), ("p'", q)):
    b = mu_bar(d, base, (1, 2, 3))
    print(f"{label} = {base}: mu(123) = {b.mu:>2}, delta = {b.delta}, residue = {b.residue}")
