"""Deciding equivalence up to self-crossing virtualization, and a case where
a repeated index shows why the test only uses distinct indices."""

from welded_milnor import parse_based
from welded_milnor.milnor import mu_table, sv_equivalent
from welded_milnor.moves import SV, apply, random_walk

d, p = parse_based("O2+ U1+ ; O1+ O4- U2+ O5+ U3+ O3+ ; U4- U5+")
print("(D, p) vs (D, p'):", sv_equivalent(d, p, d, (0, 3, 0)))

dd, pp, _ = random_walk(d, p, 7, 500, "wbar,sv")[-1]
print(f"after 500 random moves the diagram has {len(dd.signs)} crossings;", sv_equivalent(d, p, dd, pp))

c, cp = parse_based("O1- U2- U1- ; O2-")
c2, cp2 = apply(c, cp, SV(1))
before, after = mu_table(c, cp, 3), mu_table(c2, cp2, 3)
for s in sorted(before, key=lambda s: (len(s), s)):
    if before[s] != after[s]:
        print(f"deleting self-crossing 1 changes mu({''.join(map(str, s))}): {before[s]} -> {after[s]}")
