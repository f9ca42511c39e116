"""Milnor numbers of a three-component diagram, with longitudes and the
Magnus expansions they come from."""

from welded_milnor import parse_based
from welded_milnor.milnor import longitude_series, longitude_words, mu_table, table_records

CODE = "O2+ U1+ ; O1+ O4- U2+ O5+ U3+ O3+ ; U4- U5+"

d, p = parse_based(CODE)
print("code:", CODE)
for i, (w, s) in enumerate(zip(longitude_words(d, p), longitude_series(d, p, 3, 2)), start=1):
    print(f"  l{i} = {w:<18} E(eta_3(l{i})) = {s}")

print("nonzero entries up to length 3:")
for r in table_records(mu_table(d, p, 3), d.n):
    if r["mu"]:
        print(f"  mu({r['sequence']}) = {r['mu']:>2}   delta = {r['delta']}   mu-bar = {r['mu_bar']}")
