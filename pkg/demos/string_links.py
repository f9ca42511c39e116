"""String links close up to based diagrams with every base point in front."""

from welded_milnor.stringlink import closure, mu_string_table, parse_string_link, string_link_walk
from welded_milnor.gauss import serialize_diagram

s = parse_string_link("stringlink\nO2+ U1+ ; O1+ O4- U2+ O5+ U3+ O3+ ; U4- U5+")
print("closure:", serialize_diagram(*closure(s)))
ref = mu_string_table(s, 3)
print("nonzero:", {"".join(map(str, k)): v for k, v in ref.items() if v})
walk = string_link_walk(s, seed=3, steps=200)
print("unchanged along a 200-step interior walk:", all(mu_string_table(t, 3) == ref for t in walk))
