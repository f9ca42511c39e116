"""Random walks of moves, recomputing the matching invariant after each step."""

import random

from welded_milnor import parse_based
from welded_milnor.gauss import random_diagram
from welded_milnor.moves import check_walk

seeds = {
    "three-component example": parse_based("O2+ U1+ ; O1+ O4- U2+ O5+ U3+ O3+ ; U4- U5+"),
    "Hopf link": parse_based("O1+ U2+ ; U1+ O2+"),
    "random 8 crossings": (random_diagram(3, 8, random.Random(2026)), (0, 0, 0)),
}

for name, (d, p) in seeds.items():
    for classes, steps in (("wbar", 300), ("wbar,base", 300), ("sv", 100)):
        r = check_walk(d, p, seed=1, steps=steps, classes=classes)
        moves = ", ".join(f"{k} {v}" for k, v in sorted(r.move_counts.items()))
        print(f"{name:<24} {classes:<10} {r.mode:<10} ok={r.ok}  peak {r.max_crossings} crossings  [{moves}]")
