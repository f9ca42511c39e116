import itertools
import random

import pytest

from conftest import EXAMPLE_P_PRIME, random_based
from freegroup_oracle import oracle_table
from welded_milnor.gauss import Pass, parse_based, parse_diagram, serialize_diagram, walk
from welded_milnor.milnor import is_non_repeated, mu_bar_table, mu_table
from welded_milnor.moves import (
    SV,
    BaseShift,
    IllegalMoveError,
    MoveClass,
    OCSwap,
    R1Delete,
    R1Insert,
    R2Delete,
    R2Insert,
    R3,
    apply,
    check_walk,
    format_move,
    format_trace,
    fuzz_mode,
    legal_moves,
    move_class,
    parse_classes,
    parse_move,
    random_walk,
    replay_trace,
)

TRIANGLE = "O1+ O2+ ; U1+ O3- ; U2+ U3-"


def walk_text(d, p):
    """Each component read from its base point."""
    return [" ".join(f"{ps.role}{ps.crossing}" for ps in walk(d, p, i)) for i in range(1, d.n + 1)]


def nonrep(table):
    return {s: v for s, v in table.items() if is_non_repeated(s)}


def bars(d, p, rmax=3):
    return {s: (b.delta, b.residue) for s, b in mu_bar_table(mu_table(d, p, rmax)).items()}


def test_base_shift_realizes_p_prime(example):
    d, p = example
    for _ in range(3):
        d, p = apply(d, p, BaseShift(2, 1))
    assert p == EXAMPLE_P_PRIME
    assert apply(d, p, BaseShift(2, -1))[1] == (0, 2, 0)
    assert apply(*example, BaseShift(1, -1))[1] == (1, 0, 0)


def test_r1_round_trip(example):
    d, p = example
    for order in ("OU", "UO"):
        d2, p2 = apply(d, p, R1Insert(2, 6, -1, order))
        assert len(d2.signs) == 6
        assert mu_table(d2, p2, 3) == mu_table(d, p, 3)
        assert apply(d2, p2, R1Delete(6)) == (d, p)


def test_r1_at_either_end_of_walk(example):
    d, p = example
    d2, p2 = apply(d, p, R1Insert(1, 0, 1, "UO", crossing=9))
    assert walk_text(d2, p2)[0] == "U9 O9 O2 U1"
    # the stored rotation keeps the old first pass in front
    assert serialize_diagram(d2, p2).startswith("O2+ U1+ U9+ O9+@2 ;")
    d3, p3 = apply(d, p, R1Insert(1, 2, 1, "UO", crossing=9))
    assert walk_text(d3, p3)[0] == "O2 U1 U9 O9"


def test_r2_round_trip(example):
    d, p = example
    for order in ("same", "reversed"):
        for comp in (1, 2, 3):
            d2, p2 = apply(d, p, R2Insert(1, 1, comp, 0, 1, order))
            assert mu_table(d2, p2, 3) == mu_table(d, p, 3)
            assert R2Delete(6, 7) in legal_moves(d2, p2, MoveClass.WBAR, insertions=False)
            assert apply(d2, p2, R2Delete(6, 7)) == (d, p)


def test_r2_delete_needs_opposite_signs():
    d, p = parse_based("O1+ O2+ ; U1+ U2+")
    with pytest.raises(IllegalMoveError):
        apply(d, p, R2Delete(1, 2))


def test_oc_swap(example):
    d, p = example
    d2, p2 = apply(d, p, OCSwap(2, 1))
    assert walk_text(d2, p2)[1] == "O4 O1 U2 O5 U3 O3"
    assert apply(d2, p2, OCSwap(2, 1)) == (d, p)
    with pytest.raises(IllegalMoveError):
        apply(d, p, OCSwap(2, 2))
    with pytest.raises(IllegalMoveError):
        apply(d, p, OCSwap(1, 2))  # would straddle the base point


def test_r3_triangle():
    d, p = parse_based(TRIANGLE)
    assert legal_moves(d, p, MoveClass.WBAR, insertions=False) == [OCSwap(1, 1), R3(1, 2, 3)]
    d2, p2 = apply(d, p, R3(1, 2, 3))
    assert walk_text(d2, p2) == ["O2 O1", "O3 U1", "U3 U2"]
    assert mu_table(d2, p2, 4) == mu_table(d, p, 4)
    assert apply(d2, p2, R3(1, 2, 3)) == (d, p)


def test_r3_sign_condition_is_needed():
    for sx, sy, sz in itertools.product("+-", repeat=3):
        d, p = parse_based(f"O1{sx} O2{sy} ; U1{sx} O3{sz} ; U2{sy} U3{sz}")
        swapped = parse_based(f"O2{sy} O1{sx} ; O3{sz} U1{sx} ; U3{sz} U2{sy}")
        legal = R3(1, 2, 3) in legal_moves(d, p, MoveClass.WBAR, insertions=False)
        assert legal == (sx == sy)
        # forcing the swap when the signs differ would change mu
        assert (mu_table(d, p, 4) == mu_table(*swapped, 4)) == legal
        if not legal:
            with pytest.raises(IllegalMoveError):
                apply(d, p, R3(1, 2, 3))


def embed_triangle(rng, d, sx, sz):
    """Splice the triangle pattern, with fresh ids, into random gaps of ``d``."""
    x, y, z = (max(d.signs, default=0) + k for k in (1, 2, 3))
    # units are single tokens or whole blocks, so no block is ever split
    units = [[[tok] for tok in comp.split() if tok != "-"] for comp in serialize_diagram(d).split(" ; ")]
    for block in ([f"O{x}{sx}", f"O{y}{sx}"], [f"U{x}{sx}", f"O{z}{sz}"], [f"U{y}{sx}", f"U{z}{sz}"]):
        w = units[rng.randrange(d.n)]
        w.insert(rng.randint(0, len(w)), block)
    text = " ; ".join(" ".join(t for u in w for t in u) if w else "-" for w in units)
    return parse_diagram(text), (x, y, z)


def test_r3_embedded_in_random_diagrams():
    rng = random.Random(8)
    hits = 0
    for _ in range(60):
        d0, _ = random_based(rng, n_max=3, crossings_max=4)
        d, (x, y, z) = embed_triangle(rng, d0, rng.choice("+-"), rng.choice("+-"))
        p = (0,) * d.n
        legal = [m for m in legal_moves(d, p, MoveClass.WBAR, insertions=False) if isinstance(m, R3)]
        assert R3(x, y, z) in legal
        for m in legal:
            d2, p2 = apply(d, p, m)
            assert mu_table(d2, p2, 3) == oracle_table(d, p, 3)
            hits += 1
    assert hits >= 60


def test_every_single_move_preserves_its_invariant():
    rng = random.Random(12)
    for _ in range(8):
        d, p = random_based(rng, n_min=2, n_max=3, crossings_max=3)
        ref = mu_table(d, p, 3)
        for m in legal_moves(d, p, MoveClass.WBAR):
            assert mu_table(*apply(d, p, m), 3) == ref, m
        ref_bar = bars(d, p)
        for m in legal_moves(d, p, MoveClass.BASE):
            assert bars(*apply(d, p, m)) == ref_bar, m
        for m in legal_moves(d, p, MoveClass.SV):
            assert nonrep(mu_table(*apply(d, p, m), 3)) == nonrep(ref), m


def test_sv_rules(example):
    d, p = parse_based("O1- U2- U1- ; O2-")
    assert legal_moves(d, p, MoveClass.SV) == [SV(1)]
    d2, p2 = apply(d, p, SV(1))
    assert serialize_diagram(d2, p2) == "U2-@0 ; O2-@0"
    with pytest.raises(IllegalMoveError):
        apply(d, p, SV(2))
    with pytest.raises(IllegalMoveError):
        apply(d, p, SV(7))


def test_stale_and_malformed_moves(example):
    d, p = example
    bad = [
        R1Delete(1),
        R1Delete(99),
        R1Insert(4, 0, 1),
        R1Insert(1, 5, 1),
        R1Insert(1, 0, 1, crossing=2),
        R2Insert(1, 0, 1, 1, 1),
        R2Delete(1, 2),
        R3(1, 2, 3),
        BaseShift(1, 2),
    ]
    for m in bad:
        with pytest.raises(IllegalMoveError):
            apply(d, p, m)
    with pytest.raises(TypeError):
        apply(d, p, "R1")


def test_move_lines_round_trip():
    moves = [
        R1Insert(1, 0, 1, "OU", 5),
        R1Delete(3),
        R2Insert(1, 2, 2, 0, -1, "reversed", (7, 8)),
        R2Delete(7, 8),
        R3(1, 2, 3),
        OCSwap(2, 1),
        BaseShift(3, -1),
        SV(4),
    ]
    for m in moves:
        assert parse_move(format_move(m)) == m
    assert format_move(BaseShift(2, 1)) == "BS comp=2 dir=+1"
    with pytest.raises(ValueError):
        parse_move("R9 c=1")
    with pytest.raises(ValueError):
        parse_move("R1D")


def test_classes():
    assert parse_classes("wbar, SV") == {MoveClass.WBAR, MoveClass.SV}
    with pytest.raises(ValueError):
        parse_classes("wbar,r7")
    assert move_class(R3(1, 2, 3)) is MoveClass.WBAR
    assert move_class(BaseShift(1, 1)) is MoveClass.BASE
    assert fuzz_mode("wbar") == "mu"
    assert fuzz_mode("wbar,base") == "mubar"
    assert fuzz_mode("wbar,sv") == "mu-nonrep"
    assert fuzz_mode("wbar", non_repeated=True) == "mu-nonrep"


def test_random_walk_is_deterministic_and_replayable(example):
    d, p = example
    classes = "wbar,base,sv"
    a = random_walk(d, p, 17, 150, classes)
    b = random_walk(d, p, 17, 150, classes)
    assert a == b
    assert random_walk(d, p, 18, 150, classes) != a
    trace = format_trace(d, p, [s[2] for s in a[1:]])
    assert trace.startswith("START O2+ U1+@0 ; ")
    assert [(s[0], s[1]) for s in replay_trace(trace)] == [(s[0], s[1]) for s in a]


def test_random_walk_respects_classes_and_cap(example):
    d, p = example
    states = random_walk(d, p, 3, 400, "wbar", cap=12)
    assert all(len(s[0].signs) <= 12 for s in states)
    assert not any(isinstance(s[2], (BaseShift, SV)) for s in states[1:])
    used = set()
    for dd, pp, m in states[1:]:
        if isinstance(m, R1Insert):
            assert m.crossing not in used
            used.add(m.crossing)
        elif isinstance(m, R2Insert):
            assert not used & set(m.crossings)
            used.update(m.crossings)
    sv_only = random_walk(d, p, 3, 200, "sv", cap=10)
    assert all(len(s[0].signs) <= 10 for s in sv_only)


def test_walk_states_are_valid_diagrams(example):
    d, p = example
    for dd, pp, _ in random_walk(d, p, 5, 200, "wbar,base,sv"):
        for c in dd.signs:
            assert Pass(c, "O") in dd.locations and Pass(c, "U") in dd.locations
        assert all(0 <= k <= max(len(comp), 1) for k, comp in zip(pp, dd.components))
        assert parse_based(serialize_diagram(dd, pp)) == (dd, pp)


def test_check_walk_short(example):
    d, p = example
    for classes in ("wbar", "wbar,base", "wbar,sv", "sv"):
        r = check_walk(d, p, 1, 60, classes)
        assert r.ok, r.report()
        assert r.report()["mode"] == fuzz_mode(classes)
