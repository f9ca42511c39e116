"""Welded moves on based Gauss codes, base-point shifts, self-crossing
virtualization, and a seeded random walk used to fuzz the invariance of
Milnor numbers.

Gaps and positions in moves are counted along the walk from the base point
of the component: gap 0 sits just after the base point, gap ``len`` just
before it, and gap ``g`` in between lies between walk positions ``g-1`` and
``g``.  So a local move never straddles a base point unless it is a
:class:`BaseShift`.

Virtual moves, and a base point sliding through a virtual crossing, leave the
Gauss code untouched and have no representation here.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

from .gauss import (
    OVER,
    UNDER,
    Diagram,
    Pass,
    normalize_base_points,
    parse_based,
    serialize_diagram,
    walk,
)


class IllegalMoveError(ValueError):
    pass


class MoveClass(enum.Enum):
    WBAR = "wbar"
    BASE = "base"
    SV = "sv"


@dataclass(frozen=True)
class R1Insert:
    component: int
    gap: int
    sign: int
    order: str = "OU"
    crossing: int | None = None


@dataclass(frozen=True)
class R1Delete:
    crossing: int


@dataclass(frozen=True)
class R2Insert:
    """Two crossings ``c1`` (sign ``sign``) and ``c2`` (opposite sign).

    The over block ``O(c1) O(c2)`` goes in at ``over_gap``; the under block
    goes in at ``under_gap`` counted in the walk *after* that insertion, as
    ``U(c1) U(c2)`` (``same``) or ``U(c2) U(c1)`` (``reversed``).
    """

    over_component: int
    over_gap: int
    under_component: int
    under_gap: int
    sign: int
    under_order: str = "same"
    crossings: tuple | None = None


@dataclass(frozen=True)
class R2Delete:
    c1: int
    c2: int


@dataclass(frozen=True)
class R3:
    """Crossings ``x`` (top over middle), ``y`` (top over bottom) and
    ``z`` (middle over bottom), with ``sign(x) == sign(y)``.

    Forward pattern: ``O(x) O(y)`` on the top strand, ``U(x) O(z)`` on the
    middle and ``U(y) U(z)`` on the bottom, each pair adjacent.  The move
    reverses all three pairs; applied to the reversed pattern it undoes itself.
    """

    x: int
    y: int
    z: int


@dataclass(frozen=True)
class OCSwap:
    component: int
    gap: int


@dataclass(frozen=True)
class BaseShift:
    component: int
    direction: int


@dataclass(frozen=True)
class SV:
    crossing: int


WBAR_MOVES = (R1Insert, R1Delete, R2Insert, R2Delete, R3, OCSwap)


def move_class(m) -> MoveClass:
    if isinstance(m, BaseShift):
        return MoveClass.BASE
    if isinstance(m, SV):
        return MoveClass.SV
    if isinstance(m, WBAR_MOVES):
        return MoveClass.WBAR
    raise TypeError(f"not a move: {m!r}")


def parse_classes(names: str | Iterable) -> frozenset[MoveClass]:
    if isinstance(names, str):
        names = [s for s in names.split(",") if s.strip()]
    out = set()
    for s in names:
        if isinstance(s, MoveClass):
            out.add(s)
            continue
        try:
            out.add(MoveClass(s.strip().lower()))
        except ValueError:
            raise ValueError(f"unknown move class {s!r} (expected wbar, base or sv)") from None
    return frozenset(out)


# -- trace format ------------------------------------------------------------

_SIGN = {1: "+", -1: "-"}


def format_move(m) -> str:
    if isinstance(m, R1Insert):
        return f"R1I c={m.crossing} comp={m.component} gap={m.gap} sign={_SIGN[m.sign]} ord={m.order}"
    if isinstance(m, R1Delete):
        return f"R1D c={m.crossing}"
    if isinstance(m, R2Insert):
        c1, c2 = m.crossings if m.crossings else (None, None)
        return (
            f"R2I c1={c1} c2={c2} comp={m.over_component} gap={m.over_gap} "
            f"ucomp={m.under_component} ugap={m.under_gap} sign={_SIGN[m.sign]} ord={m.under_order}"
        )
    if isinstance(m, R2Delete):
        return f"R2D c1={m.c1} c2={m.c2}"
    if isinstance(m, R3):
        return f"R3 x={m.x} y={m.y} z={m.z}"
    if isinstance(m, OCSwap):
        return f"OC comp={m.component} gap={m.gap}"
    if isinstance(m, BaseShift):
        return f"BS comp={m.component} dir={m.direction:+d}"
    if isinstance(m, SV):
        return f"SV c={m.crossing}"
    raise TypeError(f"not a move: {m!r}")


def parse_move(line: str):
    head, *rest = line.split()
    kv = dict(item.split("=", 1) for item in rest)

    def num(key):
        v = kv[key]
        return None if v == "None" else int(v)

    def sign(key):
        return 1 if kv[key] == "+" else -1

    try:
        if head == "R1I":
            return R1Insert(num("comp"), num("gap"), sign("sign"), kv["ord"], num("c"))
        if head == "R1D":
            return R1Delete(num("c"))
        if head == "R2I":
            cs = (num("c1"), num("c2"))
            return R2Insert(
                num("comp"), num("gap"), num("ucomp"), num("ugap"), sign("sign"), kv["ord"],
                None if None in cs else cs,
            )
        if head == "R2D":
            return R2Delete(num("c1"), num("c2"))
        if head == "R3":
            return R3(num("x"), num("y"), num("z"))
        if head == "OC":
            return OCSwap(num("comp"), num("gap"))
        if head == "BS":
            return BaseShift(num("comp"), num("dir"))
        if head == "SV":
            return SV(num("c"))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed move line {line!r}: {exc}") from None
    raise ValueError(f"unknown move {head!r}")


def format_trace(d: Diagram, p, moves: Iterable) -> str:
    lines = [f"START {serialize_diagram(d, p)}"]
    lines += [format_move(m) for m in moves if m is not None]
    return "\n".join(lines) + "\n"


def replay_trace(text: str) -> list[tuple[Diagram, tuple, object]]:
    """Re-run a trace written by :func:`format_trace`."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("START "):
        raise ValueError("trace must begin with a START line")
    d, p = parse_based(lines[0][6:])
    states = [(d, p, None)]
    for ln in lines[1:]:
        m = parse_move(ln)
        d, p = apply(d, p, m)
        states.append((d, p, m))
    return states


# -- rewriting ---------------------------------------------------------------


def _walks(d, p):
    return [list(walk(d, p, i)) for i in range(1, d.n + 1)]


def _rebuild(d: Diagram, p, walks, signs) -> tuple[Diagram, tuple]:
    """Turn edited walks back into components, keeping the original first
    pass of each component at index 0 when it survives."""
    comps, base = [], []
    for comp, w in zip(d.components, walks):
        where = {ps: k for k, ps in enumerate(w)}
        anchor = next((where[ps] for ps in comp if ps in where), None)
        if anchor is None or not w:
            comps.append(tuple(w))
            base.append(0)
        else:
            comps.append(tuple(w[anchor:] + w[:anchor]))
            base.append((len(w) - anchor) % len(w))
    return Diagram(comps, signs), tuple(base)


def _index(walks):
    return {ps: (i, k) for i, w in enumerate(walks) for k, ps in enumerate(w)}


def _adjacent(walks, where, first: Pass, second: Pass):
    """Walk index of ``first`` when ``second`` directly follows it on the same
    component without crossing the base point, else None."""
    i, k = where[first]
    if k + 1 < len(walks[i]) and walks[i][k + 1] == second:
        return i, k
    return None


def _check_component(d, i):
    if not 1 <= i <= d.n:
        raise IllegalMoveError(f"component {i} outside 1..{d.n}")


def _fresh(d, k=1):
    start = max(d.signs, default=0) + 1
    return list(range(start, start + k))


def _r3_sites(d, walks, where, m: R3):
    """Return the three adjacency sites for ``m`` (forward or inverse), or None."""
    x, y, z = m.x, m.y, m.z
    if len({x, y, z}) != 3 or any(c not in d.signs for c in (x, y, z)):
        return None
    if d.signs[x] != d.signs[y]:
        return None
    O, U = OVER, UNDER
    for pattern in (
        ((Pass(x, O), Pass(y, O)), (Pass(x, U), Pass(z, O)), (Pass(y, U), Pass(z, U))),
        ((Pass(y, O), Pass(x, O)), (Pass(z, O), Pass(x, U)), (Pass(z, U), Pass(y, U))),
    ):
        sites = [_adjacent(walks, where, a, b) for a, b in pattern]
        if all(s is not None for s in sites):
            return sites
    return None


def _r2_delete_sites(d, walks, where, c1, c2):
    if c1 == c2 or c1 not in d.signs or c2 not in d.signs or d.signs[c1] != -d.signs[c2]:
        return None
    over = _adjacent(walks, where, Pass(c1, OVER), Pass(c2, OVER))
    if over is None:
        return None
    under = _adjacent(walks, where, Pass(c1, UNDER), Pass(c2, UNDER)) or _adjacent(
        walks, where, Pass(c2, UNDER), Pass(c1, UNDER)
    )
    if under is None:
        return None
    return over, under


def apply(d: Diagram, p: Sequence[int] | None, m) -> tuple[Diagram, tuple]:
    """Apply one move to ``(d, p)`` and return the new based diagram."""
    p = normalize_base_points(d, p)
    walks = _walks(d, p)
    where = _index(walks)
    signs = dict(d.signs)

    if isinstance(m, R1Insert):
        _check_component(d, m.component)
        c = m.crossing if m.crossing is not None else _fresh(d)[0]
        if c in signs:
            raise IllegalMoveError(f"crossing id {c} already in use")
        w = walks[m.component - 1]
        if not 0 <= m.gap <= len(w) or m.sign not in (1, -1) or m.order not in ("OU", "UO"):
            raise IllegalMoveError(f"bad R1 insertion {m}")
        block = [Pass(c, OVER), Pass(c, UNDER)]
        w[m.gap:m.gap] = block if m.order == "OU" else block[::-1]
        signs[c] = m.sign
        return _rebuild(d, p, walks, signs)

    if isinstance(m, R1Delete):
        c = m.crossing
        if c not in signs:
            raise IllegalMoveError(f"stale crossing id {c}")
        site = _adjacent(walks, where, Pass(c, OVER), Pass(c, UNDER)) or _adjacent(
            walks, where, Pass(c, UNDER), Pass(c, OVER)
        )
        if site is None:
            raise IllegalMoveError(f"crossing {c} is not a removable kink")
        i, k = site
        del walks[i][k:k + 2]
        del signs[c]
        return _rebuild(d, p, walks, signs)

    if isinstance(m, R2Insert):
        _check_component(d, m.over_component)
        _check_component(d, m.under_component)
        c1, c2 = m.crossings if m.crossings is not None else _fresh(d, 2)
        if c1 == c2 or c1 in signs or c2 in signs:
            raise IllegalMoveError(f"crossing ids {c1}, {c2} not fresh")
        if m.sign not in (1, -1) or m.under_order not in ("same", "reversed"):
            raise IllegalMoveError(f"bad R2 insertion {m}")
        wo = walks[m.over_component - 1]
        if not 0 <= m.over_gap <= len(wo):
            raise IllegalMoveError(f"over gap {m.over_gap} out of range")
        wo[m.over_gap:m.over_gap] = [Pass(c1, OVER), Pass(c2, OVER)]
        wu = walks[m.under_component - 1]
        if not 0 <= m.under_gap <= len(wu):
            raise IllegalMoveError(f"under gap {m.under_gap} out of range")
        if m.under_component == m.over_component and m.under_gap == m.over_gap + 1:
            raise IllegalMoveError("under block would split the over block")
        block = [Pass(c1, UNDER), Pass(c2, UNDER)]
        wu[m.under_gap:m.under_gap] = block if m.under_order == "same" else block[::-1]
        signs[c1], signs[c2] = m.sign, -m.sign
        return _rebuild(d, p, walks, signs)

    if isinstance(m, R2Delete):
        if m.c1 not in signs or m.c2 not in signs:
            raise IllegalMoveError(f"stale crossing ids {m.c1}, {m.c2}")
        sites = _r2_delete_sites(d, walks, where, m.c1, m.c2)
        if sites is None:
            raise IllegalMoveError(f"crossings {m.c1}, {m.c2} do not form an R2 bigon")
        drop = {Pass(m.c1, OVER), Pass(m.c2, OVER), Pass(m.c1, UNDER), Pass(m.c2, UNDER)}
        walks = [[ps for ps in w if ps not in drop] for w in walks]
        del signs[m.c1], signs[m.c2]
        return _rebuild(d, p, walks, signs)

    if isinstance(m, R3):
        sites = _r3_sites(d, walks, where, m)
        if sites is None:
            raise IllegalMoveError(f"no R3 triangle at {m}")
        for i, k in sites:
            walks[i][k], walks[i][k + 1] = walks[i][k + 1], walks[i][k]
        return _rebuild(d, p, walks, signs)

    if isinstance(m, OCSwap):
        _check_component(d, m.component)
        w = walks[m.component - 1]
        g = m.gap
        if not 1 <= g <= len(w) - 1 or w[g - 1].role != OVER or w[g].role != OVER:
            raise IllegalMoveError(f"no adjacent over passes at {m}")
        w[g - 1], w[g] = w[g], w[g - 1]
        return _rebuild(d, p, walks, signs)

    if isinstance(m, BaseShift):
        _check_component(d, m.component)
        length = len(d.components[m.component - 1])
        if length == 0 or m.direction not in (1, -1):
            raise IllegalMoveError(f"cannot shift base point with {m}")
        new_p = list(p)
        new_p[m.component - 1] = (p[m.component - 1] + m.direction) % length
        return d, tuple(new_p)

    if isinstance(m, SV):
        c = m.crossing
        if c not in signs:
            raise IllegalMoveError(f"stale crossing id {c}")
        if not d.is_self_crossing(c):
            raise IllegalMoveError(f"crossing {c} is not a self-crossing")
        walks = [[ps for ps in w if ps.crossing != c] for w in walks]
        del signs[c]
        return _rebuild(d, p, walks, signs)

    raise TypeError(f"not a move: {m!r}")


# -- site enumeration --------------------------------------------------------


def _insertions(d, walks):
    out = []
    for i, w in enumerate(walks, start=1):
        for g in range(len(w) + 1):
            for s in (1, -1):
                for order in ("OU", "UO"):
                    out.append(R1Insert(i, g, s, order))
    for io, wo in enumerate(walks, start=1):
        for go in range(len(wo) + 1):
            for iu, wu in enumerate(walks, start=1):
                size = len(wu) + (2 if iu == io else 0)
                for gu in range(size + 1):
                    if iu == io and gu == go + 1:
                        continue
                    for s in (1, -1):
                        for order in ("same", "reversed"):
                            out.append(R2Insert(io, go, iu, gu, s, order))
    return out


def legal_moves(d: Diagram, p: Sequence[int] | None, cls: MoveClass, insertions: bool = True) -> list:
    """Every applicable move of class ``cls``; R1/R2 insertions with fresh ids
    are included for the w-bar class unless ``insertions`` is False."""
    p = normalize_base_points(d, p)
    cls = MoveClass(cls)
    walks = _walks(d, p)
    where = _index(walks)
    out: list = []
    if cls is MoveClass.WBAR:
        if insertions:
            out += _insertions(d, walks)
        pairs = [(i, k, w[k], w[k + 1]) for i, w in enumerate(walks, start=1) for k in range(len(w) - 1)]
        for i, k, a, b in pairs:
            if a.crossing == b.crossing:
                out.append(R1Delete(a.crossing))
        for i, k, a, b in pairs:
            if a.role == OVER and b.role == OVER:
                out.append(OCSwap(i, k + 1))
                if _r2_delete_sites(d, walks, where, a.crossing, b.crossing):
                    out.append(R2Delete(a.crossing, b.crossing))
        for i, k, a, b in pairs:
            # middle strand of a triangle: U(x) O(z) forward, O(z) U(x) inverse
            if {a.role, b.role} != {OVER, UNDER}:
                continue
            x = a.crossing if a.role == UNDER else b.crossing
            z = b.crossing if a.role == UNDER else a.crossing
            # y sits next to O(x) on the top strand
            i_top, k_top = where[Pass(x, OVER)]
            top = walks[i_top]
            for kk in (k_top - 1, k_top + 1):
                if 0 <= kk < len(top) and top[kk].role == OVER:
                    y = top[kk].crossing
                    if y != z and _r3_sites(d, walks, where, R3(x, y, z)):
                        out.append(R3(x, y, z))
    elif cls is MoveClass.BASE:
        for i, w in enumerate(walks, start=1):
            if w:
                out += [BaseShift(i, 1), BaseShift(i, -1)]
    elif cls is MoveClass.SV:
        out += [SV(c) for c in sorted(d.signs) if d.is_self_crossing(c)]
    return out


# -- random walks ------------------------------------------------------------


def _random_insertion(d, walks, rng, next_id, room):
    i = rng.randrange(d.n) + 1
    if room >= 2 and rng.random() < 0.5:
        io, iu = i, rng.randrange(d.n) + 1
        go = rng.randrange(len(walks[io - 1]) + 1)
        size = len(walks[iu - 1]) + (2 if iu == io else 0)
        choices = [g for g in range(size + 1) if not (iu == io and g == go + 1)]
        gu = rng.choice(choices)
        return R2Insert(
            io, go, iu, gu, rng.choice((1, -1)), rng.choice(("same", "reversed")), (next_id, next_id + 1)
        )
    g = rng.randrange(len(walks[i - 1]) + 1)
    return R1Insert(i, g, rng.choice((1, -1)), rng.choice(("OU", "UO")), next_id)


def random_walk(
    d: Diagram,
    p: Sequence[int] | None,
    seed: int,
    steps: int,
    classes: Iterable = (MoveClass.WBAR,),
    cap: int = 40,
) -> list[tuple[Diagram, tuple, object]]:
    """A reproducible sequence of moves from ``classes`` plus R1/R2 insertions.

    Returns ``steps + 1`` states ``(diagram, base_points, move)``; the first
    has move None.  Insertions keep the crossing count at most ``cap`` and
    become rarer above 30 crossings; at the cap with no legal move of the
    allowed classes an R1/R2 deletion is used, and only if none exists does an
    insertion push past the cap.  Fresh crossing ids are never reused.
    """
    classes = parse_classes(classes)
    rng = random.Random(seed)
    p = normalize_base_points(d, p)
    states = [(d, p, None)]
    next_id = max(d.signs, default=0) + 1
    for _ in range(steps):
        count = len(d.signs)
        options = []
        for cls in sorted(classes, key=lambda c: c.value):
            options += legal_moves(d, p, cls, insertions=False)
        room = cap - count
        p_insert = 0.5 if count <= 30 else 0.15
        if room <= 0:
            p_insert = 0.0
        if not options and room <= 0:
            # at the cap with nothing else legal: a w-bar deletion changes no invariant
            options = [
                mv for mv in legal_moves(d, p, MoveClass.WBAR, insertions=False)
                if isinstance(mv, (R1Delete, R2Delete))
            ]
        if not options or rng.random() < p_insert:
            m = _random_insertion(d, _walks(d, p), rng, next_id, room)
        else:
            m = rng.choice(options)
        d, p = apply(d, p, m)
        if isinstance(m, R1Insert):
            next_id = m.crossing + 1
        elif isinstance(m, R2Insert):
            next_id = max(m.crossings) + 1
        states.append((d, p, m))
    return states


# -- invariance fuzzing ------------------------------------------------------


@dataclass
class FuzzResult:
    ok: bool
    mode: str
    steps: int
    seed: int
    classes: tuple
    rmax: int
    failed_step: int | None = None
    sequence: tuple | None = None
    expected: object = None
    actual: object = None
    trace: str = ""
    max_crossings: int = 0
    move_counts: dict | None = None

    def report(self) -> dict:
        keys = [f.name for f in fields(self) if f.name != "trace"]
        out = {k: getattr(self, k) for k in keys}
        out["classes"] = list(self.classes)
        if self.sequence is not None:
            out["sequence"] = "".join(map(str, self.sequence))
        if self.expected is not None:
            out["expected"], out["actual"] = str(self.expected), str(self.actual)
        return out


def fuzz_mode(classes, non_repeated=False) -> str:
    """Which invariant a walk over ``classes`` must preserve.

    ``mu``: every Milnor number; ``mubar``: every mu-bar; the ``-nonrep``
    variants restrict to non-repeated sequences.
    """
    classes = parse_classes(classes)
    base = "mubar" if MoveClass.BASE in classes else "mu"
    if MoveClass.SV in classes or non_repeated:
        return base + "-nonrep"
    return base


def invariant_snapshot(d, p, rmax, mode):
    from .milnor import is_non_repeated, mu_bar_table, mu_table

    table = mu_table(d, p, rmax)
    if mode.endswith("-nonrep"):
        keep = {s for s in table if is_non_repeated(s)}
    else:
        keep = set(table)
    if mode.startswith("mubar"):
        bars = mu_bar_table(table)
        return {s: (bars[s].delta, bars[s].residue) for s in keep}
    return {s: table[s] for s in keep}


def check_walk(
    d: Diagram,
    p: Sequence[int] | None,
    seed: int,
    steps: int,
    classes: Iterable = (MoveClass.WBAR,),
    rmax: int = 3,
    non_repeated: bool = False,
    cap: int = 40,
) -> FuzzResult:
    """Random walk from ``(d, p)`` recomputing the class-appropriate invariant at every step."""
    classes = parse_classes(classes)
    mode = fuzz_mode(classes, non_repeated)
    names = tuple(sorted(c.value for c in classes))
    states = random_walk(d, p, seed, steps, classes, cap=cap)
    reference = invariant_snapshot(states[0][0], states[0][1], rmax, mode)
    counts: dict = {}
    largest = 0
    for step, (dd, pp, m) in enumerate(states[1:], start=1):
        counts[type(m).__name__] = counts.get(type(m).__name__, 0) + 1
        largest = max(largest, len(dd.signs))
        now = invariant_snapshot(dd, pp, rmax, mode)
        if now != reference:
            bad = min((s for s in reference if reference[s] != now[s]), key=lambda s: (len(s), s))
            trace = format_trace(states[0][0], states[0][1], [s[2] for s in states[1:step + 1]])
            return FuzzResult(
                False, mode, steps, seed, names, rmax, step, bad, reference[bad], now[bad], trace,
                largest, counts,
            )
    return FuzzResult(True, mode, steps, seed, names, rmax, max_crossings=largest, move_counts=counts)
