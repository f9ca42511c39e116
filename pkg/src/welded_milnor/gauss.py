"""Signed Gauss codes for welded link diagrams, and the arc decomposition of a
based diagram.

A diagram is a list of oriented components, each a cyclic sequence of passes
(``O`` for over, ``U`` for under) through signed classical crossings.  Virtual
crossings carry no information at this level and are not stored.

Text format::

    O2+ U1+@0 ; O1+ O4- U2+ O5+ U3+ O3+@0 ; U4- U5+@0

Components are separated by ``;``, ``-`` is a crossing-free component and an
optional ``@k`` after the last token of a component puts the base point in
front of pass ``k`` of that component.
"""

from __future__ import annotations

import random
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

OVER = "O"
UNDER = "U"

BasePoints = tuple  # one gap index per component, 0-based component order


class GaussCodeError(ValueError):
    """Syntax error in a Gauss-code string; ``position`` is a character offset."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DiagramError(ValueError):
    """A structurally invalid diagram or base point system."""


class Pass(NamedTuple):
    crossing: int
    role: str

    def __str__(self):
        return f"{self.role}{self.crossing}"


class ArcId(NamedTuple):
    """Arc ``a_{component,index}``; both indices start at 1."""

    component: int
    index: int

    def __str__(self):
        if self.component < 10 and self.index < 10:
            return f"a{self.component}{self.index}"
        return f"a{self.component}_{self.index}"


@dataclass(frozen=True)
class Diagram:
    components: tuple
    signs: Mapping[int, int] = field(hash=False)

    def __post_init__(self):
        comps = tuple(tuple(Pass(int(c), r) for c, r in comp) for comp in self.components)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "signs", {int(c): int(s) for c, s in self.signs.items()})
        _validate(comps, self.signs)

    def __hash__(self):
        return hash((self.components, tuple(sorted(self.signs.items()))))

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def crossings(self) -> list[int]:
        return sorted(self.signs)

    @cached_property
    def locations(self) -> dict[Pass, tuple[int, int]]:
        """Map each pass to ``(component (1-based), position)``."""
        return {ps: (i + 1, k) for i, comp in enumerate(self.components) for k, ps in enumerate(comp)}

    def is_self_crossing(self, c: int) -> bool:
        return self.locations[Pass(c, OVER)][0] == self.locations[Pass(c, UNDER)][0]

    def __str__(self):
        return serialize_diagram(self)


def _validate(components, signs):
    if len(components) < 1:
        raise DiagramError("a diagram needs at least one component")
    roles = Counter()
    for comp in components:
        for ps in comp:
            if ps.role not in (OVER, UNDER):
                raise DiagramError(f"bad role {ps.role!r}")
            if ps.crossing < 0:
                raise DiagramError(f"negative crossing id {ps.crossing}")
            roles[ps] += 1
    used = {ps.crossing for ps in roles}
    for c in used:
        o, u = roles[Pass(c, OVER)], roles[Pass(c, UNDER)]
        if (o, u) != (1, 1):
            raise DiagramError(f"crossing {c} must appear once as O and once as U (got O×{o}, U×{u})")
    if set(signs) != used:
        extra = sorted(set(signs) ^ used)
        raise DiagramError(f"sign table does not match the crossings used: {extra}")
    for c, s in signs.items():
        if s not in (1, -1):
            raise DiagramError(f"sign of crossing {c} must be +1 or -1, got {s}")


def normalize_base_points(d: Diagram, p: Sequence[int] | None = None) -> tuple[int, ...]:
    """Check ``p`` against ``d`` and reduce each index modulo its component length."""
    if p is None:
        return (0,) * d.n
    p = tuple(int(k) for k in p)
    if len(p) != d.n:
        raise DiagramError(f"expected {d.n} base points, got {len(p)}")
    out = []
    for i, (k, comp) in enumerate(zip(p, d.components), start=1):
        if not 0 <= k <= len(comp):
            raise DiagramError(f"base point {k} out of range 0..{len(comp)} on component {i}")
        out.append(k % len(comp) if comp else 0)
    return tuple(out)


def walk(d: Diagram, p: Sequence[int], i: int) -> tuple[Pass, ...]:
    """Passes of component ``i`` (1-based) read from its base point."""
    comp = d.components[i - 1]
    k = p[i - 1]
    return comp[k:] + comp[:k]


# -- text format -------------------------------------------------------------

_TOKEN = re.compile(r"\S+")
_PASS = re.compile(r"([OU])(\d+)([+-])(?:@(\d+))?")
_EMPTY = re.compile(r"-(?:@(\d+))?")


def parse_based(text: str) -> tuple[Diagram, tuple[int, ...]]:
    """Parse a Gauss code together with its ``@k`` base-point annotations."""
    components: list[list[Pass]] = []
    base: list[int] = []
    signs: dict[int, int] = {}
    offset = 0
    for chunk in text.split(";"):
        comp: list[Pass] = []
        bp = None
        tokens = list(_TOKEN.finditer(chunk))
        if not tokens:
            raise GaussCodeError("empty component (write '-' for a crossing-free one)", offset)
        for t_index, tok in enumerate(tokens):
            pos = offset + tok.start()
            word = tok.group()
            if bp is not None:
                raise GaussCodeError("base point must follow the last token of a component", pos)
            m = _PASS.fullmatch(word)
            if m:
                c, role = int(m.group(2)), m.group(1)
                sign = 1 if m.group(3) == "+" else -1
                if signs.setdefault(c, sign) != sign:
                    raise DiagramError(f"inconsistent signs for crossing {c} (at position {pos})")
                comp.append(Pass(c, role))
                if m.group(4) is not None:
                    bp = int(m.group(4))
                continue
            m = _EMPTY.fullmatch(word)
            if m and len(tokens) == 1:
                if m.group(1) is not None:
                    bp = int(m.group(1))
                continue
            if word.startswith("@") and word[1:].isdigit() and t_index == len(tokens) - 1 and t_index > 0:
                bp = int(word[1:])
                continue
            raise GaussCodeError(f"unexpected token {word!r}", pos)
        components.append(comp)
        base.append(0 if bp is None else bp)
        offset += len(chunk) + 1
    d = Diagram(components, signs)
    return d, normalize_base_points(d, base)


def parse_diagram(text: str) -> Diagram:
    return parse_based(text)[0]


def _token(ps: Pass, signs) -> str:
    return f"{ps.role}{ps.crossing}{'+' if signs[ps.crossing] > 0 else '-'}"


def serialize_diagram(d: Diagram, p: Sequence[int] | None = None) -> str:
    """Render ``d`` in the text format; base points are written only when given."""
    if p is not None:
        p = normalize_base_points(d, p)
    parts = []
    for i, comp in enumerate(d.components):
        s = " ".join(_token(ps, d.signs) for ps in comp) if comp else "-"
        if p is not None:
            s += f"@{p[i]}"
        parts.append(s)
    return " ; ".join(parts)


def to_json(d: Diagram, p: Sequence[int] | None = None) -> dict:
    out = {
        "components": [
            [{"role": ps.role, "id": ps.crossing, "sign": d.signs[ps.crossing]} for ps in comp]
            for comp in d.components
        ],
    }
    if p is not None:
        out["base_points"] = list(normalize_base_points(d, p))
    return out


def from_json(obj: Mapping) -> tuple[Diagram, tuple[int, ...]]:
    try:
        comps, signs = [], {}
        for comp in obj["components"]:
            passes = []
            for rec in comp:
                c, sign = int(rec["id"]), int(rec["sign"])
                if signs.setdefault(c, sign) != sign:
                    raise DiagramError(f"inconsistent signs for crossing {c}")
                passes.append(Pass(c, rec["role"]))
            comps.append(passes)
        base = obj.get("base_points")
    except (KeyError, TypeError, AttributeError) as exc:
        raise GaussCodeError(f"malformed JSON diagram: {exc}") from exc
    d = Diagram(comps, signs)
    return d, normalize_base_points(d, base)


# -- arcs --------------------------------------------------------------------


@dataclass(frozen=True)
class ArcTable:
    """Arc data of a based diagram.

    ``under[i-1][j-1]`` is the pair ``(u_ij, eps_ij)``: the arc passing over
    the j-th under-crossing met on component i and that crossing's sign.
    ``over_arc`` maps each crossing to the arc carrying its over pass.
    """

    n: int
    m: tuple
    w: tuple
    under: tuple
    over_arc: Mapping[int, ArcId] = field(hash=False)

    def u(self, i: int, j: int) -> ArcId:
        return self.under[i - 1][j - 1][0]

    def eps(self, i: int, j: int) -> int:
        return self.under[i - 1][j - 1][1]

    def arcs(self, i: int | None = None) -> list[ArcId]:
        comps = range(1, self.n + 1) if i is None else [i]
        return [ArcId(k, j) for k in comps for j in range(1, self.m[k - 1] + 2)]


def arc_table(d: Diagram, p: Sequence[int] | None = None) -> ArcTable:
    p = normalize_base_points(d, p)
    over_arc: dict[int, ArcId] = {}
    unders: list[list[int]] = []
    for i in range(1, d.n + 1):
        j = 1
        seen = []
        for ps in walk(d, p, i):
            if ps.role == OVER:
                over_arc[ps.crossing] = ArcId(i, j)
            else:
                seen.append(ps.crossing)
                j += 1
        unders.append(seen)
    under = tuple(tuple((over_arc[c], d.signs[c]) for c in seen) for seen in unders)
    w = [0] * d.n
    for c, s in d.signs.items():
        if d.is_self_crossing(c):
            w[d.locations[Pass(c, UNDER)][0] - 1] += s
    return ArcTable(
        n=d.n,
        m=tuple(len(seen) for seen in unders),
        w=tuple(w),
        under=under,
        over_arc=over_arc,
    )


def under_count(d: Diagram, i: int, j: int) -> int:
    """Signed number of crossings where component ``i`` passes under component ``j``."""
    total = 0
    for c, s in d.signs.items():
        if d.locations[Pass(c, UNDER)][0] == i and d.locations[Pass(c, OVER)][0] == j:
            total += s
    return total


def random_diagram(
    n: int,
    crossings: int,
    rng: random.Random | int | None = None,
    components: Iterable[int] | None = None,
) -> Diagram:
    """A uniformly shuffled signed Gauss code (every such code is a welded diagram).

    ``components`` optionally restricts which components the passes land on.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    pool = list(components) if components is not None else list(range(n))
    comps: list[list[Pass]] = [[] for _ in range(n)]
    signs = {}
    for c in range(1, crossings + 1):
        signs[c] = rng.choice((1, -1))
        comps[rng.choice(pool)].append(Pass(c, OVER))
        comps[rng.choice(pool)].append(Pass(c, UNDER))
    for comp in comps:
        rng.shuffle(comp)
    return Diagram(comps, signs)
