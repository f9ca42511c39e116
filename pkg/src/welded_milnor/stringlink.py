"""Welded string links as linear Gauss codes.

Strand i runs from its bottom endpoint to its top endpoint; its passes are
listed in that order.  Closing each strand back to its bottom endpoint gives
a based link diagram with every base point in front of the first pass, and
the Milnor numbers of that based diagram are integer invariants of the
string link.

Text format: a header line ``stringlink`` followed by a Gauss code without
base-point annotations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .gauss import Diagram, GaussCodeError, normalize_base_points, parse_based, serialize_diagram, walk
from .milnor import mu, mu_table
from .moves import MoveClass, parse_classes, random_walk

HEADER = "stringlink"


@dataclass(frozen=True)
class StringLink:
    """Wraps a :class:`Diagram` whose components are read as open strands."""

    diagram: Diagram

    @property
    def n(self) -> int:
        return self.diagram.n

    @property
    def strands(self) -> tuple:
        return self.diagram.components

    def __str__(self):
        return serialize_string_link(self)


def is_string_link_text(text: str) -> bool:
    return text.lstrip().split("\n", 1)[0].strip() == HEADER


def parse_string_link(text: str) -> StringLink:
    stripped = text.lstrip()
    first, _, rest = stripped.partition("\n")
    if first.strip() != HEADER:
        raise GaussCodeError(f"string link text must start with a {HEADER!r} header line", 0)
    if "@" in rest:
        raise GaussCodeError("string links carry no base points", text.index("@"))
    d, _ = parse_based(rest)
    return StringLink(d)


def serialize_string_link(s: StringLink) -> str:
    return f"{HEADER}\n{serialize_diagram(s.diagram)}\n"


def closure(s: StringLink) -> tuple[Diagram, tuple]:
    """The based link diagram obtained by joining each strand's endpoints."""
    return s.diagram, (0,) * s.n


def from_closure(d: Diagram, p: Sequence[int] | None) -> StringLink:
    """Cut a based diagram open at its base points."""
    p = normalize_base_points(d, p)
    return StringLink(Diagram([walk(d, p, i) for i in range(1, d.n + 1)], d.signs))


def mu_string(s: StringLink, seq: Sequence[int]) -> int:
    d, p = closure(s)
    return mu(d, p, seq)


def mu_string_table(s: StringLink, rmax: int) -> dict[tuple[int, ...], int]:
    d, p = closure(s)
    return mu_table(d, p, rmax)


def string_link_walk(
    s: StringLink, seed: int, steps: int, classes: Iterable = (MoveClass.WBAR,), cap: int = 40
) -> list[StringLink]:
    """Random interior moves on a string link.

    The walk runs on the closure; no move there crosses a base point, so
    every step is a move inside the square that fixes the endpoints.
    """
    classes = parse_classes(classes)
    if MoveClass.BASE in classes:
        raise ValueError("string-link endpoints are fixed; base shifts are not moves of a string link")
    d, p = closure(s)
    return [from_closure(dd, pp) for dd, pp, _ in random_walk(d, p, seed, steps, classes, cap=cap)]
