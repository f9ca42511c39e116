"""Longitudes, Milnor numbers, indeterminacies and mu-bar invariants of based
welded link diagrams.

The homomorphisms eta_q are never expanded into free-group words.  Each arc
is sent straight to the Magnus expansion of its eta_q image, computed in the
truncated series ring, where conjugation by a partial longitude becomes a
pair of running prefix products along the component.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping, Sequence

from .gauss import ArcId, ArcTable, Diagram, arc_table, normalize_base_points
from .series import TruncatedSeries, one, var

ArcWord = tuple  # of (ArcId, +1 | -1) letters, freely reduced


def reduce_word(letters: Iterable[tuple[ArcId, int]]) -> ArcWord:
    out: list = []
    for a, e in letters:
        if out and out[-1][0] == a and out[-1][1] == -e:
            out.pop()
        else:
            out.append((a, e))
    return tuple(out)


def format_word(word: ArcWord) -> str:
    return " ".join(str(a) if e > 0 else f"{a}^-1" for a, e in word)


def partial_longitude(t: ArcTable, i: int, j: int) -> ArcWord:
    if not 1 <= i <= t.n:
        raise ValueError(f"component {i} outside 1..{t.n}")
    if not 0 <= j <= t.m[i - 1]:
        raise ValueError(f"partial longitude index {j} outside 0..{t.m[i - 1]}")
    return reduce_word(t.under[i - 1][:j])


def preferred_longitude(t: ArcTable, i: int) -> ArcWord:
    """``a_i1^(-w_i) v_{i,m_i}``."""
    w = t.w[i - 1]
    head = [(ArcId(i, 1), -1 if w > 0 else 1)] * abs(w)
    return reduce_word(head + list(partial_longitude(t, i, t.m[i - 1])))


def longitude_words(d: Diagram, p: Sequence[int] | None = None) -> list[str]:
    t = arc_table(d, p)
    return [format_word(preferred_longitude(t, i)) for i in range(1, d.n + 1)]


@dataclass
class MagnusAssignment:
    """Magnus expansions of ``eta_q(a)`` for every arc ``a``, plus their inverses.

    With ``killed = k`` the generator alpha_k is sent to 1 throughout, which
    computes the Magnus expansion of rho_k o eta_q instead.
    """

    q: int
    d: int
    n: int
    table: dict
    inverse: dict = field(repr=False)
    killed: int | None = None


def eta_iterate(t: ArcTable, q: int, d: int, killed: int | None = None) -> MagnusAssignment:
    if q < 1 or d < 0:
        raise ValueError(f"need q >= 1 and d >= 0, got q={q}, d={d}")
    n = t.n
    gens = [one(n, d) if i == killed else var(i, n, d) for i in range(1, n + 1)]
    gen_invs = [g.inverse() for g in gens]
    table = {a: gens[a.component - 1] for a in t.arcs()}
    inv = {a: gen_invs[a.component - 1] for a in t.arcs()}
    for _ in range(q - 1):
        new, new_inv = {}, {}
        for i in range(1, n + 1):
            g, g_inv = gens[i - 1], gen_invs[i - 1]
            prefix = prefix_inv = one(n, d)
            new[ArcId(i, 1)], new_inv[ArcId(i, 1)] = g, g_inv
            for j, (u, e) in enumerate(t.under[i - 1], start=2):
                if e > 0:
                    prefix, prefix_inv = prefix * table[u], inv[u] * prefix_inv
                else:
                    prefix, prefix_inv = prefix * inv[u], table[u] * prefix_inv
                new[ArcId(i, j)] = prefix_inv * g * prefix
                new_inv[ArcId(i, j)] = prefix_inv * g_inv * prefix
        table, inv = new, new_inv
    return MagnusAssignment(q=q, d=d, n=n, table=table, inverse=inv, killed=killed)


def evaluate_word(m: MagnusAssignment, word: ArcWord) -> TruncatedSeries:
    result = one(m.n, m.d)
    for a, e in word:
        try:
            result = result * (m.table[a] if e > 0 else m.inverse[a])
        except KeyError:
            raise ValueError(f"arc {a} is not in the assignment") from None
    return result


def longitude_series(
    d: Diagram, p: Sequence[int] | None, q: int, cutoff: int, killed: int | None = None
) -> list[TruncatedSeries]:
    """``E(eta_q(l_i))`` truncated at degree ``cutoff``, for i = 1..n."""
    t = arc_table(d, p)
    m = eta_iterate(t, q, cutoff, killed=killed)
    return [evaluate_word(m, preferred_longitude(t, i)) for i in range(1, d.n + 1)]


def _check_sequence(seq: Sequence[int], n: int) -> tuple[int, ...]:
    seq = tuple(int(k) for k in seq)
    if len(seq) < 2:
        raise ValueError(f"Milnor numbers need a sequence of length >= 2, got {seq}")
    if any(not 1 <= k <= n for k in seq):
        raise ValueError(f"sequence {seq} uses an index outside 1..{n}")
    return seq


def mu(
    d: Diagram, p: Sequence[int] | None, seq: Sequence[int], q: int | None = None
) -> int:
    """Milnor number of ``j_1 ... j_s i``: the X_{j_1}...X_{j_s} coefficient of E(eta_q(l_i)).

    ``q`` defaults to ``len(seq)``, the smallest depth at which the
    coefficient has stabilised.
    """
    seq = _check_sequence(seq, d.n)
    s = len(seq) - 1
    q = len(seq) if q is None else q
    if q <= s:
        raise ValueError(f"depth q={q} must exceed {s} for sequence {seq}")
    series = longitude_series(d, p, q, s)[seq[-1] - 1]
    return series.coeff(seq[:-1])


def sequences(n: int, rmax: int, rmin: int = 2) -> list[tuple[int, ...]]:
    """All index sequences with ``rmin <= len <= rmax``, by length then lexicographically."""
    return [s for r in range(rmin, rmax + 1) for s in itertools.product(range(1, n + 1), repeat=r)]


def is_non_repeated(seq: Sequence[int]) -> bool:
    return len(set(seq)) == len(seq)


def mu_table(d: Diagram, p: Sequence[int] | None, rmax: int) -> dict[tuple[int, ...], int]:
    """Every Milnor number with ``2 <= len(I) <= rmax`` from one eta iteration."""
    if rmax < 2:
        raise ValueError(f"rmax must be >= 2, got {rmax}")
    longs = longitude_series(d, p, rmax, rmax - 1)
    return {seq: longs[seq[-1] - 1].coeff(seq[:-1]) for seq in sequences(d.n, rmax)}


def delta(table: Mapping[tuple[int, ...], int], seq: Sequence[int]) -> int:
    """Indeterminacy: gcd of mu over the proper delete-then-rotate subsequences."""
    seq = tuple(seq)
    r = len(seq)
    if r < 2:
        raise ValueError(f"indeterminacy needs a sequence of length >= 2, got {seq}")
    subs = set()
    for s in range(2, r):
        for keep in itertools.combinations(range(r), s):
            sub = tuple(seq[k] for k in keep)
            subs.update(sub[k:] + sub[:k] for k in range(s))
    try:
        values = [table[sub] for sub in subs]
    except KeyError as exc:
        raise ValueError(f"table has no entry for {exc.args[0]}") from None
    return reduce(math.gcd, values, 0)


@dataclass(frozen=True, eq=False)
class MuBar:
    """A mu-bar invariant: ``mu`` read modulo ``delta``.

    Two values are equal when they have the same sequence, the same
    indeterminacy and the same residue; ``mu`` itself depends on base points.
    """

    sequence: tuple
    mu: int
    delta: int
    residue: int

    @classmethod
    def of(cls, seq, mu_value, delta_value):
        residue = mu_value % delta_value if delta_value else mu_value
        return cls(tuple(seq), mu_value, delta_value, residue)

    def __eq__(self, other):
        if not isinstance(other, MuBar):
            return NotImplemented
        return (self.sequence, self.delta, self.residue) == (other.sequence, other.delta, other.residue)

    def __hash__(self):
        return hash((self.sequence, self.delta, self.residue))

    def record(self, n: int | None = None) -> dict:
        return {
            "sequence": format_sequence(self.sequence, n),
            "mu": self.mu,
            "delta": self.delta,
            "mu_bar": self.residue,
        }


def mu_bar_table(table: Mapping[tuple[int, ...], int]) -> dict[tuple[int, ...], MuBar]:
    """mu-bar for every sequence of ``table`` whose indeterminacy the table determines."""
    return {seq: MuBar.of(seq, v, delta(table, seq)) for seq, v in table.items()}


def mu_bar(d: Diagram, p: Sequence[int] | None, seq: Sequence[int]) -> MuBar:
    seq = _check_sequence(seq, d.n)
    table = mu_table(d, p, len(seq))
    return MuBar.of(seq, table[seq], delta(table, seq))


def mu_reduced(d: Diagram, p: Sequence[int] | None, seq: Sequence[int]) -> int:
    """The coefficient of ``seq[:-1]`` in E(eta_q(l_k)) with X_k set to 0, k = seq[-1].

    Only defined for non-repeated sequences, where it agrees with ``mu``.
    """
    seq = _check_sequence(seq, d.n)
    if not is_non_repeated(seq):
        raise ValueError(f"reduced Milnor numbers need a non-repeated sequence, got {seq}")
    k = seq[-1]
    series = longitude_series(d, p, len(seq), len(seq) - 1)[k - 1]
    return series.subst_zero(k).coeff(seq[:-1])


def format_sequence(seq: Sequence[int], n: int | None = None) -> str:
    n = max(seq) if n is None else n
    if n <= 9:
        return "".join(str(k) for k in seq)
    return ",".join(str(k) for k in seq)


def parse_sequence(text: str) -> tuple[int, ...]:
    text = text.strip()
    if "," in text:
        return tuple(int(k) for k in text.split(","))
    return tuple(int(ch) for ch in text)


def table_records(table: Mapping[tuple[int, ...], int], n: int, non_repeated=False) -> list[dict]:
    """JSON records ``{sequence, mu, delta, mu_bar}`` sorted by (length, sequence)."""
    bars = mu_bar_table(table)
    seqs = sorted(bars, key=lambda s: (len(s), s))
    return [bars[s].record(n) for s in seqs if not non_repeated or is_non_repeated(s)]


def sv_equivalent(
    d1: Diagram, p1: Sequence[int] | None, d2: Diagram, p2: Sequence[int] | None
) -> tuple[bool, tuple[int, ...] | None]:
    """Decide whether two based diagrams are related by self-crossing
    virtualizations and welded moves fixing the base points.

    They are exactly when all non-repeated Milnor numbers agree.  Returns the
    verdict and, if negative, the first distinguishing sequence.
    """
    if d1.n != d2.n:
        raise ValueError(f"component counts differ: {d1.n} vs {d2.n}")
    n = d1.n
    if n < 2:
        return True, None
    p1, p2 = normalize_base_points(d1, p1), normalize_base_points(d2, p2)
    t1, t2 = mu_table(d1, p1, n), mu_table(d2, p2, n)
    for seq in sequences(n, n):
        if is_non_repeated(seq) and t1[seq] != t2[seq]:
            return False, seq
    return True, None
