"""Integer power series in non-commuting variables X_1..X_n, truncated at a
total degree ``d``.

Elements are sparse: a dict from index tuples (monomials) to nonzero ints.
Truncation is a ring quotient, so every coefficient of degree <= d of a
product is exact.
"""

from __future__ import annotations

from typing import Iterable, Mapping


class SeriesError(ValueError):
    pass


class TruncatedSeries:
    __slots__ = ("n", "d", "_c", "_hash")

    def __init__(self, n: int, d: int, coeffs: Mapping[Iterable[int], int] | None = None):
        if n < 1 or d < 0:
            raise SeriesError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
        c = {}
        for key, v in (coeffs or {}).items():
            key = tuple(key)
            if any(not 1 <= k <= n for k in key):
                raise SeriesError(f"monomial {key} uses a variable outside 1..{n}")
            if len(key) > d or not v:
                continue
            c[key] = c.get(key, 0) + int(v)
        self.n, self.d = n, d
        self._c = {k: v for k, v in c.items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, n, d, c):
        s = cls.__new__(cls)
        s.n, s.d, s._c, s._hash = n, d, c, None
        return s

    # -- constructors --------------------------------------------------------

    @classmethod
    def one(cls, n, d):
        return cls._raw(n, d, {(): 1})

    @classmethod
    def zero(cls, n, d):
        return cls._raw(n, d, {})

    @classmethod
    def x(cls, i, n, d):
        """The bare variable X_i."""
        _check_index(i, n)
        return cls._raw(n, d, {(i,): 1} if d >= 1 else {})

    @classmethod
    def var(cls, i, n, d):
        """``1 + X_i``, the image of the i-th free generator."""
        _check_index(i, n)
        c = {(): 1}
        if d >= 1:
            c[(i,)] = 1
        return cls._raw(n, d, c)

    # -- access ----------------------------------------------------------------

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    @property
    def constant(self) -> int:
        return self._c.get((), 0)

    def coeff(self, monomial: Iterable[int]) -> int:
        m = tuple(monomial)
        if len(m) > self.d:
            raise SeriesError(f"monomial of degree {len(m)} exceeds the cutoff d={self.d}")
        return self._c.get(m, 0)

    def terms(self):
        """``(monomial, coefficient)`` pairs by degree, then lexicographically."""
        return sorted(self._c.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def min_degree(self) -> int | None:
        return min((len(k) for k in self._c), default=None)

    def truncate(self, d: int) -> TruncatedSeries:
        if d > self.d:
            raise SeriesError("cannot raise the cutoff of a truncated series")
        return TruncatedSeries._raw(self.n, d, {k: v for k, v in self._c.items() if len(k) <= d})

    # -- ring operations ---------------------------------------------------------

    def _same(self, other):
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, int):
                return TruncatedSeries._raw(self.n, self.d, {(): other} if other else {})
            return NotImplemented
        if (other.n, other.d) != (self.n, self.d):
            raise SeriesError(f"mismatched rings: (n={self.n}, d={self.d}) vs (n={other.n}, d={other.d})")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            s = c.get(k, 0) + v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return TruncatedSeries._raw(self.n, self.d, c)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.n, self.d, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return TruncatedSeries.zero(self.n, self.d)
            return TruncatedSeries._raw(self.n, self.d, {k: v * other for k, v in self._c.items()})
        other = self._same(other)
        if other is NotImplemented:
            return other
        d = self.d
        by_deg: dict[int, list] = {}
        for k, v in other._c.items():
            by_deg.setdefault(len(k), []).append((k, v))
        degs = sorted(by_deg)
        out: dict = {}
        get = out.get
        for ka, va in self._c.items():
            room = d - len(ka)
            for deg in degs:
                if deg > room:
                    break
                for kb, vb in by_deg[deg]:
                    key = ka + kb
                    out[key] = get(key, 0) + va * vb
        return TruncatedSeries._raw(self.n, d, {k: v for k, v in out.items() if v})

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = TruncatedSeries.one(self.n, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> TruncatedSeries:
        """Two-sided inverse of a series with constant term +1 or -1."""
        c0 = self.constant
        if c0 not in (1, -1):
            raise SeriesError(f"constant term {c0} is not a unit")
        one = TruncatedSeries.one(self.n, self.d)
        y = one - self * c0  # no constant term
        total, power = one, one
        for _ in range(self.d):
            power = power * y
            total = total + power
        return total * c0

    def subst_zero(self, k: int) -> TruncatedSeries:
        """Set X_k = 0: drop every monomial containing index k."""
        _check_index(k, self.n)
        return TruncatedSeries._raw(self.n, self.d, {m: v for m, v in self._c.items() if k not in m})

    # -- comparison and display ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            return self._c == ({(): other} if other else {})
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.n, self.d, self._c) == (other.n, other.d, other._c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.d, frozenset(self._c.items())))
        return self._hash

    def __repr__(self):
        return f"TruncatedSeries(n={self.n}, d={self.d}, {self})"

    def __str__(self):
        return render(self)


def _check_index(i, n):
    if not 1 <= i <= n:
        raise SeriesError(f"variable index {i} outside 1..{n}")


def render(s: TruncatedSeries) -> str:
    """Terms sorted by (degree, indices), e.g. ``1 - X1X2 + X2X1``."""
    out = []
    for mono, v in s.terms():
        word = "".join(f"X{k}" for k in mono)
        mag = abs(v)
        body = str(mag) if not word else (word if mag == 1 else f"{mag}{word}")
        if not out:
            out.append(body if v > 0 else f"-{body}")
        else:
            out.append(f"{'+' if v > 0 else '-'} {body}")
    return " ".join(out) if out else "0"


def one(n, d):
    return TruncatedSeries.one(n, d)


def var(i, n, d):
    return TruncatedSeries.var(i, n, d)


def x(i, n, d):
    return TruncatedSeries.x(i, n, d)


def magnus_word(word: Iterable[int], n: int, d: int) -> TruncatedSeries:
    """Magnus expansion of a free-group word given as signed generator indices.

    ``[-2, -1, 2, 1]`` is the word alpha_2^-1 alpha_1^-1 alpha_2 alpha_1.
    """
    gens = [var(i, n, d) for i in range(1, n + 1)]
    invs = [g.inverse() for g in gens]
    result = one(n, d)
    for letter in word:
        if not 1 <= abs(letter) <= n:
            raise SeriesError(f"generator index {letter} outside ±1..±{n}")
        result = result * (gens[letter - 1] if letter > 0 else invs[-letter - 1])
    return result
