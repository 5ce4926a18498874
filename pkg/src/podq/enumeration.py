"""Brute-force combinatorics for bipartitions with odd parts distinct.

Everything here is computed by listing objects (or, for ``pod2_count``, by a
plain counting recurrence) and never touches the series engine, so it can serve
as an independent witness for the generating-function side.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from podq import pseries as ps
from podq.pseries import BivariateSeries
from podq.report import ConsistencyError

STATS = ("b", "c", "d")


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(self.parts)
        if any(p < 1 for p in parts):
            raise ValueError("parts must be positive")
        if any(x < y for x, y in zip(parts, parts[1:])):
            raise ValueError("parts must be non-increasing")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    @property
    def largest(self) -> int:
        # the empty partition has largest part 0
        return self.parts[0] if self.parts else 0

    def is_pod(self) -> bool:
        odd = [p for p in self.parts if p % 2]
        return len(odd) == len(set(odd))


@dataclass(frozen=True)
class Bipartition:
    first: Partition
    second: Partition

    def __post_init__(self):
        if not (self.first.is_pod() and self.second.is_pod()):
            raise ValueError("both components need distinct odd parts")

    @property
    def weight(self) -> int:
        return self.first.weight + self.second.weight

    def swap(self) -> Bipartition:
        return Bipartition(self.second, self.first)


def _pod_parts(n: int, cap: int) -> Iterator[tuple[int, ...]]:
    # parts <= cap in non-increasing order, largest first
    if n == 0:
        yield ()
        return
    for p in range(min(n, cap), 0, -1):
        # an odd part may not repeat, so everything after it is strictly smaller
        nxt = p - 1 if p % 2 else p
        for rest in _pod_parts(n - p, nxt):
            yield (p,) + rest


@lru_cache(maxsize=None)
def _pod_tuples(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(_pod_parts(n, n))


def enum_pod_partitions(n: int) -> list[Partition]:
    """Partitions of ``n`` with distinct odd parts, in decreasing lexicographic order."""
    if n < 0:
        raise ValueError("weight must be nonnegative")
    return [Partition(p) for p in _pod_tuples(n)]


def enum_pod_bipartitions(n: int) -> list[Bipartition]:
    """All ordered pairs of pod partitions of total weight ``n``.

    Ordered by decreasing weight of the first component, then lexicographically
    (decreasing) on the first component and then the second.
    """
    if n < 0:
        raise ValueError("weight must be nonnegative")
    out = []
    for a in range(n, -1, -1):
        for lam in enum_pod_partitions(a):
            for mu in enum_pod_partitions(n - a):
                out.append(Bipartition(lam, mu))
    return out


@lru_cache(maxsize=8)
def _pod_counts(limit: int) -> tuple[int, ...]:
    # (1 + q^odd) / (1 - q^even) by direct coefficient updates
    c = [1] + [0] * limit
    for k in range(1, limit + 1, 2):
        for n in range(limit, k - 1, -1):
            c[n] += c[n - k]
    for k in range(2, limit + 1, 2):
        for n in range(k, limit + 1):
            c[n] += c[n - k]
    return tuple(c)


def pod_count(n: int) -> int:
    if n < 0:
        raise ValueError("weight must be nonnegative")
    return _pod_counts(max(n, 64))[n]


def pod2_count(n: int) -> int:
    """Number of bipartitions of ``n`` with odd parts distinct (counting recurrence)."""
    if n < 0:
        raise ValueError("weight must be nonnegative")
    c = _pod_counts(max(n, 64))
    return sum(c[a] * c[n - a] for a in range(n + 1))


def birank_b(pi: Bipartition) -> int:
    return pi.first.num_parts - pi.second.num_parts


def birank_c(pi: Bipartition) -> int:
    return pi.first.largest - pi.second.largest


def rank_d(pi: Bipartition) -> int:
    return pi.first.num_parts


STATISTICS = {"b": birank_b, "c": birank_c, "d": rank_d}


@dataclass
class StatTable:
    """Counts of bipartitions by statistic value ``m`` and weight ``n``."""

    stat: str
    max_weight: int
    counts: dict[tuple[int, int], int] = field(default_factory=dict)

    def row(self, n: int) -> dict[int, int]:
        return {m: c for (m, k), c in sorted(self.counts.items()) if k == n}

    def total(self, n: int) -> int:
        return sum(c for (_, k), c in self.counts.items() if k == n)

    def triples(self) -> list[tuple[int, int, int]]:
        return [(m, n, c) for (m, n), c in sorted(self.counts.items(), key=lambda kv: (kv[0][1], kv[0][0]))]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stat", "m", "n", "count"])
        for m, n, c in self.triples():
            w.writerow([self.stat, m, n, c])
        return buf.getvalue()

    def records(self) -> list[dict]:
        return [{"stat": self.stat, "m": m, "n": n, "count": c} for m, n, c in self.triples()]

    def to_json(self) -> str:
        return json.dumps({"stat": self.stat, "max_weight": self.max_weight,
                           "rows": [[m, n, c] for m, n, c in self.triples()]})

    @classmethod
    def from_json(cls, text: str) -> StatTable:
        data = json.loads(text)
        counts = {(m, n): c for m, n, c in data["rows"]}
        return cls(data["stat"], data["max_weight"], counts)


def _component_key(stat: str, parts: tuple[int, ...]) -> int:
    if stat == "c":
        return parts[0] if parts else 0
    return len(parts)


def _row_counts(stat: str, n: int) -> Counter:
    row: Counter = Counter()
    for a in range(n + 1):
        firsts = [_component_key(stat, p) for p in _pod_tuples(a)]
        seconds = [_component_key(stat, p) for p in _pod_tuples(n - a)]
        for x in firsts:
            for y in seconds:
                row[x if stat == "d" else x - y] += 1
    return row


def stat_table(stat: str, max_weight: int) -> StatTable:
    """Tabulate a statistic over every bipartition of weight ``<= max_weight``."""
    if stat not in STATISTICS:
        raise ValueError(f"unknown statistic {stat!r}; expected one of b, c, d")
    counts = {}
    for n in range(max_weight + 1):
        for m, c in _row_counts(stat, n).items():
            counts[(m, n)] = c
    return StatTable(stat, max_weight, counts)


def residue_counts(table: StatTable, t: int, n: int) -> dict[int, int]:
    """``R(r, t, n)`` for ``r = 0 .. t-1``."""
    if t < 1:
        raise ValueError("residue modulus must be positive")
    if n > table.max_weight:
        raise ValueError(f"weight {n} exceeds table range {table.max_weight}")
    out = dict.fromkeys(range(t), 0)
    for m, c in table.row(n).items():
        out[m % t] += c
    return out


# --- bivariate generating functions ------------------------------------------

# factors (sign, z-exponent, q-offset, q-step, exponent) for (sign z^j q^r; q^s)^e
GF_FACTORS = {
    "b": [(-1, 1, 1, 2, 1), (-1, -1, 1, 2, 1), (1, 1, 2, 2, -1), (1, -1, 2, 2, -1)],
    "c": [(-1, 2, 3, 2, 1), (1, 2, 2, 2, -1), (-1, -2, 3, 2, 1), (1, -2, 2, 2, -1)],
    "d": [(-1, 1, 1, 2, 1), (1, 1, 2, 2, -1), (-1, 0, 1, 2, 1), (1, 0, 2, 2, -1)],
}


@lru_cache(maxsize=16)
def bivar_gf_from_products(stat: str, order: int) -> BivariateSeries:
    """Product formula for ``sum R(m, n) z^m q^n`` of the given statistic."""
    if stat not in GF_FACTORS:
        raise ValueError(f"unknown statistic {stat!r}; expected one of b, c, d")
    gf = ps.bivar_expand(GF_FACTORS[stat], order)
    if stat == "c":
        # (1 + q/z)(1 + q z): only the empty component has largest part 0
        prefactor = BivariateSeries.from_terms({(0, 0): 1, (1, 1): 1, (-1, 1): 1, (0, 2): 1}, order)
        gf = ps.bivar_mul(gf, prefactor)
    return gf



def _largest_part_sums(order: int) -> tuple[BivariateSeries, BivariateSeries]:
    # A: sum_m q^(2m) z^(2m) (-q;q^2)_m / (q^2;q^2)_m ; B: the same with q^(2m+1) z^(2m+1)
    terms_a: dict[tuple[int, int], int] = {}
    terms_b: dict[tuple[int, int], int] = {}
    m = 0
    while 2 * m <= order:
        binomials = [(1, 2 * k + 1, 1) for k in range(m)] + [(-1, 2 * k, -1) for k in range(1, m + 1)]
        body = ps.expand_binomials(binomials, order)
        for n, c in body.nonzero():
            if n + 2 * m <= order:
                terms_a[(2 * m, n + 2 * m)] = terms_a.get((2 * m, n + 2 * m), 0) + c
            if n + 2 * m + 1 <= order:
                key = (2 * m + 1, n + 2 * m + 1)
                terms_b[key] = terms_b.get(key, 0) + c
        m += 1
    return BivariateSeries.from_terms(terms_a, order), BivariateSeries.from_terms(terms_b, order)


def largest_part_parity_gfs(order: int) -> tuple[BivariateSeries, BivariateSeries]:
    """``A(z, q)`` and ``B(z, q)``: pod partitions by largest part, even resp. odd.

    Built both as sums over the largest part and as closed products; the two
    must agree or :class:`ConsistencyError` is raised.
    """
    closed_a = ps.bivar_expand([(-1, 2, 3, 2, 1), (1, 2, 2, 2, -1)], order)
    qz = BivariateSeries.from_terms({(1, 1): 1}, order)
    closed_b = ps.bivar_mul(qz, closed_a)
    sum_a, sum_b = _largest_part_sums(order)
    if sum_a != closed_a:
        raise ConsistencyError("A(z, q): sum form and product form disagree")
    if sum_b != closed_b:
        raise ConsistencyError("B(z, q): sum form and product form disagree")
    return closed_a, closed_b
