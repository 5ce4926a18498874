from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from podq import enumeration as en
from podq import pseries as ps
from podq import qproducts as qp
from podq.enumeration import Bipartition, Partition, StatTable

from oracles import brute_bipartitions, brute_pod

P = lambda *parts: Partition(parts)
E = Partition()

# the eleven bipartitions of 4, listed by hand
FOUR_BY_HAND = {
    (P(4), E), (P(3, 1), E), (P(2, 2), E), (P(3), P(1)), (P(2, 1), P(1)), (P(2), P(2)),
    (P(1), P(2, 1)), (P(1), P(3)), (E, P(2, 2)), (E, P(3, 1)), (E, P(4)),
}


# --- types -------------------------------------------------------------------

def test_partition_properties():
    p = P(4, 3, 1)
    assert (p.weight, p.num_parts, p.largest) == (8, 3, 4)
    assert E.largest == 0 and E.weight == 0
    assert not P(3, 3).is_pod() and P(2, 2, 1).is_pod()


def test_partition_rejects_bad_parts():
    with pytest.raises(ValueError):
        P(1, 2)
    with pytest.raises(ValueError):
        P(2, 0)


def test_bipartition_validates_components():
    with pytest.raises(ValueError):
        Bipartition(P(1, 1), E)
    pi = Bipartition(P(3), P(1))
    assert pi.weight == 4
    assert pi.swap() == Bipartition(P(1), P(3))


# --- enumeration -------------------------------------------------------------

def test_enum_pod_partitions_examples():
    assert en.enum_pod_partitions(4) == [P(4), P(3, 1), P(2, 2)]
    assert en.enum_pod_partitions(0) == [E]
    assert en.enum_pod_partitions(5) == [P(5), P(4, 1), P(3, 2), P(2, 2, 1)]


def test_enum_pod_bipartitions_small():
    assert en.enum_pod_bipartitions(1) == [Bipartition(P(1), E), Bipartition(E, P(1))]
    assert en.enum_pod_bipartitions(2) == [Bipartition(P(2), E), Bipartition(P(1), P(1)),
                                           Bipartition(E, P(2))]


def test_bipartitions_of_four_by_hand():
    got = [(b.first, b.second) for b in en.enum_pod_bipartitions(4)]
    assert len(got) == 11
    assert set(got) == FOUR_BY_HAND


def test_enumeration_order_is_decreasing_lexicographic():
    parts = [p.parts for p in en.enum_pod_partitions(14)]
    assert parts == sorted(parts, reverse=True)


def test_negative_weight_rejected():
    with pytest.raises(ValueError):
        en.enum_pod_partitions(-1)
    with pytest.raises(ValueError):
        en.pod2_count(-1)


@pytest.mark.parametrize("n", range(0, 19))
def test_enumeration_matches_brute_force(n):
    assert [p.parts for p in en.enum_pod_partitions(n)] == brute_pod(n)
    got = Counter((b.first.parts, b.second.parts) for b in en.enum_pod_bipartitions(n))
    assert got == Counter(brute_bipartitions(n))


def test_pod2_count_examples():
    assert en.pod2_count(4) == 11
    assert en.pod2_count(0) == 1
    assert en.pod2_count(5) == 18
    assert [en.pod_count(n) for n in range(6)] == [1, 1, 1, 2, 3, 4]


def test_three_way_agreement_to_30():
    # enumeration, counting recurrence and series coefficient
    series = qp.pod2_gf(30)
    brute = [len(brute_pod(n)) for n in range(31)]
    for n in range(31):
        oracle = sum(brute[a] * brute[n - a] for a in range(n + 1))
        assert en.pod2_count(n) == oracle
        assert series[n] == oracle
        if n <= 22:
            assert len(en.enum_pod_bipartitions(n)) == oracle


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 14))
def test_every_enumerated_bipartition_is_valid_and_distinct(n):
    items = en.enum_pod_bipartitions(n)
    assert len(set(items)) == len(items)
    assert all(b.weight == n and b.first.is_pod() and b.second.is_pod() for b in items)


# --- statistics --------------------------------------------------------------

def test_statistic_values():
    pi = Bipartition(P(4, 3, 1), P(2))
    assert en.birank_b(pi) == 2
    assert en.birank_c(pi) == 2
    assert en.rank_d(pi) == 3
    assert en.birank_c(Bipartition(E, P(3))) == -3


def test_stat_table_rows():
    assert en.stat_table("b", 2).row(2) == {-1: 1, 0: 1, 1: 1}
    assert en.stat_table("c", 2).row(2) == {-2: 1, 0: 1, 2: 1}


def test_stat_table_rejects_unknown():
    with pytest.raises(ValueError):
        en.stat_table("x", 3)


@pytest.mark.parametrize("stat", en.STATS)
def test_stat_table_matches_brute_statistic(stat):
    N = 12
    table = en.stat_table(stat, N)
    fn = en.STATISTICS[stat]
    for n in range(N + 1):
        counts = Counter(fn(Bipartition(Partition(a), Partition(b))) for a, b in brute_bipartitions(n))
        assert table.row(n) == dict(sorted(counts.items()))
        assert table.total(n) == en.pod2_count(n)


def test_residue_counts():
    table = en.stat_table("b", 6)
    assert en.residue_counts(table, 3, 2) == {0: 1, 1: 1, 2: 1}
    for n in range(7):
        assert en.residue_counts(table, 1, n) == {0: en.pod2_count(n)}
    with pytest.raises(ValueError):
        en.residue_counts(table, 3, 7)


@pytest.mark.parametrize("n", range(0, 20))
def test_b_statistic_is_symmetric(n):
    row = en.stat_table("b", n).row(n)
    assert all(row.get(-m) == c for m, c in row.items())


def test_stat_table_serialisation():
    t = en.stat_table("c", 5)
    assert StatTable.from_json(t.to_json()) == t
    lines = t.to_csv().splitlines()
    assert lines[0] == "stat,m,n,count"
    assert lines[1] == "c,0,0,1"
    assert len(lines) == 1 + len(t.counts)
    assert t.records()[0] == {"stat": "c", "m": 0, "n": 0, "count": 1}


# --- bivariate generating functions -------------------------------------------

@pytest.mark.parametrize("stat", en.STATS)
def test_bivariate_gf_matches_table(stat):
    N = 14
    gf = en.bivar_gf_from_products(stat, N)
    table = en.stat_table(stat, N)
    for n in range(N + 1):
        row = {m: gf.coeff(m, n) for m in range(-n, n + 1) if gf.coeff(m, n)}
        assert row == table.row(n)


@pytest.mark.parametrize("stat", en.STATS)
def test_bivariate_collapse_is_pod2(stat):
    assert en.bivar_gf_from_products(stat, 60).collapse() == qp.pod2_gf(60)


def test_bivariate_c_coefficient():
    assert en.bivar_gf_from_products("c", 4).coeff(2, 2) == 1


def test_bivariate_unknown_stat():
    with pytest.raises(ValueError):
        en.bivar_gf_from_products("x", 5)


def test_largest_part_parity():
    N = 30
    a, b = en.largest_part_parity_gfs(N)
    assert a.coeff(0, 0) == 1
    assert (a + b).collapse() == qp.pod_gf(N)
    for n in range(N + 1):
        by_largest = Counter(p[0] if p else 0 for p in brute_pod(n))
        for m, c in by_largest.items():
            assert (a if m % 2 == 0 else b).coeff(m, n) == c
