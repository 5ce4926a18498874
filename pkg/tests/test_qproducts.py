import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from podq import pseries as ps
from podq import qproducts as qp
from podq.qproducts import Factor, ProductSpec, ThetaArg

from oracles import brute_pod, naive_product, triangular_pairs

# A(q) coefficients 0..8 from naive polynomial products of the defining factors
A_FROZEN = (1, 1, 1, 0, 0, 1, 0, 1, 0)


# --- parser ------------------------------------------------------------------

def test_parse_product_whitespace_and_optional_exponent():
    spec = qp.parse_product(" (-q^1 ; q^2)^2  *  (q^2;q^2)^-2 ")
    assert spec.factors == (Factor(-1, 1, 2, 2), Factor(1, 2, 2, -2))
    assert qp.parse_product("(-q;q^2)^2*(q^2;q^2)^-2") == spec
    assert qp.parse_product("(q;q)").factors == (Factor(1, 1, 1, 1),)


def test_parse_round_trips_through_str():
    spec = qp.parse_product(qp.A_PRODUCT)
    assert qp.parse_product(str(spec)) == spec


@pytest.mark.parametrize("bad", ["(q;q", "(z;q)", "(q;q)^x", "(q^0;q)", "q;q"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(ValueError):
        qp.parse_product(bad)


def test_spec_multiplication_concatenates():
    a = qp.parse_product("(q;q)")
    b = qp.parse_product("(-q;q^2)^3")
    assert (a * b).factors == a.factors + b.factors


# --- Pochhammer / products ------------------------------------------------------

def test_euler_function_pentagonal():
    # (q;q)_inf = 1 - q - q^2 + q^5 + q^7 - q^12 - q^15 + ...
    s = qp.pochhammer(1, 1, 1, 15)
    assert s.nonzero() == [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]


def test_pochhammer_negative_sign_counts_distinct_odd_parts():
    # (-q;q^2)_inf counts partitions into distinct odd parts
    s = qp.pochhammer(-1, 1, 2, 12)
    assert list(s.coeffs) == [1, 1, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 3]


def test_pochhammer_rejects_bad_offsets():
    with pytest.raises(ValueError):
        qp.pochhammer(1, 0, 1, 5)


def test_pod2_product_first_terms():
    assert qp.pod2_gf(7).coeffs == (1, 2, 3, 6, 11, 18, 28, 44)


def test_pod2_product_matches_brute_force():
    N = 16
    pod = [len(brute_pod(n)) for n in range(N + 1)]
    pod2 = [sum(pod[k] * pod[n - k] for k in range(n + 1)) for n in range(N + 1)]
    assert list(qp.pod_gf(N).coeffs) == pod
    assert list(qp.pod2_gf(N).coeffs) == pod2


def test_A_series_frozen():
    assert qp.A_series(8).coeffs == A_FROZEN


def test_A_series_naive():
    N = 40
    binomials = ([(-1, e, 1) for e in range(2, N + 1, 2)]
                 + [(-1, e, 2) for e in range(3, N + 1, 3)]
                 + [(-1, e, -1) for e in range(1, N + 1)]
                 + [(-1, e, -1) for e in range(6, N + 1, 6)])
    assert list(qp.A_series(N).coeffs) == naive_product(binomials, N)


def test_product_modular_matches_exact():
    exact = qp.product(qp.POD2_PRODUCT, 200)
    for m in (2, 3, 5, 6):
        assert qp.product(qp.POD2_PRODUCT, 200, m) == ps.reduce_mod(exact, m)


@st.composite
def factors(draw):
    return Factor(draw(st.sampled_from([1, -1])), draw(st.integers(1, 4)),
                  draw(st.integers(1, 4)), draw(st.integers(-3, 3)))


@settings(max_examples=60, deadline=None)
@given(st.lists(factors(), max_size=3), st.lists(factors(), max_size=3), st.integers(0, 40))
def test_expand_product_is_multiplicative(fa, fb, N):
    a, b = ProductSpec(tuple(fa)), ProductSpec(tuple(fb))
    assert qp.expand_product(a * b, N) == qp.expand_product(a, N) * qp.expand_product(b, N)


@settings(max_examples=40, deadline=None)
@given(st.lists(factors(), min_size=1, max_size=3), st.integers(0, 30))
def test_expand_product_matches_naive(fs, N):
    binomials = [(-f.sign, e, f.exponent) for f in fs for e in range(f.offset, N + 1, f.step)
                 if f.exponent != 0]
    assert list(qp.expand_product(ProductSpec(tuple(fs)), N).coeffs) == naive_product(binomials, N)


# --- theta functions -------------------------------------------------------------

def test_psi_sum_form():
    assert qp.psi(10).nonzero() == [(0, 1), (1, 1), (3, 1), (6, 1), (10, 1)]


def test_phi_sum_form():
    assert qp.phi(9).nonzero() == [(0, 1), (1, 2), (4, 2), (9, 2)]


@pytest.mark.parametrize("order", [0, 1, 37, 500])
def test_psi_phi_sum_equals_product(order):
    assert qp.psi(order) == qp.product(qp.PSI_PRODUCT, order)
    assert qp.phi(order) == qp.product(qp.PHI_PRODUCT, order)


def test_theta_f_specialisations():
    q, q3 = ThetaArg(1, 1), ThetaArg(1, 3)
    assert qp.theta_f(q, q3, 100) == qp.psi(100)
    assert qp.theta_f(q, q, 100) == qp.phi(100)
    # f(-q, -q^2) = (q;q)_inf
    assert qp.theta_f(ThetaArg(-1, 1), ThetaArg(-1, 2), 100) == qp.pochhammer(1, 1, 1, 100)


def test_psi_squared_counts_triangular_pairs():
    sq = qp.psi(200) ** 2
    assert list(sq.coeffs) == [triangular_pairs(n) for n in range(201)]


def test_theta_arg_validation():
    with pytest.raises(ValueError):
        ThetaArg(2, 1)
    with pytest.raises(ValueError):
        ThetaArg(1, 0)


JTP_CASES = [
    (ThetaArg(sa, ea), ThetaArg(sb, eb))
    for (sa, sb), (ea, eb) in itertools.product(
        [(1, 1), (1, -1), (-1, 1), (-1, -1)], [(1, 1), (1, 3), (2, 5), (3, 6)])
]


@pytest.mark.parametrize("a,b", JTP_CASES, ids=lambda t: f"{'+-'[t.sign < 0]}q{t.exponent}")
def test_jacobi_triple_product(a, b):
    assert len(JTP_CASES) == 16
    assert qp.theta_f(a, b, 300) == qp.triple_product(a, b, 300)
    assert qp.jacobi_triple_product_check(a, b, 300)


# --- identities ------------------------------------------------------------------

ALL_IDENTITIES = [*qp.IDENTITIES, *qp.EXTRA_IDENTITIES]


@pytest.mark.parametrize("name", ALL_IDENTITIES)
def test_identity_holds_at_200(name):
    report = qp.verify_identity(name, 200)
    assert report.passed, report.counterexample
    assert report.order == 200


def test_dissection_lemma_checks_order_and_guard():
    reports = qp.dissection_lemma_checks(60, include_extra=True)
    assert [r.check for r in reports] == ALL_IDENTITIES
    assert all(r.passed for r in reports)
    with pytest.raises(ValueError):
        qp.dissection_lemma_checks(29)


def test_psi_cubed_is_only_a_congruence():
    # psi(q^3) = psi(q)^3 fails over Z at n = 1 (0 versus 3)
    report = qp.verify_identity("lemma3.1b", 50, modulus=None)
    assert not report.passed
    assert report.counterexample == (1, 3, 0)
    assert qp.verify_identity("psi5_mod5", 50, modulus=None).counterexample[0] == 1


def test_unknown_identity():
    with pytest.raises(KeyError):
        qp.verify_identity("lemma9.9", 50)


@pytest.mark.parametrize("index", [0, 7, 123, 199])
def test_perturbation_reports_first_index(index):
    lhs, rhs = qp.identity_sides("lemma2.1b", 200)
    bumped = lhs + ps.monomial(index, 200)
    report = qp.compare("perturbed", bumped, rhs, 200)
    assert not report.passed
    n, expected, actual = report.counterexample
    assert n == index
    assert (expected, actual) == (rhs[n], lhs[n] + 1)


def test_lambert_series_small():
    # sum q^1/(1-q^2) + ... : the r=1 unweighted series has coefficients at 1,3,5,6,...
    s = qp.lambert_series(1, 12, weighted=False)
    expected = {}
    for n in range(3):
        b = 5 * n + 1
        for e in range(b, 13, 2 * b):
            expected[e] = expected.get(e, 0) + 1
    assert dict(s.nonzero()) == expected
