"""Verifiers for the identities and congruences satisfied by ``pod_{-2}(n)``.

Scans run on residues (``pod2_gf(N, modulus=m)``) so they reach orders in the
tens of thousands; identity checks that claim exact equality run on integers.
Each verifier returns :class:`~podq.report.CheckReport` values whose
counterexample, when present, is the smallest failing index.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from podq import enumeration as en
from podq import pseries as ps
from podq import qproducts as qp
from podq.pseries import Series
from podq.report import CheckReport, ConsistencyError

FAMILY_TAGS = ("thm3.1", "thm3.2a", "thm3.2b", "thm4.1a", "thm4.1b")

# tag -> (modulus, prime power base, multiplier, offset, divisor, smallest alpha, step exponent)
# B = (multiplier * base^(k * alpha) + offset) / divisor, A = base^(k * alpha + 1)
_FAMILIES = {
    "thm3.1": (3, 3, 23, -7, 8, 0, 2),
    "thm3.2a": (3, 3, 7, 1, 4, 1, 2),
    "thm3.2b": (3, 3, 11, 1, 4, 1, 2),
    "thm4.1a": (5, 5, 11, 1, 4, 1, 1),
    "thm4.1b": (5, 5, 19, 1, 4, 1, 1),
}

DEFAULT_ALPHAS = {
    "thm3.1": (0, 1, 2),
    "thm3.2a": (1, 2),
    "thm3.2b": (1, 2),
    "thm4.1a": (1, 2),
    "thm4.1b": (1, 2),
}


@dataclass(frozen=True)
class FamilySpec:
    """One member ``pod_{-2}(A n + B) = 0 (mod m)`` of a congruence family."""

    tag: str
    alpha: int

    def __post_init__(self):
        if self.tag not in _FAMILIES:
            raise ValueError(f"unknown family {self.tag!r}; expected one of {', '.join(FAMILY_TAGS)}")
        smallest = _FAMILIES[self.tag][5]
        if self.alpha < smallest:
            raise ValueError(f"{self.tag} needs alpha >= {smallest}, got {self.alpha}")
        mult, off, div = _FAMILIES[self.tag][2:5]
        base, k = _FAMILIES[self.tag][1], _FAMILIES[self.tag][6]
        num = mult * base ** (k * self.alpha) + off
        if num % div:
            raise ValueError(f"{self.tag}, alpha={self.alpha}: offset {num}/{div} is not an integer")

    @property
    def modulus(self) -> int:
        return _FAMILIES[self.tag][0]

    @property
    def A(self) -> int:
        _, base, _, _, _, _, k = _FAMILIES[self.tag]
        return base ** (k * self.alpha + 1)

    @property
    def B(self) -> int:
        _, base, mult, off, div, _, k = _FAMILIES[self.tag]
        num = mult * base ** (k * self.alpha) + off
        assert num % div == 0
        return num // div

    @property
    def name(self) -> str:
        return f"{self.tag}[alpha={self.alpha}]:{self.A}n+{self.B}"


def _report(name: str, order: int, counter, started: float) -> CheckReport:
    return CheckReport(name, order, counter is None, counter, 1000 * (time.perf_counter() - started))


def _scan_zero(name: str, coeffs: Series, A: int, B: int, order: int, started: float) -> CheckReport:
    # smallest index A*n + B <= order whose coefficient is nonzero
    counter = None
    for i in range(B, order + 1, A):
        if coeffs[i]:
            counter = (i, 0, coeffs[i])
            break
    return _report(name, order, counter, started)


# --- Ramanujan-type identities -----------------------------------------------

def _thm21_a(order: int) -> CheckReport:
    started = time.perf_counter()
    gf = qp.pod2_gf(2 * order + 1)
    lhs = ps.dissect(gf, 2, 1)
    rhs = 2 * qp.product("(q^8;q^8)^2 * (q;q)^-3 * (q^4;q^4)^-1", order)
    return qp.compare("thm2.1a", lhs, rhs, order, started)


def _thm21_b(order: int) -> CheckReport:
    started = time.perf_counter()
    gf = qp.pod2_gf(3 * order + 2)
    lhs = ps.dissect(gf, 3, 2)
    rhs = 3 * qp.product("(q^2;q^2)^4 * (q^6;q^6)^6 * (q;q)^-6 * (q^4;q^4)^-6", order)
    return qp.compare("thm2.1b", lhs, rhs, order, started)


def theorem_2_1_check(order: int) -> tuple[CheckReport, CheckReport]:
    """Exact check of both generating functions for ``pod_{-2}(2n+1)`` and ``pod_{-2}(3n+2)``."""
    if order < 20:
        raise ValueError("the 2n+1 / 3n+2 generating-function check needs order >= 20")
    return _thm21_a(order), _thm21_b(order)


def _cor22_a(order: int) -> CheckReport:
    started = time.perf_counter()
    return _scan_zero("cor2.2a", qp.pod2_gf(order, 2), 2, 1, order, started)


def _cor22_b(order: int) -> CheckReport:
    started = time.perf_counter()
    return _scan_zero("cor2.2b", qp.pod2_gf(order, 3), 3, 2, order, started)


def corollary_2_2_scan(order: int) -> tuple[CheckReport, CheckReport]:
    """``pod_{-2}(2n+1)`` even and ``pod_{-2}(3n+2)`` divisible by 3, for indices up to ``order``."""
    return _cor22_a(order), _cor22_b(order)


def family_scan(spec: FamilySpec, order: int) -> CheckReport:
    """``pod_{-2}(A n + B) = 0 (mod m)`` for every index ``A n + B <= order``."""
    if spec.B > order:
        raise ValueError(f"{spec.name}: first index {spec.B} exceeds order {order}")
    started = time.perf_counter()
    return _scan_zero(spec.name, qp.pod2_gf(order, spec.modulus), spec.A, spec.B, order, started)


def default_family_specs(tag: str, order: int, alpha_max: int | None = None) -> list[FamilySpec]:
    """Family members to scan: the default alphas (or ``alpha_min .. alpha_max``) with ``B <= order``."""
    if tag not in _FAMILIES:
        raise ValueError(f"unknown family {tag!r}")
    if alpha_max is None:
        alphas = DEFAULT_ALPHAS[tag]
    else:
        alphas = range(_FAMILIES[tag][5], alpha_max + 1)
    specs = [FamilySpec(tag, a) for a in alphas]
    return [s for s in specs if s.B <= order]


# --- sums of two triangular numbers ------------------------------------------

def divisor_difference(n: int, j: int, k: int) -> int:
    """``d_{j,k}(n)``: the number of positive divisors ``d`` of ``n`` with ``d = j (mod k)``."""
    if n < 1:
        raise ValueError("divisor counts need n >= 1")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += d % k == j % k
            e = n // d
            if e != d:
                count += e % k == j % k
        d += 1
    return count


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out



def two_squares_criterion(n: int) -> bool:
    """True iff some prime ``p = 3 (mod 4)`` divides ``n`` to an odd power."""
    if n < 1:
        raise ValueError("criterion needs n >= 1")
    result = any(p % 4 == 3 and e % 2 for p, e in _factorize(n).items())
    if result != (divisor_difference(n, 1, 4) == divisor_difference(n, 3, 4)):
        raise ConsistencyError(f"two-squares criterion and divisor counts disagree at {n}")
    return result


@lru_cache(maxsize=4)
def _psi_squared(order: int) -> Series:
    p = qp.psi(order)
    return p * p


def t2(n: int) -> int:
    """Representations of ``n`` as an ordered sum of two triangular numbers."""
    if n < 0:
        raise ValueError("t2 needs n >= 0")
    order = 256
    while order < n:
        order *= 2
    via_series = _psi_squared(order)[n]
    via_divisors = divisor_difference(4 * n + 1, 1, 4) - divisor_difference(4 * n + 1, 3, 4)
    if via_series != via_divisors:
        raise ConsistencyError(f"t2({n}): psi^2 gives {via_series}, divisors give {via_divisors}")
    return via_series


def t2_bridge_check(order: int) -> CheckReport:
    """``psi(q)^2`` coefficients against ``d_{1,4}(4n+1) - d_{3,4}(4n+1)`` for ``n <= order``."""
    started = time.perf_counter()
    sq = _psi_squared(order)
    counter = None
    for n in range(order + 1):
        d = divisor_difference(4 * n + 1, 1, 4) - divisor_difference(4 * n + 1, 3, 4)
        if sq[n] != d:
            counter = (n, d, sq[n])
            break
    return _report("t2_divisors", order, counter, started)


def thm31_t2_vanishing_check(limit: int) -> CheckReport:
    """For each index ``i = 3 n' + 1 <= limit`` of the mod-3 families with alpha >= 1,
    ``4 n' + 1`` is divisible by 3 but not 9, and ``t2(n') = 0``."""
    started = time.perf_counter()
    counter = None
    alpha = 1
    while counter is None:
        spec = FamilySpec("thm3.1", alpha)
        if spec.B > limit:
            break
        for i in range(spec.B, limit + 1, spec.A):
            if i % 3 != 1:
                counter = (i, 1, i % 3)
                break
            reduced = (i - 1) // 3
            s = 4 * reduced + 1
            ok = s % 3 == 0 and s % 9 != 0 and two_squares_criterion(s) and t2(reduced) == 0
            if not ok:
                counter = (i, 0, t2(reduced))
                break
        alpha += 1
    return _report("thm3.1_t2_vanishing", limit, counter, started)


def congruence_3n1_check(order: int) -> CheckReport:
    """``pod_{-2}(3n+1) = (-1)^(n+1) t2(n) (mod 3)`` for ``3n+1 <= order``."""
    started = time.perf_counter()
    lhs = ps.dissect(qp.pod2_gf(order, 3), 3, 1)
    rhs = -ps.negate_q(ps.reduce_mod(_psi_squared(lhs.order), 3))
    return qp.compare("cong3n1", lhs, rhs, order, started)


def _descent3(order: int) -> CheckReport:
    started = time.perf_counter()
    gf = qp.pod2_gf(order, 3)
    high = ps.dissect(gf, 27, 7)
    low = ps.dissect(gf, 3, 1).truncate(high.order)
    return qp.compare("descent27n7", high, low, order, started)


def _descent5(order: int) -> CheckReport:
    started = time.perf_counter()
    gf = qp.pod2_gf(order, 5)
    high = ps.dissect(gf, 25, 19)
    low = -ps.dissect(gf, 5, 4).truncate(high.order)
    return qp.compare("descent25n19", high, low, order, started)


def descent_relation_checks(order: int) -> tuple[CheckReport, CheckReport]:
    """``pod(27n+7) = pod(3n+1) (mod 3)`` and ``pod(25n+19) = -pod(5n+4) (mod 5)``."""
    return _descent3(order), _descent5(order)


# --- statistics ----------------------------------------------------------------

def _symmetric_difference(gf, t: int, r: int, s: int, name: str, order: int, started: float):
    # R(r, t, n) - R(s, t, n) must vanish identically
    weights = {k: 0 for k in range(t)}
    weights[r], weights[s] = 1, -1
    diff = ps.bivar_residue_combine(gf, t, weights)
    for n, c in enumerate(diff.coeffs):
        if c:
            return _report(name, order, (n, 0, c), started)
    return None


def _thm51_a(order: int) -> CheckReport:
    started = time.perf_counter()
    gf = en.bivar_gf_from_products("b", order)
    lhs = ps.bivar_residue_combine(gf, 2, {0: 1, 1: -1})
    rhs = ps.negate_q(qp.phi(order)) / ps.substitute_power(qp.psi(order), 2)
    return qp.compare("thm5.1a", lhs, rhs, order, started)


def _thm51_b(order: int) -> CheckReport:
    started = time.perf_counter()
    gf = en.bivar_gf_from_products("b", order)
    broken = _symmetric_difference(gf, 3, 1, 2, "thm5.1b", order, started)
    if broken is not None:
        return broken
    doubled = ps.bivar_residue_combine(gf, 3, {0: 2, 1: -1, 2: -1})
    odd = next((n for n, c in enumerate(doubled.coeffs) if c % 2), None)
    if odd is not None:
        return _report("thm5.1b", order, (odd, 0, doubled[odd]), started)
    lhs = Series(tuple(c // 2 for c in doubled.coeffs))
    psi_neg = ps.negate_q(qp.psi(order))
    rhs = psi_neg / ps.substitute_power(psi_neg, 3)
    return qp.compare("thm5.1b", lhs, rhs, order, started)


def _thm51_c(order: int) -> CheckReport:
    started = time.perf_counter()
    gf = en.bivar_gf_from_products("b", order)
    broken = _symmetric_difference(gf, 4, 1, 3, "thm5.1c", order, started)
    if broken is not None:
        return broken
    lhs = ps.bivar_residue_combine(gf, 4, {0: 1, 1: 0, 2: -1, 3: 0})
    rhs = ps.substitute_power(qp.phi(order), 2) / ps.substitute_power(qp.psi(order), 2)
    return qp.compare("thm5.1c", lhs, rhs, order, started)


def theorem_5_1_check(order: int) -> tuple[CheckReport, CheckReport, CheckReport]:
    """Residue differences of the birank ``b`` against their theta quotients."""
    return _thm51_a(order), _thm51_b(order), _thm51_c(order)


ENUMERATION_CAP = 36


def equidistribution_check(stat: str, max_weight: int) -> CheckReport:
    """The three classes of ``stat mod 3`` at every weight ``3n+2`` have size ``pod_{-2}(3n+2)/3``."""
    if stat not in ("b", "c"):
        raise ValueError(f"equidistribution is stated for b and c, not {stat!r}")
    if max_weight > ENUMERATION_CAP:
        raise ValueError(f"max weight {max_weight} exceeds enumeration cap {ENUMERATION_CAP}")
    started = time.perf_counter()
    table = en.stat_table(stat, max_weight)
    counter = None
    for w in range(2, max_weight + 1, 3):
        total = en.pod2_count(w)
        classes = en.residue_counts(table, 3, w)
        if total % 3:
            counter = (w, 0, total % 3)
            break
        bad = next((r for r in range(3) if classes[r] != total // 3), None)
        if bad is not None:
            counter = (w, total // 3, classes[bad])
            break
    return _report(f"equidist_{stat}", max_weight, counter, started)


def _rank_parity_enum(max_weight: int) -> CheckReport:
    started = time.perf_counter()
    table = en.stat_table("d", max_weight)
    counter = None
    for w in range(1, max_weight + 1, 2):
        classes = en.residue_counts(table, 2, w)
        if classes[0] != classes[1]:
            counter = (w, classes[1], classes[0])
            break
    return _report("rank_parity", max_weight, counter, started)


def _rank_parity_series(order: int) -> CheckReport:
    started = time.perf_counter()
    gf = en.bivar_gf_from_products("d", order)
    diff = ps.bivar_residue_combine(gf, 2, {0: 1, 1: -1})
    target = qp.product("(q^2;q^4) * (q^4;q^4)^-1", order)
    first = qp.compare("rank_series", diff, target, order, started)
    if not first.passed:
        return first
    even = ps.negate_q(ps.dissect(diff, 2, 0))
    return qp.compare("rank_series", even, qp.pod_gf(even.order), order, started)


def rank_parity_checks(order: int, max_weight: int = 31) -> tuple[CheckReport, CheckReport]:
    """Parity balance of rank ``d`` at odd weights (by enumeration) and its generating function."""
    return _rank_parity_enum(min(order, max_weight)), _rank_parity_series(order)


# --- suite -----------------------------------------------------------------------

def _identity(name: str) -> Callable[[int], CheckReport]:
    return lambda order: qp.verify_identity(name, order)


def _families(order: int) -> list[CheckReport]:
    return [family_scan(s, order) for tag in FAMILY_TAGS for s in default_family_specs(tag, order)]


# name -> check at a given order; run in this order
CHECKS: dict[str, Callable[[int], CheckReport | list[CheckReport]]] = {
    **{name: _identity(name) for name in (*qp.IDENTITIES, *qp.EXTRA_IDENTITIES)},
    "thm2.1a": _thm21_a,
    "thm2.1b": _thm21_b,
    "cor2.2a": _cor22_a,
    "cor2.2b": _cor22_b,
    "families": _families,
    "t2_divisors": t2_bridge_check,
    "thm3.1_t2_vanishing": thm31_t2_vanishing_check,
    "cong3n1": congruence_3n1_check,
    "descent27n7": _descent3,
    "descent25n19": _descent5,
    "thm5.1a": _thm51_a,
    "thm5.1b": _thm51_b,
    "thm5.1c": _thm51_c,
    "equidist_b": lambda order: equidistribution_check("b", min(order, 32)),
    "equidist_c": lambda order: equidistribution_check("c", min(order, 32)),
    "rank_parity": lambda order: _rank_parity_enum(min(order, 31)),
    "rank_series": _rank_parity_series,
}


def worker_count() -> int:
    raw = os.environ.get("PODQ_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    value = int(raw)
    if value < 1:
        raise ValueError("PODQ_THREADS must be a positive integer")
    return value


def run_checks(names: list[str], order: int, workers: int | None = None) -> list[CheckReport]:
    """Run named checks, possibly concurrently; reports come back in the order of ``names``."""
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    workers = workers or worker_count()

    def one(name: str) -> list[CheckReport]:
        result = CHECKS[name](order)
        return result if isinstance(result, list) else [result]

    if workers == 1:
        batches = [one(n) for n in names]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(one, names))
    return [r for batch in batches for r in batch]
