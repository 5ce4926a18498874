"""Named q-series: Pochhammer products, Ramanujan's theta functions, and the
dissection identities they satisfy.

Every constructor returns a :class:`~podq.pseries.Series` truncated at the
requested order.  Products are described by :class:`ProductSpec`, a list of
factors ``(sign * q^r; q^m)_inf^e``.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator, NamedTuple

from podq import pseries as ps
from podq.pseries import Series
from podq.report import CheckReport


class Factor(NamedTuple):
    sign: int
    offset: int
    step: int
    exponent: int = 1

    def __str__(self):
        base = "q" if self.offset == 1 else f"q^{self.offset}"
        step = "q" if self.step == 1 else f"q^{self.step}"
        lead = "-" if self.sign < 0 else ""
        return f"({lead}{base};{step})^{self.exponent}"


@dataclass(frozen=True)
class ProductSpec:
    factors: tuple[Factor, ...] = ()

    def __post_init__(self):
        fs = tuple(Factor(*f) for f in self.factors)
        for f in fs:
            if f.sign not in (1, -1):
                raise ValueError(f"factor sign must be +1 or -1: {f}")
            if f.offset < 1 or f.step < 1:
                raise ValueError(f"factor needs offset >= 1 and step >= 1: {f}")
        object.__setattr__(self, "factors", fs)

    def __mul__(self, other: ProductSpec) -> ProductSpec:
        return ProductSpec(self.factors + other.factors)

    def __str__(self):
        return " * ".join(str(f) for f in self.factors) or "1"

    @classmethod
    def parse(cls, text: str) -> ProductSpec:
        return parse_product(text)


_FACTOR_RE = re.compile(
    r"\((?P<sign>[+-]?)q(?:\^(?P<off>\d+))?;q(?:\^(?P<step>\d+))?\)(?:\^(?P<exp>[+-]?\d+))?"
)


def parse_product(text: str) -> ProductSpec:
    """Parse ``(-q^1;q^2)^2 * (q^2;q^2)^-2``; whitespace is ignored, ``^1`` may be omitted."""
    compact = re.sub(r"\s+", "", text)
    if not compact or compact == "1":
        return ProductSpec()
    factors = []
    for chunk in compact.split("*"):
        m = _FACTOR_RE.fullmatch(chunk)
        if m is None:
            raise ValueError(f"cannot parse product factor {chunk!r}")
        sign = -1 if m["sign"] == "-" else 1
        off = int(m["off"] or 1)
        step = int(m["step"] or 1)
        exp = int(m["exp"] or 1)
        factors.append(Factor(sign, off, step, exp))
    return ProductSpec(tuple(factors))


def _binomials(sign: int, r: int, m: int, order: int, power: int = 1) -> Iterator[tuple[int, int, int]]:
    for e in range(r, order + 1, m):
        yield (-sign, e, power)


def pochhammer(sign: int, r: int, m: int, order: int, modulus: int | None = None) -> Series:
    """``(sign * q^r; q^m)_inf`` to ``order``."""
    if r < 1 or m < 1:
        raise ValueError("pochhammer needs r >= 1 and m >= 1")
    return ps.expand_binomials(_binomials(sign, r, m, order), order, modulus)


def expand_product(spec: ProductSpec, order: int, modulus: int | None = None) -> Series:
    """Expand a product of Pochhammer factors; negative exponents divide by the factor."""
    binomials = []
    for f in spec.factors:
        binomials.extend(_binomials(f.sign, f.offset, f.step, order, f.exponent))
    return ps.expand_binomials(binomials, order, modulus)


def product(text: str, order: int, modulus: int | None = None) -> Series:
    return expand_product(parse_product(text), order, modulus)


@dataclass(frozen=True)
class ThetaArg:
    """The monomial ``sign * q^exponent``."""

    sign: int
    exponent: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("theta argument sign must be +1 or -1")
        if self.exponent < 1:
            raise ValueError("theta argument exponent must be at least 1")


def theta_f(a: ThetaArg, b: ThetaArg, order: int, modulus: int | None = None) -> Series:
    """Ramanujan's ``f(a, b) = sum_{n in Z} a^(n(n-1)/2) b^(n(n+1)/2)``."""
    terms: dict[int, int] = {}

    def term(n: int) -> tuple[int, int]:
        ta, tb = n * (n - 1) // 2, n * (n + 1) // 2
        return a.exponent * ta + b.exponent * tb, a.sign ** (ta % 2) * b.sign ** (tb % 2)

    # both sequences of exponents increase strictly once n moves away from 0
    for direction in (range(0, order + 2), range(-1, -order - 3, -1)):
        for n in direction:
            e, s = term(n)
            if e > order:
                break
            terms[e] = terms.get(e, 0) + s
    return ps.from_terms(terms, order, modulus)


def psi(order: int, modulus: int | None = None) -> Series:
    """``psi(q) = sum_{n>=0} q^(n(n+1)/2)``."""
    terms = {}
    n = 0
    while n * (n + 1) // 2 <= order:
        terms[n * (n + 1) // 2] = 1
        n += 1
    return ps.from_terms(terms, order, modulus)


def phi(order: int, modulus: int | None = None) -> Series:
    """``phi(q) = sum_{n in Z} q^(n^2)``."""
    terms = {0: 1}
    n = 1
    while n * n <= order:
        terms[n * n] = 2
        n += 1
    return ps.from_terms(terms, order, modulus)


PSI_PRODUCT = "(q^2;q^2)^2 * (q;q)^-1"
PHI_PRODUCT = "(-q;q^2)^2 * (q^2;q^2)"
POD_PRODUCT = "(-q;q^2) * (q^2;q^2)^-1"
POD2_PRODUCT = "(-q;q^2)^2 * (q^2;q^2)^-2"
A_PRODUCT = "(q^2;q^2) * (q^3;q^3)^2 * (q;q)^-1 * (q^6;q^6)^-1"


def A_series(order: int, modulus: int | None = None) -> Series:
    """``A(q) = (q^2;q^2)(q^3;q^3)^2 / ((q;q)(q^6;q^6))``."""
    return product(A_PRODUCT, order, modulus)


@lru_cache(maxsize=32)
def pod2_gf(order: int, modulus: int | None = None) -> Series:
    """Generating function of bipartitions with odd parts distinct."""
    return product(POD2_PRODUCT, order, modulus)


def pod_gf(order: int, modulus: int | None = None) -> Series:
    """Generating function of partitions with odd parts distinct."""
    return product(POD_PRODUCT, order, modulus)


def _signed_base_pochhammer(x: ThetaArg, base: ThetaArg, order: int) -> Series:
    # (x; base)_inf where base may carry a sign: split k by parity when base = -q^M
    if base.sign > 0:
        return pochhammer(x.sign, x.exponent, base.exponent, order)
    M = base.exponent
    even = pochhammer(x.sign, x.exponent, 2 * M, order)
    odd = pochhammer(-x.sign, x.exponent + M, 2 * M, order)
    return even * odd


def triple_product(a: ThetaArg, b: ThetaArg, order: int) -> Series:
    """``(-a; ab)_inf (-b; ab)_inf (ab; ab)_inf`` for monomial ``a`` and ``b``."""
    ab = ThetaArg(a.sign * b.sign, a.exponent + b.exponent)
    return (
        _signed_base_pochhammer(ThetaArg(-a.sign, a.exponent), ab, order)
        * _signed_base_pochhammer(ThetaArg(-b.sign, b.exponent), ab, order)
        * _signed_base_pochhammer(ab, ab, order)
    )


def jacobi_triple_product_check(a: ThetaArg, b: ThetaArg, order: int) -> bool:
    return theta_f(a, b, order) == triple_product(a, b, order)


# --- dissection identities ---------------------------------------------------

def _f(sa: int, ea: int, sb: int, eb: int, order: int, modulus: int | None = None) -> Series:
    return theta_f(ThetaArg(sa, ea), ThetaArg(sb, eb), order, modulus)


def _psi_at(k: int, order: int, sign: int = 1, modulus: int | None = None) -> Series:
    """``psi(sign * q^k)``."""
    s = psi(order, modulus)
    if sign < 0:
        s = ps.negate_q(s)
    return ps.substitute_power(s, k)


def _inv_psi_neg_two_dissection(order: int):
    lhs = ps.invert(_psi_at(1, order, -1))
    num = _f(1, 6, 1, 10, order) + _f(1, 2, 1, 14, order).shift(1)
    den = product("(q^2;q^2) * (q^4;q^4)", order)
    return lhs, num / den, None


def _inv_psi_neg_three_dissection(order: int):
    lhs = ps.invert(_psi_at(1, order, -1))
    A3 = ps.substitute_power(ps.negate_q(A_series(order)), 3)
    p9 = _psi_at(9, order, -1)
    p3 = _psi_at(3, order, -1)
    bracket = A3 * A3 + (A3 * p9).shift(1) + (p9 * p9).shift(2)
    return lhs, p9 * bracket / p3**4, None


def _psi_three_dissection(order: int):
    return psi(order), _f(1, 3, 1, 6, order) + _psi_at(9, order).shift(1), None


def _psi_cubed_mod3(order: int):
    return _psi_at(3, order), psi(order) ** 3, 3


def _psi_fifth_mod5(order: int):
    return _psi_at(5, order), psi(order) ** 5, 5


def _psi_five_dissection(order: int):
    p = psi(order)
    p5 = _psi_at(5, order)
    lhs = (p * p5).shift(1)
    inner = (_f(1, 10, 1, 15, order).shift(1) + _f(1, 5, 1, 20, order).shift(2)
             + _psi_at(25, order).shift(4))
    return lhs, p5 * inner, None


def _psi_times_psi_neg(order: int):
    return psi(order) * _psi_at(1, order, -1), product("(q^2;q^2) * (q^4;q^4)", order), None


def lambert_series(r: int, order: int, weighted: bool = True) -> Series:
    """``sum_n c_n q^(5n+r) / (1 - q^(10n+2r))`` with ``c_n = 5n+r`` (or 1), unrolled geometrically."""
    terms: dict[int, int] = {}
    n = 0
    while 5 * n + r <= order:
        base = 5 * n + r
        coeff = base if weighted else 1
        e = base
        while e <= order:
            terms[e] = terms.get(e, 0) + coeff
            e += 2 * base
        n += 1
    return ps.from_terms(terms, order)


def _modular_equation_5(order: int):
    p = psi(order)
    p5 = _psi_at(5, order)
    lhs = (p**3 * p5).shift(1) - 5 * (p * p5**3).shift(2)
    rhs = (lambert_series(1, order) - lambert_series(2, order)
           - lambert_series(3, order) + lambert_series(4, order))
    return lhs, rhs, None


def _lambert_quintisection(order: int):
    # the q^(5n) part of each unweighted Lambert sum, with q^5 -> q, reproduces the sum.
    lhs_parts, rhs_parts = [], []
    big = 5 * order + 4
    for r in range(1, 5):
        lhs_parts.append(ps.dissect(lambert_series(r, big, weighted=False), 5, 0).truncate(order))
        rhs_parts.append(lambert_series(r, order, weighted=False))
    # pack the four sums into one series so a single comparison covers them
    return ps.interleave(lhs_parts), ps.interleave(rhs_parts), None


IDENTITIES: dict[str, Callable[[int], tuple[Series, Series, int | None]]] = {
    "lemma2.1a": _inv_psi_neg_two_dissection,
    "lemma2.1b": _inv_psi_neg_three_dissection,
    "lemma3.1a": _psi_three_dissection,
    "lemma3.1b": _psi_cubed_mod3,
    "psi5_mod5": _psi_fifth_mod5,
    "psi_5dissection": _psi_five_dissection,
    "psi_psi_neg": _psi_times_psi_neg,
}

EXTRA_IDENTITIES: dict[str, Callable[[int], tuple[Series, Series, int | None]]] = {
    "modeq5": _modular_equation_5,
    "lemma4.1": _lambert_quintisection,
}


def compare(name: str, lhs: Series, rhs: Series, order: int, started: float | None = None) -> CheckReport:
    """Report the first exponent at which two series disagree (if any)."""
    n = ps.first_mismatch(lhs, rhs)
    counter = None if n is None else (n, rhs[n], lhs[n])
    ms = 1000 * (time.perf_counter() - started) if started is not None else 0.0
    return CheckReport(name, order, counter is None, counter, ms)


def identity_sides(name: str, order: int, modulus: int | None | str = "default"):
    """Both sides of a named identity; ``modulus`` overrides the identity's own reduction."""
    builders = {**IDENTITIES, **EXTRA_IDENTITIES}
    if name not in builders:
        raise KeyError(f"unknown identity {name!r}")
    lhs, rhs, mod = builders[name](order)
    if modulus != "default":
        mod = modulus
    if mod is not None:
        lhs, rhs = ps.reduce_mod(lhs, mod), ps.reduce_mod(rhs, mod)
    return lhs, rhs


def verify_identity(name: str, order: int, modulus: int | None | str = "default") -> CheckReport:
    """Check a named identity; ``modulus=None`` forces an exact comparison."""
    started = time.perf_counter()
    lhs, rhs = identity_sides(name, order, modulus)
    return compare(name, lhs, rhs, order, started)


def dissection_lemma_checks(order: int, include_extra: bool = False) -> list[CheckReport]:
    """Verify the dissection lemmas to ``order``, in fixed order."""
    if order < 30:
        raise ValueError("dissection checks need order >= 30")
    names = list(IDENTITIES)
    if include_extra:
        names += list(EXTRA_IDENTITIES)
    return [verify_identity(name, order) for name in names]
