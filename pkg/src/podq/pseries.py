"""Exact truncated power series in ``q``, and a bivariate ``(z, q)`` variant.

A :class:`Series` of order ``N`` knows the coefficients of ``q^0 .. q^N``
exactly and nothing beyond.  Binary operations truncate to the smaller order;
nothing is ever zero-extended.  Coefficients are Python integers, optionally
reduced modulo a fixed modulus.

Kernels run on numpy arrays: ``int64`` when a modulus keeps every partial sum
below 2**62, ``object`` (arbitrary-precision) otherwise.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

_INT64_SAFE = 2**62


def _fits_int64(modulus: int | None, length: int) -> bool:
    return modulus is not None and (modulus - 1) ** 2 * max(length, 1) < _INT64_SAFE


def _dtype(modulus: int | None, length: int):
    return np.int64 if _fits_int64(modulus, length) else object


@dataclass(frozen=True)
class Series:
    """Power series known to order ``N``: ``coeffs[n]`` is the coefficient of ``q^n``."""

    coeffs: tuple[int, ...]
    modulus: int | None = None

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("a series needs at least its constant coefficient")
        if self.modulus is not None:
            m = int(self.modulus)
            if m < 1:
                raise ValueError(f"modulus must be positive, got {m}")
            if any(not 0 <= c < m for c in coeffs):
                raise ValueError(f"coefficients must lie in [0, {m})")
            object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def _trusted(cls, coeffs, modulus: int | None) -> Series:
        # skips validation; callers guarantee canonical residues
        s = object.__new__(cls)
        object.__setattr__(s, "coeffs", tuple(coeffs))
        object.__setattr__(s, "modulus", modulus)
        return s

    @classmethod
    def _from_array(cls, arr: np.ndarray, modulus: int | None) -> Series:
        if modulus is not None:
            arr = arr % modulus
        return cls._trusted(arr.tolist(), modulus)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient {n} outside 0..{self.order}")
        return self.coeffs[n]

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if self.order >= 8 else ""
        mod = f", mod {self.modulus}" if self.modulus is not None else ""
        return f"Series([{head}{more}], order={self.order}{mod})"

    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=_dtype(self.modulus, len(self.coeffs)))

    def nonzero(self) -> list[tuple[int, int]]:
        return [(n, c) for n, c in enumerate(self.coeffs) if c]

    def truncate(self, order: int) -> Series:
        if order < 0:
            raise ValueError("order must be nonnegative")
        if order >= self.order:
            return self
        return Series._trusted(self.coeffs[: order + 1], self.modulus)

    def shift(self, k: int) -> Series:
        """Multiply by ``q^k``.  Negative ``k`` divides and requires the low terms to vanish."""
        if k >= 0:
            return Series._trusted(((0,) * k + self.coeffs)[: len(self.coeffs)], self.modulus)
        k = -k
        if k > self.order:
            raise ValueError("shift exceeds series order")
        if any(self.coeffs[:k]):
            raise ValueError(f"cannot divide by q^{k}: low coefficients are nonzero")
        return Series._trusted(self.coeffs[k:], self.modulus)

    def __add__(self, other):
        return add(self, _promote(other, self))

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, negate(_promote(other, self)))

    def __rsub__(self, other):
        return add(_promote(other, self), negate(self))

    def __neg__(self):
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return NotImplemented

    def __truediv__(self, other):
        return divide(self, other)

    def __pow__(self, e: int):
        return power(self, e)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "modulus": self.modulus,
            "coeffs": [str(c) for c in self.coeffs],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping | str) -> Series:
        if isinstance(data, str):
            data = json.loads(data)
        coeffs = [int(c) for c in data["coeffs"]]
        if len(coeffs) != int(data["order"]) + 1:
            raise ValueError("order does not match number of coefficients")
        return cls(tuple(coeffs), data.get("modulus"))


def _promote(x, like: Series) -> Series:
    if isinstance(x, Series):
        return x
    if isinstance(x, int):
        c = x % like.modulus if like.modulus is not None else x
        return Series._trusted((c,) + (0,) * like.order, like.modulus)
    raise TypeError(f"cannot combine Series with {type(x).__name__}")


def _common_modulus(a: Series, b: Series) -> int | None:
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} vs {b.modulus}")
    return a.modulus


def zero(order: int, modulus: int | None = None) -> Series:
    return Series._trusted((0,) * (order + 1), modulus)


def one(order: int, modulus: int | None = None) -> Series:
    return monomial(0, order, modulus=modulus)


def monomial(k: int, order: int, coeff: int = 1, modulus: int | None = None) -> Series:
    """``coeff * q^k`` truncated at ``order`` (vanishes when ``k > order``)."""
    coeffs = [0] * (order + 1)
    if k <= order:
        coeffs[k] = coeff % modulus if modulus is not None else coeff
    return Series._trusted(coeffs, modulus)


def from_terms(terms: Mapping[int, int] | Iterable[tuple[int, int]], order: int,
               modulus: int | None = None) -> Series:
    """Build a series from ``{exponent: coefficient}``; exponents past ``order`` are dropped."""
    items = terms.items() if isinstance(terms, Mapping) else terms
    coeffs = [0] * (order + 1)
    for k, c in items:
        if k < 0:
            raise ValueError("negative exponents are not supported")
        if k <= order:
            coeffs[k] += c
    if modulus is not None:
        coeffs = [c % modulus for c in coeffs]
    return Series._trusted(coeffs, modulus)


def add(a: Series, b: Series) -> Series:
    m = _common_modulus(a, b)
    n = min(a.order, b.order) + 1
    if m is None:
        return Series._trusted([x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n])], None)
    return Series._trusted([(x + y) % m for x, y in zip(a.coeffs[:n], b.coeffs[:n])], m)


def negate(a: Series) -> Series:
    m = a.modulus
    if m is None:
        return Series._trusted([-c for c in a.coeffs], None)
    return Series._trusted([-c % m for c in a.coeffs], m)


def scale(a: Series, k: int) -> Series:
    m = a.modulus
    if m is None:
        return Series._trusted([k * c for c in a.coeffs], None)
    return Series._trusted([k * c % m for c in a.coeffs], m)


def mul(a: Series, b: Series) -> Series:
    """Cauchy product truncated at ``min(a.order, b.order)``."""
    m = _common_modulus(a, b)
    order = min(a.order, b.order)
    size = order + 1
    a = a.truncate(order)
    b = b.truncate(order)
    if len(b.nonzero()) < len(a.nonzero()):
        a, b = b, a
    terms = a.nonzero()
    dtype = _dtype(m, size)
    barr = b.array()
    if dtype is np.int64 and 4 * len(terms) > size:
        return Series._from_array(np.convolve(a.array(), barr)[:size], m)
    out = np.zeros(size, dtype=dtype)
    if dtype is object:
        out[:] = 0
    for i, c in terms:
        out[i:] += c * barr[: size - i]
    return Series._from_array(out, m)


def _unit_inverse(c: int, modulus: int | None) -> int:
    if modulus is None:
        if c not in (1, -1):
            raise ValueError("non-invertible series: constant term must be +1 or -1")
        return c
    if gcd(c, modulus) != 1:
        raise ValueError(f"non-invertible series: constant term {c} is not a unit mod {modulus}")
    return pow(c, -1, modulus)


def divide(a: Series, b: Series) -> Series:
    """Solve ``b * c = a`` for ``c`` by forward substitution; needs a unit constant term in ``b``."""
    m = _common_modulus(a, b)
    order = min(a.order, b.order)
    inv0 = _unit_inverse(b.coeffs[0], m)
    dtype = _dtype(m, order + 1)
    idx = np.array([k for k, c in b.nonzero() if 0 < k <= order], dtype=np.int64)
    vals = np.array([b.coeffs[k] for k in idx.tolist()], dtype=dtype)
    rhs = a.coeffs
    out = np.zeros(order + 1, dtype=dtype)
    if dtype is object:
        out[:] = 0
    count = 0
    for n in range(order + 1):
        while count < len(idx) and idx[count] <= n:
            count += 1
        acc = rhs[n]
        if count:
            acc -= int(np.dot(vals[:count], out[n - idx[:count]]))
        acc *= inv0
        out[n] = acc % m if m is not None else acc
    return Series._from_array(out, m)


def invert(a: Series) -> Series:
    return divide(one(a.order, a.modulus), a)


def power(a: Series, e: int) -> Series:
    if e < 0:
        return power(invert(a), -e)
    result = one(a.order, a.modulus)
    base = a
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def dissect(a: Series, m: int, r: int) -> Series:
    """Coefficients of ``q^(m n + r)``, re-indexed by ``n``."""
    if m < 1:
        raise ValueError("dissection modulus must be positive")
    if not 0 <= r < m:
        raise ValueError(f"residue must satisfy 0 <= r < m, got r={r}, m={m}")
    if r > a.order:
        raise ValueError(f"residue {r} exceeds series order {a.order}")
    return Series._trusted(a.coeffs[r::m], a.modulus)


def interleave(parts: Sequence[Series]) -> Series:
    """Inverse of dissection: ``parts[r]`` holds the ``q^(m n + r)`` coefficients, ``m = len(parts)``."""
    m = len(parts)
    if m < 1:
        raise ValueError("need at least one part")
    modulus = parts[0].modulus
    for p in parts:
        if p.modulus != modulus:
            raise ValueError("modulus mismatch")
    order = min(m * (p.order + 1) + r for r, p in enumerate(parts)) - 1
    coeffs = [parts[j % m].coeffs[j // m] for j in range(order + 1)]
    return Series._trusted(coeffs, modulus)


def substitute_power(a: Series, k: int) -> Series:
    """``q -> q^k`` keeping the order of ``a``."""
    if k < 1:
        raise ValueError("substitution power must be positive")
    coeffs = [0] * (a.order + 1)
    coeffs[::k] = a.coeffs[: a.order // k + 1]
    return Series._trusted(coeffs, a.modulus)


def negate_q(a: Series) -> Series:
    """``q -> -q``."""
    m = a.modulus
    out = list(a.coeffs)
    for n in range(1, len(out), 2):
        out[n] = -out[n] % m if m is not None else -out[n]
    return Series._trusted(out, m)


def reduce_mod(a: Series, m: int) -> Series:
    if m < 2:
        raise ValueError("reduction modulus must be at least 2")
    if a.modulus is not None and a.modulus % m:
        raise ValueError(f"cannot reduce a mod-{a.modulus} series modulo {m}")
    return Series._trusted([c % m for c in a.coeffs], m)


def first_mismatch(a: Series, b: Series) -> int | None:
    """Smallest exponent at which ``a`` and ``b`` differ, comparing up to the smaller order."""
    _common_modulus(a, b)
    for n, (x, y) in enumerate(zip(a.coeffs, b.coeffs)):
        if x != y:
            return n
    return None


# --- products of binomials -------------------------------------------------

def _zeros(size: int, modulus: int | None) -> np.ndarray:
    dtype = _dtype(modulus, size)
    out = np.zeros(size, dtype=dtype)
    if dtype is object:
        out[:] = 0
    return out


def _binomial_mul(arr: np.ndarray, c: int, e: int) -> None:
    # arr *= (1 + c q^e), in place, without reduction
    if e >= len(arr) or c == 0:
        return
    arr[e:] += c * arr[:-e]


def _binomial_div(arr: np.ndarray, c: int, e: int, modulus: int | None) -> None:
    # arr /= (1 + c q^e), in place; block j only depends on the finished block j-1
    size = len(arr)
    if e >= size or c == 0:
        return
    for start in range(e, size, e):
        stop = min(start + e, size)
        block = arr[start:stop] - c * arr[start - e: stop - e]
        arr[start:stop] = block % modulus if modulus is not None else block


def expand_binomials(factors: Iterable[tuple[int, int, int]], order: int,
                     modulus: int | None = None) -> Series:
    """Expand ``prod (1 + c q^e)^p`` over ``(c, e, p)`` with ``e >= 1``; negative ``p`` divides."""
    arr = _zeros(order + 1, modulus)
    arr[0] = 1
    # in int64 mode, multiplications skip the reduction until this bound would overflow
    lazy = arr.dtype == np.int64
    bound = 1
    for c, e, p in factors:
        if e < 1:
            raise ValueError("binomial exponent must be at least 1")
        if modulus is not None:
            c %= modulus
        for _ in range(abs(p)):
            if p > 0:
                if lazy:
                    if bound * (1 + c) >= _INT64_SAFE:
                        arr %= modulus
                        bound = modulus - 1
                    bound *= 1 + c
                _binomial_mul(arr, c, e)
                if modulus is not None and not lazy:
                    arr %= modulus
            else:
                if lazy and bound >= modulus:
                    arr %= modulus
                    bound = modulus - 1
                _binomial_div(arr, c, e, modulus)
    return Series._from_array(arr, modulus)


# --- bivariate series --------------------------------------------------------

@dataclass(frozen=True)
class BivariateSeries:
    """Series in ``q`` whose coefficients are Laurent polynomials in ``z``.

    ``coeffs[n][m + n]`` is the coefficient of ``z^m q^n`` for ``-n <= m <= n``;
    every term outside that triangle is zero by construction.
    """

    coeffs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in row) for row in self.coeffs)
        if not rows:
            raise ValueError("a bivariate series needs at least one row")
        for n, row in enumerate(rows):
            if len(row) != 2 * n + 1:
                raise ValueError(f"row {n} must hold {2 * n + 1} coefficients, got {len(row)}")
        object.__setattr__(self, "coeffs", rows)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, m: int, n: int) -> int:
        if not 0 <= n <= self.order:
            raise IndexError(f"q-exponent {n} outside 0..{self.order}")
        if abs(m) > n:
            return 0
        return self.coeffs[n][m + n]

    def row(self, n: int) -> dict[int, int]:
        return {m - n: c for m, c in enumerate(self.coeffs[n]) if c}

    def grid(self) -> np.ndarray:
        """Dense ``(N+1, 2N+1)`` object array; column ``m + N`` holds ``z^m``."""
        N = self.order
        g = np.zeros((N + 1, 2 * N + 1), dtype=object)
        g[:] = 0
        for n, row in enumerate(self.coeffs):
            g[n, N - n: N + n + 1] = row
        return g

    @classmethod
    def from_grid(cls, g: np.ndarray) -> BivariateSeries:
        N = g.shape[0] - 1
        if g.shape[1] != 2 * N + 1:
            raise ValueError("grid must have shape (N+1, 2N+1)")
        rows = []
        for n in range(N + 1):
            inside = g[n, N - n: N + n + 1]
            if any(g[n, : N - n]) or any(g[n, N + n + 1:]):
                raise ValueError(f"row {n} has terms outside |m| <= {n}")
            rows.append(tuple(int(c) for c in inside))
        return cls(tuple(rows))

    @classmethod
    def from_terms(cls, terms: Mapping[tuple[int, int], int], order: int) -> BivariateSeries:
        """Build from ``{(m, n): coefficient}``; terms with ``n > order`` are dropped."""
        rows = [[0] * (2 * n + 1) for n in range(order + 1)]
        for (m, n), c in terms.items():
            if n > order:
                continue
            if abs(m) > n:
                raise ValueError(f"term z^{m} q^{n} violates |m| <= n")
            rows[n][m + n] += c
        return cls(tuple(tuple(r) for r in rows))

    def truncate(self, order: int) -> BivariateSeries:
        return BivariateSeries(self.coeffs[: order + 1])

    def collapse(self) -> Series:
        """Specialize ``z = 1``."""
        return Series._trusted([sum(row) for row in self.coeffs], None)

    def reflect(self) -> BivariateSeries:
        """Substitute ``z -> 1/z``."""
        return BivariateSeries(tuple(row[::-1] for row in self.coeffs))

    def __mul__(self, other):
        return bivar_mul(self, other)

    def __add__(self, other: BivariateSeries) -> BivariateSeries:
        order = min(self.order, other.order)
        return BivariateSeries(tuple(
            tuple(x + y for x, y in zip(r1, r2))
            for r1, r2 in zip(self.coeffs[: order + 1], other.coeffs[: order + 1])
        ))


def _shift_z_add(dst: np.ndarray, src: np.ndarray, j: int, c: int) -> None:
    # dst[:, col + j] += c * src[:, col]
    width = dst.shape[1]
    if j >= 0:
        dst[:, j:] += c * src[:, : width - j]
    else:
        dst[:, : width + j] += c * src[:, -j:]


def bivar_mul(a: BivariateSeries, b: BivariateSeries) -> BivariateSeries:
    """Product in both ``q`` and ``z``, truncated at the smaller order."""
    N = min(a.order, b.order)
    a, b = a.truncate(N), b.truncate(N)
    terms_a = [(m, n, c) for n in range(N + 1) for m, c in a.row(n).items()]
    terms_b = [(m, n, c) for n in range(N + 1) for m, c in b.row(n).items()]
    if len(terms_b) < len(terms_a):
        a, b, terms_a = b, a, terms_b
    bg = b.grid()
    out = np.zeros_like(bg)
    out[:] = 0
    for m, n, c in terms_a:
        _shift_z_add(out[n:], bg[: N + 1 - n], m, c)
    return BivariateSeries.from_grid(out)


def bivar_expand(factors: Iterable[tuple[int, int, int, int, int]], order: int) -> BivariateSeries:
    """Expand ``prod (sign z^j q^r; q^s)_inf^e`` over factors ``(sign, j, r, s, e)``.

    Requires ``|j| <= r`` so every term respects the ``|m| <= n`` support.
    """
    N = order
    g = np.zeros((N + 1, 2 * N + 1), dtype=object)
    g[:] = 0
    g[0, N] = 1
    for sign, j, r, s, e in factors:
        if sign not in (1, -1) or r < 1 or s < 1:
            raise ValueError(f"bad factor {(sign, j, r, s, e)}")
        if abs(j) > r:
            raise ValueError(f"factor z^{j} q^{r} breaks the |m| <= n support")
        for qexp in range(r, N + 1, s):
            # (1 - sign z^j q^qexp)^e
            c = -sign
            for _ in range(abs(e)):
                if e > 0:
                    tail = g[:-qexp].copy()
                    _shift_z_add(g[qexp:], tail, j, c)
                else:
                    for start in range(qexp, N + 1, qexp):
                        stop = min(start + qexp, N + 1)
                        _shift_z_add(g[start:stop], g[start - qexp: stop - qexp].copy(), j, -c)
    return BivariateSeries.from_grid(g)


def bivar_residue_combine(a: BivariateSeries, t: int, weights: Mapping[int, int]) -> Series:
    """``sum_m weights[m mod t] * c(m, n)`` for each ``n``."""
    if t < 1:
        raise ValueError("residue modulus must be positive")
    missing = [r for r in range(t) if r not in weights]
    if missing:
        raise ValueError(f"weight map missing residue(s) {missing}")
    out = []
    for n, row in enumerate(a.coeffs):
        out.append(sum(weights[(k - n) % t] * c for k, c in enumerate(row) if c))
    return Series._trusted(out, None)
