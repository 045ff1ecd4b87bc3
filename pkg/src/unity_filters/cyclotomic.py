"""Exact arithmetic in Z[xi_n].

An element is stored as an integer coefficient vector of length ``n``
(coefficient of ``xi_n**k`` at index ``k``), i.e. a polynomial modulo
``x**n - 1``.  Such a vector does not determine a unique representation, so
equality is decided by divisibility of the coefficient polynomial by the
cyclotomic polynomial ``Phi_n``.  Floats are only used to *propose* integer
candidates in :meth:`CyclotomicElement.as_integer`; every answer is certified
with integer arithmetic.

Coefficients are Python ints (unbounded).  The vectorized helpers work on
``int64`` arrays and fall back to object arrays when a bound check says the
products could leave 64-bit range.
"""

from functools import lru_cache
import cmath
import math

import numpy as np

from . import divlattice
from .errors import ArithmeticOverflow, InvalidInput, ModulusMismatch

MAX_CYCLOTOMIC_ORDER = 2**16
_SAFE_INT64 = 2**62


class IntPolynomial:
    """Integer polynomial, ascending coefficients, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __mul__(self, other):
        if not self.coeffs or not other.coeffs:
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def divmod_monic(self, divisor):
        """Quotient and remainder by a monic divisor, exact over Z."""
        if divisor.is_zero() or divisor.coeffs[-1] != 1:
            raise InvalidInput("divisor must be monic")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPolynomial([]), IntPolynomial(rem)
        quot = [0] * (len(rem) - dd)
        dc = divisor.coeffs
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                quot[i - dd] = c
                for j in range(dd + 1):
                    rem[i - dd + j] -= c * dc[j]
        return IntPolynomial(quot), IntPolynomial(rem[:dd])

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@lru_cache(maxsize=512)
def _phi_coeffs(n):
    # Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}; multiply the numerator
    # factors first, then divide out the denominator factors exactly.
    ups, downs = [], []
    for d in divlattice.divisors(n):
        m = divlattice.moebius(n // d)
        if m == 1:
            ups.append(d)
        elif m == -1:
            downs.append(d)
    poly = [1]
    for d in ups:
        out = [0] * (len(poly) + d)
        for i, c in enumerate(poly):
            out[i + d] += c
            out[i] -= c
        poly = out
    for d in downs:
        # q * (x^d - 1) = poly  =>  q[i] = q[i - d] - poly[i]
        qlen = len(poly) - d
        q = [0] * qlen
        for i in range(qlen):
            q[i] = (q[i - d] if i >= d else 0) - poly[i]
        poly = q
    if any(abs(c) > divlattice.INT64_MAX for c in poly):
        raise ArithmeticOverflow(f"Phi_{n} has coefficients beyond 64 bits")
    return tuple(poly)


def cyclotomic_polynomial(n):
    """The n-th cyclotomic polynomial."""
    divlattice._check_positive(n)
    if n > MAX_CYCLOTOMIC_ORDER:
        raise ArithmeticOverflow(f"cyclotomic order {n} above cap {MAX_CYCLOTOMIC_ORDER}")
    return IntPolynomial(_phi_coeffs(n))


def _remainder(coeffs, n):
    _, rem = IntPolynomial(coeffs).divmod_monic(cyclotomic_polynomial(n))
    phi = divlattice.euler_phi(n)
    return tuple(rem[k] for k in range(phi))


@lru_cache(maxsize=512)
def _reduction_rows(n):
    # Row k holds x^k mod Phi_n, length phi(n).
    phi_poly = _phi_coeffs(n)
    deg = len(phi_poly) - 1
    rows = []
    cur = [0] * deg
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        lead = cur[-1]
        cur = [0] + cur[:-1]
        if lead:
            for j in range(deg):
                cur[j] -= lead * phi_poly[j]
    return tuple(rows)


@lru_cache(maxsize=512)
def reduction_matrix(n):
    """``(n, phi(n))`` matrix whose row k is ``x**k mod Phi_n``.

    Right-multiplying a batch of coefficient vectors by it gives their
    canonical remainders.  Entries are int64 (checked).
    """
    rows = _reduction_rows(n)
    big = max(abs(v) for r in rows for v in r)
    if big > 2**31:
        return np.array(rows, dtype=object)
    return np.array(rows, dtype=np.int64)


def reduce_batch(coeffs, n):
    """Canonical remainders mod Phi_n of a stack of coefficient vectors.

    ``coeffs`` has shape ``(..., n)``; the result has shape ``(..., phi(n))``.
    """
    arr = np.asarray(coeffs)
    if arr.shape[-1] != n:
        raise ModulusMismatch(f"last axis {arr.shape[-1]} != modulus {n}")
    mat = reduction_matrix(n)
    if arr.size == 0:
        return np.zeros(arr.shape[:-1] + (mat.shape[1],), dtype=np.int64)
    bound = int(np.max(np.abs(arr.astype(object)))) if arr.dtype == object else int(np.max(np.abs(arr)))
    rbound = int(np.max(np.abs(mat))) if mat.size else 0
    if mat.dtype == object or arr.dtype == object or bound * rbound * n >= _SAFE_INT64:
        return arr.astype(object) @ mat.astype(object)
    return arr.astype(np.int64) @ mat


def is_zero_batch(coeffs, n):
    red = reduce_batch(coeffs, n)
    return ~np.any(red != 0, axis=-1)


@lru_cache(maxsize=512)
def _cosines(n):
    return np.cos(2 * np.pi * np.arange(n) / n)


def as_integer_batch(coeffs, n):
    """Vectorized :meth:`CyclotomicElement.as_integer`.

    Returns ``(values, ok)``: ``ok[i]`` is true iff element i is certified to
    equal the rational integer ``values[i]``; ``values`` is meaningless where
    ``ok`` is false.
    """
    arr = np.asarray(coeffs)
    candidate = np.rint(arr.astype(float) @ _cosines(n)).astype(np.int64)
    red = reduce_batch(arr, n)
    ok = ~np.any(red[..., 1:] != 0, axis=-1) & (red[..., 0] == candidate)
    return candidate, ok


class CyclotomicElement:
    """An element of Z[xi_n] with value semantics."""

    __slots__ = ("modulus", "coeffs", "_reduced")

    def __init__(self, modulus, coeffs):
        divlattice._check_positive(modulus, "modulus")
        c = tuple(int(x) for x in coeffs)
        if len(c) != modulus:
            raise InvalidInput(f"expected {modulus} coefficients, got {len(c)}")
        self.modulus = modulus
        self.coeffs = c
        self._reduced = None

    @classmethod
    def zero(cls, n):
        return cls(n, [0] * n)

    @classmethod
    def constant(cls, n, m):
        c = [0] * n
        c[0] = m
        return cls(n, c)

    @classmethod
    def root(cls, n, k, scale=1):
        """``scale * xi_n**k``."""
        c = [0] * n
        c[k % n] = scale
        return cls(n, c)

    @classmethod
    def from_exponents(cls, n, exponents):
        """Sum of ``xi_n**e`` over ``exponents`` (with multiplicity)."""
        c = [0] * n
        for e in exponents:
            c[e % n] += 1
        return cls(n, c)

    def _check(self, other):
        if not isinstance(other, CyclotomicElement):
            raise InvalidInput(f"expected CyclotomicElement, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise ModulusMismatch(f"moduli {self.modulus} and {other.modulus} differ")

    def __add__(self, other):
        self._check(other)
        return CyclotomicElement(self.modulus, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return CyclotomicElement(self.modulus, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return CyclotomicElement(self.modulus, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return CyclotomicElement(self.modulus, [other * a for a in self.coeffs])
        self._check(other)
        n = self.modulus
        out = [0] * n
        rhs = [(j, b) for j, b in enumerate(other.coeffs) if b]
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in rhs:
                    out[(i + j) % n] += a * b
        return CyclotomicElement(n, out)

    __rmul__ = __mul__

    def lift(self, m):
        """The same number viewed in Z[xi_m] for a multiple m of the modulus."""
        n = self.modulus
        if m % n:
            raise InvalidInput(f"{m} is not a multiple of {n}")
        f = m // n
        c = [0] * m
        for k, a in enumerate(self.coeffs):
            c[k * f] = a
        return CyclotomicElement(m, c)

    def galois(self, u):
        """Apply xi_n -> xi_n**u (u is coerced mod n, need not be a unit)."""
        n = self.modulus
        c = [0] * n
        for k, a in enumerate(self.coeffs):
            c[(k * u) % n] += a
        return CyclotomicElement(n, c)

    def reduced(self):
        """Canonical remainder mod Phi_n (tuple of length phi(n))."""
        if self._reduced is None:
            self._reduced = _remainder(self.coeffs, self.modulus)
        return self._reduced

    def is_zero(self):
        if not any(self.coeffs):
            return True
        return not any(self.reduced())

    def evaluate(self):
        n = self.modulus
        return sum(a * cmath.exp(2j * math.pi * k / n) for k, a in enumerate(self.coeffs) if a)

    def as_integer(self):
        """The rational integer this element equals, or None."""
        m = round(self.evaluate().real)
        if (self - CyclotomicElement.constant(self.modulus, m)).is_zero():
            return m
        return None

    def __eq__(self, other):
        if not isinstance(other, CyclotomicElement):
            return NotImplemented
        # different moduli compare unequal; lift() both sides explicitly
        if other.modulus != self.modulus:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.modulus, self.reduced()))

    def __repr__(self):
        return f"CyclotomicElement({self.modulus}, {list(self.coeffs)})"


def is_zero(a):
    return a.is_zero()


def as_integer(a):
    return a.as_integer()
