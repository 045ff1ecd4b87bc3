"""Elementary number theory on positive integers.

Factorization is plain trial division. Every public function validates its
arguments and raises :class:`InvalidInput` instead of returning garbage;
inputs at or above ``MAX_MODULUS`` are rejected so that derived quantities
(products of totients, lcms of divisors) stay inside signed 64-bit range.
"""

from functools import lru_cache
import math

from .errors import ArithmeticOverflow, InvalidInput

INT64_MAX = 2**63 - 1
# n < 2**31 keeps n*n and every totient product below INT64_MAX.
MAX_MODULUS = 2**31 - 1


def _check_positive(n, name="n"):
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidInput(f"{name} must be an integer, got {n!r}")
    if n < 1:
        raise InvalidInput(f"{name} must be >= 1, got {n}")
    if n > MAX_MODULUS:
        raise ArithmeticOverflow(f"{name}={n} exceeds the supported cap {MAX_MODULUS}")


@lru_cache(maxsize=4096)
def _factor(n):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            out.append((p, k))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n):
    """Prime factorization as a tuple of ``(prime, exponent)`` pairs, ascending."""
    _check_positive(n)
    return _factor(n)


def prime_divisors(n):
    return [p for p, _ in factorize(n)]


def is_prime(p):
    if isinstance(p, bool) or not isinstance(p, int) or p < 2:
        return False
    _check_positive(p, "p")
    return _factor(p) == ((p, 1),)


@lru_cache(maxsize=4096)
def _divisors(n):
    divs = [1]
    for p, k in _factor(n):
        divs = [d * p**e for d in divs for e in range(k + 1)]
    return tuple(sorted(divs))


def divisors(n):
    """All positive divisors of ``n`` in increasing order."""
    _check_positive(n)
    return list(_divisors(n))


def num_divisors(n):
    """tau(n)."""
    _check_positive(n)
    return len(_divisors(n))


def sum_divisors(n):
    """sigma(n)."""
    _check_positive(n)
    return sum(_divisors(n))


def euler_phi(n):
    _check_positive(n)
    out = 1
    for p, k in _factor(n):
        out *= (p - 1) * p ** (k - 1)
    return out


def moebius(n):
    _check_positive(n)
    fac = _factor(n)
    if any(k > 1 for _, k in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def valuation(n, p):
    """Largest k with p**k dividing n."""
    _check_positive(n)
    if not is_prime(p):
        raise InvalidInput(f"valuation needs a prime, got {p!r}")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def gcd(a, b):
    _check_positive(a, "a")
    _check_positive(b, "b")
    return math.gcd(a, b)


def lcm(a, b):
    _check_positive(a, "a")
    _check_positive(b, "b")
    out = a // math.gcd(a, b) * b
    if out > INT64_MAX:
        raise ArithmeticOverflow(f"lcm({a}, {b}) = {out} does not fit in 64 bits")
    return out
