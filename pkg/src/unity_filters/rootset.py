"""Power sums of Galois-invariant sets of roots of unity.

A :class:`DivisorSystem` ``(n, E)`` with E a set of divisors of n stands for

    U = union over d in E of {xi_n^i : gcd(i, n) = d},

and its power sums have the closed integer form

    a_c = sum_{d in E} phi(n/d) / phi(n/(n, dc)) * mu(n/(n, dc)).

The explicit side (:class:`ExplicitRootSet`) stores arbitrary exponent sets and
evaluates power sums exactly in Z[xi_n]; it is the oracle for the formula
and the place where non-invariant sets live.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from . import divlattice as dl
from .cyclotomic import CyclotomicElement, as_integer_batch
from .errors import CapExceeded, EmptyReduction, InvalidInput
from .parallel import run_chunks, split_range

TAU_CAP = 16
EXPLICIT_CAP = 24
EXPLICIT_EXHAUSTIVE = 12


@dataclass(frozen=True)
class DivisorSystem:
    n: int
    E: tuple

    def __init__(self, n, E):
        dl._check_positive(n)
        es = tuple(sorted(set(int(d) for d in E)))
        if not es:
            raise InvalidInput("divisor system must be nonempty")
        bad = [d for d in es if d < 1 or n % d]
        if bad:
            raise InvalidInput(f"{bad} do not divide {n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "E", es)

    @classmethod
    def filter(cls, n, e):
        """The filter (e)_n: all divisors of n divisible by e."""
        if n % e:
            raise InvalidInput(f"{e} does not divide {n}")
        return cls(n, [d for d in dl.divisors(n) if d % e == 0])

    @classmethod
    def from_mask(cls, n, mask):
        divs = dl.divisors(n)
        return cls(n, [d for k, d in enumerate(divs) if mask >> k & 1])

    def mask(self):
        index = {d: k for k, d in enumerate(dl.divisors(self.n))}
        return sum(1 << index[d] for d in self.E)

    def to_json(self):
        return {"n": self.n, "E": list(self.E)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["n"]), [int(d) for d in obj["E"]])

    def exponents(self):
        """The explicit exponent set of U."""
        return frozenset(i for i in range(self.n) if math.gcd(i, self.n) in self.E)


@dataclass(frozen=True)
class ExplicitRootSet:
    n: int
    exponents: frozenset

    def __init__(self, n, exponents):
        dl._check_positive(n)
        ex = frozenset(int(i) % n for i in exponents)
        if not ex:
            raise InvalidInput("root set must be nonempty")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "exponents", ex)

    @classmethod
    def from_system(cls, sys):
        return cls(sys.n, sys.exponents())


@lru_cache(maxsize=None)
def _term(n, d, c):
    g = math.gcd(n, d * c)
    q = n // g
    num, den = dl.euler_phi(n // d), dl.euler_phi(q)
    if num % den:
        raise ArithmeticError(f"phi({n // d}) not divisible by phi({q}); arithmetic bug")
    return num // den * dl.moebius(q)


def power_sum_term(n, d, c):
    """Contribution of the orbit with gcd d to a_c."""
    if n % d or n % c:
        raise InvalidInput(f"{d} and {c} must divide {n}")
    return _term(n, d, c)


def power_sum(sys, c):
    if c < 1 or sys.n % c:
        raise InvalidInput(f"c={c} does not divide n={sys.n}")
    return sum(_term(sys.n, d, c) for d in sys.E)


def power_sums(sys):
    """{c: a_c} over all divisors c of n."""
    return {c: power_sum(sys, c) for c in dl.divisors(sys.n)}


def filter_power_sum_closed_form(n, e, c):
    if n % e:
        raise InvalidInput(f"{e} does not divide {n}")
    if c < 1 or n % c:
        raise InvalidInput(f"c={c} does not divide n={n}")
    return n // e if c % (n // e) == 0 else 0


def is_divisor_filter(sys):
    e = 0
    for d in sys.E:
        e = math.gcd(e, d)
    expected = tuple(d for d in dl.divisors(sys.n) if d % e == 0)
    return e if sys.E == expected else None


def reduce(sys, p):
    """E_p = {d/p : d in E, p | d} as a system for n/p."""
    if not dl.is_prime(p) or sys.n % p:
        raise InvalidInput(f"{p} is not a prime divisor of {sys.n}")
    red = [d // p for d in sys.E if d % p == 0]
    if not red:
        raise EmptyReduction(f"{p} divides no member of {list(sys.E)}")
    return DivisorSystem(sys.n // p, red)


# ---- explicit exponent sets -------------------------------------------------

def power_sum_explicit(u, k):
    """sum over i in U of xi_n^(i*k), exactly."""
    return CyclotomicElement.from_exponents(u.n, (i * k for i in u.exponents))


def is_group_explicit(u):
    ex = u.exponents
    return all((a + b) % u.n in ex for a in ex for b in ex)


def galois_orbit_decomposition(u):
    n = u.n
    orbits = {}
    for i in range(n):
        orbits.setdefault(math.gcd(i, n), set()).add(i)
    E = []
    for d, orb in orbits.items():
        hit = orb & u.exponents
        if hit and hit != orb:
            return None
        if hit:
            E.append(d)
    return DivisorSystem(n, E)


# ---- vectorized tables used by the exhaustive checks ------------------------

@lru_cache(maxsize=None)
def term_matrix(n):
    """T[d_index, c_index] = orbit-d contribution to a_c."""
    divs = dl.divisors(n)
    return np.array([[_term(n, d, c) for c in divs] for d in divs], dtype=np.int64)


def system_rows(tau, lo=1, hi=None):
    """0/1 membership rows for masks lo..hi-1 over tau divisors."""
    hi = (1 << tau) if hi is None else hi
    masks = np.arange(lo, hi, dtype=np.int64)
    return ((masks[:, None] >> np.arange(tau)) & 1).astype(np.int64), masks


def filter_masks(n):
    divs = dl.divisors(n)
    out = {}
    for e in divs:
        out[sum(1 << k for k, d in enumerate(divs) if d % e == 0)] = e
    return out


@dataclass
class RootsReport:
    n: int
    tested: int = 0
    filters: int = 0
    counterexamples: list = field(default_factory=list)

    def merge(self, other):
        self.tested += other.tested
        self.filters += other.filters
        self.counterexamples = sorted(self.counterexamples + other.counterexamples,
                                      key=lambda c: c["E"])
        return self

    @property
    def failed(self):
        return len(self.counterexamples)

    def as_dict(self):
        return {
            "n": self.n,
            "tested": self.tested,
            "filters": self.filters,
            "expected_filters": dl.num_divisors(self.n),
            "passed": self.tested - self.failed,
            "failed": self.failed,
            "counterexamples": self.counterexamples,
        }


def _roots_range(n, lo, hi):
    divs = dl.divisors(n)
    rows, masks = system_rows(len(divs), lo, hi)
    values = rows @ term_matrix(n)
    nonneg = np.all(values >= 0, axis=1)
    filters = filter_masks(n)
    rep = RootsReport(n)
    for r, mask in enumerate(masks.tolist()):
        rep.tested += 1
        is_f = mask in filters
        rep.filters += is_f
        if bool(nonneg[r]) != is_f:
            rep.counterexamples.append({
                "E": [d for k, d in enumerate(divs) if mask >> k & 1],
                "is_filter": is_f,
                "a": dict(zip(divs, values[r].tolist())),
            })
    return rep


def check_roots_theorem(n, jobs=1, cap_override=None):
    """Test (all a_c >= 0) <=> divisor filter over every nonempty E of D(n)."""
    tau = dl.num_divisors(n)
    cap = max(TAU_CAP, cap_override or 0)
    if tau > cap:
        raise CapExceeded(f"tau({n}) = {tau} exceeds the enumeration cap {cap}")
    chunks = [(n, lo, hi) for lo, hi in split_range(1, 1 << tau, max(jobs, 1) * 4)]
    report = RootsReport(n)
    for part in run_chunks(_roots_range, chunks, jobs):
        report.merge(part)
    return report


@lru_cache(maxsize=None)
def _orbit_power_vectors(n):
    """V[d_index, c_index, :] = coefficient vector of sum_{(i,n)=d} xi^(ic)."""
    divs = dl.divisors(n)
    V = np.zeros((len(divs), len(divs), n), dtype=np.int64)
    for di, d in enumerate(divs):
        orbit = [i for i in range(n) if math.gcd(i, n) == d]
        for ci, c in enumerate(divs):
            for i in orbit:
                V[di, ci, (i * c) % n] += 1
    return V


def oracle_discrepancies(n):
    """Compare the integer formula with certified cyclotomic power sums.

    Returns ``(checked, discrepancies)`` over every nonempty E of D(n) and
    every c | n.  A discrepancy is a value the oracle could not certify as an
    integer or that differs from the formula.
    """
    divs = dl.divisors(n)
    tau = len(divs)
    rows, masks = system_rows(tau)
    formula = rows @ term_matrix(n)
    V = _orbit_power_vectors(n)
    coeffs = np.einsum("sd,dcn->scn", rows, V)
    values, ok = as_integer_batch(coeffs, n)
    bad = []
    for r, ci in zip(*np.nonzero(~ok | (values != formula))):
        bad.append({
            "n": n,
            "E": [d for k, d in enumerate(divs) if int(masks[r]) >> k & 1],
            "c": divs[ci],
            "formula": int(formula[r, ci]),
            "oracle": int(values[r, ci]) if ok[r, ci] else None,
        })
    return formula.size, bad


def acp_violations(n):
    """Check the E_p recurrence for every nonempty E and prime p | n.

    For c | n/p:  a^p_c = a_c            if pc | n/p,
                  p a^p_c = (p-1) a_c + a_pc  otherwise.
    Returns ``(checked, violations)``.
    """
    divs = dl.divisors(n)
    index = {d: k for k, d in enumerate(divs)}
    rows, masks = system_rows(len(divs))
    full = rows @ term_matrix(n)
    checked = 0
    bad = []
    for p in dl.prime_divisors(n):
        m = n // p
        sub = dl.divisors(m)
        # column of E_p for divisor e of n/p is membership of p*e in E
        red_rows = rows[:, [index[p * e] for e in sub]]
        keep = red_rows.any(axis=1)
        red = red_rows[keep] @ term_matrix(m)
        a = full[keep]
        kept_masks = masks[keep]
        for ci, c in enumerate(sub):
            lhs = red[:, ci]
            if m % (p * c) == 0:
                ok = lhs == a[:, index[c]]
            else:
                ok = p * lhs == (p - 1) * a[:, index[c]] + a[:, index[p * c]]
            checked += len(ok)
            for r in np.nonzero(~ok)[0]:
                bad.append({"n": n, "p": p, "c": c,
                            "E": [d for k, d in enumerate(divs) if int(kept_masks[r]) >> k & 1]})
    return checked, bad


@lru_cache(maxsize=None)
def _power_maps(n):
    # M[i, k*n + j] = 1 iff i*k = j mod n
    M = np.zeros((n, n * n), dtype=np.int64)
    for i in range(n):
        for k in range(n):
            M[i, k * n + (i * k) % n] = 1
    return M


def subgroup_masks(n):
    """Exponent masks of the subgroups (n/d)Z_n of Z_n."""
    out = set()
    for d in dl.divisors(n):
        step = n // d
        out.add(sum(1 << i for i in range(0, n, step)))
    return out


def explicit_masks(n, samples=None, seed=0):
    """Nonempty exponent masks: all of them, or a seeded random sample."""
    if samples is None:
        return np.arange(1, 1 << n, dtype=np.int64)
    rng = np.random.default_rng(seed)
    out = rng.integers(1, 1 << n, size=samples, dtype=np.int64)
    return out


def explicit_theorem_mismatches(n, masks):
    """Sets where (all a_k certified nonnegative integers) != is a group."""
    if n > EXPLICIT_CAP:
        raise CapExceeded(f"explicit enumeration needs n <= {EXPLICIT_CAP}")
    masks = np.asarray(masks, dtype=np.int64)
    U = (masks[:, None] >> np.arange(n)) & 1
    coeffs = (U @ _power_maps(n)).reshape(len(masks), n, n)
    values, ok = as_integer_batch(coeffs, n)
    predicted = np.all(ok & (values >= 0), axis=1)
    groups = subgroup_masks(n)
    bad = []
    for r, mask in enumerate(masks.tolist()):
        if bool(predicted[r]) != (mask in groups):
            bad.append({"n": n, "exponents": [i for i in range(n) if mask >> i & 1]})
    return len(masks), bad
