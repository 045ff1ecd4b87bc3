"""Alternating sums over set systems and their filter characterization.

Subsets of the ground set ``{0, ..., size-1}`` are bitmasks.  A set system is
a canonical sorted tuple of member masks.  For a system E, an additive
weight mu and a subset C the alternating sum is

    a_C = (-1)^|N| * sum_{D in E} (-1)^|C u D| * exp(mu(C - D)),

and E has every a_C >= 0 exactly when it is a filter (all supersets of a
fixed A).  :func:`check_theorem` tests that equivalence on every nonempty
system of a small ground set.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .errors import CapExceeded, EmptyReduction, InvalidInput
from .parallel import run_chunks, split_range

MAX_GROUND = 16
EXHAUSTIVE_CAP = 4
SAMPLED_CAP = 8
_CHUNK_CELLS = 2**20


def popcount(x):
    return bin(x).count("1")


def drop_bit(mask, p):
    """Remove bit ``p`` from ``mask`` and close the gap."""
    low = mask & ((1 << p) - 1)
    return low | ((mask >> (p + 1)) << p)


@dataclass(frozen=True)
class GroundSet:
    size: int

    def __post_init__(self):
        if not 0 <= self.size <= MAX_GROUND:
            raise InvalidInput(f"ground set size must be in 0..{MAX_GROUND}, got {self.size}")

    @property
    def full(self):
        return (1 << self.size) - 1

    def subsets(self):
        return range(1 << self.size)

    def contains(self, mask):
        return 0 <= mask <= self.full


@dataclass(frozen=True)
class SetSystem:
    ground: GroundSet
    members: tuple

    def __init__(self, ground, members):
        if isinstance(ground, int):
            ground = GroundSet(ground)
        ms = tuple(sorted(set(int(m) for m in members)))
        if not ms:
            raise InvalidInput("empty set systems are not allowed")
        bad = [m for m in ms if not ground.contains(m)]
        if bad:
            raise InvalidInput(f"members {bad} are not subsets of a {ground.size}-element set")
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "members", ms)

    @classmethod
    def power_set(cls, size):
        return cls(size, range(1 << size))

    @classmethod
    def up_set(cls, size, a):
        """The filter generated by ``a``."""
        return cls(size, [d for d in range(1 << size) if d & a == a])

    @classmethod
    def from_indicator(cls, size, bits):
        """System whose member D is present iff bit D of ``bits`` is set."""
        return cls(size, [d for d in range(1 << size) if bits >> d & 1])

    def indicator(self):
        out = 0
        for d in self.members:
            out |= 1 << d
        return out

    def __len__(self):
        return len(self.members)

    def __contains__(self, mask):
        return mask in self.members

    def union(self, extra):
        return SetSystem(self.ground, self.members + tuple(extra))

    def without(self, removed):
        removed = set(removed)
        return SetSystem(self.ground, [d for d in self.members if d not in removed])


@dataclass(frozen=True)
class AtomWeights:
    weights: tuple

    def __init__(self, weights):
        w = tuple(float(x) for x in weights)
        for x in w:
            if not math.isfinite(x) or x < 0:
                raise InvalidInput(f"atom weights must be finite and >= 0, got {x}")
        if len(w) > MAX_GROUND:
            raise InvalidInput(f"at most {MAX_GROUND} atoms")
        object.__setattr__(self, "weights", w)

    @classmethod
    def random(cls, size, rng, low=0.05, high=3.0):
        return cls(rng.uniform(low, high, size=size))

    @property
    def size(self):
        return len(self.weights)

    def measure(self, mask):
        return sum(w for k, w in enumerate(self.weights) if mask >> k & 1)

    def restrict(self, p):
        return AtomWeights(self.weights[:p] + self.weights[p + 1:])

    def subset_measures(self):
        """Array of mu(S) for every subset mask S."""
        n = self.size
        out = np.zeros(1 << n)
        for k, w in enumerate(self.weights):
            bit = 1 << k
            out[bit:2 * bit] = out[:bit] + w
        return out


def _check_weights(E, mu):
    if mu.size != E.ground.size:
        raise InvalidInput(f"weights for {mu.size} atoms, ground set has {E.ground.size}")


def alt_sum(E, mu, C):
    _check_weights(E, mu)
    if not E.ground.contains(C):
        raise InvalidInput(f"{C} is not a subset of the ground set")
    n = E.ground.size
    total = 0.0
    for D in E.members:
        sign = -1 if popcount(C | D) % 2 else 1
        total += sign * math.exp(mu.measure(C & ~D))
    return -total if n % 2 else total


def alt_sums(E, mu):
    """a_C for every C, as a list indexed by mask."""
    return [alt_sum(E, mu, C) for C in E.ground.subsets()]


def tolerance(E, mu, C):
    """Scaled nonnegativity slack for a_C."""
    biggest = max(math.exp(mu.measure(C & ~D)) for D in E.members)
    return 1e-9 * (1 + len(E) * biggest)


def is_filter(E):
    """The generator A if E is exactly the up-set of A, else None."""
    if not E.members:
        raise InvalidInput("empty set system")
    a = E.ground.full
    for d in E.members:
        a &= d
    expected = [d for d in E.ground.subsets() if d & a == a]
    return a if list(E.members) == expected else None


def filter_alt_sum_closed_form(size, A, mu, C):
    """a_C for the filter generated by A, from the product formula."""
    full = (1 << size) - 1
    if mu.size != size:
        raise InvalidInput("weight vector does not match ground size")
    if A & ~full or C & ~full:
        raise InvalidInput("A and C must be subsets of the ground set")
    if C | A != full:
        return 0.0
    rest = full & ~A
    out = math.exp(mu.measure(rest))
    for p in range(size):
        if rest >> p & 1:
            out *= 1 + math.exp(-mu.weights[p])
    return out


def reduce(E, p):
    """E_p = {D - p : p in D in E} on the ground set with p removed."""
    n = E.ground.size
    if not 0 <= p < n:
        raise InvalidInput(f"element {p} not in a {n}-element ground set")
    reduced = [drop_bit(d, p) for d in E.members if d >> p & 1]
    if not reduced:
        raise EmptyReduction(f"no member contains element {p}")
    return SetSystem(n - 1, reduced)


@dataclass
class FilterReport:
    size: int
    weights: tuple
    tested: int = 0
    filters: int = 0
    counterexamples: list = field(default_factory=list)

    def merge(self, other):
        self.tested += other.tested
        self.filters += other.filters
        self.counterexamples = sorted(self.counterexamples + other.counterexamples,
                                      key=lambda c: c["members"])
        return self

    @property
    def failed(self):
        return len(self.counterexamples)

    def as_dict(self):
        return {
            "size": self.size,
            "weights": list(self.weights),
            "tested": self.tested,
            "filters": self.filters,
            "passed": self.tested - self.failed,
            "failed": self.failed,
            "counterexamples": self.counterexamples,
        }


def _term_tables(size, weights):
    mu = AtomWeights(weights)
    m = 1 << size
    meas = mu.subset_measures()
    idx = np.arange(m)
    C = idx[:, None]
    D = idx[None, :]
    mag = np.exp(meas[C & ~D])
    parity = np.vectorize(popcount)(C | D) % 2
    sign = np.where((parity + size) % 2 == 1, -1.0, 1.0)
    return sign * mag, mag


def _upset_table(size):
    m = 1 << size
    out = {}
    for a in range(m):
        bits = 0
        for d in range(m):
            if d & a == a:
                bits |= 1 << d
        out[bits] = a
    return out


def _indicator_rows(bits_list, m):
    rows = np.zeros((len(bits_list), m), dtype=np.float64)
    for r, bits in enumerate(bits_list):
        for d in range(m):
            if bits >> d & 1:
                rows[r, d] = 1.0
    return rows


def _check_block(size, weights, bits_list):
    terms, mag = _term_tables(size, weights)
    ups = _upset_table(size)
    m = 1 << size
    rep = FilterReport(size, tuple(weights))
    step = max(1, _CHUNK_CELLS // (m * m))
    for lo in range(0, len(bits_list), step):
        block = bits_list[lo:lo + step]
        S = _indicator_rows(block, m)
        values = S @ terms.T
        counts = S.sum(axis=1)
        biggest = (S[:, None, :] * mag[None, :, :]).max(axis=2)
        tol = 1e-9 * (1 + counts[:, None] * biggest)
        nonneg = np.all(values >= -tol, axis=1)
        for r, bits in enumerate(block):
            gen = ups.get(bits)
            rep.tested += 1
            if gen is not None:
                rep.filters += 1
            if bool(nonneg[r]) != (gen is not None):
                members = [d for d in range(m) if bits >> d & 1]
                rep.counterexamples.append({
                    "members": members,
                    "is_filter": gen is not None,
                    "alt_sums": [float(v) for v in values[r]],
                })
    return rep


def _check_range(size, weights, lo, hi):
    return _check_block(size, weights, list(range(lo, hi)))


def sample_systems(size, count, seed=0):
    """Deterministic mix of random systems (as indicator ints).

    Half are uniform over all nonempty systems; the rest are filters and
    filters with one member toggled, since uniform draws almost never land
    on or next to a filter.
    """
    rng = np.random.default_rng(seed)
    m = 1 << size
    ups = list(_upset_table(size))
    out = []
    while len(out) < count:
        kind = rng.integers(0, 4)
        if kind < 2:
            draw = rng.integers(0, 2, size=m)
            bits = sum(1 << d for d in range(m) if draw[d])
        else:
            bits = ups[rng.integers(0, len(ups))]
            if kind == 3:
                bits ^= 1 << int(rng.integers(0, m))
        if bits:
            out.append(bits)
    return out


def check_theorem(ground, mu, samples=None, seed=0, jobs=1, cap_override=None):
    """Test (all a_C >= -tol) <=> filter over nonempty systems.

    Exhaustive over all 2^(2^n) - 1 systems when ``samples`` is None
    (n <= 4), otherwise over ``samples`` random nonempty systems (n <= 8).
    """
    if isinstance(ground, int):
        ground = GroundSet(ground)
    size = ground.size
    if mu.size != size:
        raise InvalidInput("weight vector does not match ground size")
    m = 1 << size
    weights = mu.weights
    if samples is None:
        cap = max(EXHAUSTIVE_CAP, cap_override or 0)
        if size > cap:
            raise CapExceeded(f"exhaustive filter check needs size <= {cap}, got {size}")
        chunks = [(size, weights, lo, hi) for lo, hi in split_range(1, 1 << m, max(jobs, 1) * 4)]
        parts = run_chunks(_check_range, chunks, jobs)
    else:
        cap = max(SAMPLED_CAP, cap_override or 0)
        if size > cap:
            raise CapExceeded(f"sampled filter check needs size <= {cap}, got {size}")
        bits_list = sample_systems(size, samples, seed)
        pieces = split_range(0, len(bits_list), max(jobs, 1) * 4)
        chunks = [(size, weights, bits_list[lo:hi]) for lo, hi in pieces]
        parts = run_chunks(_check_block, chunks, jobs)
    report = FilterReport(size, tuple(weights))
    for part in parts:
        report.merge(part)
    return report
