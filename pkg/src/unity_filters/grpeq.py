"""The quadratic group-equation system and its pairing solutions.

For a finite abelian group G the unknowns are g(x, y), x, y in G, subject to

    g(x, y) = sum_{y1 + y2 = y} g(x, y1) g(x, y2)     (grpeq01)
    g(x, y) = sum_{x1 + x2 = x} g(x1, y) g(x2, y)     (grpeq02)
    1 = sum_y g(0, y)                                (grpeq03)
    1 = sum_x g(x, 0)                                (grpeq04)

Solutions are stored exactly: every entry is ``numerator / denominator`` with
the numerator in Z[xi_L] and one common positive denominator.  Checks clear
the denominator and decide each equation with a cyclotomic zero test.
"""

from dataclasses import dataclass, field
from functools import cached_property
import itertools
import math

import numpy as np

from . import divlattice as dl
from .cyclotomic import CyclotomicElement, as_integer_batch, is_zero_batch, reduce_batch
from .errors import ArithmeticOverflow, CapExceeded, InvalidInput
from .fourierpairs import BinaryMatrix, is_idempotent
from .parallel import run_chunks

GROUP_CAP = 64
PAIRING_SEARCH_CAP = 10**5


class AbelianGroup:
    """Z_{n1} x ... x Z_{nr}; elements are tuples, indexed in lexicographic order."""

    def __init__(self, factors, cap=GROUP_CAP):
        fs = tuple(int(f) for f in factors)
        if not fs or any(f < 1 for f in fs):
            raise InvalidInput(f"factors must be positive integers, got {factors!r}")
        order = math.prod(fs)
        if order > cap:
            raise CapExceeded(f"group order {order} exceeds cap {cap}")
        self.factors = fs
        self.order = order
        self.elements = list(itertools.product(*(range(f) for f in fs)))
        self.index = {x: k for k, x in enumerate(self.elements)}

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return f"AbelianGroup({list(self.factors)})"

    @property
    def exponent(self):
        return math.lcm(*self.factors)

    def add(self, x, y):
        return tuple((a + b) % f for a, b, f in zip(x, y, self.factors))

    def neg(self, x):
        return tuple((-a) % f for a, f in zip(x, self.factors))

    def element(self, x):
        """Coerce an int (cyclic groups) or a sequence to an element tuple."""
        if isinstance(x, int):
            x = (x,)
        x = tuple(int(a) % f for a, f in zip(x, self.factors))
        if len(x) != len(self.factors):
            raise InvalidInput(f"{x} has the wrong number of coordinates")
        return x

    @cached_property
    def add_table(self):
        n = self.order
        t = np.zeros((n, n), dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                t[i, j] = self.index[self.add(x, y)]
        return t

    @cached_property
    def sub_table(self):
        """sub_table[y, y1] = index of y - y1."""
        n = self.order
        t = np.zeros((n, n), dtype=np.int64)
        for i, x in enumerate(self.elements):
            for j, y in enumerate(self.elements):
                t[i, j] = self.index[self.add(x, self.neg(y))]
        return t

    def element_order(self, x):
        return math.lcm(*(f // math.gcd(a, f) for a, f in zip(x, self.factors)))

    def generated(self, gens):
        """Index set of the subgroup generated by ``gens``."""
        seen = {0}
        frontier = [self.elements[0]]
        gens = [self.element(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    k = self.index[y]
                    if k not in seen:
                        seen.add(k)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def subgroups(self):
        """All subgroups as frozensets of element indices, sorted by (size, members)."""
        found = {frozenset({0})}
        todo = [frozenset({0})]
        while todo:
            h = todo.pop()
            for k in range(self.order):
                if k in h:
                    continue
                gens = self.generators(h) + [self.elements[k]]
                s = self.generated(gens)
                if s not in found:
                    found.add(s)
                    todo.append(s)
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def generators(self, subgroup):
        """A generating list for a subgroup (greedy, largest orders first)."""
        members = sorted(subgroup, key=lambda k: (-self.element_order(self.elements[k]), k))
        gens = []
        span = frozenset({0})
        for k in members:
            if k not in span:
                gens.append(self.elements[k])
                span = self.generated(gens)
            if span == subgroup:
                break
        return gens


class SubgroupPairing:
    """A bimultiplicative omega: H1 x H2 -> mu_d with |H1| = |H2| = d.

    ``omega`` maps pairs of elements ``(x, y)`` to exponents mod d, meaning
    exp(2 pi i e / d); it must cover all of H1 x H2.
    """

    def __init__(self, group, h1_gens, h2_gens, omega):
        self.group = group
        self.h1_gens = [group.element(g) for g in h1_gens]
        self.h2_gens = [group.element(g) for g in h2_gens]
        self.H1 = group.generated(self.h1_gens)
        self.H2 = group.generated(self.h2_gens)
        if len(self.H1) != len(self.H2):
            raise InvalidInput(f"|H1| = {len(self.H1)} differs from |H2| = {len(self.H2)}")
        self.d = len(self.H1)
        table = {}
        for (x, y), e in dict(omega).items():
            kx, ky = group.index[group.element(x)], group.index[group.element(y)]
            if kx not in self.H1 or ky not in self.H2:
                raise InvalidInput(f"omega given outside H1 x H2 at {(x, y)}")
            table[kx, ky] = int(e) % self.d
        missing = [(a, b) for a in self.H1 for b in self.H2 if (a, b) not in table]
        if missing:
            raise InvalidInput(f"omega table misses {len(missing)} pairs")
        self.table = table
        self._validate()

    def _validate(self):
        add = self.group.add_table
        d = self.d
        for x, x2 in itertools.product(self.H1, repeat=2):
            for y in self.H2:
                if (self.table[x, y] + self.table[x2, y]) % d != self.table[add[x, x2], y]:
                    raise InvalidInput("omega is not multiplicative in the first argument")
        for x in self.H1:
            for y, y2 in itertools.product(self.H2, repeat=2):
                if (self.table[x, y] + self.table[x, y2]) % d != self.table[x, add[y, y2]]:
                    raise InvalidInput("omega is not multiplicative in the second argument")

    def to_json(self):
        els = self.group.elements
        return {
            "group": list(self.group.factors),
            "H1": [list(g) for g in self.h1_gens],
            "H2": [list(g) for g in self.h2_gens],
            "omega": [[list(els[a]), list(els[b]), e] for (a, b), e in sorted(self.table.items())],
        }

    @classmethod
    def from_json(cls, obj, group=None):
        group = group or AbelianGroup(obj["group"])
        omega = {(tuple(x), tuple(y)): e for x, y, e in obj["omega"]}
        return cls(group, obj["H1"], obj["H2"], omega)


class GroupSolution:
    """Table g(x, y) = numerators[x, y] / denominator, numerators in Z[xi_L]."""

    def __init__(self, group, modulus, denominator, numerators):
        num = np.array(numerators, dtype=np.int64)
        if num.shape != (group.order, group.order, modulus):
            raise InvalidInput(f"numerator array has shape {num.shape}")
        if denominator < 1:
            raise InvalidInput("denominator must be positive")
        num.setflags(write=False)
        self.group = group
        self.modulus = modulus
        self.denominator = int(denominator)
        self.numerators = num

    def entry(self, x, y):
        """(numerator, denominator) at elements x, y."""
        g = self.group
        kx, ky = g.index[g.element(x)], g.index[g.element(y)]
        return CyclotomicElement(self.modulus, self.numerators[kx, ky].tolist()), self.denominator

    def lift(self, m):
        if m % self.modulus:
            raise InvalidInput(f"{m} is not a multiple of {self.modulus}")
        f = m // self.modulus
        out = np.zeros(self.numerators.shape[:2] + (m,), dtype=np.int64)
        out[:, :, ::f] = self.numerators
        return GroupSolution(self.group, m, self.denominator, out)

    def canonical(self):
        """Equal-valued solution with reduced numerators and lowest denominator."""
        red = reduce_batch(self.numerators, self.modulus)
        red = np.asarray(red, dtype=np.int64)
        g = self.denominator
        for v in np.unique(np.abs(red)):
            g = math.gcd(g, int(v))
        num = np.zeros_like(self.numerators)
        num[:, :, :red.shape[2]] = red // g
        return GroupSolution(self.group, self.modulus, self.denominator // g, num)

    def key(self):
        c = self.canonical()
        return (self.group.factors, c.modulus, c.denominator, c.numerators.tobytes())

    def __eq__(self, other):
        if not isinstance(other, GroupSolution):
            return NotImplemented
        if self.group != other.group:
            return False
        m = math.lcm(self.modulus, other.modulus)
        a, b = self.lift(m), other.lift(m)
        diff = b.denominator * a.numerators - a.denominator * b.numerators
        return bool(np.all(is_zero_batch(diff, m)))

    def __hash__(self):
        return hash(self.group.factors)

    def __repr__(self):
        return (f"GroupSolution(group={list(self.group.factors)}, L={self.modulus}, "
                f"denominator={self.denominator})")

    def to_json(self):
        """Monomial form: entry e means xi_L^e / denominator, None means 0."""
        L = self.modulus
        rows = []
        for kx in range(self.group.order):
            row = []
            for ky in range(self.group.order):
                row.append(_monomial_exponent(self.numerators[kx, ky], L))
            rows.append(row)
        return {"group": list(self.group.factors), "modulus": L,
                "denominator": self.denominator, "entries": rows}

    @classmethod
    def from_json(cls, obj):
        group = AbelianGroup(obj["group"])
        den = int(obj["denominator"])
        L = int(obj.get("modulus") or math.lcm(group.exponent, den))
        num = np.zeros((group.order, group.order, L), dtype=np.int64)
        entries = obj["entries"]
        if len(entries) != group.order or any(len(r) != group.order for r in entries):
            raise InvalidInput("entries must be a |G| x |G| table")
        for kx, row in enumerate(entries):
            for ky, e in enumerate(row):
                if e is not None:
                    num[kx, ky, int(e) % L] = 1
        return cls(group, L, den, num)


def _monomial_exponent(vec, L):
    nz = np.nonzero(vec)[0]
    if len(nz) == 0:
        return None
    if len(nz) == 1 and vec[nz[0]] == 1:
        return int(nz[0])
    if is_zero_batch(vec[None, :], L)[0]:
        return None
    for e in range(L):
        probe = np.array(vec)
        probe[e] -= 1
        if is_zero_batch(probe[None, :], L)[0]:
            return e
    raise InvalidInput("entry is not a single root of unity; no JSON form")


# ---- verification -----------------------------------------------------------

@dataclass
class EquationReport:
    group: tuple
    total: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        return {"group": list(self.group), "equations": self.total,
                "failed": len(self.failures), "failures": self.failures}


def _square_along(rows, sub, L):
    """out[y] = sum_{y1} rows[y1] * rows[y - y1] in Z[xi_L] (coefficient arrays)."""
    out = np.zeros_like(rows)
    for y1, e1 in zip(*np.nonzero(rows)):
        out += rows[y1, e1] * np.roll(rows[sub[:, y1]], e1, axis=1)
    return out


def verify_equations(g):
    """Exact check of all 2|G|^2 + 2 equations; failures are reported, not raised."""
    G = g.group
    L, den, num = g.modulus, g.denominator, g.numerators
    big = int(np.max(np.abs(num))) if num.size else 0
    if big * big * G.order * L >= 2**62 or den * big >= 2**62:
        raise ArithmeticOverflow("numerators too large for exact int64 verification")
    sub = G.sub_table
    els = G.elements
    rep = EquationReport(G.factors, total=2 * G.order**2 + 2)
    for x in range(G.order):
        diff = den * num[x] - _square_along(num[x], sub, L)
        for y in np.nonzero(~is_zero_batch(diff, L))[0]:
            rep.failures.append({"equation": "grpeq01", "x": list(els[x]), "y": list(els[y])})
    for y in range(G.order):
        col = num[:, y]
        diff = den * col - _square_along(col, sub, L)
        for x in np.nonzero(~is_zero_batch(diff, L))[0]:
            rep.failures.append({"equation": "grpeq02", "x": list(els[x]), "y": list(els[y])})
    unit = np.zeros(L, dtype=np.int64)
    unit[0] = den
    if not is_zero_batch((unit - num[0].sum(axis=0))[None, :], L)[0]:
        rep.failures.append({"equation": "grpeq03"})
    if not is_zero_batch((unit - num[:, 0].sum(axis=0))[None, :], L)[0]:
        rep.failures.append({"equation": "grpeq04"})
    rep.failures.sort(key=lambda f: (f["equation"], f.get("x", []), f.get("y", [])))
    return rep


# ---- constructions ----------------------------------------------------------

def build_pairing_solution(group, pairing):
    """g(x, y) = omega(x, y)/d on H1 x H2, zero elsewhere."""
    if not isinstance(pairing, SubgroupPairing):
        raise InvalidInput("expected a SubgroupPairing")
    if pairing.group != group:
        raise InvalidInput("pairing belongs to a different group")
    d = pairing.d
    L = math.lcm(group.exponent, d)
    f = L // d
    num = np.zeros((group.order, group.order, L), dtype=np.int64)
    for (kx, ky), e in pairing.table.items():
        num[kx, ky, (e * f) % L] = 1
    return GroupSolution(group, L, d, num)


def build_cyclic_solution(n, d, t):
    """g(x, y) = zeta^(st u)/d at x = (n/d)s, y = (n/d)u, with zeta = exp(2 pi i/d)."""
    dl._check_positive(n)
    if d < 1 or n % d:
        raise InvalidInput(f"d={d} does not divide n={n}")
    if not 0 <= t < d:
        raise InvalidInput(f"t={t} outside 0..{d - 1}")
    G = AbelianGroup([n], cap=max(GROUP_CAP, n))
    step = n // d
    num = np.zeros((n, n, n), dtype=np.int64)
    for s in range(d):
        for u in range(d):
            num[s * step, u * step, (step * t * s * u) % n] = 1
    return GroupSolution(G, n, d, num)


def enumerate_cyclic_solutions(n, cap_override=None):
    cap = max(GROUP_CAP, cap_override or 0)
    if n > cap:
        raise CapExceeded(f"cyclic enumeration capped at n <= {cap}")
    return [build_cyclic_solution(n, d, t) for d in dl.divisors(n) for t in range(d)]


def _verify_cyclic(n, d, t):
    return (d, t), verify_equations(build_cyclic_solution(n, d, t))


def verify_cyclic_family(n, jobs=1):
    """Verify every (d, t) solution for Z_n; returns {(d, t): EquationReport}."""
    chunks = [(n, d, t) for d in dl.divisors(n) for t in range(d)]
    return dict(run_chunks(_verify_cyclic, chunks, jobs))


# ---- pairings on general groups ---------------------------------------------

def enumerate_pairings(group, H1, H2):
    """Every bimultiplicative omega on H1 x H2 (index sets of equal size)."""
    if len(H1) != len(H2):
        return []
    d = len(H1)
    g1 = group.generators(H1)
    g2 = group.generators(H2)
    count = d ** (len(g1) * len(g2))
    if count > PAIRING_SEARCH_CAP:
        raise CapExceeded(f"{count} generator assignments exceed {PAIRING_SEARCH_CAP}")
    coords1 = _coordinates(group, g1)
    coords2 = _coordinates(group, g2)
    out = []
    for values in itertools.product(range(d), repeat=len(g1) * len(g2)):
        E = np.array(values, dtype=np.int64).reshape(len(g1), len(g2))
        omega = {}
        for kx, a in coords1.items():
            for ky, b in coords2.items():
                omega[group.elements[kx], group.elements[ky]] = int(np.array(a) @ E @ np.array(b)) % d
        try:
            out.append(SubgroupPairing(group, g1, g2, omega))
        except InvalidInput:
            continue  # assignment not well defined on the subgroup
    return out


def _coordinates(group, gens):
    """One coefficient vector per subgroup element in terms of ``gens``."""
    orders = [group.element_order(g) for g in gens]
    coords = {}
    for alpha in itertools.product(*(range(o) for o in orders)):
        x = group.elements[0]
        for a, g in zip(alpha, gens):
            for _ in range(a):
                x = group.add(x, g)
        coords.setdefault(group.index[x], alpha)
    return coords


def pairing_solutions(group):
    """All (H1, H2, omega, solution) over subgroup pairs with |H1| = |H2|."""
    subs = group.subgroups()
    out = []
    for H1 in subs:
        for H2 in subs:
            if len(H1) != len(H2):
                continue
            for p in enumerate_pairings(group, H1, H2):
                out.append((H1, H2, p, build_pairing_solution(group, p)))
    return out


# ---- correspondence with binary idempotents ---------------------------------

def g_from_eps(m):
    """g[i, j] = (1/n) sum_k eps[i, k] xi_n^(jk) for a nonzero idempotent eps."""
    if not isinstance(m, BinaryMatrix):
        raise InvalidInput("expected a BinaryMatrix")
    if m.is_zero() or not is_idempotent(m):
        raise InvalidInput("g_from_eps needs a nonzero idempotent matrix")
    n = m.n
    num = np.zeros((n, n, n), dtype=np.int64)
    for i, k in zip(*np.nonzero(m.entries)):
        j = np.arange(n)
        num[i, j, (j * k) % n] += 1
    G = AbelianGroup([n], cap=max(GROUP_CAP, n))
    return GroupSolution(G, n, n, num).canonical()


def eps_from_g(g):
    """eps[i, k] = sum_j g[i, j] xi_n^(-jk); must certify to 0 or 1 entrywise."""
    G = g.group
    if len(G.factors) != 1:
        raise InvalidInput("eps_from_g needs a cyclic group")
    n = G.order
    L = math.lcm(g.modulus, n)
    h = g.lift(L)
    f = L // n
    out = np.zeros((n, n, L), dtype=np.int64)
    for j in range(n):
        for k in range(n):
            out[:, k, :] += np.roll(h.numerators[:, j, :], (-j * k * f) % L, axis=1)
    values, ok = as_integer_batch(out, L)
    if not np.all(ok) or np.any((values != 0) & (values != h.denominator)):
        raise InvalidInput("g does not transform to a {0,1} matrix")
    return BinaryMatrix((values // h.denominator).astype(np.int8))


@dataclass
class BridgeReport:
    n: int
    eps_count: int = 0
    solution_count: int = 0
    matched: int = 0
    roundtrip_failures: int = 0
    verify_failures: int = 0
    parameter_map: dict = field(default_factory=dict)

    @property
    def bijection(self):
        expected = dl.sum_divisors(self.n)
        return (self.eps_count == self.solution_count == self.matched == expected
                and not self.roundtrip_failures and not self.verify_failures)

    def as_dict(self):
        return {"n": self.n, "eps": self.eps_count, "solutions": self.solution_count,
                "matched": self.matched, "sigma": dl.sum_divisors(self.n),
                "roundtrip_failures": self.roundtrip_failures,
                "verify_failures": self.verify_failures,
                "bijection": self.bijection,
                "parameter_map": {f"{d},{t}": list(v) for (d, t), v in sorted(self.parameter_map.items())}}


def bridge_check(n):
    """g_from_eps as a map from nonzero classified idempotents onto the cyclic solutions."""
    from .fourierpairs import build_eps

    sols = {}
    for d in dl.divisors(n):
        for t in range(d):
            sols[build_cyclic_solution(n, d, t).key()] = (d, t)
    rep = BridgeReport(n, solution_count=len(sols))
    hit = set()
    for d in dl.divisors(n):
        for t in range(d):
            eps = build_eps(n, d, t)
            rep.eps_count += 1
            g = g_from_eps(eps)
            if not verify_equations(g).passed:
                rep.verify_failures += 1
            target = sols.get(g.key())
            if target is not None and target not in hit:
                hit.add(target)
                rep.matched += 1
                rep.parameter_map[d, t] = target
            if eps_from_g(g) != eps:
                rep.roundtrip_failures += 1
    return rep
