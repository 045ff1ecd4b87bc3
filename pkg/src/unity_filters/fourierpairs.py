"""Fourier pairs of {0,1}-matrices over Z_n x Z_n.

A binary n x n matrix ``eps`` is a solution when ``eps / n`` is idempotent in
the group algebra of Z_n x Z_n, i.e. its cyclic self-convolution equals
``n * eps``.  Every nonzero solution is

    eps[i, j] = [ (n/d) | i ] * [ d | j - t * i/(n/d) ]

for a unique divisor d of n and 0 <= t < d.  Everything here is integer
arithmetic; the Fourier partner is evaluated in Z[xi_n] and certified.
"""

from dataclasses import dataclass
import math

import numpy as np

from . import divlattice as dl
from .cyclotomic import as_integer_batch
from .errors import CapExceeded, InvalidInput, NotBinaryPartner
from .parallel import run_chunks

EXHAUSTIVE_CAP = 4
PRUNED_CAP = 5
CLASSIFIED_CAP = 512


class BinaryMatrix:
    """Immutable n x n matrix with entries in {0, 1}."""

    __slots__ = ("n", "entries")

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.int8)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise InvalidInput(f"expected a nonempty square matrix, got shape {arr.shape}")
        if np.any((arr != 0) & (arr != 1)):
            raise InvalidInput("entries must be 0 or 1")
        arr.setflags(write=False)
        self.n = arr.shape[0]
        self.entries = arr

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros((n, n), dtype=np.int8))

    def __eq__(self, other):
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.n, self.entries.tobytes()))

    def __lt__(self, other):
        return self.key() < other.key()

    def key(self):
        """Canonical order: lexicographic on the flattened rows."""
        return (self.n, tuple(self.entries.ravel().tolist()))

    def __repr__(self):
        return f"BinaryMatrix({self.to_rows()})"

    def __str__(self):
        return self.to_text()

    def is_zero(self):
        return not self.entries.any()

    def to_rows(self):
        return ["".join(str(int(v)) for v in row) for row in self.entries]

    def to_text(self):
        return "\n".join(self.to_rows())

    @classmethod
    def from_text(cls, text):
        rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
        return cls.from_rows(rows)

    @classmethod
    def from_rows(cls, rows):
        for r in rows:
            if set(r) - {"0", "1"}:
                raise InvalidInput(f"row {r!r} contains characters other than 0/1")
        return cls([[int(ch) for ch in r] for r in rows])

    def to_json(self):
        return {"n": self.n, "rows": self.to_rows()}

    @classmethod
    def from_json(cls, obj):
        m = cls.from_rows(obj["rows"])
        if "n" in obj and int(obj["n"]) != m.n:
            raise InvalidInput(f"declared n={obj['n']} but got {m.n} rows")
        return m


@dataclass(frozen=True)
class EpsParams:
    n: int
    d: int
    t: int

    def __post_init__(self):
        dl._check_positive(self.n)
        if self.d < 1 or self.n % self.d:
            raise InvalidInput(f"d={self.d} does not divide n={self.n}")
        if not 0 <= self.t < self.d:
            raise InvalidInput(f"t={self.t} outside 0..{self.d - 1}")


def self_convolution(entries):
    """Cyclic self-convolution over Z_n x Z_n (integer array)."""
    a = np.asarray(entries, dtype=np.int64)
    n = a.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    ii, jj = np.nonzero(a)
    for i, j in zip(ii.tolist(), jj.tolist()):
        out += np.roll(a, (i, j), axis=(0, 1))
    return out


def is_idempotent(m):
    n = m.n
    total = int(m.entries.sum())
    # summing both sides gives total^2 = n * total
    if total not in (0, n):
        return False
    return bool(np.array_equal(self_convolution(m.entries), n * m.entries.astype(np.int64)))


def eps_array(n, d, t):
    EpsParams(n, d, t)
    step = n // d
    i = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    return ((i % step == 0) & ((j - t * (i // step)) % d == 0)).astype(np.int8)


def build_eps(p, d=None, t=None):
    """The classified solution for ``EpsParams`` (or ``build_eps(n, d, t)``)."""
    if not isinstance(p, EpsParams):
        p = EpsParams(p, d, t)
    return BinaryMatrix(eps_array(p.n, p.d, p.t))


def classify(m):
    """The unique (d, t) of a nonzero solution; None for the zero matrix.

    Raises InvalidInput when ``m`` is not idempotent.  Returns None as well
    if the structure read off rows 0 and n/d does not rebuild ``m`` (which
    would contradict the classification).
    """
    if not is_idempotent(m):
        raise InvalidInput("classify needs an idempotent matrix")
    if m.is_zero():
        return None
    n = m.n
    row_sum = int(m.entries[0].sum())
    if row_sum == 0 or n % row_sum:
        return None
    d = n // row_sum
    step = n // d
    row = m.entries[step % n]
    ones = np.nonzero(row)[0]
    if len(ones) == 0:
        return None
    t = int(ones[0]) % d
    params = EpsParams(n, d, t)
    return params if build_eps(params) == m else None


def is_trivial(m):
    return m.is_zero()


def fourier_partner(m):
    """Dual transform: partner[k, l] = (1/n) sum_ij eps[i, j] xi^-(ik + jl).

    Each sum is formed exactly in Z[xi_n] and certified to equal 0 or n.
    """
    n = m.n
    ii, jj = np.nonzero(m.entries)
    k = np.arange(n)
    # exponent of xi for entry (k, l) and support point s
    exps = (-(ii[None, None, :] * k[:, None, None] + jj[None, None, :] * k[None, :, None])) % n
    coeffs = np.zeros((n, n, n), dtype=np.int64)
    kk, ll, ss = np.indices(exps.shape)
    np.add.at(coeffs, (kk.ravel(), ll.ravel(), exps.ravel()), 1)
    values, ok = as_integer_batch(coeffs, n)
    if not np.all(ok) or np.any((values != 0) & (values != n)):
        raise NotBinaryPartner("a partner entry is not exactly 0 or 1")
    return BinaryMatrix((values // n).astype(np.int8))


def shift(m, d, t):
    """Shift row i = (n/d)s cyclically right by t*s columns."""
    n = m.n
    if d < 1 or n % d:
        raise InvalidInput(f"d={d} does not divide n={n}")
    step = n // d
    rows = np.nonzero(m.entries.any(axis=1))[0]
    if np.any(rows % step):
        raise InvalidInput(f"row support not contained in multiples of {step}")
    out = np.array(m.entries)
    for s in range(d):
        out[s * step] = np.roll(m.entries[s * step], t * s)
    return BinaryMatrix(out)


def classified_solutions(n):
    """Zero matrix plus build_eps(n, d, t) for every d | n, 0 <= t < d."""
    if n > CLASSIFIED_CAP:
        raise CapExceeded(f"classified enumeration capped at n <= {CLASSIFIED_CAP}")
    out = [BinaryMatrix.zeros(n)]
    for d in dl.divisors(n):
        for t in range(d):
            out.append(build_eps(n, d, t))
    return sorted(out)


def subgroup_indicator_rows(n):
    """Indicator vectors of the subgroups e*Z_n of Z_n."""
    return [tuple(int(j % e == 0) for j in range(n)) for e in dl.divisors(n)]


def _batch_idempotent(batch, n):
    """Mask of idempotent matrices in a (B, n, n) int array."""
    total = batch.sum(axis=(1, 2))
    keep = (total == 0) | (total == n)
    cand = batch[keep]
    if len(cand) == 0:
        return keep
    conv = np.zeros_like(cand)
    for i in range(n):
        for j in range(n):
            w = cand[:, i, j][:, None, None]
            if w.any():
                conv += w * np.roll(cand, (i, j), axis=(1, 2))
    good = np.all(conv == n * cand, axis=(1, 2))
    out = np.zeros(len(batch), dtype=bool)
    out[np.nonzero(keep)[0][good]] = True
    return out


def _rest_bits(count):
    return ((np.arange(1 << count, dtype=np.int64)[:, None] >> np.arange(count)) & 1).astype(np.int64)


def _scan_first_row(n, row0, prune):
    """All idempotents whose first row is ``row0``."""
    row0 = np.array(row0, dtype=np.int64)
    found = []
    if prune:
        cols = subgroup_indicator_rows(n) if row0.any() else [tuple([0] * n)]
        col_choices = [np.array(c, dtype=np.int64) for c in cols if c[0] == row0[0]]
        inner = (n - 1) * (n - 1)
    else:
        col_choices = [None]
        inner = (n - 1) * n
    bits = _rest_bits(inner)
    for col in col_choices:
        batch = np.zeros((len(bits), n, n), dtype=np.int64)
        batch[:, 0, :] = row0
        if prune:
            batch[:, :, 0] = col
            batch[:, 1:, 1:] = bits.reshape(len(bits), n - 1, n - 1)
        else:
            batch[:, 1:, :] = bits.reshape(len(bits), n - 1, n)
        for b in np.nonzero(_batch_idempotent(batch, n))[0]:
            found.append(batch[b].astype(np.int8))
    return found


def enumerate_idempotents(n, mode="classified", prune=True, allow_n5=False, jobs=1,
                          cap_override=None):
    """All binary idempotent solutions for Z_n x Z_n, sorted canonically.

    ``classified`` builds them from the parameter list.  ``exhaustive`` scans
    binary matrices, partitioned by first row across workers: with
    ``prune`` the first row and first column are restricted to subgroup
    indicators (zero row only for the zero matrix); without it every one of
    the 2^(n^2) matrices is tested.
    """
    dl._check_positive(n)
    if mode == "classified":
        return classified_solutions(n)
    if mode != "exhaustive":
        raise InvalidInput(f"unknown mode {mode!r}")
    cap = EXHAUSTIVE_CAP
    if prune and allow_n5:
        cap = PRUNED_CAP
    cap = max(cap, cap_override or 0)
    if n > cap:
        raise CapExceeded(f"exhaustive enumeration capped at n <= {cap}")
    if prune:
        rows = [tuple([0] * n)] + subgroup_indicator_rows(n)
    else:
        rows = [tuple((r >> j) & 1 for j in range(n)) for r in range(1 << n)]
    chunks = [(n, r, prune) for r in rows]
    out = []
    for part in run_chunks(_scan_first_row, chunks, jobs):
        out.extend(BinaryMatrix(a) for a in part)
    return sorted(set(out))


def partner_family_formula(n, d, t):
    """Closed form of the partner of build_eps(n, d, t).

    partner[k, l] = [ (n/d) | l ] * [ d | k + t * l/(n/d) ].
    """
    step = n // d
    k = np.arange(n)[:, None]
    l = np.arange(n)[None, :]
    return BinaryMatrix(((l % step == 0) & ((k + t * (l // step)) % d == 0)).astype(np.int8))


def partner_params(n, d, t):
    """(d', t') with fourier_partner(build_eps(n, d, t)) == build_eps(n, d', t')."""
    return classify(fourier_partner(build_eps(n, d, t)))

