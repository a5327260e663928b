"""Exact arithmetic over Q: monomials, sparse polynomials, free modules and
sparse Gaussian elimination.

Monomials are exponent tuples.  The monomial order is weighted
degree-reverse-lexicographic and is not configurable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]
Vector = Dict[int, Fraction]


class RingMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class RingSpec:
    """Polynomial ring Q[x_1..x_n] with positive integer weights."""

    variable_names: Tuple[str, ...]
    degrees: Tuple[int, ...] = ()
    coefficient_field: str = "Q"

    def __post_init__(self):
        names = tuple(self.variable_names)
        object.__setattr__(self, "variable_names", names)
        degs = tuple(self.degrees) if self.degrees else (1,) * len(names)
        object.__setattr__(self, "degrees", degs)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if len(degs) != len(names):
            raise ValueError("one weight per variable required")
        if any(int(w) != w or w < 1 for w in degs):
            raise ValueError(f"weights must be positive integers, got {degs}")
        if self.coefficient_field != "Q":
            raise ValueError("only Q coefficients are supported")

    @property
    def nvars(self) -> int:
        return len(self.variable_names)

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * w for e, w in zip(m, self.degrees))

    def one(self) -> Monomial:
        return (0,) * self.nvars

    def variable_monomial(self, k: int) -> Monomial:
        return tuple(1 if j == k else 0 for j in range(self.nvars))

    def var(self, name: str) -> "Poly":
        k = self.variable_names.index(name)
        return Poly(self, {self.variable_monomial(k): Fraction(1)})

    def gens(self) -> List["Poly"]:
        return [self.var(n) for n in self.variable_names]

    def const(self, c) -> "Poly":
        return Poly(self, {self.one(): Fraction(c)})

    def zero(self) -> "Poly":
        return Poly(self, {})


def monomial_key(ring: RingSpec, m: Monomial):
    """Sort key for degrevlex: larger key means larger monomial."""
    return (ring.monomial_degree(m), tuple(-e for e in reversed(m)))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _format_monomial(ring: RingSpec, m: Monomial) -> str:
    parts = []
    for name, e in zip(ring.variable_names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_rational(c) -> str:
    """Canonical text form: 'n' for integers, 'p/q' in lowest terms otherwise."""
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Poly:
    """Sparse polynomial with exact rational coefficients.

    Instances are treated as immutable; ``terms`` never stores zeros.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: Optional[Mapping[Monomial, Fraction]] = None):
        self.ring = ring
        clean = {}
        if terms:
            n = ring.nvars
            for m, c in terms.items():
                if len(m) != n:
                    raise ValueError(f"exponent vector {m} has wrong length for {n} variables")
                if c:
                    clean[tuple(m)] = Fraction(c)
        self.terms: Dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring, terms):
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    def _check(self, other: "Poly"):
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatchError(f"{self.ring.variable_names} vs {other.ring.variable_names}")

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw(self.ring, {})
        return Poly._raw(self.ring, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return Poly._raw(self.ring, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.const(1)
        for _ in range(k):
            out = out * self
        return out

    def mul_term(self, m: Monomial, c=1) -> "Poly":
        c = Fraction(c)
        return Poly._raw(self.ring, {mono_mul(m, k): v * c for k, v in self.terms.items()} if c else {})

    def degrees(self) -> List[int]:
        return sorted({self.ring.monomial_degree(m) for m in self.terms})

    def degree(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no degree")
        return max(self.degrees())

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=lambda m: monomial_key(self.ring, m))

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "Poly":
        return self.scale(1 / self.leading_coefficient())

    def constant_term(self) -> Fraction:
        return self.terms.get(self.ring.one(), Fraction(0))

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda mc: monomial_key(self.ring, mc[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            mono = _format_monomial(self.ring, m)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = format_rational(a)
            elif a == 1:
                body = mono
            else:
                body = f"{format_rational(a)}*{mono}"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"Poly({self})"


def poly_arith(a: Poly, b, op: str) -> Poly:
    """Dispatch ``add``/``mul``/``scale``; ``b`` is a scalar for ``scale``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


@lru_cache(maxsize=None)
def _compositions(degrees: Tuple[int, ...], degree: int) -> Tuple[Monomial, ...]:
    if not degrees:
        return ((),) if degree == 0 else ()
    w, rest = degrees[0], degrees[1:]
    out = []
    for e in range(degree // w, -1, -1):
        for tail in _compositions(rest, degree - e * w):
            out.append((e,) + tail)
    return tuple(out)


def graded_piece_basis(ring: RingSpec, degree: int) -> List[Monomial]:
    """All monomials of the given weighted degree, largest first in degrevlex."""
    if degree < 0:
        return []
    monos = _compositions(ring.degrees, degree)
    return sorted(monos, key=lambda m: monomial_key(ring, m), reverse=True)


@dataclass(frozen=True)
class LabeledFreeModule:
    """Ordered basis labels, each carrying an internal degree."""

    labels: Tuple = ()
    degrees: Tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.labels) != len(self.degrees):
            raise ValueError("one degree per label")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self) -> Dict:
        return {lab: k for k, lab in enumerate(self.labels)}


@dataclass
class SparseMatrixQ:
    """rows x cols matrix over Q stored as {(row, col): value}, no zeros."""

    rows: int
    cols: int
    entries: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v:
                clean[(r, c)] = Fraction(v)
        self.entries = clean

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrixQ":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        ent = {(i, j): Fraction(v) for i, row in enumerate(rows) for j, v in enumerate(row) if v}
        return cls(nrows, ncols, ent)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, Fraction]]) -> "SparseMatrixQ":
        ent = {(r, j): v for j, col in enumerate(columns) for r, v in col.items()}
        return cls(nrows, len(columns), ent)

    def columns(self) -> List[Vector]:
        cols: List[Vector] = [dict() for _ in range(self.cols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def to_dense(self) -> List[List[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def __matmul__(self, other: "SparseMatrixQ") -> "SparseMatrixQ":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        by_row: Dict[int, List[Tuple[int, Fraction]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: Dict[Tuple[int, int], Fraction] = {}
        for (r, k), a in self.entries.items():
            for c, b in by_row.get(k, ()):
                out[(r, c)] = out.get((r, c), 0) + a * b
        return SparseMatrixQ(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries


class Echelon:
    """Incrementally built echelon basis of a subspace of Q^n.

    Each stored row is normalised so that its smallest index (the pivot)
    has coefficient 1.  When ``track`` is set every row also remembers the
    combination of inserted vectors it came from.
    """

    def __init__(self, track: bool = False):
        self.rows: Dict[int, Vector] = {}
        self.combos: Dict[int, Vector] = {}
        self.track = track
        self._inserted = 0

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Mapping[int, Fraction], combo: Optional[Vector] = None):
        v = dict(vec)
        heap = list(v)
        heapq.heapify(heap)
        rows = self.rows
        while heap:
            k = heapq.heappop(heap)
            c = v.get(k)
            if not c:
                continue
            row = rows.get(k)
            if row is None:
                continue
            for j, a in row.items():
                nv = v.get(j, 0) - c * a
                if nv:
                    if j not in v:
                        heapq.heappush(heap, j)
                    v[j] = nv
                else:
                    v.pop(j, None)
            if combo is not None:
                for j, a in self.combos[k].items():
                    nv = combo.get(j, 0) - c * a
                    if nv:
                        combo[j] = nv
                    else:
                        combo.pop(j, None)
        return v

    def contains(self, vec: Mapping[int, Fraction]) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Mapping[int, Fraction]):
        """Insert ``vec``; return its nonzero residual or None if dependent.

        With tracking enabled the dependent case returns the relation
        (a combination of inserted vectors summing to zero) as the second
        element of a tuple ``(None, relation)``.
        """
        idx = self._inserted
        self._inserted += 1
        combo = {idx: Fraction(1)} if self.track else None
        v = self.reduce(vec, combo)
        if not v:
            return (None, combo) if self.track else None
        p = min(v)
        inv = 1 / v[p]
        row = {j: a * inv for j, a in v.items()}
        self.rows[p] = row
        if self.track:
            self.combos[p] = {j: a * inv for j, a in combo.items()}
            return (v, None)
        return v


def rank_of_vectors(vectors: Iterable[Mapping[int, Fraction]]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def matrix_rank(m: SparseMatrixQ) -> int:
    return rank_of_vectors(m.columns())


def exact_rank_and_kernel(m: SparseMatrixQ) -> Tuple[int, List[List[Fraction]]]:
    """Rank and a kernel basis of ``m`` (acting on column vectors).

    Columns are eliminated in index order; each dependent column yields one
    kernel vector with a 1 in its own position.
    """
    rank, kernel = kernel_vectors(m.columns())
    dense = []
    for k in kernel:
        row = [Fraction(0)] * m.cols
        for j, v in k.items():
            row[j] = v
        dense.append(row)
    return rank, dense


def kernel_vectors(columns: Sequence[Mapping[int, Fraction]]) -> Tuple[int, List[Vector]]:
    """Rank and sparse kernel basis for the map sending e_j to columns[j]."""
    e = Echelon(track=True)
    kernel = []
    for col in columns:
        residual, relation = e.add(col)
        if residual is None:
            kernel.append(relation)
    return e.rank, kernel


def solve_linear(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[List[Fraction]]:
    """One exact solution x of rows @ x = rhs, or None when inconsistent."""
    if not rows:
        return []
    ncols = len(rows[0])
    # Unknowns are columns 0..ncols-1; the right-hand side sits in column ncols.
    aug = []
    for r, b in zip(rows, rhs):
        v = {j: Fraction(a) for j, a in enumerate(r) if a}
        if b:
            v[ncols] = Fraction(b)
        aug.append(v)
    e = Echelon()
    for v in aug:
        e.add(v)
    if ncols in e.rows:
        return None
    x = [Fraction(0)] * ncols
    for p in sorted(e.rows, reverse=True):
        row = e.rows[p]
        val = row.get(ncols, Fraction(0))
        for j, a in row.items():
            if j != p and j != ncols:
                val -= a * x[j]
        x[p] = val
    return x


def complement_representatives(
    subspace: Iterable[Mapping[int, Fraction]], space: Iterable[Mapping[int, Fraction]]
) -> List[Vector]:
    """Vectors of ``space`` (reduced modulo ``subspace``) completing a basis.

    ``space`` is scanned in order; each vector independent of the subspace
    plus the already chosen ones contributes its residual, which differs
    from the input by an element of that span.
    """
    e = Echelon()
    for v in subspace:
        e.add(v)
    picked = []
    for v in space:
        r = e.add(v)
        if r is not None:
            picked.append(r)
    return picked
