"""Free graded-commutative DG-algebras over a graded coefficient ring.

An algebra is a coefficient ring (R or a quotient S = R/I) together with a
registry of adjoined variables.  A variable of odd homological degree
squares to zero; one of even degree generates a polynomial ring, with
d(T^j) = j z T^(j-1).  Characteristic zero throughout.

Words (DG-monomials) are tuples of (variable id, exponent) pairs sorted by
(homological degree, id).  Signs are fixed by counting inversions between
odd variables when two words are merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebra_core import (
    Echelon,
    LabeledFreeModule,
    Monomial,
    Poly,
    SparseMatrixQ,
    complement_representatives,
    kernel_vectors,
    monomial_key,
)
from .groebner import CoefficientRing
from .parallel import pmap

Word = Tuple[Tuple[int, int], ...]
Terms = Dict[Monomial, Fraction]


class ContextError(ValueError):
    pass


class NotACycleError(ValueError):
    def __init__(self, index: int, boundary: "DGElement"):
        super().__init__(f"element {index} is not a cycle: its boundary is {boundary}")
        self.index = index
        self.boundary = boundary


@dataclass(frozen=True, eq=False)
class DGVariable:
    id: int
    hom_degree: int
    int_degree: int
    boundary: "DGElement"
    adjunction_step: int

    @property
    def odd(self) -> bool:
        return self.hom_degree % 2 == 1

    @property
    def name(self) -> str:
        return f"T{self.hom_degree}_{self.id}"


class DGElement:
    """Homogeneous element: {word: normal-form coefficient terms}."""

    __slots__ = ("algebra", "terms", "hom_degree")

    def __init__(self, algebra: "DGAlgebra", terms: Mapping[Word, Terms], hom_degree: Optional[int] = None):
        self.algebra = algebra
        clean = {w: dict(c) for w, c in terms.items() if c}
        degs = {algebra.word_hom_degree(w) for w in clean}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous DG element (homological degrees {sorted(degs)})")
        if degs:
            hd = degs.pop()
            if hom_degree is not None and hom_degree != hd:
                raise ValueError(f"declared homological degree {hom_degree}, terms have {hd}")
            hom_degree = hd
        self.terms: Dict[Word, Terms] = clean
        self.hom_degree = hom_degree if hom_degree is not None else 0

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def int_degrees(self) -> List[int]:
        A = self.algebra
        ring = A.coefficients.ring
        return sorted({A.word_int_degree(w) + ring.monomial_degree(m) for w, c in self.terms.items() for m in c})

    def __eq__(self, other):
        if not isinstance(other, DGElement):
            return NotImplemented
        return self.terms == other.terms and (self.hom_degree == other.hom_degree or not self.terms)

    def __hash__(self):
        return hash(frozenset((w, frozenset(c.items())) for w, c in self.terms.items()))

    def __add__(self, other: "DGElement") -> "DGElement":
        A = self.algebra.common(other.algebra)
        if self.terms and other.terms and self.hom_degree != other.hom_degree:
            raise ValueError("adding elements of different homological degree")
        out = {w: dict(c) for w, c in self.terms.items()}
        for w, c in other.terms.items():
            _acc(out.setdefault(w, {}), c)
        return DGElement(A, out, self.hom_degree if self.terms else other.hom_degree)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DGElement":
        c = Fraction(c)
        return DGElement(self.algebra, {w: {m: v * c for m, v in t.items()} for w, t in self.terms.items()} if c else {}, self.hom_degree)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return self.algebra.common(other.algebra).mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def differential(self) -> "DGElement":
        return self.algebra.differential(self)

    def __str__(self):
        if not self.terms:
            return "0"
        A = self.algebra
        parts = []
        for w in sorted(self.terms, key=A.word_key):
            coeff = Poly(A.coefficients.ring, self.terms[w])
            name = A.word_name(w)
            if name:
                parts.append(f"({coeff})*{name}")
            else:
                parts.append(f"({coeff})")
        return " + ".join(parts)

    __repr__ = __str__


def _acc(target: Terms, src: Mapping[Monomial, Fraction], c=1):
    for m, v in src.items():
        nv = target.get(m, 0) + c * v
        if nv:
            target[m] = nv
        else:
            target.pop(m, None)


class DGAlgebra:
    """Coefficient ring plus an immutable tuple of adjoined variables.

    Extending the algebra returns a new object; earlier algebras embed in
    the new one.  Basis listings and differential matrices are memoised.
    """

    def __init__(self, coefficients: CoefficientRing, variables: Sequence[DGVariable] = ()):
        self.coefficients = coefficients
        self.variables: Tuple[DGVariable, ...] = tuple(variables)
        self._by_id = {v.id: v for v in self.variables}
        if len(self._by_id) != len(self.variables):
            raise ValueError("duplicate variable ids")
        self._dword: Dict[Word, Dict[Word, Terms]] = {}
        self._words: Dict[Tuple[int, int], List[Word]] = {}
        self._bases: Dict[Tuple[int, int], List[Tuple[Monomial, Word]]] = {}
        self._matrices: Dict[Tuple[int, int], SparseMatrixQ] = {}
        self._ranks: Dict[Tuple[int, int], int] = {}

    # --- registry -------------------------------------------------------
    def var(self, vid: int) -> DGVariable:
        return self._by_id[vid]

    def var_key(self, vid: int):
        v = self._by_id[vid]
        return (v.hom_degree, v.id)

    def word_key(self, w: Word):
        return tuple((self.var_key(v), e) for v, e in w)

    def word_hom_degree(self, w: Word) -> int:
        return sum(self._by_id[v].hom_degree * e for v, e in w)

    def word_int_degree(self, w: Word) -> int:
        return sum(self._by_id[v].int_degree * e for v, e in w)

    def word_name(self, w: Word) -> str:
        return "*".join(self._by_id[v].name + (f"^{e}" if e > 1 else "") for v, e in w)

    def is_prefix_of(self, other: "DGAlgebra") -> bool:
        return (
            self.coefficients is other.coefficients
            and len(self.variables) <= len(other.variables)
            and all(a is b for a, b in zip(self.variables, other.variables))
        )

    def common(self, other: "DGAlgebra") -> "DGAlgebra":
        if other is self or other.is_prefix_of(self):
            return self
        if self.is_prefix_of(other):
            return other
        raise ContextError("elements belong to unrelated DG-algebras")

    def stage(self, k: int) -> "DGAlgebra":
        """Subalgebra generated by the variables of homological degree <= k."""
        keep = [v for v in self.variables if v.hom_degree <= k]
        if len(keep) == len(self.variables):
            return self
        return DGAlgebra(self.coefficients, keep)

    def counts(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for v in self.variables:
            out[v.hom_degree] = out.get(v.hom_degree, 0) + 1
        return out

    def variables_of_degree(self, i: int) -> List[DGVariable]:
        return [v for v in self.variables if v.hom_degree == i]

    # --- elements -------------------------------------------------------
    def zero(self, hom_degree: int = 0) -> DGElement:
        return DGElement(self, {}, hom_degree)

    def scalar(self, p) -> DGElement:
        if isinstance(p, Poly):
            terms = self.coefficients.reduce(p.terms)
        else:
            terms = self.coefficients.reduce(dict(p))
        return DGElement(self, {(): terms}, 0)

    def one(self) -> DGElement:
        return self.scalar({self.coefficients.ring.one(): Fraction(1)})

    def word_element(self, w: Word, coeff: Optional[Terms] = None) -> DGElement:
        c = coeff if coeff is not None else {self.coefficients.ring.one(): Fraction(1)}
        return DGElement(self, {w: dict(c)}, self.word_hom_degree(w))

    def gen(self, vid: int, power: int = 1) -> DGElement:
        v = self._by_id[vid]
        if power < 0:
            raise ValueError("negative power")
        if power == 0:
            return self.one()
        if v.odd and power > 1:
            return self.zero(v.hom_degree * power)
        return self.word_element(((vid, power),))

    # --- products -------------------------------------------------------
    def mul_words(self, w1: Word, w2: Word) -> Tuple[int, Optional[Word]]:
        """Sign and canonical word of w1*w2; (0, None) when an odd variable repeats."""
        if not w1:
            return 1, w2
        if not w2:
            return 1, w1
        byid = self._by_id
        exps: Dict[int, int] = dict(w1)
        for v, e in w2:
            if v in exps:
                if byid[v].odd:
                    return 0, None
                exps[v] += e
            else:
                exps[v] = e
        odd1 = [self.var_key(v) for v, _ in w1 if byid[v].odd]
        odd2 = [self.var_key(v) for v, _ in w2 if byid[v].odd]
        inv = 0
        if odd1 and odd2:
            for a in odd1:
                for b in odd2:
                    if a > b:
                        inv += 1
        word = tuple(sorted(exps.items(), key=lambda ve: self.var_key(ve[0])))
        return (-1 if inv % 2 else 1), word

    def mul(self, a: DGElement, b: DGElement) -> DGElement:
        A = self.common(a.algebra).common(b.algebra)
        if A is not self:
            return A.mul(a, b)
        R = self.coefficients
        out: Dict[Word, Terms] = {}
        for w1, c1 in a.terms.items():
            for w2, c2 in b.terms.items():
                sign, w = self.mul_words(w1, w2)
                if not sign:
                    continue
                _acc(out.setdefault(w, {}), R.mul(c1, c2), sign)
        return DGElement(self, out, a.hom_degree + b.hom_degree)

    # --- differential ---------------------------------------------------
    def word_differential(self, w: Word) -> Dict[Word, Terms]:
        """d(w) as {word: terms} via the Leibniz rule, memoised."""
        r = self._dword.get(w)
        if r is not None:
            return r
        out: Dict[Word, Terms] = {}
        sign = 1
        for k, (vid, e) in enumerate(w):
            v = self._by_id[vid]
            prefix = w[:k]
            rest = ((vid, e - 1),) + w[k + 1 :] if e > 1 else w[k + 1 :]
            z = v.boundary
            for zw, zc in z.terms.items():
                s1, w1 = self.mul_words(prefix, zw)
                if not s1:
                    continue
                s2, w2 = self.mul_words(w1, rest)
                if not s2:
                    continue
                _acc(out.setdefault(w2, {}), zc, sign * s1 * s2 * e)
            if (v.hom_degree * e) % 2:
                sign = -sign
        out = {ww: c for ww, c in out.items() if c}
        self._dword[w] = out
        return out

    def differential(self, a: DGElement) -> DGElement:
        A = self.common(a.algebra)
        if A is not self:
            return A.differential(a)
        R = self.coefficients
        out: Dict[Word, Terms] = {}
        for w, c in a.terms.items():
            for w2, c2 in self.word_differential(w).items():
                _acc(out.setdefault(w2, {}), R.mul(c, c2))
        return DGElement(self, out, max(a.hom_degree - 1, 0))

    # --- adjunction -----------------------------------------------------
    def adjoin(
        self,
        cycles: Sequence[DGElement],
        hom_degree: int,
        int_degrees: Optional[Sequence[int]] = None,
        step: Optional[int] = None,
    ) -> "DGAlgebra":
        """Adjoin one variable of ``hom_degree`` per cycle, killing it."""
        new_vars = list(self.variables)
        next_id = max((v.id for v in self.variables), default=-1) + 1
        step = hom_degree if step is None else step
        for k, z in enumerate(cycles):
            self.common(z.algebra)
            if z.terms and z.hom_degree != hom_degree - 1:
                raise ValueError(f"cycle {k} has homological degree {z.hom_degree}, expected {hom_degree - 1}")
            dz = self.differential(z)
            if dz.terms:
                raise NotACycleError(k, dz)
            if int_degrees is not None:
                t = int_degrees[k]
            else:
                degs = z.int_degrees()
                if len(degs) != 1:
                    raise ValueError(f"cycle {k} needs an explicit internal degree (degrees {degs})")
                t = degs[0]
            if z.terms and z.int_degrees() != [t]:
                raise ValueError(f"cycle {k} is not homogeneous of internal degree {t}")
            if t < 1:
                raise ValueError("adjoined variables need positive internal degree")
            zz = DGElement(self, z.terms, hom_degree - 1)
            new_vars.append(DGVariable(next_id, hom_degree, t, zz, step))
            next_id += 1
        return DGAlgebra(self.coefficients, new_vars)

    # --- bases and matrices ---------------------------------------------
    def words(self, i: int, t: int) -> List[Word]:
        """Words of homological degree i and internal degree <= t."""
        key = (i, t)
        got = self._words.get(key)
        if got is not None:
            return got
        vs = sorted((v for v in self.variables if v.hom_degree <= i and v.int_degree <= t), key=lambda v: (v.hom_degree, v.id))
        out: List[Word] = []

        def rec(k: int, h: int, d: int, acc: List[Tuple[int, int]]):
            if h == 0:
                out.append(tuple(acc))
                return
            if k == len(vs):
                return
            v = vs[k]
            rec(k + 1, h, d, acc)
            emax = 1 if v.odd else min(h // v.hom_degree, d // v.int_degree)
            for e in range(1, emax + 1):
                if v.hom_degree * e > h or v.int_degree * e > d:
                    break
                acc.append((v.id, e))
                rec(k + 1, h - v.hom_degree * e, d - v.int_degree * e, acc)
                acc.pop()

        rec(0, i, t, [])
        out.sort(key=self.word_key)
        self._words[key] = out
        return out

    def basis(self, i: int, t: int) -> List[Tuple[Monomial, Word]]:
        """Q-basis of bidegree (i, t): coefficient monomial times word."""
        key = (i, t)
        got = self._bases.get(key)
        if got is not None:
            return got
        R = self.coefficients
        ring = R.ring
        out = []
        for w in self.words(i, t):
            for m in R.basis(t - self.word_int_degree(w)):
                out.append((m, w))
        out.sort(key=lambda mw: (_descending(ring, mw[0]), self.word_key(mw[1])))
        self._bases[key] = out
        return out

    def labeled_module(self, i: int, t: int) -> LabeledFreeModule:
        b = self.basis(i, t)
        return LabeledFreeModule(tuple(b), tuple(t for _ in b))

    def element_to_vector(self, a: DGElement, t: int) -> Dict[int, Fraction]:
        idx = {lab: k for k, lab in enumerate(self.basis(a.hom_degree, t))}
        vec = {}
        for w, c in a.terms.items():
            for m, v in c.items():
                vec[idx[(m, w)]] = v
        return vec

    def vector_to_element(self, vec: Mapping[int, Fraction], i: int, t: int) -> DGElement:
        b = self.basis(i, t)
        terms: Dict[Word, Terms] = {}
        for k, v in vec.items():
            m, w = b[k]
            terms.setdefault(w, {})[m] = Fraction(v)
        return DGElement(self, terms, i)

    def image_columns(self, i: int, t: int) -> List[Dict[int, Fraction]]:
        """Images of the (i, t) basis in coordinates of the (i-1, t) basis."""
        src = self.basis(i, t)
        if i == 0:
            return [{} for _ in src]
        idx = {lab: k for k, lab in enumerate(self.basis(i - 1, t))}
        R = self.coefficients
        cols = []
        for m, w in src:
            col: Dict[int, Fraction] = {}
            for w2, c2 in self.word_differential(w).items():
                for m2, v in R.mul_mono(m, c2).items():
                    r = idx[(m2, w2)]
                    nv = col.get(r, 0) + v
                    if nv:
                        col[r] = nv
                    else:
                        col.pop(r, None)
            cols.append(col)
        return cols

    def differential_matrix(self, i: int, t: int) -> SparseMatrixQ:
        key = (i, t)
        got = self._matrices.get(key)
        if got is None:
            rows = len(self.basis(i - 1, t)) if i > 0 else 0
            got = SparseMatrixQ.from_columns(rows, self.image_columns(i, t))
            self._matrices[key] = got
        return got

    def differential_rank(self, i: int, t: int) -> int:
        key = (i, t)
        r = self._ranks.get(key)
        if r is None:
            e = Echelon()
            for col in self.image_columns(i, t):
                e.add(col)
            r = e.rank
            self._ranks[key] = r
        return r

    def homology_dim(self, i: int, t: int) -> int:
        n = len(self.basis(i, t))
        if n == 0:
            return 0
        return n - self.differential_rank(i, t) - self.differential_rank(i + 1, t)

    def cycles(self, i: int, t: int) -> List[Dict[int, Fraction]]:
        """Q-basis of the cycles in bidegree (i, t), as coordinate vectors."""
        cols = self.image_columns(i, t)
        if i == 0:
            return [{k: Fraction(1)} for k in range(len(cols))]
        rank, kernel = kernel_vectors(cols)
        self._ranks.setdefault((i, t), rank)
        return kernel

    def boundaries(self, i: int, t: int) -> List[Dict[int, Fraction]]:
        return self.image_columns(i + 1, t)

    def multiply_vector_by_variable(self, vec: Mapping[int, Fraction], i: int, t: int, k: int) -> Dict[int, Fraction]:
        """x_k * (element of bidegree (i, t)) in coordinates of (i, t + deg x_k)."""
        ring = self.coefficients.ring
        R = self.coefficients
        xk = ring.variable_monomial(k)
        src = self.basis(i, t)
        idx = {lab: n for n, lab in enumerate(self.basis(i, t + ring.degrees[k]))}
        out: Dict[int, Fraction] = {}
        for n, v in vec.items():
            m, w = src[n]
            for m2, c in R.mul_mono(xk, {m: Fraction(1)}).items():
                r = idx[(m2, w)]
                nv = out.get(r, 0) + v * c
                if nv:
                    out[r] = nv
                else:
                    out.pop(r, None)
        return out


def _descending(ring, m):
    d, rev = monomial_key(ring, m)
    return (-d,) + tuple(-x for x in rev)


def dg_mul(a: DGElement, b: DGElement) -> DGElement:
    return a * b


def dg_differential(a: DGElement) -> DGElement:
    return a.algebra.differential(a)


def adjoin_variables(algebra: DGAlgebra, cycles: Sequence[DGElement], hom_degree: int, int_degrees=None) -> DGAlgebra:
    return algebra.adjoin(cycles, hom_degree, int_degrees)


def enumerate_basis(algebra: DGAlgebra, i: int, t: int) -> Tuple[LabeledFreeModule, SparseMatrixQ]:
    return algebra.labeled_module(i, t), algebra.differential_matrix(i, t)


def minimal_homology_generators(algebra: DGAlgebra, j: int, t_max: int, jobs: int = 1) -> Dict[int, List[DGElement]]:
    """Cycles whose classes minimally generate H_j as a graded module, per degree.

    In degree t the new generators complement B_t + m*Z_(<t) inside Z_t,
    lowest internal degree first; representatives are echelon residuals.
    """
    ring = algebra.coefficients.ring
    Z: Dict[int, List[Dict[int, Fraction]]] = {}
    out: Dict[int, List[DGElement]] = {}
    ts = list(range(0, t_max + 1))
    cyc = pmap(lambda t: algebra.cycles(j, t), ts, jobs)
    for t, zs in zip(ts, cyc):
        Z[t] = zs
        if not zs:
            continue
        sub = list(algebra.boundaries(j, t))
        for k, w in enumerate(ring.degrees):
            s = t - w
            if s >= 0:
                for z in Z.get(s, ()):
                    sub.append(algebra.multiply_vector_by_variable(z, j, s, k))
        reps = complement_representatives(sub, zs)
        if reps:
            out[t] = [algebra.vector_to_element(r, j, t) for r in reps]
    return out
