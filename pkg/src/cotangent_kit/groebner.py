"""Groebner bases (degrevlex), normal forms, Hilbert series and the basic
numerical invariants of a homogeneous ideal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra_core import (
    Echelon,
    Monomial,
    Poly,
    RingMismatchError,
    RingSpec,
    graded_piece_basis,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    monomial_key,
)


class NotProperIdealError(ValueError):
    pass


@dataclass(frozen=True)
class IdealPresentation:
    ring: RingSpec
    generators: Tuple[Poly, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        for k, g in enumerate(gens):
            if g.ring != self.ring:
                raise RingMismatchError(f"generator {k} lives in another ring")
            if g.is_zero():
                raise ValueError(f"generator {k} is zero")
            if not g.is_homogeneous():
                raise ValueError(f"generator {k} is not homogeneous: degrees {g.degrees()}")

    def degrees(self) -> List[int]:
        return [g.degree() for g in self.generators]

    def with_generators(self, gens: Sequence[Poly]) -> "IdealPresentation":
        return IdealPresentation(self.ring, tuple(gens))


@dataclass(frozen=True)
class GroebnerBasis:
    elements: Tuple[Poly, ...]
    source: IdealPresentation

    @property
    def ring(self) -> RingSpec:
        return self.source.ring

    @property
    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return tuple(g.leading_monomial() for g in self.elements)

    def is_unit_ideal(self) -> bool:
        return any(sum(m) == 0 for m in self.leading_monomials)


def _lead(ring, terms):
    return max(terms, key=lambda m: monomial_key(ring, m))


def _full_reduce(ring: RingSpec, terms: Dict[Monomial, Fraction], basis: Sequence[Poly]) -> Dict[Monomial, Fraction]:
    """Remainder of ``terms`` on division by monic ``basis`` (all terms reduced)."""
    p = dict(terms)
    rem: Dict[Monomial, Fraction] = {}
    leads = [(g.leading_monomial(), g) for g in basis]
    while p:
        lt = _lead(ring, p)
        c = p[lt]
        for lm, g in leads:
            if mono_divides(lm, lt):
                shift = mono_div(lt, lm)
                for m, a in g.terms.items():
                    mm = mono_mul(m, shift)
                    v = p.get(mm, 0) - c * a
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[lt] = c
            del p[lt]
    return rem


def s_polynomial(f: Poly, g: Poly) -> Poly:
    lf, lg = f.leading_monomial(), g.leading_monomial()
    lcm = mono_lcm(lf, lg)
    return f.mul_term(mono_div(lcm, lf), 1 / f.leading_coefficient()) - g.mul_term(
        mono_div(lcm, lg), 1 / g.leading_coefficient()
    )


def buchberger(ideal: IdealPresentation) -> GroebnerBasis:
    """Reduced Groebner basis with the normal selection strategy.

    Pairs with coprime leading monomials are skipped (first criterion) and
    so are pairs covered by a chain through an already treated pair (second
    criterion).
    """
    ring = ideal.ring
    G: List[Poly] = []
    pairs = set()
    done = set()

    def lm(k):
        return G[k].leading_monomial()

    def add(f: Poly):
        G.append(f.monic())
        n = len(G) - 1
        for k in range(n):
            pairs.add((k, n))

    for f in ideal.generators:
        r = _full_reduce(ring, f.terms, G)
        if r:
            add(Poly(ring, r))

    while pairs:
        i, j = min(pairs, key=lambda p: (monomial_key(ring, mono_lcm(lm(p[0]), lm(p[1]))), p[1], p[0]))
        pairs.discard((i, j))
        done.add((i, j))
        li, lj = lm(i), lm(j)
        lcm = mono_lcm(li, lj)
        if lcm == mono_mul(li, lj):
            continue
        chained = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if mono_divides(lm(k), lcm):
                a, b = (min(i, k), max(i, k)), (min(j, k), max(j, k))
                if a in done and b in done:
                    chained = True
                    break
        if chained:
            continue
        r = _full_reduce(ring, s_polynomial(G[i], G[j]).terms, G)
        if r:
            add(Poly(ring, r))

    return GroebnerBasis(_reduce_basis(ring, G), ideal)


def _reduce_basis(ring: RingSpec, G: List[Poly]) -> Tuple[Poly, ...]:
    key = lambda g: monomial_key(ring, g.leading_monomial())
    minimal: List[Poly] = []
    for g in sorted(G, key=key):
        if not any(mono_divides(h.leading_monomial(), g.leading_monomial()) for h in minimal):
            minimal.append(g)
    reduced = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        lmg = g.leading_monomial()
        tail = {m: c for m, c in g.terms.items() if m != lmg}
        r = _full_reduce(ring, tail, others)
        r[lmg] = g.terms[lmg]
        reduced.append(Poly(ring, r).monic())
    return tuple(sorted(reduced, key=key))


class CoefficientRing:
    """Graded ring R = Q[x] or S = R/I, computing with normal forms.

    Elements are plain term dictionaries; every dictionary handed out is in
    normal form.  Normal forms of monomials are memoised.
    """

    def __init__(self, ring: RingSpec, gb: Optional[GroebnerBasis] = None):
        if gb is not None and gb.ring != ring:
            raise RingMismatchError("Groebner basis over a different ring")
        self.ring = ring
        self.gb = gb
        self._leads = [g.leading_monomial() for g in gb.elements] if gb else []
        self._tails = (
            [{m: -c for m, c in g.terms.items() if m != g.leading_monomial()} for g in gb.elements] if gb else []
        )
        self._nf: Dict[Monomial, Dict[Monomial, Fraction]] = {}
        self._basis: Dict[int, Tuple[Monomial, ...]] = {}
        self._index: Dict[int, Dict[Monomial, int]] = {}

    @classmethod
    def polynomial(cls, ring: RingSpec) -> "CoefficientRing":
        return cls(ring)

    @classmethod
    def quotient(cls, gb: GroebnerBasis) -> "CoefficientRing":
        return cls(gb.ring, gb)

    @property
    def is_quotient(self) -> bool:
        return self.gb is not None

    def is_standard(self, m: Monomial) -> bool:
        return not any(mono_divides(l, m) for l in self._leads)

    def basis(self, t: int) -> Tuple[Monomial, ...]:
        b = self._basis.get(t)
        if b is None:
            b = tuple(m for m in graded_piece_basis(self.ring, t) if self.is_standard(m))
            self._basis[t] = b
            self._index[t] = {m: k for k, m in enumerate(b)}
        return b

    def index(self, t: int) -> Dict[Monomial, int]:
        self.basis(t)
        return self._index[t]

    def dim(self, t: int) -> int:
        return len(self.basis(t))

    def mono_nf(self, m: Monomial) -> Dict[Monomial, Fraction]:
        r = self._nf.get(m)
        if r is not None:
            return r
        for lead, tail in zip(self._leads, self._tails):
            if mono_divides(lead, m):
                shift = mono_div(m, lead)
                r = {}
                for mm, c in tail.items():
                    for k, v in self.mono_nf(mono_mul(mm, shift)).items():
                        nv = r.get(k, 0) + c * v
                        if nv:
                            r[k] = nv
                        else:
                            r.pop(k, None)
                break
        else:
            r = {m: Fraction(1)}
        self._nf[m] = r
        return r

    def reduce(self, terms: Dict[Monomial, Fraction]) -> Dict[Monomial, Fraction]:
        if not self._leads:
            return {m: c for m, c in terms.items() if c}
        out: Dict[Monomial, Fraction] = {}
        for m, c in terms.items():
            for k, v in self.mono_nf(m).items():
                nv = out.get(k, 0) + c * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    def mul_mono(self, m: Monomial, terms: Dict[Monomial, Fraction], c=1) -> Dict[Monomial, Fraction]:
        """Normal form of c * m * terms, with ``terms`` already normal."""
        if not self._leads:
            return {mono_mul(m, k): v * c for k, v in terms.items()}
        out: Dict[Monomial, Fraction] = {}
        for k, v in terms.items():
            for kk, w in self.mono_nf(mono_mul(m, k)).items():
                nv = out.get(kk, 0) + c * v * w
                if nv:
                    out[kk] = nv
                else:
                    out.pop(kk, None)
        return out

    def mul(self, a: Dict[Monomial, Fraction], b: Dict[Monomial, Fraction]) -> Dict[Monomial, Fraction]:
        out: Dict[Monomial, Fraction] = {}
        for m, c in a.items():
            for k, v in self.mul_mono(m, b, c).items():
                nv = out.get(k, 0) + v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out

    def poly(self, terms) -> Poly:
        return Poly(self.ring, terms)


def normal_form(f: Poly, G: GroebnerBasis) -> Poly:
    if f.ring != G.ring:
        raise RingMismatchError("polynomial and basis live in different rings")
    return Poly(f.ring, _full_reduce(f.ring, f.terms, G.elements))


def ideal_piece(ideal: IdealPresentation, t: int, positive_multiples_only: bool = False) -> List[Dict[int, Fraction]]:
    """Spanning vectors of I_t (or (mI)_t) in the monomial basis of R_t."""
    ring = ideal.ring
    idx = {m: k for k, m in enumerate(graded_piece_basis(ring, t))}
    vecs = []
    for g in ideal.generators:
        s = t - g.degree()
        if s < 0 or (positive_multiples_only and s == 0):
            continue
        for m in graded_piece_basis(ring, s):
            vecs.append({idx[mono_mul(m, k)]: c for k, c in g.terms.items()})
    return vecs


def minimal_generators(ideal: IdealPresentation) -> Tuple[Poly, ...]:
    """A minimal homogeneous generating subset, chosen in input order.

    Graded Nakayama: a generator of degree t is needed iff it is independent
    of (mI)_t and of the generators of degree t already chosen.
    """
    ring = ideal.ring
    chosen = []
    for t in sorted(set(ideal.degrees())):
        idx = {m: k for k, m in enumerate(graded_piece_basis(ring, t))}
        e = Echelon()
        for v in ideal_piece(ideal, t, positive_multiples_only=True):
            e.add(v)
        for g in ideal.generators:
            if g.degree() != t:
                continue
            if e.add({idx[m]: c for m, c in g.terms.items()}) is not None:
                chosen.append(g)
    return tuple(chosen)


def _minimalize_monomials(monos: Sequence[Monomial]) -> List[Monomial]:
    out: List[Monomial] = []
    for m in sorted(set(monos), key=sum):
        if not any(mono_divides(a, m) for a in out):
            out.append(m)
    return out


def hilbert_numerator(ring: RingSpec, monomials: Sequence[Monomial]) -> Dict[int, int]:
    """K-polynomial numerator of R/J for the monomial ideal J.

    Uses N(J' + (m)) = N(J') - t^deg(m) * N(J' : m).
    """
    gens = _minimalize_monomials(monomials)

    def rec(gs: List[Monomial]) -> Dict[int, int]:
        if not gs:
            return {0: 1}
        *rest, m = gs
        out = dict(rec(rest))
        colon = _minimalize_monomials([mono_div(mono_lcm(g, m), m) for g in rest])
        shift = ring.monomial_degree(m)
        for d, c in rec(colon).items():
            out[d + shift] = out.get(d + shift, 0) - c
        return {d: c for d, c in out.items() if c}

    return rec(gens)


def hilbert_function(ring: RingSpec, monomials: Sequence[Monomial], order: int) -> List[int]:
    """Coefficients 0..order of the Hilbert series of R/J."""
    num = hilbert_numerator(ring, monomials)
    coeffs = [0] * (order + 1)
    for d, c in num.items():
        if d <= order:
            coeffs[d] += c
    for w in ring.degrees:
        for k in range(w, order + 1):
            coeffs[k] += coeffs[k - w]
    return coeffs


def krull_dimension_of_monomial_quotient(ring: RingSpec, monomials: Sequence[Monomial]) -> int:
    """Largest set of variables supporting no generator of J."""
    gens = _minimalize_monomials(monomials)
    supports = [frozenset(k for k, e in enumerate(m) if e) for m in gens]
    n = ring.nvars
    for size in range(n, -1, -1):
        for sub in combinations(range(n), size):
            s = frozenset(sub)
            if not any(sup <= s for sup in supports):
                return size
    return 0


@dataclass
class IdealInvariants:
    mu: int
    height: int
    krull_dim_S: int
    hilbert_series_S: object  # TruncSeries
    minimal_generators: Tuple[Poly, ...] = ()
    degenerate: bool = False
    notes: List[str] = field(default_factory=list)


def invariants_of_ideal(ideal: IdealPresentation, order: int = 32, gb: Optional[GroebnerBasis] = None) -> IdealInvariants:
    from .series_lab import TruncSeries

    ring = ideal.ring
    if any(g.degree() == 0 for g in ideal.generators):
        raise NotProperIdealError("ideal contains a unit")
    if not ideal.generators:
        hs = TruncSeries.from_ints(hilbert_function(ring, [], order))
        return IdealInvariants(0, 0, ring.nvars, hs, (), True, ["zero ideal: height 0"])
    gb = gb or buchberger(ideal)
    if gb.is_unit_ideal():
        raise NotProperIdealError("ideal is the unit ideal")
    leads = gb.leading_monomials
    dim_s = krull_dimension_of_monomial_quotient(ring, leads)
    mins = minimal_generators(ideal)
    hs = TruncSeries.from_ints(hilbert_function(ring, leads, order))
    return IdealInvariants(len(mins), ring.nvars - dim_s, dim_s, hs, mins)
