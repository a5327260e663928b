"""Minimal resolvents (Tate resolutions) of R -> S = R/I and S -> K.

A resolvent is built stage by stage: stage 1 adjoins odd variables
mapping to generators of the kernel, stage i adjoins variables killing a
minimal generating set of H_(i-1) of the previous stage.  Everything is
truncated at homological degree ``d`` and internal degree ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra_core import Echelon, Poly, graded_piece_basis
from .dg_engine import DGAlgebra, DGElement, minimal_homology_generators
from .groebner import CoefficientRing, GroebnerBasis, IdealPresentation, buchberger, minimal_generators
from .series_lab import DeviationVector

S_OVER_R = "S/R"
K_OVER_S = "K/S"


class BoundExhaustedError(ValueError):
    def __init__(self, i: int, t: int, why: str):
        super().__init__(f"bidegree ({i}, {t}): {why}")
        self.bidegree = (i, t)


class NonMinimalResolventError(ValueError):
    pass


@dataclass
class Resolvent:
    algebra: DGAlgebra
    target: str
    d: int
    D: int
    minimal: bool
    ideal: IdealPresentation
    gb: Optional[GroebnerBasis] = None
    notes: List[str] = field(default_factory=list)

    @property
    def e(self) -> Dict[int, int]:
        c = self.algebra.counts()
        return {i: c.get(i, 0) for i in range(1, self.d + 1)}

    def stage(self, k: int) -> DGAlgebra:
        return self.algebra.stage(k)

    def variable_degrees(self) -> Dict[Tuple[int, int], int]:
        """(hom degree, internal degree) -> number of variables."""
        out: Dict[Tuple[int, int], int] = {}
        for v in self.algebra.variables:
            out[(v.hom_degree, v.int_degree)] = out.get((v.hom_degree, v.int_degree), 0) + 1
        return out

    def acyclicity_table(self, jobs: int = 1) -> Dict[Tuple[int, int], int]:
        """dim H_j(X)_t for 1 <= j <= d-1 and t <= D."""
        from .parallel import pmap

        keys = [(j, t) for j in range(1, self.d) for t in range(self.D + 1)]
        dims = pmap(lambda jt: self.algebra.homology_dim(*jt), keys, jobs)
        return dict(zip(keys, dims))

    def is_acyclic(self, jobs: int = 1) -> bool:
        return not any(self.acyclicity_table(jobs).values())

    def summary(self) -> dict:
        return {
            "target": self.target,
            "minimal": self.minimal,
            "bounds": {"hom": self.d, "deg": self.D},
            "e": {str(i): n for i, n in self.e.items()},
            "variables": [
                {"i": i, "t": t, "count": n} for (i, t), n in sorted(self.variable_degrees().items())
            ],
            "notes": list(self.notes),
        }


def residue_field_generators(gb: GroebnerBasis) -> List[Poly]:
    """Variables forming a minimal generating set of the maximal ideal of S.

    x_k is dropped when it lies in (m^2 + I) plus the variables already kept
    in its degree.
    """
    ring = gb.ring
    ideal = gb.source
    chosen = []
    for t in sorted(set(ring.degrees)):
        basis = graded_piece_basis(ring, t)
        idx = {m: n for n, m in enumerate(basis)}
        e = Echelon()
        for m in basis:
            if sum(m) >= 2:
                e.add({idx[m]: Fraction(1)})
        for g in ideal.generators:
            if g.degree() == t:
                e.add({idx[m]: c for m, c in g.terms.items()})
        for k, w in enumerate(ring.degrees):
            if w != t:
                continue
            xm = ring.variable_monomial(k)
            if e.add({idx[xm]: Fraction(1)}) is not None:
                chosen.append(ring.var(ring.variable_names[k]))
    return chosen


def build_resolvent(
    target: str,
    ideal: IdealPresentation,
    d: int = 5,
    D: int = 10,
    minimal: bool = True,
    gb: Optional[GroebnerBasis] = None,
    jobs: int = 1,
) -> Resolvent:
    """Resolvent of R -> S (``target='S/R'``) or S -> K (``target='K/S'``).

    With ``minimal=False`` stage 1 uses the generators exactly as given
    (redundant ones included); higher stages are always minimal.
    """
    if d < 1:
        raise ValueError("hom bound must be at least 1")
    ring = ideal.ring
    notes = []
    if target == S_OVER_R:
        coeffs = CoefficientRing.polynomial(ring)
        first = list(minimal_generators(ideal) if minimal else ideal.generators)
    elif target == K_OVER_S:
        gb = gb or buchberger(ideal)
        coeffs = CoefficientRing.quotient(gb)
        first = residue_field_generators(gb)
    else:
        raise ValueError(f"unknown target {target!r}")
    A = DGAlgebra(coeffs)
    for g in first:
        if g.degree() > D:
            raise BoundExhaustedError(1, g.degree(), f"generator {g} lies above the degree bound {D}")
    A = A.adjoin([A.scalar(g) for g in first], 1, [g.degree() for g in first], step=1)
    for i in range(2, d + 1):
        gens = minimal_homology_generators(A, i - 1, D, jobs)
        cycles: List[DGElement] = []
        degs: List[int] = []
        for t in sorted(gens):
            cycles.extend(gens[t])
            degs.extend([t] * len(gens[t]))
        if cycles:
            A = A.adjoin(cycles, i, degs, step=i)
    notes.append(f"acyclicity certified for internal degree <= {D} only")
    return Resolvent(A, target, d, D, minimal, ideal, gb, notes)


def deviations(resolvent: Resolvent) -> DeviationVector:
    """eps_i = number of homological-degree-i variables of a minimal S -> K resolvent."""
    if resolvent.target != K_OVER_S:
        raise ValueError("deviations are read off a resolvent of S -> K")
    if not resolvent.minimal:
        raise NonMinimalResolventError("deviations require a minimal resolvent")
    return DeviationVector(dict(resolvent.e), resolvent.d, "resolvent_counts")


def differential_in_maximal_ideal(resolvent: Resolvent, i: int, t: int) -> bool:
    """True when d: X_(i,t) -> X_(i-1,t) has no unit entries as a map of free modules.

    An entry is a unit exactly when a word maps onto a word of the same
    internal degree with a nonzero scalar coefficient.
    """
    A = resolvent.algebra
    one = A.coefficients.ring.one()
    for w in A.words(i, t):
        for w2, c in A.word_differential(w).items():
            if one in c:
                return False
    return True
