"""Koszul homology H_i of a minimal generating set of I, the product H_1^2,
exterior squares of graded modules, and dimension-level checks of the exact
sequences tying T_2, T_3, T_4 to Tor and Koszul homology.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Dict, List, Sequence, Tuple

from .algebra_core import Echelon, graded_piece_basis, kernel_vectors, mono_mul
from .dg_engine import DGAlgebra, DGElement, minimal_homology_generators
from .groebner import CoefficientRing, IdealPresentation, minimal_generators
from .parallel import pmap

Vector = Dict[int, Fraction]


@dataclass
class KoszulHomology:
    algebra: DGAlgebra
    dims: Dict[Tuple[int, int], int]
    h1_generators: List[DGElement]
    h2_generators: List[DGElement]
    product_image_dims: Dict[int, int]
    truncation: Tuple[int, int]

    def degree_dims(self, i: int) -> Dict[int, int]:
        return {t: n for (j, t), n in self.dims.items() if j == i}

    def generator_degrees(self, i: int) -> List[int]:
        gens = self.h1_generators if i == 1 else self.h2_generators
        return [z.int_degrees()[0] for z in gens]

    def rows(self) -> List[dict]:
        return [{"i": i, "t": t, "dim": n} for (i, t), n in sorted(self.dims.items())]


def koszul_algebra(ideal: IdealPresentation) -> DGAlgebra:
    """Koszul complex on a minimal generating set of I, as a DG-algebra over R."""
    A = DGAlgebra(CoefficientRing.polynomial(ideal.ring))
    gens = minimal_generators(ideal)
    return A.adjoin([A.scalar(g) for g in gens], 1, [g.degree() for g in gens], step=1)


def _flatten(gens: Dict[int, List[DGElement]]) -> List[DGElement]:
    return [z for t in sorted(gens) for z in gens[t]]


def product_image_dims(A: DGAlgebra, h1: Sequence[DGElement], t_max: int) -> Dict[int, int]:
    """dim (H_1 * H_1)_t inside H_2: span of m * z_a * z_b plus boundaries, modulo boundaries."""
    R = A.coefficients
    prods = []
    for a in range(len(h1)):
        for b in range(a + 1, len(h1)):
            p = h1[a] * h1[b]
            if p.terms:
                prods.append((h1[a].int_degrees()[0] + h1[b].int_degrees()[0], p))
    out = {}
    for t in range(t_max + 1):
        e = Echelon()
        for v in A.boundaries(2, t):
            e.add(v)
        base = e.rank
        for s, p in prods:
            for m in R.basis(t - s):
                e.add(A.element_to_vector(A.scalar({m: Fraction(1)}) * p, t))
        out[t] = e.rank - base
    return out


def koszul_homology(ideal: IdealPresentation, i_max: int, t_max: int, jobs: int = 1) -> KoszulHomology:
    A = koszul_algebra(ideal)
    keys = [(i, t) for i in range(0, i_max + 1) for t in range(t_max + 1)]
    dims = dict(zip(keys, pmap(lambda it: A.homology_dim(*it), keys, jobs)))
    h1 = _flatten(minimal_homology_generators(A, 1, t_max, jobs))
    h2 = _flatten(minimal_homology_generators(A, 2, t_max, jobs))
    return KoszulHomology(A, dims, h1, h2, product_image_dims(A, h1, t_max), (i_max, t_max))


def _relations_modulo(images: List[Vector], subspace: List[Vector]) -> List[Vector]:
    """Spanning set of {v : sum v_k images[k] lies in span(subspace)}."""
    n = len(images)
    _, ker = kernel_vectors(list(images) + list(subspace))
    rels = []
    for k in ker:
        v = {j: c for j, c in k.items() if j < n}
        if v:
            rels.append(v)
    return rels


@dataclass
class ExteriorSquareTable:
    dims: Dict[int, int]
    generator_degrees: Tuple[int, ...]
    presentation: str

    def rows(self) -> List[dict]:
        return [{"i": 2, "t": t, "dim": n} for t, n in sorted(self.dims.items())]


def exterior_square_dims(
    coeffs: CoefficientRing,
    gen_degrees: Sequence[int],
    relations_at: Callable[[int], List[Vector]],
    t_max: int,
    presentation: str = "",
) -> ExteriorSquareTable:
    """dim (wedge^2 M)_t for M = F_0 / Rel, as coker(F_0 (x) Rel -> wedge^2 F_0).

    ``relations_at(s)`` spans Rel_s in the basis [(m, j) for j, for m in coeffs.basis(s - d_j)].
    """
    degs = list(gen_degrees)
    rel_cache: Dict[int, List[Vector]] = {}

    def f0_basis(s):
        return [(m, j) for j, d in enumerate(degs) for m in coeffs.basis(s - d)]

    out = {}
    for t in range(t_max + 1):
        w = [(m, a, b) for a in range(len(degs)) for b in range(a + 1, len(degs)) for m in coeffs.basis(t - degs[a] - degs[b])]
        if not w:
            out[t] = 0
            continue
        idx = {lab: k for k, lab in enumerate(w)}
        e = Echelon()
        for a, da in enumerate(degs):
            s = t - da
            if s < 0:
                continue
            basis = f0_basis(s)
            if s not in rel_cache:
                rel_cache[s] = relations_at(s)
            for r in rel_cache[s]:
                v: Vector = {}
                for k, c in r.items():
                    m, j = basis[k]
                    if j == a:
                        continue
                    lab = (m, a, j) if a < j else (m, j, a)
                    sign = 1 if a < j else -1
                    v[idx[lab]] = v.get(idx[lab], 0) + sign * c
                e.add({k: c for k, c in v.items() if c})
        out[t] = len(w) - e.rank
    return ExteriorSquareTable(out, tuple(degs), presentation)


def conormal_exterior_square(ideal: IdealPresentation, t_max: int) -> ExteriorSquareTable:
    """wedge^2 (I/I^2), presented on the minimal generators of I."""
    ring = ideal.ring
    R = CoefficientRing.polynomial(ring)
    gens = list(minimal_generators(ideal))
    degs = [g.degree() for g in gens]
    squares = [a * b for a, b in combinations_with_replacement(gens, 2)]

    def relations_at(s):
        idx = {m: k for k, m in enumerate(graded_piece_basis(ring, s))}
        images = []
        for j, g in enumerate(gens):
            for m in R.basis(s - degs[j]):
                images.append({idx[mono_mul(m, k)]: c for k, c in g.terms.items()})
        sub = []
        for p in squares:
            for m in graded_piece_basis(ring, s - p.degree()):
                sub.append({idx[mono_mul(m, k)]: c for k, c in p.terms.items()})
        return _relations_modulo(images, sub)

    return exterior_square_dims(R, degs, relations_at, t_max, "minimal generators of I modulo I^2")


def h1_exterior_square(KH: KoszulHomology, t_max: int) -> ExteriorSquareTable:
    """wedge^2 H_1, presented on the retained H_1 generators modulo boundaries."""
    A = KH.algebra
    R = A.coefficients
    gens = KH.h1_generators
    degs = KH.generator_degrees(1)

    def relations_at(s):
        images = []
        for j, z in enumerate(gens):
            for m in R.basis(s - degs[j]):
                images.append(A.element_to_vector(A.scalar({m: Fraction(1)}) * z, s))
        return _relations_modulo(images, list(A.boundaries(1, s)))

    return exterior_square_dims(R, degs, relations_at, t_max, "H_1 generators modulo boundaries")


def t3_via_koszul(KH: KoszulHomology) -> Dict[int, int]:
    """dim T_3(S/R, S)_t = dim H_2 - dim H_1^2 per degree."""
    return {t: KH.dims[(2, t)] - KH.product_image_dims[t] for t in sorted(KH.product_image_dims)}


@dataclass
class SequenceCheck:
    name: str
    mode: str
    per_degree: Dict[int, bool]
    detail: Dict[int, dict] = field(default_factory=dict)
    certifies: str = ""

    @property
    def passed(self) -> bool:
        return all(self.per_degree.values())

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "mode": self.mode,
            "passed": self.passed,
            "certifies": self.certifies,
            "per_degree": [dict(t=t, ok=ok, **self.detail.get(t, {})) for t, ok in sorted(self.per_degree.items())],
        }


def _common_degrees(*tables: Dict[int, int]) -> List[int]:
    keys = [set(t) for t in tables]
    if any(k != keys[0] for k in keys):
        raise ValueError("truncation mismatch between input tables")
    return sorted(keys[0])


def tkos_sequence_check(KH: KoszulHomology, t4: Dict[int, int], t3: Dict[int, int], wedge_h1: Dict[int, int]) -> SequenceCheck:
    """Dimension checks on H_3 -> T_4 -> wedge^2 H_1 -> H_2 -> T_3 -> 0."""
    h1sq = KH.product_image_dims
    ts = _common_degrees(t4, t3, wedge_h1, h1sq)
    ok, detail = {}, {}
    for t in ts:
        h2, h3 = KH.dims[(2, t)], KH.dims.get((3, t), 0)
        kernel = wedge_h1[t] - h1sq[t]
        at_h2 = t3[t] == h2 - h1sq[t]
        at_wedge = t4[t] >= kernel - h3
        ok[t] = at_h2 and at_wedge and kernel >= 0
        detail[t] = {"T3": t3[t], "T4": t4[t], "H2": h2, "H3": h3, "H1sq": h1sq[t], "wedge2_H1": wedge_h1[t]}
    return SequenceCheck(
        "koszul_sequence",
        "dimension",
        ok,
        detail,
        "exactness at H_2 (with image of wedge^2 H_1 equal to H_1^2) and the lower bound on T_4; the maps themselves are not built",
    )


def wedge_tor_check(tor2: Dict[int, int], wedge: Dict[int, int], t2: Dict[int, int], t3: Dict[int, int], h2: Dict[int, int], h1sq: Dict[int, int]) -> SequenceCheck:
    """Dimension checks on T_3 -> wedge^2 I/I^2 -> Tor_2 -> T_2 -> 0.

    Pass/fail is decided by the bounds T_2 + wedge - T_3 <= Tor_2 <= T_2 + wedge
    and Tor_2 >= T_2.  When H_1^2 = H_2 and T_3 = 0 throughout the truncation
    the mode is "equality" and each degree also records whether Tor_2 and
    wedge^2 I/I^2 agree; exactness forces them apart exactly where T_2 != 0.
    """
    ts = _common_degrees(tor2, wedge, t2, t3, h2, h1sq)
    equality = all(h1sq[t] == h2[t] and t3[t] == 0 for t in ts)
    ok, detail = {}, {}
    for t in ts:
        ok[t] = t2[t] + wedge[t] - t3[t] <= tor2[t] <= t2[t] + wedge[t] and tor2[t] >= t2[t]
        detail[t] = {"Tor2": tor2[t], "wedge2": wedge[t], "T2": t2[t], "T3": t3[t]}
        if equality:
            detail[t]["tor2_equals_wedge2"] = tor2[t] == wedge[t]
    return SequenceCheck(
        "wedge_tor",
        "equality" if equality else "inequality",
        ok,
        detail,
        "exactness by dimension count only",
    )
