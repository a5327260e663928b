"""Minimal graded free resolutions over R or S = R/I, degree by degree.

Each homological step takes the kernel of the previous differential one
internal degree at a time and keeps a complement of the part generated
by lower-degree syzygies.  Nothing is done above the degree bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra_core import Echelon, LabeledFreeModule, Monomial, Poly, SparseMatrixQ, complement_representatives, kernel_vectors
from .groebner import CoefficientRing, GroebnerBasis
from .parallel import pmap

Terms = Dict[Monomial, Fraction]
FreeElement = Dict[int, Terms]  # generator index -> coefficient


class TruncationError(ValueError):
    pass


@dataclass
class ModulePresentation:
    """coker(P1 -> P0): generators of P0 with their degrees and relation vectors."""

    coeffs: CoefficientRing
    gen_degrees: Tuple[int, ...]
    relations: List[FreeElement]
    name: str = "M"

    def relation_degree(self, r: FreeElement) -> int:
        ring = self.coeffs.ring
        j, terms = next(iter(r.items()))
        return self.gen_degrees[j] + ring.monomial_degree(next(iter(terms)))


def cyclic_presentation(coeffs: CoefficientRing, gens: Sequence[Poly], name: str) -> ModulePresentation:
    """coeffs / (gens) as a module over coeffs."""
    rels = []
    for g in gens:
        t = coeffs.reduce(dict(g.terms))
        if t:
            rels.append({0: t})
    return ModulePresentation(coeffs, (0,), rels, name)


def residue_field_presentation(coeffs: CoefficientRing) -> ModulePresentation:
    return cyclic_presentation(coeffs, coeffs.ring.gens(), "K")


@dataclass
class ComplexSlice:
    i: int
    t: int
    source: LabeledFreeModule
    target: LabeledFreeModule
    matrix: SparseMatrixQ


@dataclass
class BettiTable:
    """beta_(i,t) inside the truncation box; outside it nothing is known."""

    entries: Dict[Tuple[int, int], int]
    over_ring: str
    module_name: str
    truncation: Tuple[int, int]

    def get(self, i: int, t: int) -> int:
        if i < 0 or t < 0 or i > self.truncation[0] or t > self.truncation[1]:
            raise KeyError(f"beta_({i},{t}) lies outside the truncation {self.truncation}")
        return self.entries.get((i, t), 0)

    def totals(self) -> Dict[int, int]:
        out = {i: 0 for i in range(self.truncation[0] + 1)}
        for (i, _), n in self.entries.items():
            out[i] += n
        return out

    def length(self) -> int:
        return max((i for (i, _), n in self.entries.items() if n), default=0)

    def rows(self) -> List[dict]:
        return [{"i": i, "t": t, "dim": n} for (i, t), n in sorted(self.entries.items())]


class FreeComplex:
    """F_0 <- F_1 <- ... with F_i free on generators of given degrees.

    ``images[i][j]`` is the image of generator j of F_i in F_(i-1).
    """

    def __init__(self, coeffs: CoefficientRing, over_ring: str, degrees: Dict[int, List[int]], images: Dict[int, List[FreeElement]], max_i: int, max_t: int):
        self.coeffs = coeffs
        self.over_ring = over_ring
        self.degrees = degrees
        self.images = images
        self.max_i = max_i
        self.max_t = max_t
        self._basis: Dict[Tuple[int, int], List[Tuple[Monomial, int]]] = {}
        self._index: Dict[Tuple[int, int], Dict[Tuple[Monomial, int], int]] = {}
        self._rank: Dict[Tuple[int, int], int] = {}

    def rank(self, i: int) -> int:
        return len(self.degrees.get(i, ()))

    def basis(self, i: int, t: int) -> List[Tuple[Monomial, int]]:
        key = (i, t)
        b = self._basis.get(key)
        if b is None:
            b = [(m, j) for j, d in enumerate(self.degrees.get(i, ())) for m in self.coeffs.basis(t - d)]
            self._basis[key] = b
            self._index[key] = {lab: k for k, lab in enumerate(b)}
        return b

    def index(self, i: int, t: int) -> Dict[Tuple[Monomial, int], int]:
        self.basis(i, t)
        return self._index[(i, t)]

    def to_vector(self, i: int, t: int, el: FreeElement) -> Dict[int, Fraction]:
        idx = self.index(i, t)
        return {idx[(m, j)]: c for j, terms in el.items() for m, c in terms.items()}

    def to_element(self, i: int, t: int, vec) -> FreeElement:
        b = self.basis(i, t)
        out: FreeElement = {}
        for k, c in vec.items():
            m, j = b[k]
            out.setdefault(j, {})[m] = c
        return out

    def scale_element(self, m: Monomial, el: FreeElement) -> FreeElement:
        out = {}
        for j, terms in el.items():
            p = self.coeffs.mul_mono(m, terms)
            if p:
                out[j] = p
        return out

    def image_columns(self, i: int, t: int) -> List[Dict[int, Fraction]]:
        if i <= 0 or i not in self.images:
            return [dict() for _ in self.basis(i, t)]
        imgs = self.images[i]
        return [self.to_vector(i - 1, t, self.scale_element(m, imgs[j])) for m, j in self.basis(i, t)]

    def slice(self, i: int, t: int) -> ComplexSlice:
        src = self.basis(i, t)
        tgt = self.basis(i - 1, t) if i > 0 else []
        d = self.degrees
        return ComplexSlice(
            i,
            t,
            LabeledFreeModule(tuple(src), tuple(d[i][j] for _, j in src)),
            LabeledFreeModule(tuple(tgt), tuple(d[i - 1][j] for _, j in tgt) if i > 0 else ()),
            SparseMatrixQ.from_columns(len(tgt), self.image_columns(i, t)),
        )

    def differential_rank(self, i: int, t: int) -> int:
        key = (i, t)
        r = self._rank.get(key)
        if r is None:
            e = Echelon()
            for c in self.image_columns(i, t):
                e.add(c)
            r = self._rank[key] = e.rank
        return r

    def homology_dim(self, i: int, t: int) -> int:
        if i + 1 > self.max_i:
            raise TruncationError(f"H_{i} needs F_{i + 1}, resolution stops at {self.max_i}")
        return len(self.basis(i, t)) - self.differential_rank(i, t) - self.differential_rank(i + 1, t)

    def is_minimal(self) -> bool:
        """No image coefficient has a nonzero constant term."""
        one = self.coeffs.ring.one()
        return all(one not in terms for imgs in self.images.values() for el in imgs for terms in el.values())

    def tensor(self, coeffs: CoefficientRing, over_ring: str) -> "FreeComplex":
        """Base change along R -> coeffs (normal forms of every coefficient)."""
        images = {}
        for i, imgs in self.images.items():
            images[i] = [{j: r for j, terms in el.items() for r in [coeffs.reduce(dict(terms))] if r} for el in imgs]
        return FreeComplex(coeffs, over_ring, dict(self.degrees), images, self.max_i, self.max_t)

    def betti_table(self, module_name: str) -> BettiTable:
        entries = {}
        for i, degs in self.degrees.items():
            for d in degs:
                entries[(i, d)] = entries.get((i, d), 0) + 1
        return BettiTable(entries, self.over_ring, module_name, (self.max_i, self.max_t))


def _min_generators_by_degree(C: FreeComplex, i: int, spaces: Dict[int, List[Dict[int, Fraction]]]) -> Tuple[List[int], List[FreeElement]]:
    """Minimal generators of the graded submodule of F_i with pieces ``spaces``."""
    degs: List[int] = []
    gens: List[FreeElement] = []
    for t in sorted(spaces):
        generated = []
        for d, g in zip(degs, gens):
            for m in C.coeffs.basis(t - d):
                generated.append(C.to_vector(i, t, C.scale_element(m, g)))
        for v in complement_representatives(generated, spaces[t]):
            degs.append(t)
            gens.append(C.to_element(i, t, v))
    return degs, gens


def min_free_resolution(pres: ModulePresentation, max_i: int, max_t: int, jobs: int = 1) -> Tuple[FreeComplex, BettiTable]:
    """Minimal free resolution of coker(pres) up to (max_i, max_t)."""
    coeffs = pres.coeffs
    over = "S" if coeffs.is_quotient else "R"
    if any(d > max_t for d in pres.gen_degrees):
        raise TruncationError(f"module generators in degrees {list(pres.gen_degrees)} exceed the degree bound {max_t}")
    one = coeffs.ring.one()
    for r in pres.relations:
        if any(one in terms for terms in r.values()):
            raise ValueError("presentation generators are not minimal (a relation has a unit entry)")
    C = FreeComplex(coeffs, over, {0: list(pres.gen_degrees)}, {}, max_i, max_t)
    if max_i >= 1:
        spaces: Dict[int, List[Dict[int, Fraction]]] = {}
        for r in pres.relations:
            s = pres.relation_degree(r)
            for t in range(s, max_t + 1):
                for m in coeffs.basis(t - s):
                    v = C.to_vector(0, t, C.scale_element(m, r))
                    if v:
                        spaces.setdefault(t, []).append(v)
        degs, gens = _min_generators_by_degree(C, 0, spaces)
        C.degrees[1], C.images[1] = degs, gens
    for i in range(2, max_i + 1):
        ts = list(range(max_t + 1))
        kernels = pmap(lambda t: kernel_vectors(C.image_columns(i - 1, t))[1], ts, jobs)
        spaces = {t: k for t, k in zip(ts, kernels) if k}
        degs, gens = _min_generators_by_degree(C, i - 1, spaces)
        C.degrees[i], C.images[i] = degs, gens
    return C, C.betti_table(pres.name)


@dataclass
class TorTable:
    dims: Dict[Tuple[int, int], int]
    truncation: Tuple[int, int]
    notes: List[str] = field(default_factory=list)

    def degree_dims(self, i: int) -> Dict[int, int]:
        return {t: n for (j, t), n in self.dims.items() if j == i}

    def rows(self) -> List[dict]:
        return [{"i": i, "t": t, "dim": n} for (i, t), n in sorted(self.dims.items())]


def tor_table(resolution: FreeComplex, gb: GroebnerBasis, i_max: int, t_max: int, jobs: int = 1) -> TorTable:
    """dim Tor_i^R(S, S)_t from a resolution of S over R tensored with S."""
    if resolution.over_ring != "R":
        raise ValueError("tor_table expects a resolution over R")
    if i_max + 1 > resolution.max_i:
        raise TruncationError(f"Tor_{i_max} needs F_{i_max + 1}; the resolution stops at {resolution.max_i}")
    if t_max > resolution.max_t:
        raise TruncationError(f"degree bound {t_max} exceeds the resolution's {resolution.max_t}")
    T = resolution.tensor(CoefficientRing.quotient(gb), "S")
    keys = [(i, t) for i in range(i_max + 1) for t in range(t_max + 1)]
    dims = pmap(lambda it: T.homology_dim(*it), keys, jobs)
    return TorTable(dict(zip(keys, dims)), (i_max, t_max))


def projective_dimension(betti: BettiTable) -> Optional[int]:
    """Length of the resolution, or None when it may continue past the box."""
    n = betti.length()
    if n >= betti.truncation[0]:
        return None
    return n
