"""The complex L of a resolvent of R -> S and cotangent homology T_i(S/R, M).

L_i is free over S on the homological-degree-i variables; its differential
keeps only the terms of d(T) that are a single variable to the first
power, with coefficients read in S.  T_i(S/R, M) = H_i(L (x) M) for
M in {S, K}.  Two independent routes serve as checks: homology of the
stages of the resolvent, and the conormal module I/I^2 in degree one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Tuple

from .algebra_core import Echelon, Monomial, graded_piece_basis, mono_mul
from .groebner import CoefficientRing, IdealPresentation, buchberger, ideal_piece
from .parallel import pmap
from .tate import S_OVER_R, Resolvent

Terms = Dict[Monomial, Fraction]

L_HOMOLOGY = "L_homology"
STAGE_HOMOLOGY = "stage_homology"
KOSZUL_FORMULA = "koszul_formula"


@dataclass
class CotangentComplexTable:
    """L_1 <- L_2 <- ... <- L_d over S, plus the conormal piece I/I^2 in position 0.

    ``images[i][j]`` maps generator j of L_i to {generator of L_(i-1): coefficient in S}.
    """

    S: CoefficientRing
    degrees: Dict[int, List[int]]
    var_ids: Dict[int, List[int]]
    images: Dict[int, List[Dict[int, Terms]]]
    conormal: Dict[int, int]
    d: int
    D: int

    def rank(self, i: int) -> int:
        return len(self.degrees.get(i, ()))

    def ranks(self) -> Dict[int, int]:
        return {i: self.rank(i) for i in range(1, self.d + 1)}

    def basis(self, i: int, t: int) -> List[Tuple[Monomial, int]]:
        return [(m, j) for j, dj in enumerate(self.degrees.get(i, ())) for m in self.S.basis(t - dj)]

    def columns(self, i: int, t: int) -> List[Dict[int, Fraction]]:
        """Matrix of L_i -> L_(i-1) in internal degree t, over Q."""
        src = self.basis(i, t)
        if i <= 1 or i > self.d:
            return [dict() for _ in src]
        idx = {lab: k for k, lab in enumerate(self.basis(i - 1, t))}
        cols = []
        for m, j in src:
            col: Dict[int, Fraction] = {}
            for row, c in self.images[i][j].items():
                for m2, v in self.S.mul_mono(m, c).items():
                    r = idx[(m2, row)]
                    col[r] = col.get(r, 0) + v
            cols.append({r: v for r, v in col.items() if v})
        return cols

    def residue_columns(self, i: int, t: int) -> List[Dict[int, Fraction]]:
        """Matrix of (L_i -> L_(i-1)) (x) K in degree t: the scalar entries only."""
        src = [j for j, dj in enumerate(self.degrees.get(i, ())) if dj == t]
        if i <= 1 or i > self.d:
            return [dict() for _ in src]
        rows = {j: k for k, j in enumerate(j for j, dj in enumerate(self.degrees[i - 1]) if dj == t)}
        one = self.S.ring.one()
        cols = []
        for j in src:
            col = {}
            for row, c in self.images[i][j].items():
                if row in rows and one in c:
                    col[rows[row]] = c[one]
            cols.append(col)
        return cols

    def matrix_entries(self, i: int) -> List[dict]:
        """Serializable form of the differential L_i -> L_(i-1)."""
        out = []
        for j, img in enumerate(self.images.get(i, ())):
            for row, c in sorted(img.items()):
                out.append({"col": j, "row": row, "entry": str(self.S.poly(c))})
        return out


@dataclass
class CotangentTable:
    dims: Dict[Tuple[int, int], int]
    module: str
    route: str
    truncation: Tuple[int, int]
    upper_bound_rows: List[int] = field(default_factory=list)

    def degree_dims(self, i: int) -> Dict[int, int]:
        return {t: n for (j, t), n in self.dims.items() if j == i}

    def witness(self, i: int) -> Optional[Tuple[int, int, int]]:
        """Lowest-degree (i, t, dim) with dim > 0, if any."""
        for (j, t), n in sorted(self.dims.items()):
            if j == i and n > 0:
                return (i, t, n)
        return None

    def rows(self) -> List[dict]:
        out = []
        for (i, t), n in sorted(self.dims.items()):
            row = {"i": i, "t": t, "dim": n}
            if i in self.upper_bound_rows:
                row["upper_bound_only"] = True
            out.append(row)
        return out


def conormal_dims(ideal: IdealPresentation, t_max: int) -> Dict[int, int]:
    """dim_Q (I/I^2)_t = dim I_t - dim (I^2)_t, by rank computations in R."""
    ring = ideal.ring
    gens = ideal.generators
    products = [a * b for a, b in combinations_with_replacement(gens, 2)]
    out = {}
    for t in range(t_max + 1):
        e = Echelon()
        for v in ideal_piece(ideal, t):
            e.add(v)
        dim_i = e.rank
        idx = {m: k for k, m in enumerate(graded_piece_basis(ring, t))}
        e2 = Echelon()
        for p in products:
            s = t - p.degree()
            if s < 0:
                continue
            for m in graded_piece_basis(ring, s):
                e2.add({idx[mono_mul(m, k)]: c for k, c in p.terms.items()})
        out[t] = dim_i - e2.rank
    return out


def build_L(resolvent: Resolvent) -> CotangentComplexTable:
    if resolvent.target != S_OVER_R:
        raise ValueError("L is built from a resolvent of R -> S")
    gb = resolvent.gb or buchberger(resolvent.ideal)
    S = CoefficientRing.quotient(gb)
    A = resolvent.algebra
    degrees: Dict[int, List[int]] = {}
    var_ids: Dict[int, List[int]] = {}
    position: Dict[int, int] = {}
    for i in range(1, resolvent.d + 1):
        vs = A.variables_of_degree(i)
        degrees[i] = [v.int_degree for v in vs]
        var_ids[i] = [v.id for v in vs]
        for k, v in enumerate(vs):
            position[v.id] = k
    images: Dict[int, List[Dict[int, Terms]]] = {1: [dict() for _ in degrees[1]]}
    for i in range(2, resolvent.d + 1):
        imgs = []
        for vid in var_ids[i]:
            img = {}
            for w, c in A.var(vid).boundary.terms.items():
                if len(w) == 1 and w[0][1] == 1:
                    r = S.reduce(dict(c))
                    if r:
                        img[position[w[0][0]]] = r
            imgs.append(img)
        images[i] = imgs
    return CotangentComplexTable(S, degrees, var_ids, images, conormal_dims(resolvent.ideal, resolvent.D), resolvent.d, resolvent.D)


def _rank(cols) -> int:
    e = Echelon()
    for c in cols:
        e.add(c)
    return e.rank


def cotangent_dims(L: CotangentComplexTable, module: str, i_max: int, t_max: int, jobs: int = 1) -> CotangentTable:
    """dim T_i(S/R, M)_t = dim H_i(L (x) M)_t for 0 <= i <= i_max, t <= t_max.

    Homology at i needs L_(i+1); rows where it is missing are kernels
    only and are flagged as upper bounds.
    """
    if module not in ("S", "K"):
        raise ValueError("module must be 'S' or 'K'")
    if t_max > L.D:
        raise ValueError(f"degree bound {t_max} exceeds the resolvent's {L.D}")
    if module == "S":
        size = lambda i, t: len(L.basis(i, t))
        cols = L.columns
    else:
        size = lambda i, t: sum(1 for dj in L.degrees.get(i, ()) if dj == t)
        cols = L.residue_columns

    def one(it):
        i, t = it
        n = size(i, t)
        if n == 0:
            return 0
        out_rank = _rank(cols(i, t))
        in_rank = _rank(cols(i + 1, t)) if i + 1 <= L.d else 0
        return n - out_rank - in_rank

    keys = [(i, t) for i in range(0, i_max + 1) for t in range(t_max + 1)]
    dims = pmap(one, keys, jobs)
    upper = [i for i in range(1, i_max + 1) if i + 1 > L.d]
    return CotangentTable(dict(zip(keys, dims)), module, L_HOMOLOGY, (i_max, t_max), upper)


def cotangent_via_stage_homology(resolvent: Resolvent, i: int, jobs: int = 1) -> CotangentTable:
    """dim T_(i+1)(S/R, S)_t as dim H_i(X^(i-1))_t, valid for i >= 3."""
    if i < 3:
        raise ValueError(f"stage-homology route needs i >= 3, got {i}")
    if resolvent.target != S_OVER_R:
        raise ValueError("stage homology route applies to a resolvent of R -> S")
    if i - 1 > resolvent.d:
        raise ValueError(f"stage {i - 1} is beyond the resolvent's hom bound {resolvent.d}")
    X = resolvent.stage(i - 1)
    ts = list(range(resolvent.D + 1))
    dims = pmap(lambda t: X.homology_dim(i, t), ts, jobs)
    return CotangentTable({(i + 1, t): n for t, n in zip(ts, dims)}, "S", STAGE_HOMOLOGY, (i + 1, resolvent.D))
