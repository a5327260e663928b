"""Complete-intersection verdicts and the cross-checked evidence report.

``Analysis`` computes every table at common bounds once and caches it;
``classify`` turns those tables into a ``CIReport``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from .algebra_core import format_rational
from .cotangent import CotangentTable, build_L, cotangent_dims, cotangent_via_stage_homology
from .groebner import CoefficientRing, IdealPresentation, buchberger, hilbert_function, invariants_of_ideal
from .koszul_tor import conormal_exterior_square, h1_exterior_square, koszul_homology, t3_via_koszul, tkos_sequence_check, wedge_tor_check
from .resolution import cyclic_presentation, min_free_resolution, projective_dimension, residue_field_presentation, tor_table
from .series_lab import (
    DeviationVector,
    SeriesError,
    TruncSeries,
    ZeroPatternReport,
    alpha_sequence,
    deviations_from_poincare,
    mahler_zero_pattern,
    poincare_from_deviations,
    recurrence_guess,
)
from .tate import K_OVER_S, S_OVER_R, build_resolvent, deviations

COMPLETE_INTERSECTION = "complete_intersection"
ALMOST_COMPLETE_INTERSECTION = "almost_complete_intersection"
NEITHER = "neither"
MAHLER_LENGTH = 128
MAHLER_R_MAX = 16


class DeviationMismatchError(SeriesError):
    pass


def is_koszul_by_groebner(gb) -> bool:
    """A Groebner basis of degree <= 2 in the standard grading certifies a Koszul algebra."""
    ring = gb.ring
    return all(w == 1 for w in ring.degrees) and all(g.degree() <= 2 for g in gb.elements)


def extended_deviations(gb, order: int, counts: Optional[DeviationVector] = None, betti_k: Optional[Dict[int, int]] = None) -> DeviationVector:
    """Deviations up to ``order`` from a rational P_K, cross-checked against what is known.

    For a Koszul S (quadratic Groebner basis) P_K(t) = 1/H_S(-t) exactly.
    Otherwise the computed Betti numbers of K are fitted by the lowest-order
    linear recurrence, which is then a guess and is labelled as such.
    """
    if is_koszul_by_groebner(gb):
        hs = TruncSeries.from_ints(hilbert_function(gb.ring, gb.leading_monomials, order))
        P = TruncSeries.one(order) / hs.compose_neg_t()
        note = "P_K = 1/H_S(-t): quadratic Groebner basis, so S is Koszul"
    else:
        if not betti_k:
            raise SeriesError("no Koszul certificate and no Betti numbers of K to extrapolate from")
        seq = [betti_k[i] for i in range(len(betti_k))]
        rec = recurrence_guess(seq, max(0, (len(seq) - 4) // 2))
        if rec is None:
            raise SeriesError("no linear recurrence fits the computed Betti numbers of K")
        P = TruncSeries(tuple(rec.extend(seq, order + 1)))
        note = f"P_K extrapolated by a guessed order-{rec.order} recurrence from {len(seq)} Betti numbers"
    eps = deviations_from_poincare(P)
    eps.notes.append(note)
    if counts is not None:
        bad = [i for i in range(1, min(counts.bound, eps.bound) + 1) if counts[i] != eps[i]]
        if bad:
            raise DeviationMismatchError(f"series deviations disagree with resolvent counts at i = {bad}")
    if betti_k:
        P2 = poincare_from_deviations(eps, order)
        bad = [i for i, b in betti_k.items() if i <= order and P2[i] != b]
        if bad:
            raise DeviationMismatchError(f"product formula disagrees with computed Betti numbers at i = {bad}")
    return eps


class Analysis:
    """All tables for one ideal at bounds (d, D, N), computed lazily and cached."""

    def __init__(self, ideal: IdealPresentation, d: int = 5, D: int = 10, N: int = 32, jobs: int = 1, flags: Optional[dict] = None, betti_k_bound: int = 6):
        self.ideal = ideal
        self.d, self.D, self.N = d, D, N
        self.jobs = jobs
        self.flags = dict(flags or {})
        self.betti_k_bound = betti_k_bound

    @cached_property
    def gb(self):
        return buchberger(self.ideal)

    @cached_property
    def invariants(self):
        return invariants_of_ideal(self.ideal, self.N, self.gb)

    @cached_property
    def resolvent(self):
        return build_resolvent(S_OVER_R, self.ideal, self.d, self.D, True, self.gb, self.jobs)

    @cached_property
    def residue_resolvent(self):
        return build_resolvent(K_OVER_S, self.ideal, self.d, self.D, True, self.gb, self.jobs)

    @cached_property
    def L(self):
        return build_L(self.resolvent)

    @cached_property
    def cotangent_S(self) -> CotangentTable:
        return cotangent_dims(self.L, "S", self.d - 1, self.D, self.jobs)

    @cached_property
    def cotangent_K(self) -> CotangentTable:
        return cotangent_dims(self.L, "K", self.d - 1, self.D, self.jobs)

    def stage_route(self, i: int) -> CotangentTable:
        return cotangent_via_stage_homology(self.resolvent, i, self.jobs)

    @cached_property
    def resolution_R(self):
        pres = cyclic_presentation(CoefficientRing.polynomial(self.ideal.ring), self.ideal.generators, "S")
        return min_free_resolution(pres, max(self.ideal.ring.nvars + 1, 3), self.D, self.jobs)

    @cached_property
    def resolution_K(self):
        pres = residue_field_presentation(CoefficientRing.quotient(self.gb))
        return min_free_resolution(pres, self.betti_k_bound, self.D, self.jobs)

    @cached_property
    def betti_K(self) -> Dict[int, int]:
        return self.resolution_K[1].totals()

    @cached_property
    def tor(self):
        return tor_table(self.resolution_R[0], self.gb, 2, self.D, self.jobs)

    @cached_property
    def koszul(self):
        return koszul_homology(self.ideal, 3, self.D, self.jobs)

    @cached_property
    def wedge_conormal(self):
        return conormal_exterior_square(self.ideal, self.D)

    @cached_property
    def wedge_h1(self):
        return h1_exterior_square(self.koszul, self.D)

    @cached_property
    def deviations_counts(self) -> DeviationVector:
        return deviations(self.residue_resolvent)

    @cached_property
    def deviations_series(self) -> DeviationVector:
        order = max(self.N, MAHLER_LENGTH - 1)
        return extended_deviations(self.gb, order, self.deviations_counts, self.betti_K)

    @cached_property
    def alpha(self):
        return alpha_sequence(self.deviations_series, self.N, strict=False)

    def mahler(self, length: int = MAHLER_LENGTH, r_max: int = MAHLER_R_MAX) -> ZeroPatternReport:
        seq = alpha_sequence(self.deviations_series, length - 1, strict=False).alpha
        return mahler_zero_pattern(seq, r_max)

    def tkos_check(self):
        T = self.cotangent_S
        return tkos_sequence_check(self.koszul, T.degree_dims(4), T.degree_dims(3), self.wedge_h1.dims)

    def wedge_tor(self):
        T, KH = self.cotangent_S, self.koszul
        return wedge_tor_check(
            self.tor.degree_dims(2),
            self.wedge_conormal.dims,
            T.degree_dims(2),
            T.degree_dims(3),
            KH.degree_dims(2),
            KH.product_image_dims,
        )

    # --- cross-route checks ---------------------------------------------
    def cross_checks(self) -> Dict[str, dict]:
        out = {}
        t1 = self.cotangent_S.degree_dims(1)
        out["t1_vs_conormal"] = {"ok": t1 == self.L.conormal}
        stage = {}
        for i in range(3, self.d - 1):
            a = self.stage_route(i).degree_dims(i + 1)
            b = self.cotangent_S.degree_dims(i + 1)
            stage[str(i + 1)] = a == b
        out["stage_vs_L"] = {"ok": all(stage.values()), "per_i": stage}
        if self.d >= 4:
            out["t3_vs_koszul"] = {"ok": t3_via_koszul(self.koszul) == self.cotangent_S.degree_dims(3)}
        if self.d >= 5:
            out["koszul_sequence"] = {"ok": self.tkos_check().passed}
        if self.d >= 4:
            out["wedge_tor"] = {"ok": self.wedge_tor().passed}
        ranks = self.L.ranks()
        eps = self.deviations_counts
        n = self.ideal.ring.nvars
        shifted = {str(i): ranks[i] == eps[i + 1] + (n - eps[1] if i == 1 else 0) for i in range(1, self.d)}
        out["rank_L_vs_next_deviation"] = {"ok": all(shifted.values()), "per_i": shifted}
        return out


@dataclass
class CIReport:
    mu: int
    height: int
    verdict: str
    perfect: Optional[bool]
    gorenstein: Optional[bool]
    cotangent_vanishing: Dict[int, dict]
    deviation_tail: dict
    mahler: ZeroPatternReport
    conjecture_consistent: bool
    bounds: Tuple[int, int, int]
    flags: Dict[str, object] = field(default_factory=dict)
    cross_checks: Dict[str, dict] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "mu": self.mu,
            "height": self.height,
            "verdict": self.verdict,
            "perfect": self.perfect,
            "gorenstein": "not_applicable" if self.gorenstein is None else self.gorenstein,
            "cotangent_vanishing": {str(i): v for i, v in sorted(self.cotangent_vanishing.items())},
            "deviation_tail": self.deviation_tail,
            "mahler": self.mahler.to_json(),
            "conjecture_consistent": self.conjecture_consistent,
            "bounds": {"hom": self.bounds[0], "deg": self.bounds[1], "series": self.bounds[2]},
            "flags": self.flags,
            "cross_checks": self.cross_checks,
            "notes": list(self.notes),
        }


def _verdict(mu: int, height: int) -> str:
    if mu == height:
        return COMPLETE_INTERSECTION
    if mu == height + 1:
        return ALMOST_COMPLETE_INTERSECTION
    return NEITHER


def classify(ideal_or_analysis, d: int = 5, D: int = 10, N: int = 32, jobs: int = 1) -> CIReport:
    A = ideal_or_analysis if isinstance(ideal_or_analysis, Analysis) else Analysis(ideal_or_analysis, d, D, N, jobs)
    notes = []
    inv = A.invariants
    verdict = _verdict(inv.mu, inv.height)
    betti = A.resolution_R[1]
    pd = projective_dimension(betti)
    if pd is None:
        perfect = None
        notes.append("projective dimension not determined inside the truncation")
    else:
        perfect = pd == inv.height
    gorenstein = None
    if perfect:
        gorenstein = betti.totals()[pd] == 1
    notes.append(f"Betti numbers over R known for internal degree <= {A.D}")
    vanishing = {}
    for i in range(2, A.d):
        w = A.cotangent_S.witness(i)
        if w is None:
            vanishing[i] = {"status": "zero_up_to_D", "D": A.D}
        else:
            vanishing[i] = {"status": "nonzero_with_witness", "witness": list(w)}
    all_zero = all(v["status"] == "zero_up_to_D" for v in vanishing.values())
    eps = A.deviations_counts
    tail = None
    for i in range(1, A.d + 1):
        if all(eps[j] == 0 for j in range(i, A.d + 1)):
            tail = {"kind": "vanishes_from", "i": i}
            break
    if tail is None:
        tail = {"kind": "positive_through", "d": A.d}
    alpha = A.alpha
    mahler = A.mahler()
    if alpha.mismatches:
        notes.append(
            "alpha series and divisor-sum closed form differ at odd i = "
            + ", ".join(f"{i} ({format_rational(alpha.alpha[i])} vs {alpha.divisor_sum[i]})" for i in alpha.mismatches)
        )
    if all_zero and verdict != COMPLETE_INTERSECTION:
        notes.append(f"no nonvanishing T_i for 2 <= i <= {A.d - 1} up to degree {A.D}; a larger hom bound may expose one")
    if tail["kind"] == "vanishes_from" and verdict != COMPLETE_INTERSECTION:
        notes.append("deviations vanish inside the hom bound although the ideal is not a complete intersection")
    return CIReport(
        inv.mu,
        inv.height,
        verdict,
        perfect,
        gorenstein,
        vanishing,
        tail,
        mahler,
        (verdict == COMPLETE_INTERSECTION) == all_zero,
        (A.d, A.D, A.N),
        A.flags,
        A.cross_checks(),
        notes,
    )
