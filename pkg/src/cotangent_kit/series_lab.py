"""Truncated power series over Q and the deviation / Poincare-series toolkit.

Includes the product formula linking deviations and the Poincare series of
the residue field, its inversion, the alpha sequence built from a
logarithmic derivative, a zero-pattern detector for eventually periodic
zero sets, and exact linear-recurrence guessing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra_core import format_rational, solve_linear


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class TruncSeries:
    """Coefficients c_0..c_N of a power series known modulo t^(N+1)."""

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise SeriesError("a truncated series needs at least the constant term")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @classmethod
    def from_ints(cls, seq: Sequence) -> "TruncSeries":
        return cls(tuple(Fraction(c) for c in seq))

    @classmethod
    def from_polynomial(cls, poly: Dict[int, object], order: int) -> "TruncSeries":
        c = [Fraction(0)] * (order + 1)
        for d, v in poly.items():
            if d <= order:
                c[d] += Fraction(v)
        return cls(tuple(c))

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls.from_polynomial({0: 1}, order)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "TruncSeries":
        if order > self.order:
            raise SeriesError(f"cannot extend precision from {self.order} to {order}")
        return TruncSeries(self.coeffs[: order + 1])

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        n = min(self.order, other.order)
        return TruncSeries(tuple(a + b for a, b in zip(self.coeffs[: n + 1], other.coeffs[: n + 1])))

    def __neg__(self):
        return TruncSeries(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncSeries(tuple(a * other for a in self.coeffs))
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if not ai:
                continue
            for j in range(n + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return TruncSeries(tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other: "TruncSeries") -> "TruncSeries":
        if isinstance(other, (int, Fraction)):
            return TruncSeries(tuple(a / other for a in self.coeffs))
        b = other.coeffs
        if not b[0]:
            raise SeriesError("division by a series with zero constant term")
        n = min(self.order, other.order)
        a = self.coeffs
        q = [Fraction(0)] * (n + 1)
        inv = 1 / b[0]
        for k in range(n + 1):
            s = a[k]
            for j in range(1, k + 1):
                if b[j]:
                    s -= b[j] * q[k - j]
            q[k] = s * inv
        return TruncSeries(tuple(q))

    def derivative(self) -> "TruncSeries":
        """Formal derivative; loses one order of precision."""
        if self.order == 0:
            raise SeriesError("derivative of an order-0 truncation is unknown")
        return TruncSeries(tuple(k * self.coeffs[k] for k in range(1, self.order + 1)))

    def log_derivative(self) -> "TruncSeries":
        """g'/g, known to order N-1."""
        return self.derivative() / self.truncate(self.order - 1)

    def compose_neg_t(self) -> "TruncSeries":
        return TruncSeries(tuple(c if k % 2 == 0 else -c for k, c in enumerate(self.coeffs)))

    def shift(self, k: int = 1) -> "TruncSeries":
        """Multiply by t^k; precision grows by k because the low terms are exact zeros."""
        return TruncSeries((Fraction(0),) * k + self.coeffs)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self.coeffs]}


def series_ops(a: TruncSeries, b: Optional[TruncSeries], op: str) -> TruncSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "log_derivative":
        return a.log_derivative()
    if op == "compose_neg_t":
        return a.compose_neg_t()
    raise ValueError(f"unknown series op {op!r}")


@dataclass
class DeviationVector:
    """eps[i] for 1 <= i <= bound; index 0 is unused."""

    eps: Dict[int, int]
    bound: int
    source: str  # "resolvent_counts" | "series_extraction"
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        for i, v in self.eps.items():
            if v < 0:
                raise SeriesError(f"negative deviation eps_{i} = {v}")

    def __getitem__(self, i: int) -> int:
        if i < 1 or i > self.bound:
            raise KeyError(f"eps_{i} outside known range 1..{self.bound}")
        return self.eps.get(i, 0)

    def as_list(self) -> List[int]:
        return [self[i] for i in range(1, self.bound + 1)]

    def to_json(self) -> dict:
        return {"bound": self.bound, "source": self.source, "eps": {str(i): self[i] for i in range(1, self.bound + 1)}}


def _factor_series(i: int, e: int, order: int, inverse: bool = False) -> List[Fraction]:
    """Coefficients of (1+t^i)^e for odd i, (1-t^i)^(-e) for even i (or their inverses)."""
    c = [Fraction(0)] * (order + 1)
    odd = i % 2 == 1
    # (1+t^i)^e and (1-t^i)^(-e); inverses swap the exponent sign.
    for k in range(order // i + 1):
        if odd:
            v = comb(e, k) if not inverse else (-1) ** k * comb(e + k - 1, k)
        else:
            v = comb(e + k - 1, k) if not inverse else (-1) ** k * comb(e, k)
        c[i * k] = Fraction(v)
    return c


def _mul_sparse_factor(a: List[Fraction], f: List[Fraction], step: int) -> List[Fraction]:
    n = len(a) - 1
    out = [Fraction(0)] * (n + 1)
    nz = [(k, v) for k, v in enumerate(f) if v]
    for k, v in nz:
        for j in range(n + 1 - k):
            if a[j]:
                out[j + k] += v * a[j]
    return out


def poincare_from_deviations(eps: DeviationVector, order: int) -> TruncSeries:
    """prod_i (1+t^(2i-1))^eps_(2i-1) / (1-t^(2i))^eps_(2i), modulo t^(order+1)."""
    if eps.bound < order:
        raise SeriesError(f"deviations known up to {eps.bound}, need {order}")
    coeffs = [Fraction(0)] * (order + 1)
    coeffs[0] = Fraction(1)
    for i in range(1, order + 1):
        e = eps[i]
        if e:
            coeffs = _mul_sparse_factor(coeffs, _factor_series(i, e, order), i)
    return TruncSeries(tuple(coeffs))


def deviations_from_poincare(P: TruncSeries) -> DeviationVector:
    """Peel off one product factor per degree; inverse of poincare_from_deviations."""
    if P[0] != 1:
        raise SeriesError("Poincare series must have constant term 1")
    n = P.order
    cur = list(P.coeffs)
    eps: Dict[int, int] = {}
    for i in range(1, n + 1):
        c = cur[i]
        if c.denominator != 1 or c < 0:
            raise SeriesError(f"extracted eps_{i} = {format_rational(c)} is not a nonnegative integer")
        e = int(c)
        eps[i] = e
        if e:
            cur = _mul_sparse_factor(cur, _factor_series(i, e, n, inverse=True), i)
    return DeviationVector(eps, n, "series_extraction")


def smallest_prime_factor(n: int) -> int:
    k = 2
    while k * k <= n:
        if n % k == 0:
            return k
        k += 1
    return n


def is_prime(n: int) -> bool:
    return n >= 2 and smallest_prime_factor(n) == n


def alpha_divisor_sum(eps: DeviationVector, i: int) -> int:
    """sum over divisors j of i with j != 1, j != i of (-1)^j * j * eps_j."""
    return sum((-1) ** j * j * eps[j] for j in range(2, i) if i % j == 0)


@dataclass
class AlphaSequence:
    alpha: Tuple[Fraction, ...]
    i0: Optional[int]
    deviations: DeviationVector
    divisor_sum: Dict[int, int] = field(default_factory=dict)
    mismatches: List[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "alpha": [format_rational(a) for a in self.alpha],
            "i0": self.i0,
            "divisor_sum_odd": {str(i): v for i, v in sorted(self.divisor_sum.items())},
            "mismatches": list(self.mismatches),
        }


class AlphaRouteMismatch(SeriesError):
    pass


def alpha_series(eps: DeviationVector, order: int) -> TruncSeries:
    """t * (dlog P_K(-t) + F'(t) + eps_1/(1-t)) with F = sum eps_i t^i, to t^order."""
    P = poincare_from_deviations(eps, order)
    logd = P.compose_neg_t().log_derivative()  # known to order-1
    F = TruncSeries.from_polynomial({i: eps[i] for i in range(1, order + 1)}, order)
    geo = TruncSeries(tuple(Fraction(eps[1]) for _ in range(order)))
    inner = logd + F.derivative() + geo
    return inner.shift(1)


def alpha_sequence(eps: DeviationVector, order: int, odd_from: int = 1, strict: bool = True) -> AlphaSequence:
    """Alpha coefficients via the series route, cross-checked on odd indices.

    Odd indices ``odd_from <= i <= order`` are compared with the divisor-sum
    closed form; any disagreement raises ``AlphaRouteMismatch`` unless
    ``strict`` is False, in which case it is recorded in ``mismatches``.
    """
    A = alpha_series(eps, order)
    closed = {}
    bad = []
    for i in range(max(1, odd_from), order + 1):
        if i % 2 == 1:
            closed[i] = alpha_divisor_sum(eps, i)
            if A[i] != closed[i]:
                bad.append(i)
    if bad and strict:
        raise AlphaRouteMismatch(
            f"series and divisor-sum routes disagree at odd i = {bad}: "
            + ", ".join(f"{format_rational(A[i])} vs {closed[i]}" for i in bad)
        )
    i0 = None
    known = [eps[i] for i in range(1, eps.bound + 1)]
    for start in range(1, eps.bound + 1):
        if all(v > 0 for v in known[start - 1 :]):
            i0 = start
            break
    return AlphaSequence(A.coeffs, i0, eps, closed, bad)


@dataclass
class ZeroPatternReport:
    period: Optional[int]
    residues: Tuple[int, ...]
    threshold: Optional[int]
    verdict: str  # consistent | inconsistent | inconclusive
    length: int
    r_max: int
    i0_max: int
    witnesses: Dict[int, Tuple[int, int]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "residues": list(self.residues),
            "threshold": self.threshold,
            "verdict": self.verdict,
            "length": self.length,
            "r_max": self.r_max,
            "i0_max": self.i0_max,
            "witnesses": {str(r): list(w) for r, w in sorted(self.witnesses.items())},
        }


def _pattern_at(zero: List[bool], r: int, i0: int):
    """Residues if the zero set on [i0, N) is a union of classes mod r, else a witness pair."""
    state: Dict[int, Tuple[bool, int]] = {}
    for i in range(i0, len(zero)):
        c = i % r
        if c in state:
            z, first = state[c]
            if z != zero[i]:
                return None, (first, i) if z else (i, first)
        else:
            state[c] = (zero[i], i)
    return tuple(sorted(c for c, (z, _) in state.items() if z)), None


def mahler_zero_pattern(seq: Sequence, r_max: int = 16, i0_max: Optional[int] = None) -> ZeroPatternReport:
    """Search for the smallest period r <= r_max and threshold i0 <= i0_max
    such that, from i0 on, seq[i] == 0 exactly on a union of residue classes.

    Every residue class must be observed at least twice past the threshold
    for a pattern to count.  When no (r, i0) works, the report carries for
    each r a witness pair (zero index, nonzero index) in one residue class
    beyond i0_max.
    """
    n = len(seq)
    if n < 4 * r_max:
        raise SeriesError(f"need at least {4 * r_max} terms for r_max = {r_max}, got {n}")
    if i0_max is None:
        i0_max = n // 2
    i0_max = min(i0_max, n - 2 * r_max)
    zero = [Fraction(v) == 0 for v in seq]
    for r in range(1, r_max + 1):
        for i0 in range(0, i0_max + 1):
            residues, _ = _pattern_at(zero, r, i0)
            if residues is not None:
                return ZeroPatternReport(r, residues, i0, "consistent", n, r_max, i0_max)
    witnesses = {}
    for r in range(1, r_max + 1):
        _, w = _pattern_at(zero, r, i0_max)
        witnesses[r] = w
    return ZeroPatternReport(None, (), None, "inconsistent", n, r_max, i0_max, witnesses)


@dataclass
class Recurrence:
    order: int
    coefficients: Tuple[Fraction, ...]  # a_n = sum c_k a_(n-k), k = 1..order
    numerator: Tuple[Fraction, ...]
    denominator: Tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "coefficients": [format_rational(c) for c in self.coefficients],
            "numerator": [format_rational(c) for c in self.numerator],
            "denominator": [format_rational(c) for c in self.denominator],
        }

    def extend(self, seq: Sequence, length: int) -> List[Fraction]:
        out = [Fraction(v) for v in seq]
        while len(out) < length:
            n = len(out)
            out.append(sum(c * out[n - k] for k, c in enumerate(self.coefficients, start=1)))
        return out


def recurrence_guess(seq: Sequence, max_order: int) -> Optional[Recurrence]:
    """Lowest-order recurrence a_n = sum_{k<=r} c_k a_(n-k) (n >= r) fitting every term.

    Solved exactly as an overdetermined Hankel-type system; found means the
    fit is exact on all available terms.
    """
    a = [Fraction(v) for v in seq]
    if len(a) < 2 * max_order + 4:
        raise SeriesError(f"need at least {2 * max_order + 4} terms for max_order {max_order}")
    for r in range(0, max_order + 1):
        rows = [[a[n - k] for k in range(1, r + 1)] for n in range(r, len(a))]
        rhs = [a[n] for n in range(r, len(a))]
        if r == 0:
            if all(v == 0 for v in a):
                return Recurrence(0, (), (), (Fraction(1),))
            continue
        sol = solve_linear(rows, rhs)
        if sol is None:
            continue
        den = [Fraction(1)] + [-c for c in sol]
        num = []
        for n in range(r):
            num.append(sum(den[k] * a[n - k] for k in range(0, n + 1)))
        while num and num[-1] == 0:
            num.pop()
        return Recurrence(r, tuple(sol), tuple(num), tuple(den))
    return None


def parse_sequence(text: str) -> List[Fraction]:
    """Rationals separated by whitespace or commas; '#' starts a comment."""
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        for s in line.split("#", 1)[0].replace(",", " ").split():
            try:
                out.append(Fraction(s))
            except (ValueError, ZeroDivisionError) as exc:
                raise SeriesError(f"line {lineno}: cannot parse {s!r} as a rational") from exc
    return out
