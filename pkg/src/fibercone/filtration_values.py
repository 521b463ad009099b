"""Value sequences m -> v(I_m) of graded families, the gamma invariant, and
finite certificates of distinct fiber-cone components.

Everything here works at a finite truncation ``M``. Attainment of the infimum
can be certified from finitely many terms; non-attainment never can, so the
status types keep "certified" and "unknown" apart.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from .blowup_chain import PullbackMap, paper_chain
from .qdivisor import (
    intersection_vector,
    is_antinef,
    paper_D,
)


@dataclass(frozen=True, order=True)
class LexPair:
    """Value in Z^2 with the lexicographic order."""

    first: int
    second: int

    def __add__(self, other: "LexPair") -> "LexPair":
        return LexPair(self.first + other.first, self.second + other.second)

    def __iter__(self) -> Iterator[int]:
        yield self.first
        yield self.second


Value = Union[int, LexPair]


class SubadditivityError(ValueError):
    """Raised when v(I_{m+n}) > v(I_m) + v(I_n) for some in-bound m, n."""

    def __init__(self, m: int, n: int, values: tuple):
        self.pair = (m, n)
        self.values = values
        super().__init__(
            f"not subadditive at (m, n) = ({m}, {n}): "
            f"v[{m + n}] = {values[2]} > v[{m}] + v[{n}] = {values[0]} + {values[1]}"
        )


@dataclass(frozen=True)
class ValueSequence:
    """Values v(I_1), ..., v(I_M); ``seq[m]`` is 1-based."""

    values: tuple
    provenance: str = "table"

    @property
    def bound(self) -> int:
        return len(self.values)

    def __getitem__(self, m: int):
        if not 1 <= m <= len(self.values):
            raise IndexError(f"m = {m} outside 1..{len(self.values)}")
        return self.values[m - 1]

    def __len__(self) -> int:
        return len(self.values)

    def to_json(self) -> dict:
        vals = [list(v) if isinstance(v, LexPair) else v for v in self.values]
        return {"M": self.bound, "values": vals, "provenance": self.provenance}

    @classmethod
    def from_json(cls, doc: dict | str) -> "ValueSequence":
        if isinstance(doc, str):
            doc = json.loads(doc)
        raw = doc["values"]
        M = int(doc.get("M", len(raw)))
        if len(raw) < M:
            raise ValueError(f"M = {M} but only {len(raw)} values supplied")
        vals = []
        for v in raw[:M]:
            if isinstance(v, (list, tuple)):
                if len(v) != 2:
                    raise ValueError(f"lex values must be pairs, got {v!r}")
                vals.append(LexPair(int(v[0]), int(v[1])))
            else:
                vals.append(int(v))
        return cls(tuple(vals), doc.get("provenance", "table"))


def _zero_like(v: Value) -> Value:
    return LexPair(0, 0) if isinstance(v, LexPair) else 0


def find_subadditivity_violation(seq: ValueSequence) -> tuple[int, int] | None:
    """First (m, n), m <= n, ordered by m + n then m, with v[m+n] > v[m] + v[n]."""
    M = seq.bound
    for total in range(2, M + 1):
        target = seq[total]
        for m in range(1, total // 2 + 1):
            if target > seq[m] + seq[total - m]:
                return (m, total - m)
    return None


def check_value_sequence(seq: ValueSequence) -> None:
    if seq.bound < 1:
        raise ValueError("empty value sequence")
    for m in range(1, seq.bound + 1):
        if seq[m] < _zero_like(seq[m]):
            raise ValueError(f"negative value at m = {m}: {seq[m]}")
    bad = find_subadditivity_violation(seq)
    if bad is not None:
        m, n = bad
        raise SubadditivityError(m, n, (seq[m], seq[n], seq[m + n]))


def ceil_value(n: int, m: int) -> int:
    """ceil(m (2^n - 1) / 2^(n-1)), computed in integers."""
    return -(-m * (2**n - 1) // 2 ** (n - 1))


def paper_value_sequence(n: int, M: int) -> ValueSequence:
    """m -> v_{E_n}(I_m) for the filtration cut out by F = lim F(l)."""
    if n < 1 or M < 1:
        raise ValueError("need n >= 1 and M >= 1")
    return ValueSequence(tuple(ceil_value(n, m) for m in range(1, M + 1)), f"formula:v_E{n}")


def composite_value_sequence(n: int, M: int) -> ValueSequence:
    """Rank-two composite valuation: values (ceil(m (2^n-1)/2^(n-1)), 0)."""
    if n < 1 or M < 1:
        raise ValueError("need n >= 1 and M >= 1")
    return ValueSequence(
        tuple(LexPair(ceil_value(n, m), 0) for m in range(1, M + 1)), f"formula:composite_E{n}"
    )


def normalized(value: Value, m: int):
    """value / m as an exact rational, or a lexicographic pair of rationals."""
    if isinstance(value, LexPair):
        return (Fraction(value.first, m), Fraction(value.second, m))
    return Fraction(value, m)


@dataclass(frozen=True)
class Attained:
    witness: int


@dataclass(frozen=True)
class NotAttainedUpTo:
    bound: int


@dataclass(frozen=True)
class GammaReport:
    gamma: object
    status: Union[Attained, NotAttainedUpTo]
    trace: tuple = field(repr=False)

    @property
    def attained(self) -> bool:
        return isinstance(self.status, Attained)

    def to_json(self) -> dict:
        def fmt(g):
            if isinstance(g, tuple):
                return [str(x) for x in g]
            return str(g)

        if isinstance(self.status, Attained):
            status = {"kind": "Attained", "witness": self.status.witness}
        else:
            status = {"kind": "NotAttainedUpTo", "bound": self.status.bound}
        return {"gamma": fmt(self.gamma), "status": status, "trace": [fmt(t) for t in self.trace]}


def gamma(seq: ValueSequence) -> GammaReport:
    """Truncated infimum of v(I_m)/m.

    The minimum over m <= M is found at its smallest witness m*. It counts as
    attained only when the bound reaches at least 2 m* and every in-bound
    multiple k m* repeats the same ratio; a minimum seen only at the very end
    of the window (like (m+1)/m) is reported as not attained.
    """
    check_value_sequence(seq)
    best = None
    best_m = 0
    trace = []
    for m in range(1, seq.bound + 1):
        r = normalized(seq[m], m)
        if best is None or r < best:
            best, best_m = r, m
        trace.append(best)
    multiples = range(2 * best_m, seq.bound + 1, best_m)
    if multiples and all(normalized(seq[k], k) == best for k in multiples):
        status = Attained(best_m)
    else:
        status = NotAttainedUpTo(seq.bound)
    return GammaReport(best, status, tuple(trace))


@dataclass(frozen=True)
class HasCenter:
    witness: int


@dataclass(frozen=True)
class UnknownUpTo:
    bound: int


def center_criterion(seq: ValueSequence) -> Union[HasCenter, UnknownUpTo]:
    """The valuation has a center on Proj of the Rees algebra iff gamma is attained.

    Only the positive direction is decidable from a truncation.
    """
    report = gamma(seq)
    if isinstance(report.status, Attained):
        return HasCenter(report.status.witness)
    return UnknownUpTo(seq.bound)


@dataclass(frozen=True)
class CoefficientCheck:
    ok: bool
    coefficient: int
    levels: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok


def stable_level(m: int) -> int:
    """Smallest l with m < 2^(l-1)."""
    return m.bit_length() + 1


def coefficient_cross_check(n: int, m: int) -> CoefficientCheck:
    """Compare the E_n coefficient of D(l)_m with ceil(m (2^n-1)/2^(n-1)).

    Runs over consecutive levels l past the point where m < 2^(l-1) and
    n <= l; at each step the divisor must be antinef and equal to the
    pullback of the previous level's divisor.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    lo = max(n, stable_level(m), 1)
    hi = max(lo + 2, math.ceil(math.log2(m)) + 3)
    levels = tuple(range(lo, hi + 1))
    chain = paper_chain(hi)
    expected = ceil_value(n, m)
    ok = True
    prev = None
    for l in levels:
        D = paper_D(l, m)
        ok &= D.coeffs[n - 1] == expected
        ok &= is_antinef(D, chain.form(l))
        if prev is not None:
            ok &= PullbackMap(chain, l - 1, l)(prev) == D
        prev = D
    return CoefficientCheck(bool(ok), expected, levels)


@dataclass(frozen=True)
class CertificateReport:
    N: int
    m: int
    l: int
    intersections: tuple[int, ...]
    distinguishing_witnesses: tuple[dict, ...]

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "m": self.m,
            "l": self.l,
            "intersections": list(self.intersections),
            "distinguishing_witnesses": [dict(w) for w in self.distinguishing_witnesses],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CertificateReport":
        return cls(
            int(doc["N"]),
            int(doc["m"]),
            int(doc["l"]),
            tuple(int(x) for x in doc["intersections"]),
            tuple(dict(w) for w in doc["distinguishing_witnesses"]),
        )


def certificate_parameters(N: int) -> tuple[int, int]:
    m = 2**N + 1
    return m, N + math.ceil(math.log2(m)) + 2


def distinct_components_certificate(N: int) -> CertificateReport:
    """Finite witness that E_1, ..., E_N give N distinct fiber-cone components.

    With m = 2^N + 1 every E_n (n <= N) meets -D(l)_m positively, so none is
    contracted on the model defined by I_m; the value sequences of the
    v_{E_n} are pairwise distinct, witnessed at m = 2^(b-1) for each a < b.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    m, l = certificate_parameters(N)
    chain = paper_chain(l)
    D = paper_D(l, m)
    vec = intersection_vector(-D, chain.form(l))
    witnesses = []
    for a in range(1, N + 1):
        for b in range(a + 1, N + 1):
            mw = 2 ** (b - 1)
            witnesses.append({"a": a, "b": b, "m": mw, "va": ceil_value(a, mw), "vb": ceil_value(b, mw)})
    return CertificateReport(N, m, l, tuple(vec[:N]), tuple(witnesses))


def verify_certificate(cert: CertificateReport) -> list[str]:
    """Re-check a certificate through the intersection matrix; returns problems found."""
    problems = []
    if cert.m >= 2 ** (cert.l - 1) or cert.l <= cert.N:
        problems.append(f"level {cert.l} too small for m = {cert.m}")
        return problems
    chain = paper_chain(cert.l)
    form = chain.form(cert.l)
    vec = intersection_vector(-paper_D(cert.l, cert.m), form)
    if not all(v >= 0 for v in vec):
        problems.append("-D is not nef")
    for n, claimed in enumerate(cert.intersections, start=1):
        if vec[n - 1] != claimed or claimed <= 0:
            problems.append(f"E_{n}: claimed {claimed}, matrix gives {vec[n - 1]}")
    if len(cert.intersections) != cert.N:
        problems.append("wrong number of intersection witnesses")

    seen = set()
    for w in cert.distinguishing_witnesses:
        a, b, mw = w["a"], w["b"], w["m"]
        seen.add((a, b))
        lw = max(b, stable_level(mw))
        wchain = paper_chain(lw + 1)
        Dw = paper_D(lw, mw)
        # stable in l, and -D nef so the coefficients are the values on I_m
        if PullbackMap(wchain, lw, lw + 1)(Dw) != paper_D(lw + 1, mw):
            problems.append(f"witness {w}: divisor not stable at level {lw}")
        if not is_antinef(Dw, wchain.form(lw)):
            problems.append(f"witness {w}: -D not nef")
        va, vb = Dw.coeffs[a - 1], Dw.coeffs[b - 1]
        if (va, vb) != (w["va"], w["vb"]) or va == vb:
            problems.append(f"witness {w}: matrix-side values {va}, {vb}")
    expected_pairs = {(a, b) for a in range(1, cert.N + 1) for b in range(a + 1, cert.N + 1)}
    if seen != expected_pairs:
        problems.append("distinguishing witnesses do not cover every pair")
    return problems


def eq_in2_holds(seq: ValueSequence) -> bool:
    """v[mn]/(mn) <= min(v[m]/m, v[n]/n) for every in-bound product."""
    M = seq.bound
    for m in range(1, M + 1):
        for n in range(1, M // m + 1):
            lhs = normalized(seq[m * n], m * n)
            if lhs > min(normalized(seq[m], m), normalized(seq[n], n)):
                return False
    return True

