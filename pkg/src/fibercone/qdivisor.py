"""Exact Q-divisors on a blowup level: round-up, intersection numbers, nefness.

The distinguished family is F(l) = sum_i (2^i - 1)/2^(i-1) E_i together with
its round-ups D(l)_m = ceil(m F(l)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

from .blowup_chain import IntersectionForm


class LevelMismatch(ValueError):
    pass


@dataclass(frozen=True)
class QDivisor:
    level: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.level:
            raise ValueError(f"level {self.level} divisor needs {self.level} coefficients")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    def __neg__(self) -> "QDivisor":
        return QDivisor(self.level, tuple(-c for c in self.coeffs))

    def to_json(self) -> dict:
        return {"level": self.level, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> "QDivisor":
        return cls(int(doc["level"]), tuple(Fraction(str(c)) for c in doc["coeffs"]))


@dataclass(frozen=True)
class IntegralDivisor:
    level: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.level:
            raise ValueError(f"level {self.level} divisor needs {self.level} coefficients")
        for c in self.coeffs:
            if isinstance(c, Fraction) and c.denominator != 1:
                raise ValueError(f"non-integral coefficient {c}")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def __neg__(self) -> "IntegralDivisor":
        return IntegralDivisor(self.level, tuple(-c for c in self.coeffs))

    def __add__(self, other: "IntegralDivisor") -> "IntegralDivisor":
        _check_level(self.level, other.level)
        return IntegralDivisor(self.level, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __le__(self, other: "IntegralDivisor") -> bool:
        """Componentwise comparison."""
        _check_level(self.level, other.level)
        return all(a <= b for a, b in zip(self.coeffs, other.coeffs))

    def to_json(self) -> dict:
        return {"level": self.level, "coeffs": [f"{c}/1" for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc: dict) -> "IntegralDivisor":
        return cls(int(doc["level"]), tuple(Fraction(str(c)) for c in doc["coeffs"]))


Divisor = Union[QDivisor, IntegralDivisor]


def _check_level(a: int, b: int) -> None:
    if a != b:
        raise LevelMismatch(f"level {a} vs level {b}")


def divisor_from_json(doc: dict) -> Divisor:
    coeffs = [Fraction(str(c)) for c in doc["coeffs"]]
    if all(c.denominator == 1 for c in coeffs):
        return IntegralDivisor(int(doc["level"]), tuple(coeffs))
    return QDivisor(int(doc["level"]), tuple(coeffs))


def paper_coefficient(i: int) -> Fraction:
    """(2^i - 1) / 2^(i-1)."""
    return Fraction(2**i - 1, 2 ** (i - 1))


@lru_cache(maxsize=None)
def paper_F(level: int) -> QDivisor:
    if level < 1:
        raise ValueError("level must be >= 1")
    return QDivisor(level, tuple(paper_coefficient(i) for i in range(1, level + 1)))


def ceil_multiple(F: QDivisor, m: int) -> IntegralDivisor:
    """Componentwise round-up of m F."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return IntegralDivisor(F.level, tuple(math.ceil(m * c) for c in F.coeffs))


def paper_D(level: int, m: int) -> IntegralDivisor:
    """D(l)_m = ceil(m F(l))."""
    return ceil_multiple(paper_F(level), m)


def intersect(D: Divisor, n: int, form: IntersectionForm):
    """(D . E_n), evaluated through the full matrix."""
    _check_level(D.level, form.level)
    if not 1 <= n <= form.level:
        raise ValueError(f"curve index {n} out of range 1..{form.level}")
    row = form.entries[n - 1]
    return sum(c * e for c, e in zip(D.coeffs, row) if e)


def intersect_divisors(D: Divisor, G: Divisor, form: IntersectionForm):
    _check_level(D.level, form.level)
    _check_level(G.level, form.level)
    return sum(d * intersect(G, i, form) for i, d in enumerate(D.coeffs, start=1) if d)


def intersection_vector(D: Divisor, form: IntersectionForm) -> list:
    """[(D . E_1), ..., (D . E_l)]."""
    _check_level(D.level, form.level)
    return [sum(c * e for c, e in zip(D.coeffs, row) if e) for row in form.entries]


def is_antinef(D: Divisor, form: IntersectionForm) -> bool:
    """True iff -D is nef, i.e. (-D . E_n) >= 0 for every exceptional curve."""
    return all(v <= 0 for v in intersection_vector(D, form))


def closed_form_intersection(m: int, n: int, l: int) -> int:
    """(-D(l)_m . E_n) from the floor identities, for l >= 2."""
    if l < 2:
        raise ValueError("closed forms need l >= 2")
    if not 1 <= n <= l:
        raise ValueError(f"curve index {n} out of range 1..{l}")
    if m < 1:
        raise ValueError("m must be >= 1")
    if n == 1:
        return m // 2
    if n < l:
        return m // 2 ** (n - 2) - 2 * (m // 2 ** (n - 1)) + m // 2**n
    return m // 2 ** (l - 2) - m // 2 ** (l - 1)


class CaseResult(NamedTuple):
    case: str
    x: int
    value: int


def classify_case(m: int, n: int, l: int) -> CaseResult:
    """Residue-class analysis of (-D(l)_m . E_n).

    Returns the case label ("1.1", "2.3.2", ...), the quotient ``x`` from the
    division of ``m`` and the resulting value, which is ``x`` or ``x + 1``.
    """
    if l < 2:
        raise ValueError("closed forms need l >= 2")
    if not 1 <= n <= l:
        raise ValueError(f"curve index {n} out of range 1..{l}")
    if n == 1:
        # 2m - ceil(3m/2) with m = 2x + r
        x, r = divmod(m, 2)
        return CaseResult("1.1" if r == 0 else "1.2", x, x)
    if n < l:
        x, r = divmod(m, 2**n)
        q = 2 ** (n - 2)
        if r < q:
            return CaseResult("2.1", x, x)
        if r < 2 * q:
            return CaseResult("2.2", x, x + 1)
        s = r - 2 * q
        if s >= q:
            return CaseResult("2.3.1", x, x + 1)
        return CaseResult("2.3.2", x, x)
    x, r = divmod(m, 2 ** (l - 1))
    if r < 2 ** (l - 2):
        return CaseResult("3.1", x, x)
    return CaseResult("3.2", x, x + 1)

