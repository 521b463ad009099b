"""Gauss extension of the t-adic valuation to polynomials in z.

Scalars are Laurent polynomials in ``t`` with rational coefficients; their
valuation is the lowest exponent present. On K[z] the Gauss valuation is
w(sum a_i z^i) = min(v(a_i) + i).
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

INFINITY = math.inf


@dataclass(frozen=True)
class ValuedScalar:
    """Laurent polynomial in t; ``terms`` holds (exponent, coefficient), sorted, nonzero."""

    terms: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, object]) -> "ValuedScalar":
        acc: dict[int, Fraction] = {}
        for e, c in mapping.items():
            acc[int(e)] = acc.get(int(e), Fraction(0)) + Fraction(str(c) if isinstance(c, str) else c)
        return cls(tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    @classmethod
    def constant(cls, c) -> "ValuedScalar":
        return cls.from_mapping({0: c})

    @classmethod
    def monomial(cls, exponent: int, c=1) -> "ValuedScalar":
        return cls.from_mapping({exponent: c})

    def valuation(self):
        """t-adic order; ``INFINITY`` for zero."""
        return self.terms[0][0] if self.terms else INFINITY

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ValuedScalar") -> "ValuedScalar":
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return ValuedScalar(tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    def __neg__(self) -> "ValuedScalar":
        return ValuedScalar(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "ValuedScalar") -> "ValuedScalar":
        return self + (-other)

    def __mul__(self, other: "ValuedScalar") -> "ValuedScalar":
        acc: dict[int, Fraction] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms, other.terms):
            acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return ValuedScalar(tuple(sorted((e, c) for e, c in acc.items() if c != 0)))

    def to_json(self) -> dict:
        return {str(e): f"{c.numerator}/{c.denominator}" for e, c in self.terms}


ZERO = ValuedScalar()
ONE = ValuedScalar.constant(1)


@dataclass(frozen=True)
class GaussPolynomial:
    """a_0 + a_1 z + ... + a_d z^d with ValuedScalar coefficients (trailing zeros trimmed)."""

    coeffs: tuple[ValuedScalar, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1].is_zero():
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "GaussPolynomial") -> "GaussPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return GaussPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __mul__(self, other: "GaussPolynomial") -> "GaussPolynomial":
        if self.is_zero() or other.is_zero():
            return GaussPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return GaussPolynomial(tuple(out))

    def to_json(self) -> dict:
        return {"coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc) -> "GaussPolynomial":
        """``{"coeffs": [{t_exp: "p/q", ...}, ...]}`` indexed by z-degree, or the bare list."""
        if isinstance(doc, str):
            doc = json.loads(doc)
        raw = doc["coeffs"] if isinstance(doc, dict) else doc
        if not isinstance(raw, list):
            raise ValueError("polynomial coefficients must be a list indexed by z-degree")
        return cls(tuple(ValuedScalar.from_mapping(c or {}) for c in raw))


Z = GaussPolynomial((ZERO, ONE))


def gauss_value(f: GaussPolynomial):
    """w(f) = min over nonzero a_i of v(a_i) + i; ``INFINITY`` for f = 0."""
    return min((a.valuation() + i for i, a in enumerate(f.coeffs) if not a.is_zero()), default=INFINITY)


def gauss_multiplicativity_check(f: GaussPolynomial, g: GaussPolynomial) -> bool:
    if f.is_zero() or g.is_zero():
        raise ValueError("multiplicativity is checked on nonzero polynomials")
    return gauss_value(f * g) == gauss_value(f) + gauss_value(g)


def extended_ideal_value(a: Sequence[int], n: int) -> int:
    """w-value of I_w(n) = sum_{i+j=n} I_v(i) z^j A, i.e. min_{i+j=n} a(i) + j.

    ``a`` is indexed from 0 and must have a(0) = 0.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n >= len(a):
        raise IndexError(f"n = {n} beyond the supplied sequence (length {len(a)})")
    if a[0] != 0:
        raise ValueError("a(0) must be 0")
    return min(a[i] + (n - i) for i in range(n + 1))


def associated_graded_dimensions(generators: Iterable[int], bound: int) -> list[int]:
    """Number of monomial classes of value exactly k, for k = 0..bound.

    The toy ring has one monomial per element of the numerical semigroup
    generated by ``generators``, so each graded piece has size 0 or 1.
    """
    gens = sorted(set(int(g) for g in generators))
    if not gens:
        raise ValueError("empty generator set")
    if gens[0] <= 0:
        raise ValueError("generators must be positive")
    member = [False] * (bound + 1)
    member[0] = True
    for k in range(1, bound + 1):
        member[k] = any(k >= g and member[k - g] for g in gens)
    return [int(x) for x in member]


def random_scalar(rng: random.Random, max_terms: int = 4, exp_range: tuple[int, int] = (0, 3)) -> ValuedScalar:
    k = rng.randint(0, max_terms)
    return ValuedScalar.from_mapping(
        {rng.randint(*exp_range): Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(k)}
    )


def random_polynomial(rng: random.Random, max_z_degree: int = 4, t_degree: int = 3) -> GaussPolynomial:
    """Nonzero random polynomial; small coefficient pool so cancellation happens."""
    while True:
        d = rng.randint(0, max_z_degree)
        f = GaussPolynomial(tuple(random_scalar(rng, exp_range=(0, t_degree)) for _ in range(d + 1)))
        if not f.is_zero():
            return f
