"""Chains of point blowups of a nonsingular surface germ.

A chain is purely combinatorial: blowup ``i`` (1-based) is centred at a point
lying on exactly one earlier exceptional curve ``parents[i]`` or on none
(``FREE``). Everything is exact integer arithmetic.
"""

from __future__ import annotations

import json
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Sequence

FREE = 0


class ChainError(ValueError):
    pass


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric pairing (E_i . E_j) on the exceptional curves of one level."""

    level: int
    entries: tuple[tuple[int, ...], ...]

    def pair(self, i: int, j: int) -> int:
        """Intersection number of curves ``i`` and ``j`` (1-based)."""
        return self.entries[i - 1][j - 1]

    def as_lists(self) -> list[list[int]]:
        return [list(row) for row in self.entries]

    def leading_minors(self) -> list[int]:
        return leading_principal_minors(self.entries)

    def is_negative_definite(self) -> bool:
        # Sylvester: minors alternate in sign starting negative.
        return all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(self.leading_minors()))


@dataclass(frozen=True)
class BlowupChain:
    length: int
    parents: tuple[int, ...]
    _forms: tuple[IntersectionForm, ...] = field(repr=False, compare=False, default=())

    def form(self, level: int | None = None) -> IntersectionForm:
        return intersection_form(self, self.length if level is None else level)

    def truncate(self, level: int) -> "BlowupChain":
        if not 1 <= level <= self.length:
            raise ChainError(f"level {level} out of range 1..{self.length}")
        return BlowupChain(level, self.parents[:level], self._forms[:level])

    def to_json(self) -> dict:
        return {"length": self.length, "parents": list(self.parents)}


def build_chain(length: int, parents: Sequence[int]) -> BlowupChain:
    """Build a chain and its intersection forms at every level.

    ``parents[i-1]`` is the curve carrying the ``i``-th blown-up point, or
    ``FREE``. Each blowup appends a ``-1`` curve meeting its parent once and
    lowers the parent's self-intersection by one.
    """
    parents = tuple(int(p) for p in parents)
    if length < 1:
        raise ChainError("chain length must be positive")
    if len(parents) != length:
        raise ChainError(f"expected {length} parents, got {len(parents)}")
    if parents[0] != FREE:
        raise ChainError("the first blowup is of the closed point; parents[1] must be Free (0)")
    for i, p in enumerate(parents, start=1):
        if p < 0 or p >= i:
            raise ChainError(f"parents[{i}] = {p} must be Free (0) or an earlier curve index < {i}")

    forms = []
    rows: list[list[int]] = []
    for i, p in enumerate(parents, start=1):
        for row in rows:
            row.append(0)
        rows.append([0] * i)
        rows[i - 1][i - 1] = -1
        if p != FREE:
            rows[i - 1][p - 1] = rows[p - 1][i - 1] = 1
            rows[p - 1][p - 1] -= 1
        forms.append(IntersectionForm(i, tuple(tuple(r) for r in rows)))
    return BlowupChain(length, parents, tuple(forms))


def paper_chain(length: int) -> BlowupChain:
    """Each new point lies on the newest curve only: parents = [Free, 1, 2, ...]."""
    if length < 1:
        raise ChainError("chain length must be positive")
    return build_chain(length, [FREE] + list(range(1, length)))


def intersection_form(chain: BlowupChain, level: int) -> IntersectionForm:
    if not 1 <= level <= chain.length:
        raise ChainError(f"level {level} out of range 1..{chain.length}")
    return chain._forms[level - 1]


def chain_from_json(doc: dict | str) -> BlowupChain:
    """Accept ``{"length", "parents"}`` or ``{"preset": "paper_chain", "length"}``."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise ChainError("chain description must be a JSON object")
    preset = doc.get("preset")
    try:
        if preset is not None:
            if preset not in ("paper_chain", "paper"):
                raise ChainError(f"unknown preset {preset!r}")
            return paper_chain(int(doc["length"]))
        parents = doc["parents"]
        length = int(doc.get("length", len(parents)))
    except KeyError as exc:
        raise ChainError(f"missing field {exc.args[0]!r}") from None
    return build_chain(length, parents)


def leading_principal_minors(matrix: Sequence[Sequence[int]]) -> list[int]:
    """All leading principal minors via fraction-free (Bareiss) elimination."""
    a = [list(row) for row in matrix]
    n = len(a)
    minors = []
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            # A zero pivot means this minor vanishes; later minors need pivoting
            # which would scramble the leading structure, so compute them directly.
            minors.append(0)
            for j in range(k + 1, n):
                minors.append(_det([row[: j + 1] for row in matrix[: j + 1]]))
            return minors
        minors.append(a[k][k])
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return minors


def _det(m: Sequence[Sequence[int]]) -> int:
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return int(det)


@dataclass(frozen=True)
class PullbackMap:
    """The natural morphism X_b -> X_a, acting on divisors by pullback."""

    chain: BlowupChain
    source: int
    target: int

    def __post_init__(self):
        if not 1 <= self.source <= self.target <= self.chain.length:
            raise ChainError(
                f"pullback {self.source}->{self.target} needs 1 <= a <= b <= {self.chain.length}"
            )

    def __call__(self, divisor):
        return pullback(self, divisor)


def pullback_coeffs(parents: Sequence[int], coeffs: Sequence, source: int, target: int) -> list:
    out = list(coeffs)
    for new in range(source + 1, target + 1):
        p = parents[new - 1]
        # out[0] * 0 keeps the coefficient type (int or Fraction)
        out.append(out[p - 1] if p != FREE else out[0] * 0)
    return out


def pullback(pmap: PullbackMap, divisor):
    """Pull a divisor from level ``source`` back to level ``target``.

    One step a -> a+1 keeps old coefficients and gives the new curve the
    coefficient of its parent (zero when the point is free).
    """
    if divisor.level != pmap.source:
        raise ChainError(f"divisor lives on level {divisor.level}, map starts at {pmap.source}")
    coeffs = pullback_coeffs(pmap.chain.parents, divisor.coeffs, pmap.source, pmap.target)
    return type(divisor)(pmap.target, tuple(coeffs))
