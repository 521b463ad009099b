"""Verification sweeps over the D(l)_m family.

Work is split into independent tasks (one per level, per source level of a
pullback, per curve index); results are merged in task order, so the report
does not depend on how many worker processes ran them.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

from .blowup_chain import PullbackMap, paper_chain
from .filtration_values import coefficient_cross_check
from .qdivisor import (
    QDivisor,
    ceil_multiple,
    closed_form_intersection,
    classify_case,
    intersection_vector,
    paper_D,
)

ALL_CHECKS = ("equivalence", "antinef", "pullback", "positivity", "nonvacuity", "bridge")


@dataclass(frozen=True)
class SweepConfig:
    l_max: int = 12
    m_max: int = 4096
    n_max: int = 10
    bridge_m_max: int = 512
    checks: tuple[str, ...] = ALL_CHECKS
    family: tuple[Fraction, ...] | None = None
    rows: bool = False

    def __post_init__(self):
        for name in ("l_max", "m_max", "n_max", "bridge_m_max"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        unknown = set(self.checks) - set(ALL_CHECKS)
        if unknown:
            raise ValueError(f"unknown checks: {sorted(unknown)}")


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    failed: int = 0
    first_counterexample: dict | None = None

    @property
    def total(self) -> int:
        return self.passed + self.failed

    def record(self, ok: bool, detail: dict) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.first_counterexample is None:
                self.first_counterexample = detail

    def merge(self, other: "CheckResult") -> None:
        self.passed += other.passed
        self.failed += other.failed
        if self.first_counterexample is None:
            self.first_counterexample = other.first_counterexample

    def to_json(self) -> dict:
        d = asdict(self)
        d["total"] = self.total
        return d


@dataclass
class SweepResult:
    checks: dict[str, CheckResult] = field(default_factory=dict)
    rows: list[tuple] = field(default_factory=list)
    witnesses: list[dict] = field(default_factory=list)

    def check(self, name: str) -> CheckResult:
        return self.checks.setdefault(name, CheckResult(name))

    def merge(self, other: "SweepResult") -> None:
        for name, res in other.checks.items():
            self.check(name).merge(res)
        self.rows.extend(other.rows)
        self.witnesses.extend(other.witnesses)

    @property
    def failures(self) -> int:
        return sum(c.failed for c in self.checks.values())

    @property
    def total(self) -> int:
        return sum(c.total for c in self.checks.values())


def _level_task(l: int, cfg: SweepConfig) -> SweepResult:
    out = SweepResult()
    form = paper_chain(l).form(l)
    want = set(cfg.checks)
    for m in range(1, cfg.m_max + 1):
        D = paper_D(l, m)
        vec = [-v for v in intersection_vector(D, form)]  # (-D . E_n)
        if "antinef" in want:
            out.check("antinef").record(all(v >= 0 for v in vec), {"l": l, "m": m, "intersections": vec})
        for n in range(1, l + 1):
            mv = vec[n - 1]
            if "equivalence" in want:
                cf = closed_form_intersection(m, n, l)
                case = classify_case(m, n, l)
                agree = mv == cf == case.value
                out.check("equivalence").record(
                    agree, {"l": l, "m": m, "n": n, "matrix": mv, "closed_form": cf, "case": case.case}
                )
                if cfg.rows:
                    out.rows.append((l, m, n, mv, cf, agree))
            if "positivity" in want and m > 2**n:
                out.check("positivity").record(mv > 0, {"l": l, "m": m, "n": n, "matrix": mv})
    return out


def _pullback_task(a: int, cfg: SweepConfig) -> SweepResult:
    out = SweepResult()
    chain = paper_chain(cfg.l_max)
    for m in range(1, min(2 ** (a - 1), cfg.m_max + 1)):
        Da = paper_D(a, m)
        for b in range(a + 1, cfg.l_max + 1):
            pulled = PullbackMap(chain, a, b)(Da)
            out.check("pullback").record(
                pulled == paper_D(b, m), {"a": a, "b": b, "m": m, "pullback": list(pulled.coeffs)}
            )
    return out


def _nonvacuity_task(n: int, cfg: SweepConfig) -> SweepResult:
    """Find some m <= 2^n with (-D(l)_m . E_n) = 0, so the bound m > 2^n is not vacuous."""
    out = SweepResult()
    found = None
    for l in range(max(n, 2), cfg.l_max + 1):
        form = paper_chain(l).form(l)
        for m in range(1, 2**n + 1):
            if -intersection_vector(paper_D(l, m), form)[n - 1] == 0:
                found = {"n": n, "l": l, "m": m}
                break
        if found:
            break
    out.check("nonvacuity").record(found is not None, {"n": n})
    if found:
        out.witnesses.append(found)
    return out


def _bridge_task(n: int, cfg: SweepConfig) -> SweepResult:
    out = SweepResult()
    for m in range(1, cfg.bridge_m_max + 1):
        res = coefficient_cross_check(n, m)
        out.check("bridge").record(res.ok, {"n": n, "m": m, "levels": list(res.levels)})
    return out


def _family_task(l: int, cfg: SweepConfig) -> SweepResult:
    out = SweepResult()
    F = QDivisor(l, cfg.family)
    form = paper_chain(l).form(l)
    for m in range(1, cfg.m_max + 1):
        vec = [-v for v in intersection_vector(ceil_multiple(F, m), form)]
        out.check("family_antinef").record(all(v >= 0 for v in vec), {"l": l, "m": m, "intersections": vec})
    return out


_TASKS = {
    "level": _level_task,
    "pullback": _pullback_task,
    "nonvacuity": _nonvacuity_task,
    "bridge": _bridge_task,
    "family": _family_task,
}


def _run(task: tuple[str, int, SweepConfig]) -> SweepResult:
    kind, arg, cfg = task
    return _TASKS[kind](arg, cfg)


def plan(cfg: SweepConfig) -> list[tuple[str, int, SweepConfig]]:
    if cfg.family is not None:
        return [("family", len(cfg.family), cfg)]
    want = set(cfg.checks)
    tasks = []
    if want & {"equivalence", "antinef", "positivity"}:
        tasks += [("level", l, cfg) for l in range(2, cfg.l_max + 1)]
    if "pullback" in want:
        tasks += [("pullback", a, cfg) for a in range(2, cfg.l_max)]
    if "nonvacuity" in want:
        tasks += [("nonvacuity", n, cfg) for n in range(1, cfg.l_max)]
    if "bridge" in want:
        tasks += [("bridge", n, cfg) for n in range(1, cfg.n_max + 1)]
    return tasks


def run_sweep(cfg: SweepConfig, jobs: int = 1) -> SweepResult:
    tasks = plan(cfg)
    result = SweepResult()
    for name in (("family_antinef",) if cfg.family is not None else cfg.checks):
        result.check(name)
    if jobs <= 1 or len(tasks) <= 1:
        parts = [_run(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run, tasks))
    for part in parts:
        result.merge(part)
    return result


def parse_family(text: str | Sequence) -> tuple[Fraction, ...]:
    items = text.split(",") if isinstance(text, str) else text
    coeffs = tuple(Fraction(str(x).strip()) for x in items)
    if not coeffs or any(c < 0 for c in coeffs):
        raise ValueError("family coefficients must be a nonempty list of nonnegative rationals")
    return coeffs
