"""Exact probabilistic abduction by summing over every valid rule implementation.

This is the unrestricted brute-force counterpart of :mod:`vsarpm.backend`:
each rule probability is the total probability mass of the context value
tuples that realize the rule, with the same row-3 feasibility semantics the
backend uses. It serves as the correctness oracle and as the timing
baseline. Work is counted up front against a budget so that oversized
searches fail loudly instead of hanging.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .domain import Infeasible, Rule, apply_rule_row, applicable_rules
from .backend import SolveResult, solve

DEFAULT_BUDGET = 10**9


class BudgetExceeded(RuntimeError):
    """The enumeration would evaluate more tuples than the configured budget."""


class DegenerateEvidence(ValueError):
    """No valid rule implementation carries probability mass."""


def _p(i: int, j: int) -> int:
    return 3 * (i - 1) + (j - 1)


def _check_budget(work: int, budget: int, what: str) -> None:
    if work > budget:
        raise BudgetExceeded(f"{what} needs {work:,} tuple evaluations; budget is {budget:,}")


@lru_cache(maxsize=64)
def _row_table(kind: str, step: int | None, n: int, position: bool) -> np.ndarray:
    """0-based third value for each (x, y) pair; -1 where the rule cannot complete the row."""
    table = np.full((n, n), -1, dtype=np.int64)
    if position:
        n_slots = n.bit_length()
        rule = Rule(kind, step)
        for x in range(n):
            for y in range(n):
                try:
                    table[x, y] = apply_rule_row(rule, "position", x + 1, y + 1, n_slots) - 1
                except Infeasible:
                    pass
        return table
    v = np.arange(1, n + 1)
    if kind == "arithmetic_plus":
        out = v[:, None] + v[None, :]
    elif kind == "arithmetic_minus":
        out = v[:, None] - v[None, :]
    else:  # progression
        out = np.where(v[None, :] - v[:, None] == step, v[None, :] + step, 0)
    ok = (out >= 1) & (out <= n)
    table[ok] = out[ok] - 1
    return table


def _row_mass(table: np.ndarray, p1, p2, p3) -> float:
    ok = table >= 0
    third = np.where(ok, p3[np.maximum(table, 0)], 0.0)
    return float(np.sum(np.outer(p1, p2) * third))


def _feasible_mass(table: np.ndarray, p1, p2) -> float:
    return float(np.sum(np.outer(p1, p2) * (table >= 0)))


def _row_local_prob(kind, step, pmfs, position) -> float:
    n = len(pmfs[0])
    _check_budget(3 * n * n, DEFAULT_BUDGET, kind)
    table = _row_table(kind, step, n, position)
    rows = [_row_mass(table, pmfs[_p(i, 1)], pmfs[_p(i, 2)], pmfs[_p(i, 3)]) for i in (1, 2)]
    return rows[0] * rows[1] * _feasible_mass(table, pmfs[_p(3, 1)], pmfs[_p(3, 2)])


def exact_constant(pmfs) -> float:
    rows = [float(np.sum(pmfs[_p(i, 1)] * pmfs[_p(i, 2)] * pmfs[_p(i, 3)])) for i in (1, 2)]
    return rows[0] * rows[1] * float(np.sum(pmfs[_p(3, 1)] * pmfs[_p(3, 2)]))


def exact_progression_any_step(pmfs) -> float:
    """Progression probability summed over every nonzero step (a single step shared by all rows)."""
    n = len(pmfs[0])
    return sum(_row_local_prob("progression", s, pmfs, False) for s in range(-(n - 1), n) if s != 0)


def _d3_terms(pmfs, budget: int):
    """Yield, for each first value a, the (n, n) weights of both Latin completions.

    Row 1 is (a, b, c) with distinct values. Completion A has rows
    (b, c, a) / (c, a, b), completion B has rows (c, a, b) / (b, c, a).
    The missing (3,3) value is b under A and a under B.
    """
    n = len(pmfs[0])
    _check_budget(2 * n * max(n - 1, 0) * max(n - 2, 0), budget, "distribute_three")
    p11, p12, p13, p21, p22, p23, p31, p32 = (np.asarray(p, dtype=np.float64) for p in pmfs[:8])
    row1 = np.outer(p12, p13)  # [b, c]
    np.fill_diagonal(row1, 0.0)
    shape_a = row1 * np.outer(p21, p22 * p31)
    shape_b = row1 * np.outer(p23 * p31, p21 * p32)
    for a in range(n):
        comp_a = shape_a.copy()
        comp_a[a, :] = 0.0
        comp_a[:, a] = 0.0
        comp_a *= p11[a] * p23[a] * p32[a]
        comp_b = shape_b.copy()
        comp_b[a, :] = 0.0
        comp_b[:, a] = 0.0
        comp_b *= p11[a] * p22[a]
        yield a, comp_a, comp_b


def exact_distribute_three(pmfs, budget: int = DEFAULT_BUDGET) -> float:
    return float(sum(ca.sum() + cb.sum() for _, ca, cb in _d3_terms(pmfs, budget)))


def exact_rule_prob(rule: Rule, pmfs: Sequence[np.ndarray], attribute: str = "size",
                    budget: int = DEFAULT_BUDGET) -> float:
    """Exact probability of ``rule`` given eight context PMFs."""
    pmfs = [np.asarray(p, dtype=np.float64) for p in pmfs]
    n = len(pmfs[0])
    if rule.kind == "constant":
        _check_budget(8 * n, budget, "constant")
        return exact_constant(pmfs)
    if rule.kind == "distribute_three":
        return exact_distribute_three(pmfs, budget)
    _check_budget(3 * n * n, budget, str(rule))
    return _row_local_prob(rule.kind, rule.step, pmfs, attribute == "position")


def exact_execute(rule: Rule, pmfs: Sequence[np.ndarray], attribute: str = "size",
                  budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Distribution of the (3,3) value given the rule holds, normalized."""
    pmfs = [np.asarray(p, dtype=np.float64) for p in pmfs]
    n = len(pmfs[0])
    p31, p32 = pmfs[_p(3, 1)], pmfs[_p(3, 2)]
    if rule.kind == "constant":
        out = p31 * p32
    elif rule.kind == "distribute_three":
        out = np.zeros(n)
        for a, ca, cb in _d3_terms(pmfs, budget):
            out += ca.sum(axis=1)  # third value b
            out[a] += cb.sum()
    else:
        _check_budget(n * n, budget, str(rule))
        table = _row_table(rule.kind, rule.step, n, attribute == "position")
        ok = table >= 0
        out = np.bincount(table[ok], weights=np.outer(p31, p32)[ok], minlength=n)
    total = out.sum()
    if not total > 0:
        raise DegenerateEvidence(f"{rule}: no valid completion of row 3 carries mass")
    return out / total


class ExactEngine:
    """Rule scoring and execution by exhaustive summation."""

    name = "exact"

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget

    def rule_probs(self, attribute, ctx, n_slots):
        return {rule: exact_rule_prob(rule, ctx, attribute, self.budget) for rule in applicable_rules(attribute)}

    def execute(self, rule, attribute, ctx, n_slots):
        try:
            return exact_execute(rule, ctx, attribute, self.budget)
        except DegenerateEvidence:
            # the winning rule had zero probability everywhere; fall back to the row-3 start
            return np.asarray(ctx[_p(3, 1)], dtype=np.float64).copy()


def exact_solve(context, candidates, constellation, budget: int = DEFAULT_BUDGET,
                include_pmfs: bool = False) -> SolveResult:
    """The backend's selection pipeline with exact rule probabilities."""
    return solve(context, candidates, constellation, ExactEngine(budget), include_pmfs)

