"""Vector-symbolic abduction and execution over attribute PMFs.

Each context PMF is mapped to an FHRR vector (a PMF-weighted, normalized
superposition of codewords). Rules are then scored with binding algebra on
those vectors and the winning rule is executed and cleaned up against the
codebook. The position attribute's arithmetic and progression rules act on
occupancy bitmaps, so those two are computed directly in PMF space.

Panels are indexed row-major: index ``3*(i-1) + (j-1)`` holds panel (i, j);
only the first eight are context.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Protocol, Sequence

import numpy as np
from scipy.special import rel_entr, softmax

from .domain import ATTRIBUTES, STEPS, VISUAL, Constellation, Rule, applicable_rules, rotate
from .pmf import PanelPMFs, cardinalities
from .vsa import FhrrCodebook, fhrr_bind, fhrr_identity, fhrr_sim, fhrr_unbind, fractional_power

log = logging.getLogger(__name__)

SIM_FLOOR = 0.05
SOFTMAX_SCALE = 40.0
GROUP_MARGIN = 0.05
DEFAULT_DIM = 1024


def _p(i: int, j: int) -> int:
    return 3 * (i - 1) + (j - 1)


def floored(s: float) -> float:
    return s if s >= SIM_FLOOR else 0.0


def jsd(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon divergence in nats."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape:
        raise ValueError(f"support mismatch: {p.shape} vs {q.shape}")
    m = 0.5 * (p + q)
    return float(max(0.0, 0.5 * rel_entr(p, m).sum() + 0.5 * rel_entr(q, m).sum()))


# --------------------------------------------------------------------------
# codebooks

class CodebookSet:
    """Lazily built FHRR codebooks keyed by (attribute, size, kind)."""

    def __init__(self, d: int = DEFAULT_DIM, seed: int = 0):
        self.d = d
        self.seed = seed
        self._books: dict[tuple[str, int, str], FhrrCodebook] = {}

    def get(self, attribute: str, size: int, kind: str) -> FhrrCodebook:
        key = (attribute, size, kind)
        if key not in self._books:
            self._books[key] = FhrrCodebook(f"{attribute}/{size}/{kind}", size, kind, self.d, self.seed)
        return self._books[key]


def pmf_to_fhrr(pmf: np.ndarray, codebook: FhrrCodebook) -> np.ndarray:
    return codebook.encode(pmf)


def encode_panels(pmfs: Sequence[np.ndarray], codebook: FhrrCodebook) -> np.ndarray:
    """(8, d) angle matrix of the context PMFs."""
    return codebook.encode(np.stack(pmfs))


def cleanup(vector: np.ndarray, codebook: FhrrCodebook, scale: float = SOFTMAX_SCALE) -> np.ndarray:
    """Associative-memory lookup followed by a softmax over codeword similarities."""
    return softmax(scale * codebook.similarities(vector))


# --------------------------------------------------------------------------
# rule probabilities on vectors

def rule_prob_arithmetic(sign: str, a: np.ndarray, codebook: FhrrCodebook) -> float:
    op = fhrr_bind if sign == "plus" else fhrr_unbind
    r1 = op(a[_p(1, 1)], a[_p(1, 2)])
    r2 = op(a[_p(2, 1)], a[_p(2, 2)])
    proj = codebook.similarities(op(a[_p(3, 1)], a[_p(3, 2)]))
    h_a = min(sum(floored(s) for s in proj), 1.0)
    return floored(fhrr_sim(r1, a[_p(1, 3)])) * floored(fhrr_sim(r2, a[_p(2, 3)])) * h_a


def differences(a: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
    d = {(i, j): fhrr_unbind(a[_p(i, j + 1)], a[_p(i, j)]) for i in (1, 2) for j in (1, 2)}
    d[(3, 1)] = fhrr_unbind(a[_p(3, 2)], a[_p(3, 1)])
    return d


def rule_prob_progression(a: np.ndarray) -> float:
    d = differences(a)
    h_p = min(max(1.0 - fhrr_sim(d[(1, 1)], fhrr_identity(a.shape[1])), 0.0), 1.0)
    return (floored(fhrr_sim(d[(1, 1)], d[(1, 2)])) * floored(fhrr_sim(d[(2, 1)], d[(2, 2)]))
            * floored(fhrr_sim(d[(1, 1)], d[(2, 1)])) * floored(fhrr_sim(d[(1, 1)], d[(3, 1)])) * h_p)


def progression_step(a: np.ndarray, codebook: FhrrCodebook, steps: Sequence[int] = STEPS) -> int:
    """Step whose power of the codebook base best matches the first difference."""
    d11 = differences(a)[(1, 1)]
    sims = [fhrr_sim(d11, fractional_power(codebook.base, s)) for s in steps]
    return int(steps[int(np.argmax(sims))])


def _row_products(a: np.ndarray):
    r = [fhrr_bind(fhrr_bind(a[_p(i, 1)], a[_p(i, 2)]), a[_p(i, 3)]) for i in (1, 2)]
    c = [fhrr_bind(fhrr_bind(a[_p(1, j)], a[_p(2, j)]), a[_p(3, j)]) for j in (1, 2)]
    return r, c


def _h_d(x: np.ndarray, y: np.ndarray) -> float:
    return min(max(1.0 - fhrr_sim(x, y), 0.0), 1.0)


def rule_prob_distribute_three(a: np.ndarray) -> float:
    (r1, r2), (c1, c2) = _row_products(a)
    return (floored(fhrr_sim(r1, r2)) * floored(fhrr_sim(c1, c2))
            * _h_d(a[_p(1, 1)], a[_p(2, 1)]) * _h_d(a[_p(1, 3)], a[_p(2, 3)]))


def rule_prob_constant(a: np.ndarray) -> float:
    pairs = [((1, 1), (1, 2)), ((1, 2), (1, 3)), ((2, 1), (2, 2)), ((2, 2), (2, 3)), ((3, 1), (3, 2))]
    out = 1.0
    for x, y in pairs:
        out *= floored(fhrr_sim(a[_p(*x)], a[_p(*y)]))
    return out


# --------------------------------------------------------------------------
# position rules in PMF space

@lru_cache(maxsize=None)
def position_table(kind: str, n_slots: int) -> np.ndarray:
    """0-based result index for every (k1, k2) pair of bitmaps; -1 where infeasible.

    Mirrors :func:`vsarpm.domain.apply_rule_row`: a union must add to both
    operands and a difference must remove at least one slot.
    """
    ks = np.arange(1, 2**n_slots)
    k1, k2 = ks[:, None], ks[None, :]
    if kind == "arithmetic_plus":
        out = k1 | k2
        out = np.where((out == k1) | (out == k2), 0, out)
    elif kind == "arithmetic_minus":
        out = np.where(k1 & k2, k1 & ~k2, 0)
    else:
        raise ValueError(kind)
    return out - 1  # infeasible (0) -> -1


@lru_cache(maxsize=None)
def rotation_table(step: int, n_slots: int) -> np.ndarray:
    return np.array([rotate(k, step, n_slots) for k in range(1, 2**n_slots)]) - 1


def _gather(p: np.ndarray, idx: np.ndarray) -> np.ndarray:
    return np.where(idx >= 0, p[np.maximum(idx, 0)], 0.0)


def position_rule_prob_pmf_space(rule: Rule, pmfs: Sequence[np.ndarray], n_slots: int) -> float:
    """Probability of a position arithmetic/progression rule, summed over bitmap tuples."""
    if rule.kind == "progression":
        rot = rotation_table(rule.step, n_slots)
        rows = [np.sum(pmfs[_p(i, 1)] * pmfs[_p(i, 2)][rot] * pmfs[_p(i, 3)][rot[rot]]) for i in (1, 2)]
        feas = np.sum(pmfs[_p(3, 1)] * pmfs[_p(3, 2)][rot])
    else:
        table = position_table(rule.kind, n_slots)
        rows = [pmfs[_p(i, 1)] @ (_gather(pmfs[_p(i, 3)], table) @ pmfs[_p(i, 2)]) for i in (1, 2)]
        feas = pmfs[_p(3, 1)] @ (table >= 0) @ pmfs[_p(3, 2)]
    return float(min(rows[0] * rows[1] * feas, 1.0))


def position_execute_pmf_space(rule: Rule, p31: np.ndarray, p32: np.ndarray, n_slots: int) -> np.ndarray:
    n = len(p31)
    if rule.kind == "progression":
        rot = rotation_table(rule.step, n_slots)
        out = np.zeros(n)
        np.add.at(out, rot, p31 * p32[rot])
        out2 = np.zeros(n)
        np.add.at(out2, rot, out)
        out = out2
    else:
        table = position_table(rule.kind, n_slots)
        w = np.outer(p31, p32)
        ok = table >= 0
        out = np.bincount(table[ok], weights=w[ok], minlength=n)
    total = out.sum()
    if total <= 0:
        log.warning("position %s has no feasible mass in row 3; keeping p(3,1)", rule)
        return np.asarray(p31, dtype=np.float64).copy()
    return out / total


# --------------------------------------------------------------------------
# engines

class Engine(Protocol):
    name: str

    def rule_probs(self, attribute: str, ctx: Sequence[np.ndarray], n_slots: int) -> dict[Rule, float]: ...

    def execute(self, rule: Rule, attribute: str, ctx: Sequence[np.ndarray], n_slots: int) -> np.ndarray: ...


class VsaEngine:
    """Rule abduction and execution with FHRR vector algebra."""

    name = "vsa"

    def __init__(self, d: int = DEFAULT_DIM, seed: int = 0):
        self.codebooks = CodebookSet(d, seed)

    def _vectors(self, attribute: str, ctx: Sequence[np.ndarray], kind: str):
        book = self.codebooks.get(attribute, len(ctx[0]), kind)
        return encode_panels(ctx, book), book

    def rule_probs(self, attribute, ctx, n_slots):
        rules = applicable_rules(attribute)
        disc, _ = self._vectors(attribute, ctx, "discrete")
        u: dict[Rule, float] = {}
        const = rule_prob_constant(disc)
        if attribute == "type":
            return {Rule("constant"): const, Rule("distribute_three"): rule_prob_distribute_three(disc)}
        if attribute == "position":
            for rule in rules:
                if rule.kind == "constant":
                    u[rule] = const
                elif rule.kind == "distribute_three":
                    u[rule] = rule_prob_distribute_three(disc)
                else:
                    u[rule] = position_rule_prob_pmf_space(rule, ctx, n_slots)
            return u
        cont, book = self._vectors(attribute, ctx, "continuous")
        u[Rule("constant")] = max(const, rule_prob_constant(cont))
        u[Rule("progression", progression_step(cont, book))] = rule_prob_progression(cont)
        u[Rule("arithmetic_plus")] = rule_prob_arithmetic("plus", cont, book)
        u[Rule("arithmetic_minus")] = rule_prob_arithmetic("minus", cont, book)
        u[Rule("distribute_three")] = rule_prob_distribute_three(disc)
        return u

    def execute(self, rule, attribute, ctx, n_slots):
        if rule.kind == "constant":
            return np.asarray(ctx[_p(3, 1)], dtype=np.float64).copy()
        if attribute == "position" and rule.kind != "distribute_three":
            return position_execute_pmf_space(rule, ctx[_p(3, 1)], ctx[_p(3, 2)], n_slots)
        kind = "discrete" if rule.kind == "distribute_three" else "continuous"
        a, book = self._vectors(attribute, ctx, kind)
        return cleanup(execute_vector(rule, a), book)


def execute_vector(rule: Rule, a: np.ndarray) -> np.ndarray:
    """Predicted (3,3) vector for a non-constant rule."""
    a31, a32 = a[_p(3, 1)], a[_p(3, 2)]
    if rule.kind == "arithmetic_plus":
        return fhrr_bind(a31, a32)
    if rule.kind == "arithmetic_minus":
        return fhrr_unbind(a31, a32)
    if rule.kind == "progression":
        return fhrr_bind(a32, differences(a)[(1, 1)])
    if rule.kind == "distribute_three":
        (r1, _), _ = _row_products(a)
        return fhrr_unbind(r1, fhrr_bind(a31, a32))
    raise ValueError(f"no vector execution for {rule}")


def execute_rule(rule: Rule, attribute: str, ctx: Sequence[np.ndarray], n_slots: int,
                 engine: VsaEngine | None = None) -> np.ndarray:
    return (engine or VsaEngine()).execute(rule, attribute, ctx, n_slots)


# --------------------------------------------------------------------------
# answer selection

def _restrict(p: np.ndarray) -> tuple[np.ndarray, float]:
    """Drop the inconsistency slot and renormalize; returns (pmf, inconsistency mass)."""
    real = p[:-1]
    total = real.sum()
    if total <= 0:
        return np.full(len(real), 1.0 / len(real)), float(p[-1])
    return real / total, float(p[-1])


def best_rule(u: dict[Rule, float]) -> tuple[Rule, float]:
    # first maximum in insertion order
    rule = max(u, key=lambda r: u[r])
    return rule, u[rule]


def spread_count(p_num: np.ndarray, n_slots: int) -> np.ndarray:
    """Position PMF spreading each count's mass uniformly over bitmaps of that size."""
    card = cardinalities(n_slots)
    per_count = np.bincount(card, minlength=n_slots + 1)
    return p_num[card - 1] / per_count[card]


@dataclass
class SolveResult:
    answer: int  # 1-based
    scores: list[float]
    components: list[dict] = field(default_factory=list)
    tie: bool = False

    def to_json(self) -> dict:
        return {"answer": self.answer, "scores": self.scores, "tie": self.tie, "components": self.components}


def predict_component(ctx: list[PanelPMFs], n_slots: int, engine: Engine) -> tuple[dict[str, np.ndarray], dict]:
    """Predicted (3,3) PMFs of one component plus diagnostics."""
    u_all, chosen, pred = {}, {}, {}
    for attr in ATTRIBUTES:
        raw = [panel[attr] for panel in ctx]
        damp = 1.0
        if attr in VISUAL:
            restricted = [_restrict(p) for p in raw]
            series = [r for r, _ in restricted]
            for _, m in restricted:
                damp *= 1.0 - m
        else:
            series = raw
        u = {r: min(max(v, 0.0), 1.0) * damp for r, v in engine.rule_probs(attr, series, n_slots).items()}
        rule, _ = best_rule(u)
        u_all[attr], chosen[attr] = u, rule
        if rule.kind == "constant" and engine.name == "vsa":
            out = np.asarray(raw[_p(3, 1)], dtype=np.float64).copy()  # bit-exact pass-through
        else:
            out = engine.execute(rule, attr, series, n_slots)
            if attr in VISUAL and len(out) == len(raw[0]) - 1:
                out = np.append(out, 0.0)
        pred[attr] = out

    u_pos = u_all["position"][chosen["position"]]
    u_num = u_all["number"][chosen["number"]]
    governs = "position" if u_pos >= u_num - GROUP_MARGIN else "number"
    if governs == "position":
        card = cardinalities(n_slots)
        pred["number"] = np.bincount(card - 1, weights=pred["position"], minlength=n_slots)
    else:
        pred["position"] = spread_count(pred["number"], n_slots)
    diag = {
        "governs": governs,
        "chosen": {a: str(chosen[a]) for a in ATTRIBUTES},
        "u": {a: {str(r): float(v) for r, v in u_all[a].items()} for a in ATTRIBUTES},
    }
    return pred, diag


def solve(context: Sequence[Sequence[PanelPMFs]], candidates: Sequence[Sequence[PanelPMFs]],
          constellation: Constellation, engine: Engine | None = None, include_pmfs: bool = False) -> SolveResult:
    """Pick the candidate with the lowest summed JSD to the predicted (3,3) PMFs."""
    engine = engine or VsaEngine()
    if len(context) != 8 or len(candidates) != 8:
        raise ValueError("need 8 context panels and 8 candidates")
    scores = np.zeros(len(candidates))
    comps = []
    for ci, slots in enumerate(constellation.components):
        ctx = [panel[ci] for panel in context]
        pred, diag = predict_component(ctx, len(slots), engine)
        div = {}
        for attr in ATTRIBUTES:
            div[attr] = [jsd(pred[attr], cand[ci][attr]) for cand in candidates]
            scores += np.array(div[attr])
        diag["divergence"] = div
        if include_pmfs:
            diag["predicted"] = {a: pred[a].tolist() for a in ATTRIBUTES}
        comps.append(diag)
    best = int(np.argmin(scores))
    tie = int(np.sum(scores == scores[best])) > 1
    if tie:
        log.info("tied candidate scores; picking lowest index %d", best + 1)
    return SolveResult(best + 1, scores.tolist(), comps, tie)
