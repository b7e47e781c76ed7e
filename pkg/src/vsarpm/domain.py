"""RAVEN-style domain: constellations, rules, scenes and a seeded test generator.

Attribute values are 1-based integers. The position attribute of a
component is an occupancy bitmap over the component's slots (bit ``i`` set
means the ``i``-th slot of the component holds an object), so its values
run over ``1 .. 2**n - 1``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

ATTRIBUTES = ("position", "number", "type", "size", "color")
VISUAL = ("type", "size", "color")
N_TYPE, N_SIZE, N_COLOR = 5, 6, 10
VISUAL_RANGE = {"type": N_TYPE, "size": N_SIZE, "color": N_COLOR}
N_GLOBAL_POSITIONS = 22

RULE_KINDS = ("constant", "progression", "arithmetic_plus", "arithmetic_minus", "distribute_three")
STEPS = (-2, -1, 1, 2)
SCHEMA_VERSION = 1


class GenerationError(RuntimeError):
    pass


class Infeasible(ValueError):
    """A rule cannot produce a valid value from the given inputs."""


# --------------------------------------------------------------------------
# constellations

@dataclass(frozen=True)
class Constellation:
    kind: str
    label: str
    components: tuple[tuple[int, ...], ...]
    global_positions: tuple[int, ...]  # slot s (1-based) -> global position id

    @property
    def n_pos(self) -> int:
        return len(self.global_positions)

    def component_of(self, slot: int) -> int:
        for ci, comp in enumerate(self.components):
            if slot in comp:
                return ci
        raise KeyError(slot)


def _c(kind, label, components, positions):
    return Constellation(kind, label, tuple(tuple(c) for c in components), tuple(positions))


# Global ids: 1 centre (shared by the outer objects of both out-in layouts),
# 2-5 2x2 grid, 6-14 3x3 grid (its middle, 10, is also the out-in-centre
# inner object), 15-16 left-right, 17-18 up-down, 19-22 out-in-grid inner 2x2.
CONSTELLATIONS: dict[str, Constellation] = {
    c.kind: c
    for c in (
        _c("center", "Center", [[1]], [1]),
        _c("grid2x2", "2x2", [[1, 2, 3, 4]], [2, 3, 4, 5]),
        _c("grid3x3", "3x3", [list(range(1, 10))], list(range(6, 15))),
        _c("left_right", "L-R", [[1], [2]], [15, 16]),
        _c("up_down", "U-D", [[1], [2]], [17, 18]),
        _c("out_in_center", "O-IC", [[1], [2]], [1, 10]),
        _c("out_in_grid", "O-IG", [[1], [2, 3, 4, 5]], [1, 19, 20, 21, 22]),
    )
}
CONSTELLATION_ORDER = tuple(CONSTELLATIONS)
ALIASES = {"2x2": "grid2x2", "3x3": "grid3x3", "l-r": "left_right", "u-d": "up_down",
           "o-ic": "out_in_center", "o-ig": "out_in_grid"}


def get_constellation(name: str | Constellation) -> Constellation:
    if isinstance(name, Constellation):
        return name
    key = ALIASES.get(name.lower(), name.lower())
    try:
        return CONSTELLATIONS[key]
    except KeyError:
        raise ValueError(f"unknown constellation {name!r}; choose from {', '.join(CONSTELLATIONS)}") from None


# --------------------------------------------------------------------------
# scenes

@dataclass(frozen=True, order=True)
class ObjectSpec:
    slot: int
    type: int
    size: int
    color: int

    def __post_init__(self):
        for attr, hi in VISUAL_RANGE.items():
            v = getattr(self, attr)
            if not 1 <= v <= hi:
                raise ValueError(f"{attr}={v} outside 1..{hi}")


@dataclass(frozen=True)
class Scene:
    objects: tuple[ObjectSpec, ...]

    def __post_init__(self):
        slots = [o.slot for o in self.objects]
        if len(set(slots)) != len(slots):
            raise ValueError(f"duplicate slots in scene: {slots}")
        object.__setattr__(self, "objects", tuple(sorted(self.objects)))

    def validate(self, constellation: Constellation) -> None:
        for o in self.objects:
            if not 1 <= o.slot <= constellation.n_pos:
                raise ValueError(f"slot {o.slot} outside constellation {constellation.kind}")
        for ci, comp in enumerate(constellation.components):
            if not any(o.slot in comp for o in self.objects):
                raise ValueError(f"component {ci} of {constellation.kind} is empty")

    def to_json(self) -> list[dict]:
        return [{"slot": o.slot, "type": o.type, "size": o.size, "color": o.color} for o in self.objects]

    @classmethod
    def from_json(cls, data: Iterable[dict]) -> "Scene":
        return cls(tuple(ObjectSpec(int(o["slot"]), int(o["type"]), int(o["size"]), int(o["color"])) for o in data))


def component_values(scene: Scene, constellation: Constellation, comp: int) -> dict[str, int | None]:
    """Attribute values of one component; a visual attribute is ``None`` when objects disagree."""
    slots = constellation.components[comp]
    objs = [o for o in scene.objects if o.slot in slots]
    bitmap = 0
    for o in objs:
        bitmap |= 1 << slots.index(o.slot)
    out: dict[str, int | None] = {"position": bitmap, "number": len(objs)}
    for attr in VISUAL:
        vals = {getattr(o, attr) for o in objs}
        out[attr] = vals.pop() if len(vals) == 1 else None
    return out


def bitmap_slots(bitmap: int, slots: Sequence[int]) -> list[int]:
    return [s for i, s in enumerate(slots) if bitmap >> i & 1]


# --------------------------------------------------------------------------
# rules

@dataclass(frozen=True)
class Rule:
    kind: str
    step: int | None = None

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.kind == "progression":
            if self.step is None or self.step == 0:
                raise ValueError("progression needs a nonzero step")
        elif self.step is not None:
            raise ValueError(f"{self.kind} takes no step")

    def __str__(self) -> str:
        return f"progression({self.step:+d})" if self.kind == "progression" else self.kind

    def to_json(self) -> dict:
        return {"kind": self.kind, "step": self.step} if self.step is not None else {"kind": self.kind}

    @classmethod
    def from_json(cls, data: dict) -> "Rule":
        return cls(data["kind"], data.get("step"))


def applicable_rules(attribute: str) -> list[Rule]:
    """Rule instances the solver scores for ``attribute`` (type is discrete-only)."""
    if attribute == "type":
        return [Rule("constant"), Rule("distribute_three")]
    return ([Rule("constant")] + [Rule("progression", s) for s in STEPS]
            + [Rule("arithmetic_plus"), Rule("arithmetic_minus"), Rule("distribute_three")])


def value_range(attribute: str, n_slots: int) -> int:
    """Number of admissible values (bitmaps for position)."""
    if attribute == "position":
        return 2**n_slots - 1
    if attribute == "number":
        return n_slots
    return VISUAL_RANGE[attribute]


def rotate(bitmap: int, step: int, nbits: int) -> int:
    s = step % nbits
    mask = (1 << nbits) - 1
    return ((bitmap << s) | (bitmap >> (nbits - s))) & mask if s else bitmap


def apply_rule_row(rule: Rule, attribute: str, v1: int, v2: int, n_slots: int = 9) -> int:
    """Third value of a row from its first two under a row-local rule.

    ``n_slots`` bounds number and gives the bitmap width for position.
    Raises :class:`Infeasible` when the result leaves the attribute range.
    """
    n = value_range(attribute, n_slots)
    if rule.kind == "distribute_three":
        raise ValueError("distribute_three is not row-local; use predict_missing")
    if rule.kind == "constant":
        if v1 != v2:
            raise Infeasible("constant row with differing values")
        out = v1
    elif attribute == "position":
        if rule.kind == "progression":
            if rotate(v1, rule.step, n_slots) != v2:
                raise Infeasible("position progression mismatch")
            out = rotate(v2, rule.step, n_slots)
        elif rule.kind == "arithmetic_plus":
            # like numeric addition, the union must grow past both operands
            out = v1 | v2
            if out in (v1, v2):
                raise Infeasible("position union of nested sets")
        else:
            if not v1 & v2:
                raise Infeasible("position difference removes nothing")
            out = v1 & ~v2
    else:
        if rule.kind == "progression":
            if v2 - v1 != rule.step:
                raise Infeasible("progression step mismatch")
            out = v2 + rule.step
        elif rule.kind == "arithmetic_plus":
            out = v1 + v2
        else:
            out = v1 - v2
    if not 1 <= out <= n:
        raise Infeasible(f"{rule} on {attribute}: result {out} outside 1..{n}")
    return out


def _latin_third(rows: Sequence[Sequence[int]]) -> int | None:
    """Missing (3,3) value if rows 1-2 and the start of row 3 form a 3x3 Latin square."""
    r1, r2, r3 = rows
    vals = set(r1)
    if len(vals) != 3 or set(r2) != vals:
        return None
    if any(a == b for a, b in zip(r1, r2)):
        return None
    col = [vals - {r1[j], r2[j]} for j in range(3)]
    if {r3[0]} != col[0] or {r3[1]} != col[1]:
        return None
    return col[2].pop()


def predict_missing(rule: Rule, attribute: str, values: Sequence[int], n_slots: int) -> int | None:
    """Predicted (3,3) value if the 8 context values are consistent with ``rule``, else None."""
    rows = [values[0:3], values[3:6], values[6:8]]
    if rule.kind == "distribute_three":
        return _latin_third(rows)
    try:
        for row in rows[:2]:
            if apply_rule_row(rule, attribute, row[0], row[1], n_slots) != row[2]:
                return None
        return apply_rule_row(rule, attribute, rows[2][0], rows[2][1], n_slots)
    except Infeasible:
        return None


def consistent_predictions(attribute: str, values: Sequence[int], n_slots: int) -> dict[Rule, int]:
    out = {}
    for rule in applicable_rules(attribute):
        p = predict_missing(rule, attribute, values, n_slots)
        if p is not None:
            out[rule] = p
    return out


def row_violations(rule: Rule, attribute: str, values: Sequence[int], n_slots: int) -> list[str]:
    """Violations of ``rule`` over a completed 3x3 matrix of values (row-major)."""
    rows = [list(values[0:3]), list(values[3:6]), list(values[6:9])]
    bad = []
    if rule.kind == "distribute_three":
        for i, row in enumerate(rows, 1):
            if len(set(row)) != 3:
                bad.append(f"row {i} values {row} are not three distinct values")
        if len({frozenset(r) for r in rows}) != 1:
            bad.append("rows do not share one value set")
        for j in range(3):
            col = [rows[i][j] for i in range(3)]
            if len(set(col)) != 3:
                bad.append(f"column {j + 1} values {col} are not three distinct values")
        return bad
    for i, row in enumerate(rows, 1):
        try:
            ok = apply_rule_row(rule, attribute, row[0], row[1], n_slots) == row[2]
        except Infeasible:
            ok = False
        if not ok:
            bad.append(f"row {i} values {row} violate {rule}")
    return bad


# --------------------------------------------------------------------------
# tests

@dataclass(frozen=True)
class ComponentRules:
    governs: str  # "number" or "position"
    rules: dict[str, Rule]  # governed attribute + type/size/color

    def ruled_attributes(self) -> list[str]:
        return [self.governs, *VISUAL]

    def to_json(self) -> dict:
        return {"governs": self.governs, **{a: self.rules[a].to_json() for a in self.ruled_attributes()}}

    @classmethod
    def from_json(cls, data: dict) -> "ComponentRules":
        gov = data["governs"]
        return cls(gov, {a: Rule.from_json(data[a]) for a in (gov, *VISUAL)})


@dataclass(frozen=True)
class RpmTest:
    seed: int
    constellation: Constellation
    mode: str
    context: tuple[Scene, ...]
    candidates: tuple[Scene, ...]
    answer_index: int  # 1-based
    rules: tuple[ComponentRules, ...]

    @property
    def answer(self) -> Scene:
        return self.candidates[self.answer_index - 1]

    def completed(self, candidate: int | None = None) -> list[Scene]:
        idx = self.answer_index if candidate is None else candidate
        return [*self.context, self.candidates[idx - 1]]

    def to_json(self) -> dict:
        return {
            "v": SCHEMA_VERSION,
            "seed": self.seed,
            "constellation": self.constellation.kind,
            "mode": self.mode,
            "context": [s.to_json() for s in self.context],
            "candidates": [s.to_json() for s in self.candidates],
            "answer_index": self.answer_index,
            "rules": [r.to_json() for r in self.rules],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "RpmTest":
        if data.get("v") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {data.get('v')!r}")
        context = tuple(Scene.from_json(s) for s in data["context"])
        candidates = tuple(Scene.from_json(s) for s in data["candidates"])
        if len(context) != 8 or len(candidates) != 8:
            raise ValueError("a test needs 8 context panels and 8 candidates")
        answer = int(data["answer_index"])
        if not 1 <= answer <= 8:
            raise ValueError(f"answer_index {answer} outside 1..8")
        const = get_constellation(data["constellation"])
        rules = tuple(ComponentRules.from_json(r) for r in data["rules"])
        if len(rules) != len(const.components):
            raise ValueError("one rule set per component required")
        for s in (*context, *candidates):
            s.validate(const)
        return cls(int(data["seed"]), const, data["mode"], context, candidates, answer, rules)


@dataclass
class VerifyReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_rules(test: RpmTest, candidate: int | None = None) -> VerifyReport:
    """Check every declared rule on the matrix completed with ``candidate`` (default: the answer)."""
    panels = test.completed(candidate)
    const = test.constellation
    bad = []
    for ci, comp_rules in enumerate(test.rules):
        n_slots = len(const.components[ci])
        vals = [component_values(p, const, ci) for p in panels]
        for attr in comp_rules.ruled_attributes():
            seq = [v[attr] for v in vals]
            if any(x is None for x in seq):
                bad.append(f"component {ci} {attr}: inconsistent values within a panel")
                continue
            bad += [f"component {ci} {attr}: {m}" for m in row_violations(comp_rules.rules[attr], attr, seq, n_slots)]
    return VerifyReport(not bad, bad)


# --------------------------------------------------------------------------
# generation

def _random_bitmap(rng: np.random.Generator, nbits: int) -> int:
    return int(rng.integers(1, 2**nbits))


def _feasible_steps(attribute: str, n_slots: int) -> list[int]:
    n = value_range(attribute, n_slots)
    if attribute == "position":
        return [s for s in STEPS if n_slots > 1 and s % n_slots != 0]
    return [s for s in STEPS if 1 + 2 * abs(s) <= n]


def feasible_kinds(attribute: str, n_slots: int) -> list[str]:
    n = value_range(attribute, n_slots)
    kinds = ["constant"]
    if attribute == "type":
        return kinds + (["distribute_three"] if n >= 3 else [])
    if _feasible_steps(attribute, n_slots):
        kinds.append("progression")
    if n >= 2:
        kinds += ["arithmetic_plus", "arithmetic_minus"]
    if n >= 3:
        kinds.append("distribute_three")
    return kinds


def _sample_row(rule: Rule, attribute: str, n_slots: int, rng: np.random.Generator) -> list[int]:
    n = value_range(attribute, n_slots)
    pos = attribute == "position"
    for _ in range(200):
        v1 = _random_bitmap(rng, n_slots) if pos else int(rng.integers(1, n + 1))
        if rule.kind == "constant":
            return [v1, v1, v1]
        if rule.kind == "progression":
            if pos:
                v2 = rotate(v1, rule.step, n_slots)
                if v2 == v1:
                    continue
            else:
                v2 = v1 + rule.step
        else:
            v2 = _random_bitmap(rng, n_slots) if pos else int(rng.integers(1, n + 1))
        try:
            return [v1, v2, apply_rule_row(rule, attribute, v1, v2, n_slots)]
        except Infeasible:
            continue
    raise Infeasible(f"could not sample a row for {rule} on {attribute}")


def sample_matrix(rule: Rule, attribute: str, n_slots: int, rng: np.random.Generator) -> list[int]:
    """Nine row-major values satisfying ``rule``."""
    if rule.kind == "distribute_three":
        n = value_range(attribute, n_slots)
        vals = [int(v) + 1 for v in rng.choice(n, size=3, replace=False)]
        shift = int(rng.integers(1, 3))
        rows = [vals, vals[shift:] + vals[:shift], vals[2 * shift % 3:] + vals[:2 * shift % 3]]
        return [v for row in rows for v in row]
    return [v for _ in range(3) for v in _sample_row(rule, attribute, n_slots, rng)]


def _identifiable(attribute: str, values: Sequence[int], n_slots: int) -> bool:
    preds = set(consistent_predictions(attribute, values[:8], n_slots).values())
    return preds == {values[8]}


def draw_attribute(attribute: str, n_slots: int, rng: np.random.Generator,
                   tries: int = 50) -> tuple[Rule, list[int]]:
    """Draw a rule uniformly among feasible kinds plus identifiable matrix values."""
    kinds = feasible_kinds(attribute, n_slots)
    for _ in range(tries):
        kind = kinds[int(rng.integers(len(kinds)))]
        for _ in range(tries):
            rule = Rule(kind, int(rng.choice(_feasible_steps(attribute, n_slots)))) if kind == "progression" else Rule(kind)
            try:
                values = sample_matrix(rule, attribute, n_slots, rng)
            except Infeasible:
                continue
            if _identifiable(attribute, values, n_slots):
                return rule, values
    raise GenerationError(f"no identifiable draw for {attribute} with {n_slots} slots")


def _free_positions(counts: Sequence[int], n_slots: int, rng: np.random.Generator) -> list[int]:
    """Random occupancy bitmaps with the given counts that no position rule explains differently."""
    for _ in range(200):
        bitmaps = []
        for c in counts:
            chosen = rng.choice(n_slots, size=c, replace=False)
            bitmaps.append(int(sum(1 << int(i) for i in chosen)))
        preds = set(consistent_predictions("position", bitmaps[:8], n_slots).values())
        if preds <= {bitmaps[8]}:
            return bitmaps
    raise GenerationError("could not place objects without spurious position rules")


def _context_rng(seed: int, constellation: Constellation) -> np.random.Generator:
    return np.random.default_rng([seed, CONSTELLATION_ORDER.index(constellation.kind), 0])


def _answer_rng(seed: int, constellation: Constellation, mode: str) -> np.random.Generator:
    return np.random.default_rng([seed, CONSTELLATION_ORDER.index(constellation.kind), 1, MODES.index(mode)])


def generate_matrix(seed: int, constellation: str | Constellation) -> tuple[list[Scene], tuple[ComponentRules, ...]]:
    """Nine rule-consistent panels (row-major) and the per-component rules."""
    const = get_constellation(constellation)
    rng = _context_rng(seed, const)
    panel_objs: list[list[ObjectSpec]] = [[] for _ in range(9)]
    all_rules = []
    for slots in const.components:
        n_slots = len(slots)
        governs = "position" if rng.random() < 0.5 else "number"
        rules, values = {}, {}
        rules[governs], values[governs] = draw_attribute(governs, n_slots, rng)
        for attr in VISUAL:
            rules[attr], values[attr] = draw_attribute(attr, n_slots, rng)
        bitmaps = values["position"] if governs == "position" else _free_positions(values["number"], n_slots, rng)
        for p in range(9):
            for s in bitmap_slots(bitmaps[p], slots):
                panel_objs[p].append(ObjectSpec(s, values["type"][p], values["size"][p], values["color"][p]))
        all_rules.append(ComponentRules(governs, rules))
    return [Scene(tuple(o)) for o in panel_objs], tuple(all_rules)


# ---- answer sets

MODES = ("raven", "fair")


@dataclass(frozen=True)
class Modification:
    comp: int
    attribute: str
    value: int  # new value (bitmap for position)
    bitmap: int | None = None  # new occupancy when changing number


def modifiable(constellation: Constellation, rules: Sequence[ComponentRules]) -> list[tuple[int, str]]:
    out = []
    for ci, cr in enumerate(rules):
        if len(constellation.components[ci]) > 1:
            out.append((ci, cr.governs))
        out += [(ci, a) for a in VISUAL]
    return out


def draw_modification(scene: Scene, constellation: Constellation, comp: int, attribute: str,
                      rng: np.random.Generator) -> Modification:
    slots = constellation.components[comp]
    cur = component_values(scene, constellation, comp)
    n = value_range(attribute, len(slots))
    alts = [v for v in range(1, n + 1) if v != cur[attribute]]
    if not alts:
        raise Infeasible(f"{attribute} of component {comp} has no alternative value")
    value = int(alts[int(rng.integers(len(alts)))])
    if attribute == "number":
        chosen = rng.choice(len(slots), size=value, replace=False)
        return Modification(comp, attribute, value, int(sum(1 << int(i) for i in chosen)))
    return Modification(comp, attribute, value)


def apply_modifications(scene: Scene, constellation: Constellation, mods: Sequence[Modification]) -> Scene:
    comps = []
    for ci, slots in enumerate(constellation.components):
        vals = component_values(scene, constellation, ci)
        for m in mods:
            if m.comp != ci:
                continue
            if m.attribute == "number":
                vals["position"] = m.bitmap
            else:
                vals[m.attribute] = m.value
        comps.append((slots, vals))
    objs = []
    for slots, vals in comps:
        for s in bitmap_slots(vals["position"], slots):
            objs.append(ObjectSpec(s, vals["type"], vals["size"], vals["color"]))
    return Scene(tuple(objs))


def make_answer_set(correct: Scene, constellation: str | Constellation, rules: Sequence[ComponentRules],
                    mode: str, rng: np.random.Generator) -> tuple[tuple[Scene, ...], int]:
    """Eight candidates containing ``correct``; returns (candidates, 1-based answer index)."""
    const = get_constellation(constellation)
    targets = modifiable(const, rules)
    if mode == "raven":
        distractors: list[Scene] = []
        seen = {correct}
        while len(distractors) < 7:
            ci, attr = targets[int(rng.integers(len(targets)))]
            try:
                mod = draw_modification(correct, const, ci, attr, rng)
            except Infeasible:
                continue
            cand = apply_modifications(correct, const, [mod])
            if cand not in seen:
                seen.add(cand)
                distractors.append(cand)
        answer = int(rng.integers(1, 9))
        cands = distractors[: answer - 1] + [correct] + distractors[answer - 1:]
        return tuple(cands), answer
    if mode == "fair":
        free = [t for t in targets if rules[t[0]].rules[t[1]].kind != "constant"]
        rest = [t for t in targets if t not in free]
        order = [free[i] for i in rng.permutation(len(free))] + [rest[i] for i in rng.permutation(len(rest))]
        levels = order[:3]
        mods = [draw_modification(correct, const, ci, attr, rng) for ci, attr in levels]
        leaves = []
        for mask in range(8):
            chosen = [m for k, m in enumerate(mods) if mask >> k & 1]
            leaves.append(apply_modifications(correct, const, chosen))
        perm = rng.permutation(8)
        cands = tuple(leaves[int(i)] for i in perm)
        answer = int(np.flatnonzero(perm == 0)[0]) + 1
        return cands, answer
    raise ValueError(f"unknown answer-set mode {mode!r}; choose from {MODES}")


def generate_test(seed: int, constellation: str | Constellation, mode: str = "raven") -> RpmTest:
    const = get_constellation(constellation)
    if mode not in MODES:
        raise ValueError(f"unknown answer-set mode {mode!r}; choose from {MODES}")
    panels, rules = generate_matrix(seed, const)
    cands, answer = make_answer_set(panels[8], const, rules, mode, _answer_rng(seed, const, mode))
    return RpmTest(seed, const, mode, tuple(panels[:8]), cands, answer, rules)


def attribute_vector(scene: Scene, constellation: Constellation, rules: Sequence[ComponentRules]) -> dict:
    """Values of the ruled attributes, keyed by (component, attribute)."""
    out = {}
    for ci, cr in enumerate(rules):
        vals = component_values(scene, constellation, ci)
        for a in cr.ruled_attributes():
            out[(ci, a)] = vals[a]
    return out


class DatasetParseError(ValueError):
    """A dataset line that is not a valid test; ``line`` is 1-based."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line


def parse_jsonl(lines) -> list[RpmTest]:
    tests = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            tests.append(RpmTest.from_json(json.loads(line)))
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise DatasetParseError(lineno, f"{type(exc).__name__}: {exc}") from exc
    return tests


def load_jsonl(path) -> list[RpmTest]:
    with open(path) as fh:
        return parse_jsonl(fh)
