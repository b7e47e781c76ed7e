"""Oracle perception: ground-truth scenes to per-component attribute PMFs."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .domain import VISUAL, VISUAL_RANGE, Constellation, Scene

LAPLACE_B = 0.05


def smooth_onehot(index: int, n: int, b: float = LAPLACE_B) -> np.ndarray:
    """One-hot at 1-based ``index`` convolved with a discrete Laplace kernel, renormalized."""
    if not 1 <= index <= n:
        raise ValueError(f"index {index} outside 1..{n}")
    dist = np.abs(np.arange(1, n + 1) - index)
    w = np.exp(-dist / b)
    return w / w.sum()


@lru_cache(maxsize=None)
def occupancy_masks(n_slots: int) -> np.ndarray:
    """Row ``j-1`` is the 0/1 occupancy of bitmap ``j`` over the slots."""
    j = np.arange(1, 2**n_slots)
    return ((j[:, None] >> np.arange(n_slots)[None, :]) & 1).astype(np.float64)


@lru_cache(maxsize=None)
def cardinalities(n_slots: int) -> np.ndarray:
    return occupancy_masks(n_slots).sum(axis=1).astype(int)


@dataclass
class ObjectPMFs:
    exist: np.ndarray  # [present, absent]
    type: np.ndarray
    size: np.ndarray
    color: np.ndarray


@dataclass
class PanelPMFs:
    """PMFs of one component of one panel.

    ``type``/``size``/``color`` carry a trailing inconsistency slot.
    """

    position: np.ndarray
    number: np.ndarray
    type: np.ndarray
    size: np.ndarray
    color: np.ndarray

    def __getitem__(self, attr: str) -> np.ndarray:
        return getattr(self, attr)

    def to_json(self) -> dict:
        return {a: getattr(self, a).tolist() for a in ("position", "number", "type", "size", "color")}


def object_pmfs(scene: Scene, constellation: Constellation, slot: int, b: float = LAPLACE_B) -> ObjectPMFs:
    if not 1 <= slot <= constellation.n_pos:
        raise ValueError(f"slot {slot} outside constellation {constellation.kind}")
    obj = next((o for o in scene.objects if o.slot == slot), None)
    if obj is None:
        # an empty slot's attribute PMFs are gated out by the occupancy product
        return ObjectPMFs(smooth_onehot(2, 2, b), *(np.full(VISUAL_RANGE[a], 1.0 / VISUAL_RANGE[a]) for a in VISUAL))
    return ObjectPMFs(smooth_onehot(1, 2, b),
                      *(smooth_onehot(getattr(obj, a), VISUAL_RANGE[a], b) for a in VISUAL))


def combine(objects: list[ObjectPMFs]) -> PanelPMFs:
    """Merge the object PMFs of one component's slots into the five panel PMFs."""
    n_slots = len(objects)
    masks = occupancy_masks(n_slots)
    log_present = np.log(np.array([o.exist[0] for o in objects]))
    log_absent = np.log(np.array([o.exist[1] for o in objects]))
    logp = masks @ log_present + (1.0 - masks) @ log_absent
    # normalized over nonempty occupancies; the presence-only product does not normalize under smoothing
    p_pos = np.exp(logp - logp.max())
    p_pos /= p_pos.sum()

    p_num = np.bincount(cardinalities(n_slots) - 1, weights=p_pos, minlength=n_slots)

    visual = {}
    for attr in VISUAL:
        logv = np.log(np.stack([getattr(o, attr) for o in objects]))  # slots x values
        joint = p_pos @ np.exp(masks @ logv)  # sum_j p_pos[j] prod_{k in I_j} v_k[t]
        incons = max(0.0, 1.0 - joint.sum())
        visual[attr] = np.append(joint, incons)
    return PanelPMFs(p_pos, p_num, visual["type"], visual["size"], visual["color"])


def panel_pmfs(scene: Scene, constellation: Constellation, b: float = LAPLACE_B) -> list[PanelPMFs]:
    """One :class:`PanelPMFs` per component of ``constellation``."""
    return [combine([object_pmfs(scene, constellation, s, b) for s in slots])
            for slots in constellation.components]


def rpm_pmfs(test, b: float = LAPLACE_B, scenes=None) -> tuple[list[list[PanelPMFs]], list[list[PanelPMFs]]]:
    """(context, candidates) PMFs of an :class:`RpmTest`; ``scenes`` may override the 16 panels."""
    panels = scenes if scenes is not None else [*test.context, *test.candidates]
    pm = [panel_pmfs(s, test.constellation, b) for s in panels]
    return pm[:8], pm[8:]


