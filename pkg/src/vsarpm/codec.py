"""Bipolar object dictionary plus scene encoding and thresholded decoding.

Every (type, size, color, position) combination gets a row of the
dictionary: the binding of its four attribute atoms. A scene is the bundle
of its objects' rows. Decoding returns every row whose cosine similarity to
the query exceeds a threshold, which recovers the objects without ghosts for
small scenes because bound rows are quasi-orthogonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .domain import N_GLOBAL_POSITIONS, VISUAL_RANGE, Constellation, ObjectSpec, Scene
from .vsa import Codebook, DimensionError, bipolar_bind, bipolar_bundle

DEFAULT_TAU = 0.23
CODEC_DIM = 512
ObjectKey = tuple[int, int, int, int]  # (type, size, color, global position)


@dataclass(frozen=True)
class ObjectDictionary:
    """Dense sign matrix with one row per attribute combination."""

    seed: int = 0
    d: int = CODEC_DIM

    @cached_property
    def codebooks(self) -> dict[str, Codebook]:
        sizes = {"type": VISUAL_RANGE["type"], "size": VISUAL_RANGE["size"],
                 "color": VISUAL_RANGE["color"], "position": N_GLOBAL_POSITIONS}
        return {a: Codebook(f"codec/{a}", n, self.d, self.seed) for a, n in sizes.items()}

    @cached_property
    def keys(self) -> list[ObjectKey]:
        ranges = [range(1, cb.size + 1) for cb in self.codebooks.values()]
        return list(product(*ranges))

    @cached_property
    def index(self) -> dict[ObjectKey, int]:
        return {k: i for i, k in enumerate(self.keys)}

    @cached_property
    def rows(self) -> np.ndarray:
        """(m, d) int8 matrix; rows follow :attr:`keys` order."""
        t, s, c, l = (cb.vectors for cb in self.codebooks.values())
        w = (t[:, None, None, None, :] * s[None, :, None, None, :]
             * c[None, None, :, None, :] * l[None, None, None, :, :])
        return w.reshape(-1, self.d).astype(np.int8)

    @cached_property
    def _rows_f32(self) -> np.ndarray:
        # +/-1 sums stay exact in float32 for d < 2**24
        return self.rows.astype(np.float32)

    @property
    def m(self) -> int:
        return len(self.keys)

    def row(self, key: ObjectKey) -> np.ndarray:
        return self.rows[self.index[tuple(key)]]

    def bound(self, key: ObjectKey) -> np.ndarray:
        """The row recomputed by binding the four atoms (used to check the matrix)."""
        t, s, c, l = key
        cb = self.codebooks
        return bipolar_bind(cb["type"][t], cb["size"][s], cb["color"][c], cb["position"][l])


def build_dictionary(seed: int = 0, d: int = CODEC_DIM) -> ObjectDictionary:
    return ObjectDictionary(seed, d)


def scene_keys(scene: Scene, constellation: Constellation) -> list[ObjectKey]:
    """Dictionary keys of a scene's objects, mapping local slots to global positions."""
    return [(o.type, o.size, o.color, constellation.global_positions[o.slot - 1]) for o in scene.objects]


def encode_keys(keys, dictionary: ObjectDictionary) -> np.ndarray:
    if not keys:
        raise ValueError("cannot encode an empty scene")
    return bipolar_bundle([dictionary.row(k) for k in keys])


def encode_scene(scene: Scene, dictionary: ObjectDictionary, constellation: Constellation) -> np.ndarray:
    return encode_keys(scene_keys(scene, constellation), dictionary)


def similarities(query: np.ndarray, dictionary: ObjectDictionary) -> np.ndarray:
    """Cosine similarity of ``query`` to every dictionary row."""
    q = np.asarray(query, dtype=np.float64)
    if q.shape != (dictionary.d,):
        raise DimensionError(f"query shape {q.shape} does not match dimension {dictionary.d}")
    norm = np.linalg.norm(q)
    if norm == 0:
        return np.zeros(dictionary.m)
    # rows are +/-1 so their norm is sqrt(d)
    dots = dictionary._rows_f32 @ q.astype(np.float32)
    return dots.astype(np.float64) / (norm * np.sqrt(dictionary.d))


def decode_scene(query: np.ndarray, dictionary: ObjectDictionary, tau: float = DEFAULT_TAU) -> set[ObjectKey]:
    hits = np.flatnonzero(similarities(query, dictionary) > tau)
    return {dictionary.keys[i] for i in hits}


def decode_to_scene(query: np.ndarray, dictionary: ObjectDictionary, constellation: Constellation,
                    tau: float = DEFAULT_TAU) -> Scene:
    """Decode a query into a scene of ``constellation``.

    Detections at positions outside the constellation are dropped; when one
    slot has several detections the most similar row wins.
    """
    sims = similarities(query, dictionary)
    local = {g: i + 1 for i, g in enumerate(constellation.global_positions)}
    best: dict[int, tuple[float, ObjectKey]] = {}
    for i in np.flatnonzero(sims > tau):
        t, s, c, l = dictionary.keys[i]
        if l in local and (local[l] not in best or sims[i] > best[local[l]][0]):
            best[local[l]] = (float(sims[i]), (t, s, c, l))
    return Scene(tuple(ObjectSpec(slot, t, s, c) for slot, (_, (t, s, c, _)) in sorted(best.items())))


def random_keys(k: int, rng: np.random.Generator) -> list[ObjectKey]:
    """``k`` random objects at distinct global positions."""
    if not 1 <= k <= N_GLOBAL_POSITIONS:
        raise ValueError(f"k must lie in 1..{N_GLOBAL_POSITIONS}")
    positions = rng.choice(N_GLOBAL_POSITIONS, size=k, replace=False) + 1
    return [(int(rng.integers(1, VISUAL_RANGE["type"] + 1)), int(rng.integers(1, VISUAL_RANGE["size"] + 1)),
             int(rng.integers(1, VISUAL_RANGE["color"] + 1)), int(p)) for p in positions]


@dataclass
class RecoveryStats:
    k: int
    trials: int
    exact: int  # decoded set equals the encoded set
    ghosts: int  # trials whose decoded set contains an object that was not encoded

    @property
    def recovery_rate(self) -> float:
        return self.exact / self.trials

    @property
    def ghost_rate(self) -> float:
        return self.ghosts / self.trials

    def to_json(self) -> dict:
        return {"k": self.k, "trials": self.trials, "recovery_rate": self.recovery_rate,
                "ghost_rate": self.ghost_rate}


def recovery_curve(ks, trials: int = 1000, seed: int = 0, tau: float = DEFAULT_TAU,
                   dictionary: ObjectDictionary | None = None) -> list[RecoveryStats]:
    dictionary = dictionary or build_dictionary(seed)
    out = []
    for k in ks:
        rng = np.random.default_rng([seed, k])
        exact = ghosts = 0
        for _ in range(trials):
            keys = random_keys(k, rng)
            decoded = decode_scene(encode_keys(keys, dictionary), dictionary, tau)
            exact += decoded == set(keys)
            ghosts += bool(decoded - set(keys))
        out.append(RecoveryStats(k, trials, exact, ghosts))
    return out
