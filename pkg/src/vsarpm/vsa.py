"""Dense bipolar and FHRR (phasor) hypervector algebra.

Bipolar vectors are ``int8`` arrays of +/-1. Phasor vectors are ``float64``
arrays of angles in the canonical interval (-pi, pi]; unit magnitude is
implicit.

Random atoms come from a Philox-4x64 counter-based generator keyed by
``(seed, blake2b-64(name))`` with the atom index placed in the third counter
word, and raw 64-bit outputs are mapped to values by fixed bit
manipulations. Codebooks are therefore pure functions of
``(seed, name, index, d)`` and do not depend on numpy's distribution
sampling code.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * np.pi
MAG_EPS = 1e-12
BUNDLE_SALT = "bipolar-bundle-tie-salt"


class DimensionError(ValueError):
    """Raised for an invalid dimension or mismatched operand dimensions."""


def _check_dim(d: int) -> None:
    if int(d) <= 0:
        raise DimensionError(f"dimension must be positive, got {d}")


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError(f"dimension mismatch: {a.shape[-1]} vs {b.shape[-1]}")


def name_hash(name: str) -> int:
    return int.from_bytes(hashlib.blake2b(name.encode(), digest_size=8).digest(), "little")


def raw_stream(seed: int, name: str, index: int, count: int) -> np.ndarray:
    """``count`` raw uint64 words for atom ``index`` of codebook ``name``."""
    key = np.array([int(seed) & 0xFFFFFFFFFFFFFFFF, name_hash(name)], dtype=np.uint64)
    counter = np.array([0, 0, int(index), 0], dtype=np.uint64)
    bitgen = np.random.Philox(key=key, counter=counter)
    return bitgen.random_raw(count).astype(np.uint64)


def canonical(angles: np.ndarray) -> np.ndarray:
    """Map angles into (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(angles, dtype=np.float64), TWO_PI)


# --------------------------------------------------------------------------
# bipolar model

def bipolar_random(seed: int, d: int = 512, name: str = "bipolar", index: int = 0) -> np.ndarray:
    _check_dim(d)
    words = raw_stream(seed, name, index, (d + 63) // 64)
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")[:d]
    return (bits.astype(np.int8) * 2 - 1).astype(np.int8)


def bipolar_bind(*vectors: np.ndarray) -> np.ndarray:
    if not vectors:
        raise ValueError("bind needs at least one vector")
    out = np.asarray(vectors[0], dtype=np.int8)
    for v in vectors[1:]:
        v = np.asarray(v, dtype=np.int8)
        _same_dim(out, v)
        out = out * v
    return out.astype(np.int8)


@lru_cache(maxsize=16)
def _tie_coins(d: int) -> np.ndarray:
    return bipolar_random(0, d, name=BUNDLE_SALT)


def bipolar_bundle(vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Sign of the element-wise sum; zero sums take a fixed per-index coin."""
    if len(vectors) == 0:
        raise ValueError("cannot bundle an empty list")
    stack = np.asarray(vectors, dtype=np.int32)
    if stack.ndim != 2:
        raise DimensionError("vectors must share one dimension")
    total = stack.sum(axis=0)
    out = np.sign(total).astype(np.int8)
    ties = total == 0
    if ties.any():
        out[ties] = _tie_coins(stack.shape[1])[ties]
    return out


def cosine_sim(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _same_dim(a, b)
    denom = np.sqrt((a @ a) * (b @ b))  # one rounding, so sim(x, x) is exactly 1
    if denom == 0:
        return 0.0
    return float(a @ b / denom)


@dataclass(frozen=True)
class Codebook:
    """Named bipolar atoms; row ``i`` is atom ``i + 1`` of the attribute."""

    name: str
    size: int
    d: int = 512
    seed: int = 0

    @cached_property
    def vectors(self) -> np.ndarray:
        _check_dim(self.d)
        return np.stack([bipolar_random(self.seed, self.d, self.name, i) for i in range(self.size)])

    def __getitem__(self, value: int) -> np.ndarray:
        # 1-based attribute values
        if not 1 <= value <= self.size:
            raise IndexError(f"{self.name}: value {value} outside 1..{self.size}")
        return self.vectors[value - 1]

    def to_json(self) -> dict:
        packed = np.packbits(self.vectors > 0, axis=1, bitorder="little")
        return {"name": self.name, "kind": "bipolar", "seed": self.seed, "d": self.d,
                "size": self.size, "rows": [r.tobytes().hex() for r in packed]}


# --------------------------------------------------------------------------
# FHRR model

def fhrr_random(seed: int, d: int = 1024, name: str = "fhrr", index: int = 0) -> np.ndarray:
    _check_dim(d)
    words = raw_stream(seed, name, index, d)
    unit = (words >> np.uint64(11)).astype(np.float64) * 2.0**-53  # [0, 1)
    return np.pi - TWO_PI * unit  # (-pi, pi]


def fhrr_identity(d: int) -> np.ndarray:
    _check_dim(d)
    return np.zeros(d)


def fhrr_bind(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_dim(a, b)
    return canonical(np.add(a, b))


def fhrr_unbind(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _same_dim(a, b)
    return canonical(np.subtract(a, b))


def fhrr_sim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean cosine of angle differences, in [-1, 1]."""
    _same_dim(a, b)
    return float(np.mean(np.cos(np.subtract(a, b))))


def to_phasors(angles: np.ndarray) -> np.ndarray:
    return np.exp(1j * np.asarray(angles))


def from_cartesian(z: np.ndarray) -> np.ndarray:
    """Normalize complex entries to unit phasors (near-zero magnitudes -> angle 0)."""
    angles = np.angle(z)
    angles[np.abs(z) < MAG_EPS] = 0.0
    return canonical(angles)


def fhrr_bundle_weighted(weights: Sequence[float], vectors: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    vecs = np.asarray(vectors, dtype=np.float64)
    if w.ndim != 1 or len(w) == 0:
        raise ValueError("weights must be a nonempty 1-D sequence")
    if vecs.ndim != 2 or vecs.shape[0] != len(w):
        raise ValueError(f"{len(w)} weights for {vecs.shape[0] if vecs.ndim == 2 else '?'} vectors")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    if not np.any(w > 0):
        raise ValueError("at least one weight must be positive")
    return from_cartesian(w @ to_phasors(vecs))


def fractional_power(base: np.ndarray, exponent: float) -> np.ndarray:
    return canonical(np.asarray(base, dtype=np.float64) * exponent)


@dataclass(frozen=True)
class FhrrCodebook:
    """Phasor codebook over attribute values 1..size.

    ``discrete`` draws independent atoms; ``continuous`` uses powers
    ``base**v`` of a single random base so that binding adds values.
    """

    name: str
    size: int
    kind: str = "discrete"
    d: int = 1024
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("discrete", "continuous"):
            raise ValueError(f"unknown codebook kind {self.kind!r}")
        _check_dim(self.d)

    @cached_property
    def base(self) -> np.ndarray:
        return fhrr_random(self.seed, self.d, f"{self.name}/base")

    @cached_property
    def vectors(self) -> np.ndarray:
        if self.kind == "continuous":
            return np.stack([fractional_power(self.base, v) for v in range(1, self.size + 1)])
        return np.stack([fhrr_random(self.seed, self.d, self.name, i) for i in range(self.size)])

    @cached_property
    def phasors(self) -> np.ndarray:
        return to_phasors(self.vectors)

    def encode(self, pmf: np.ndarray) -> np.ndarray:
        """Normalized PMF-weighted superposition of the codewords."""
        pmf = np.asarray(pmf, dtype=np.float64)
        if pmf.shape[-1] != self.size:
            raise ValueError(f"PMF length {pmf.shape[-1]} != codebook size {self.size}")
        return from_cartesian(pmf @ self.phasors)

    def similarities(self, angles: np.ndarray) -> np.ndarray:
        """fhrr_sim of ``angles`` (one vector or a stack) to every codeword."""
        z = to_phasors(angles)
        return np.real(z @ self.phasors.conj().T) / self.d

    def to_json(self) -> dict:
        out = {"name": self.name, "kind": self.kind, "seed": self.seed, "d": self.d, "size": self.size}
        if self.kind == "continuous":
            out["base"] = self.base.tolist()
        else:
            out["vectors"] = self.vectors.tolist()
        return out
