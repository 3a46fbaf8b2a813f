"""Exact evolution of single Fourier modes and the causal classification."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..core import AcousticConfig


@dataclass
class ModeState:
    """Complex amplitudes of ``(v, p) * exp(i k.x)`` at one wavevector.

    ``k`` and ``uhat`` carry 2 or 3 components.
    """

    k: np.ndarray
    uhat: np.ndarray
    phat: complex

    def __post_init__(self):
        self.k = np.asarray(self.k, dtype=np.float64)
        self.uhat = np.asarray(self.uhat, dtype=np.complex128)
        self.phat = complex(self.phat)
        if self.k.shape != self.uhat.shape or self.k.shape not in ((2,), (3,)):
            raise ValueError("k and uhat must both have 2 or 3 components")

    def vector(self) -> np.ndarray:
        return np.append(self.uhat, self.phat)

    def norm2(self) -> float:
        return float(np.sum(np.abs(self.uhat) ** 2) + abs(self.phat) ** 2)


def _speed(cfg: AcousticConfig | None) -> float:
    return 1.0 if cfg is None else cfg.speed


def fourier_mode_evolve(m: ModeState, t: float, cfg: AcousticConfig | None = None) -> ModeState:
    """Advance one mode of the symmetric system by time ``t``.

    The amplitude is split into the two acoustic branches, travelling with
    ``omega = +-(c/eps)|k|``, and the transverse part of ``uhat`` which does
    not move.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    kabs = float(np.linalg.norm(m.k))
    if kabs == 0.0:
        return ModeState(m.k.copy(), m.uhat.copy(), m.phat)
    khat = m.k / kabs
    along = khat @ m.uhat
    forward = 0.5 * (m.phat + along)
    backward = 0.5 * (m.phat - along)
    phase = np.exp(-1j * _speed(cfg) * kabs * t)
    transverse = m.uhat - khat * along
    uhat = forward * phase * khat - backward * np.conj(phase) * khat + transverse
    phat = forward * phase + backward * np.conj(phase)
    return ModeState(m.k.copy(), uhat, phat)


def exact_symbol(k, t: float, cfg: AcousticConfig | None = None) -> np.ndarray:
    """Matrix mapping ``(uhat, phat)`` to its exactly evolved value after ``t``."""
    k = np.asarray(k, dtype=np.float64)
    n = k.size + 1
    cols = []
    for e in np.eye(n, dtype=np.complex128):
        cols.append(fourier_mode_evolve(ModeState(k, e[:-1], e[-1]), t, cfg).vector())
    return np.array(cols).T


class Causality(Enum):
    TIMELIKE = "timelike"
    NULL = "null"
    SPACELIKE = "spacelike"


def in_dependence_cone(x, t: float, y, cfg: AcousticConfig | None = None,
                       rtol: float = 1e-12) -> Causality:
    """Classify the data point ``y`` relative to the event ``(t, x)``.

    Distances within ``rtol`` (relative) of the sonic radius count as null.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    dist = float(np.linalg.norm(np.asarray(x, float) - np.asarray(y, float)))
    radius = _speed(cfg) * t
    if abs(dist - radius) <= rtol * max(radius, dist):
        return Causality.NULL
    return Causality.TIMELIKE if dist < radius else Causality.SPACELIKE
