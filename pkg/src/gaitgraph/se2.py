"""Planar rigid-body transforms and cycle-level kinematics.

A motion primitive moves the robot body frame by a rotation theta and a
translation p expressed in the frame where the primitive started.
Composition therefore chains as p = p_a + R(theta_a) p_b with angles
adding.  Angles are kept unwrapped so cumulative rotation over many
gait cycles stays monotone.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np


def rotation(theta: float) -> np.ndarray:
    """2x2 rotation matrix R(theta)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(eq=False)
class Se2Transform:
    theta: float
    p: np.ndarray

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float).reshape(2)

    @staticmethod
    def identity() -> "Se2Transform":
        return Se2Transform(0.0, np.zeros(2))

    def matrix(self) -> np.ndarray:
        """Homogeneous 3x3 form."""
        g = np.eye(3)
        g[:2, :2] = rotation(self.theta)
        g[:2, 2] = self.p
        return g

    def inverse(self) -> "Se2Transform":
        return Se2Transform(-self.theta, -rotation(-self.theta) @ self.p)

    def apply(self, point: np.ndarray) -> np.ndarray:
        return rotation(self.theta) @ np.asarray(point, dtype=float) + self.p


def compose(a: Se2Transform, b: Se2Transform) -> Se2Transform:
    """Transform of doing ``a`` then ``b`` (b expressed in a's end frame)."""
    return Se2Transform(a.theta + b.theta, a.p + rotation(a.theta) @ b.p)


def compose_many(transforms) -> Se2Transform:
    g = Se2Transform.identity()
    for t in transforms:
        g = compose(g, t)
    return g


def _as_transforms(edge_weights) -> list[Se2Transform]:
    """Accept (p, theta) pairs or Se2Transform instances."""
    out = []
    for w in edge_weights:
        if isinstance(w, Se2Transform):
            out.append(w)
        else:
            p, theta = w
            out.append(Se2Transform(float(theta), np.asarray(p, dtype=float)))
    return out


def cycle_transform(edge_weights, start: int = 0) -> Se2Transform:
    """Whole-cycle transform starting at edge ``start`` (0-based).

    Composes the edge transforms in cyclic order beginning at ``start``;
    the translation is expressed in the frame of that edge's initial
    vertex.
    """
    ts = _as_transforms(edge_weights)
    if not ts:
        raise ValueError("empty cycle")
    l = len(ts)
    if not 0 <= start < l:
        raise ValueError(f"start index {start} outside 0..{l - 1}")
    return compose_many(ts[start:] + ts[:start])


def segment_transform(edge_weights, start: int, stop: int) -> Se2Transform:
    """Composition over the cyclic slice of edges start..stop inclusive.

    Wraps past the end of the list, so segment_transform(w, l-1, 0)
    composes the last edge then the first.  An empty segment is
    requested with stop == start - 1 (mod l) and is not supported;
    callers handle the identity case themselves.
    """
    ts = _as_transforms(edge_weights)
    l = len(ts)
    idx = [(start + k) % l for k in range((stop - start) % l + 1)]
    return compose_many(ts[i] for i in idx)


class GaitClass(enum.Enum):
    TRANSLATION = "translation"
    ROTATION = "rotation"
    NEITHER = "neither"


def classify_gait(edge_weights, eps_t: float, eps_theta: float) -> GaitClass:
    """Two-class gait taxonomy.

    Translation: the cycle's cumulative rotation vanishes (within
    eps_theta).  Rotation: every per-edge translation vanishes (within
    eps_t).  A near-identity cycle passing both tests is reported as
    Translation.
    """
    if eps_t < 0 or eps_theta < 0:
        raise ValueError("tolerances must be nonnegative")
    ts = _as_transforms(edge_weights)
    if abs(sum(t.theta for t in ts)) <= eps_theta:
        return GaitClass.TRANSLATION
    if max(float(np.linalg.norm(t.p)) for t in ts) <= eps_t:
        return GaitClass.ROTATION
    return GaitClass.NEITHER


@dataclass(eq=False)
class CycleTransformReport:
    """Per-start-edge resultants of one simple cycle.

    ``displacements[i]`` is the cycle translation when started at edge
    i, in the frame of that edge's initial vertex; the rotation is the
    same for every start.  ``invariant`` is set when all displacement
    magnitudes agree within ``eps``; ``classification`` is the two-class
    gait taxonomy at the report's tolerances.
    """

    displacements: list[np.ndarray]
    theta_total: float
    eps: float
    invariant: bool
    classification: GaitClass
    magnitudes: np.ndarray = field(init=False)

    def __post_init__(self):
        self.magnitudes = np.array([np.linalg.norm(d) for d in self.displacements])


def invariance_report(
    edge_weights,
    eps: float = 1e-9,
    eps_t: float | None = None,
    eps_theta: float | None = None,
) -> CycleTransformReport:
    """Evaluate transformation invariance of a cycle.

    A locomotion gait must displace by the same magnitude and rotate by
    the same amount no matter which edge it starts on.  The gait-class
    tolerances default to ``eps``.
    """
    ts = _as_transforms(edge_weights)
    if not ts:
        raise ValueError("empty cycle")
    disps = [cycle_transform(ts, i).p for i in range(len(ts))]
    mags = [float(np.linalg.norm(d)) for d in disps]
    theta_total = sum(t.theta for t in ts)
    return CycleTransformReport(
        displacements=disps,
        theta_total=theta_total,
        eps=eps,
        invariant=(max(mags) - min(mags)) <= eps,
        classification=classify_gait(
            ts,
            eps if eps_t is None else eps_t,
            eps if eps_theta is None else eps_theta,
        ),
    )
