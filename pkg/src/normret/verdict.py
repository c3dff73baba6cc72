"""Four-valued verdicts and independently replayed witness pairs."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .linalg import is_exact, to_float

__all__ = [
    "Status",
    "WitnessPair",
    "Verdict",
    "Replay",
    "replay_witness",
    "MEASURE_REL",
    "GAP_REL",
    "replay_failures",
]

MEASURE_REL = 1e-9
GAP_REL = 1e-6

# Count of witnesses that were rejected by replay before being reported.
# Any rejected candidate is downgraded, never returned as a refutation.
_REPLAY_FAILURES = [0]


def replay_failures() -> int:
    return _REPLAY_FAILURES[0]


class Status(str, enum.Enum):
    YES_EXACT = "YesExact"
    NO_WITH_WITNESS = "NoWithWitness"
    PROBABLY_YES = "ProbablyYes"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass(eq=False)
class WitnessPair:
    """Two vectors with identical measurements but a violated conclusion.

    ``kind`` is ``"norm"`` (the norms differ) or ``"phase"`` (``x != +-y``).
    The vectors actually meant are ``sqrt(x_scale_sq) * x`` and
    ``sqrt(y_scale_sq) * y``; the scales let an exact witness carry an
    irrational multiple while every squared measurement stays rational.
    ``measurements`` holds squared measurements ``(|P_i x|^2, |P_i y|^2)``.
    """

    x: np.ndarray
    y: np.ndarray
    kind: str = "norm"
    x_scale_sq: Any = 1
    y_scale_sq: Any = 1
    measurements: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return is_exact(self.x) and is_exact(self.y)

    def norms_sq(self):
        return (self.x_scale_sq * np.dot(self.x, self.x), self.y_scale_sq * np.dot(self.y, self.y))


@dataclass(eq=False)
class Verdict:
    status: Status
    rule: str
    certificate: Any = None
    witness: WitnessPair | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.status in (Status.YES_EXACT, Status.PROBABLY_YES)

    def __str__(self):
        return f"{self.status.value} via {self.rule}"


@dataclass(frozen=True)
class Replay:
    ok: bool
    measurement_dev: float
    gap: float
    reason: str = ""


def _measure_ops(target):
    """Independent squared-measurement functions for a frame or a family."""
    from .frames import FrameSpec
    from .subspaces import SubspaceFamily

    if isinstance(target, FrameSpec):
        vecs = [target.vectors[:, i] for i in range(target.count)]
        return [lambda z, v=v: np.dot(z, v) * np.dot(z, v) for v in vecs], target.dim
    if isinstance(target, SubspaceFamily):
        ops = []
        for w in target:
            b = w.basis
            if b.shape[1] == 0:
                ops.append(lambda z: 0 * np.dot(z, z))
            elif is_exact(b):
                # orthogonal, non-unit basis: |Pz|^2 = sum (b.z)^2 / (b.b)
                cols = [b[:, j] for j in range(b.shape[1])]
                ops.append(lambda z, cols=cols: sum(np.dot(c, z) ** 2 / np.dot(c, c) for c in cols))
            else:
                q, _ = np.linalg.qr(to_float(b))
                ops.append(lambda z, q=q: float(np.sum((q.T @ to_float(z)) ** 2)))
        return ops, target.dim
    raise TypeError(f"cannot replay a witness against {type(target).__name__}")


def replay_witness(w: WitnessPair, target) -> Replay:
    """Re-measure a witness from scratch against ``target``.

    Exact witnesses on exact targets must match every squared measurement
    exactly; otherwise measurements must agree within ``MEASURE_REL`` of
    ``max(|x|^2, |y|^2)``.  The violated conclusion must hold by a relative
    margin of at least ``GAP_REL``.
    """
    ops, dim = _measure_ops(target)
    if len(w.x) != dim or len(w.y) != dim:
        return Replay(False, float("inf"), 0.0, "dimension mismatch")
    exact = w.exact and all(is_exact(m) for m in _target_arrays(target))
    if exact:
        x, y = w.x, w.y
        sx, sy = Fraction(w.x_scale_sq), Fraction(w.y_scale_sq)
    else:
        x, y = to_float(w.x), to_float(w.y)
        sx, sy = float(w.x_scale_sq), float(w.y_scale_sq)
    nx, ny = sx * np.dot(x, x), sy * np.dot(y, y)
    big = max(nx, ny)
    if big == 0:
        return Replay(False, 0.0, 0.0, "both vectors are zero")
    devs = [abs(sx * op(x) - sy * op(y)) for op in ops]
    dev = max(devs, default=0)
    rel_dev = float(dev / big)
    if w.kind == "norm":
        rx, ry = np.sqrt(float(nx)), np.sqrt(float(ny))
        gap = abs(rx - ry) / max(rx, ry)
    else:
        xf = np.sqrt(float(sx)) * to_float(x)
        yf = np.sqrt(float(sy)) * to_float(y)
        gap = min(np.linalg.norm(xf - yf), np.linalg.norm(xf + yf)) / np.sqrt(float(big))
    if exact:
        ok_meas = dev == 0
        ok_gap = (nx != ny) if w.kind == "norm" else gap >= GAP_REL
        if w.kind == "norm":
            gap = float(abs(nx - ny) / big)
    else:
        ok_meas = rel_dev <= MEASURE_REL
        ok_gap = gap >= GAP_REL
    reason = "" if ok_meas and ok_gap else ("measurements differ" if not ok_meas else "conclusion not violated")
    return Replay(bool(ok_meas and ok_gap), rel_dev, float(gap), reason)


def _target_arrays(target):
    from .frames import FrameSpec

    if isinstance(target, FrameSpec):
        return [target.vectors]
    return [w.basis for w in target]


def fill_measurements(w: WitnessPair, target) -> WitnessPair:
    ops, _ = _measure_ops(target)
    w.measurements = [(w.x_scale_sq * op(w.x), w.y_scale_sq * op(w.y)) for op in ops]
    return w


def refute(witness: WitnessPair, target, rule: str, diagnostics: dict | None = None) -> Verdict:
    """Return ``NoWithWitness`` only if the witness survives replay.

    A witness that fails replay is counted and the verdict is downgraded to
    ``Unknown``; refutations are never reported unchecked.
    """
    diagnostics = dict(diagnostics or {})
    rep = replay_witness(witness, target)
    diagnostics["replay"] = {"ok": rep.ok, "measurement_dev": rep.measurement_dev, "gap": rep.gap}
    if not rep.ok:
        _REPLAY_FAILURES[0] += 1
        diagnostics["replay"]["reason"] = rep.reason
        return Verdict(Status.UNKNOWN, rule, diagnostics=diagnostics)
    fill_measurements(witness, target)
    return Verdict(Status.NO_WITH_WITNESS, rule, witness=witness, diagnostics=diagnostics)
