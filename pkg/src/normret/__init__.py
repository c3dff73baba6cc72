"""Norm and phase retrieval for finite frames and subspace families."""

from .frames import FrameSpec
from .linalg import DEFAULT_TOL, Tolerance
from .subspaces import Subspace, SubspaceFamily
from .verdict import Status, Verdict, WitnessPair, replay_witness

__all__ = [
    "FrameSpec",
    "Subspace",
    "SubspaceFamily",
    "Status",
    "Verdict",
    "WitnessPair",
    "replay_witness",
    "Tolerance",
    "DEFAULT_TOL",
]
