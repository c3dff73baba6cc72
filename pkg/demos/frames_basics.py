"""
Frame bounds and the complement property
========================================

A short tour of the frame toolbox on small hand-made examples.
"""

import numpy as np

from normret import frames
from normret.frames import FrameSpec

# Three unit vectors at 120 degrees form a tight frame of the plane.
r = np.sqrt(3) / 2
mercedes = FrameSpec.from_vectors([[0, 1], [-r, -0.5], [r, -0.5]])
print(frames.classify(mercedes))
print("frame operator:\n", frames.frame_operator(mercedes))

# Exact input stays exact: integer entries give rational arithmetic throughout.
f = FrameSpec.from_vectors([[1, 0], [0, 1], [1, 1]])
print("frame operator (exact):\n", frames.frame_operator(f))
print("bounds:", frames.frame_bounds(f))
print("spark:", frames.spark(f))

# Every split of {(1,0), (0,1), (1,1)} leaves a spanning side, so the frame
# determines vectors up to sign from the moduli of their coefficients.
print(frames.complement_property(f))

# An orthonormal basis does not: the split {e1} | {e2} gives a witness.
v = frames.complement_property(FrameSpec.from_vectors([[1, 0], [0, 1]]))
print(v, "x =", v.witness.x, "y =", v.witness.y)

# Norm retrieval of vectors asks less.  Orthonormal sets pass, oblique pairs fail.
print(frames.norm_retrieval_vectors(FrameSpec.from_vectors([[1, 0], [0, 1]])))
v = frames.norm_retrieval_vectors(FrameSpec.from_vectors([[1, 0], [1, 1]]))
print(v, "squared norms:", v.witness.norms_sq())

# Scaling the tight frame by c_i = 2/3 makes it Parseval.
print(frames.scalability(mercedes))
