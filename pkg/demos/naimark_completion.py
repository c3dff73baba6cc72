"""
Parseval completion and Naimark embedding
=========================================

Any frame can be rescaled and padded into a Parseval frame of ``2M - 1``
vectors.  A Parseval frame is the image of an orthonormal basis under an
orthogonal projection.
"""

import numpy as np

from normret import frames
from normret.constructions import (bessel_to_parseval_completion, naimark_embed, naimark_nr_tail_check,
                                   sign_flip_partners)
from normret.frames import FrameSpec

f = FrameSpec.from_vectors([[1, 0], [0, 1], [1, 1]])
g = bessel_to_parseval_completion(f)
print("completed vectors:\n", np.round(g.vectors, 6))
print("Parseval:", frames.classify(g).parseval, "scale:", g.meta["scale"])

emb = naimark_embed(g)
print("ambient dimension:", emb.ambient, "trace of P:", round(float(np.trace(emb.projection)), 12))

# Vectors with matching head coefficients up to sign must have matching tail
# norms when the frame retrieves norms.  The oblique pair shows the converse.
rng = np.random.default_rng(1)
x = rng.standard_normal(2)
print("frame retrieving norms:", all(naimark_nr_tail_check(f, x, y) for y in sign_flip_partners(f, x)))
oblique = FrameSpec.from_vectors([[1, 0], [1, 1]])
print("oblique pair:", all(naimark_nr_tail_check(oblique, x, y) for y in sign_flip_partners(oblique, x)))
