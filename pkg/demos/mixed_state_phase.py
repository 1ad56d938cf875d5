"""Interferometric phase of a two-qubit marginal.

Tracing out one spin leaves a rank-two density operator. Its phase is the
argument of the weighted sum of the two eigenstate phases. It vanishes on
the isotropic line and is undefined at the origin, where the two weights
are equal.
"""

import numpy as np

from lmg3.errors import DegenerateMarginalError
from lmg3.geometry import mixed_berry_phase_discrete, mixed_berry_phase_two_qubit, two_qubit_visibility
from lmg3.model import ModelParams

p = ModelParams(0.5, 0.2)
res = mixed_berry_phase_two_qubit(p)
print("weights:", np.round(res.weights, 6), " eigenphases:", np.round(res.eigenphases, 6))
print("mixed phase:", res.gamma_phase, " transported marginal:", mixed_berry_phase_discrete(p))
print("visibility:", two_qubit_visibility(p))

print("\nisotropic line:", [mixed_berry_phase_two_qubit(ModelParams(1.0, h)).gamma_phase for h in (0.2, 0.5, 1.0)])

try:
    mixed_berry_phase_two_qubit(ModelParams(0.0, 0.0))
except DegenerateMarginalError as exc:
    print("origin:", exc)

# the phase varies faster as the origin is approached
for t in (0.3, 0.1, 0.03, 0.01):
    print(f"  t={t:<5} phase {mixed_berry_phase_two_qubit(ModelParams(t, t)).gamma_phase:+.6f}")
