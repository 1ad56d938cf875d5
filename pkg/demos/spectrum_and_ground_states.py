"""Walk along the isotropic line and watch the ground state change character.

Below h = 2/3 the ground state is the bit-flipped W state; above it every
spin points down. Away from gamma = 1 the two levels mix through the angle
theta, and at the origin the ground state is a GHZ state up to local unitaries.
"""

import numpy as np

from lmg3 import oracle
from lmg3.errors import CrossingError
from lmg3.model import ModelParams, classify_ground_state, crossing_field, ground_state, spectrum

print("crossing field on the isotropic line:", crossing_field(1.0))

for h in (0.2, 0.5, 2 / 3, 0.9):
    p = ModelParams(1.0, h)
    gs = ground_state(p)
    try:
        kind = classify_ground_state(p).kind.name
    except CrossingError:
        # both candidates are ground states here and they differ in kind
        kind = "/".join(classify_ground_state(p, block=s).kind.name for s in (1, -1))
    print(f"h={h:.3f}  E0={gs.energy:+.6f}  branch={gs.branch.name:11s}  class={kind}")

# closed forms against a brute-force diagonalisation of the 8x8 Pauli Hamiltonian
p = ModelParams(0.5, 0.2)
closed = np.sort(spectrum(p).energies())
dense = oracle.hermitian_eigensystem(oracle.pauli_hamiltonian(p)).values
print("\nspectrum at gamma=0.5, h=0.2")
for a, b in zip(closed, dense):
    print(f"  {a:+.15f}   dense {b:+.15f}")
print("max deviation:", np.max(np.abs(closed - dense)))

print("\norigin:", classify_ground_state(ModelParams(0.0, 0.0)).kind.name)
