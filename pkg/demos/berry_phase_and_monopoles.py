"""Berry phase of the ground state under a full turn about z.

The closed form is compared with a Pancharatnam product over 4096 rotated
ground states. On the isotropic line the phase is a multiple of 2 pi and
jumps by 4 pi where the ground state switches blocks. Near (1, 1/3) the
effective two-level gap closes. The Berry phase equals the flux of that
point source through the cap swept by the effective field.
"""

import math

from lmg3.geometry import (
    berry_phase_discrete_oracle,
    berry_phase_pure,
    lattice_berry_flux,
    monopole_flux,
)
from lmg3.model import ModelParams

for g, h in [(0.5, 0.2), (1.5, 0.3), (0.2, 0.9)]:
    p = ModelParams(g, h)
    res = berry_phase_pure(p)
    print(f"gamma={g} h={h}: closed {res.principal:+.8f}  discrete {berry_phase_discrete_oracle(p):+.8f}")

print("\nisotropic line, raw phase in units of pi:")
for h in (0.5, 0.6, 0.66, 0.67, 0.8):
    print(f"  h={h:.2f}  {berry_phase_pure(ModelParams(1.0, h)).raw / math.pi:+.3f}")

p = ModelParams(0.5, 0.2)
print("\nraw phase against flux through the swept cap, gamma=0.5 h=0.2:")
print("  raw phase: ", berry_phase_pure(p).raw)
print("  quadrature:", monopole_flux(p, block=1))
print("  lattice:   ", lattice_berry_flux(p, block=1))
