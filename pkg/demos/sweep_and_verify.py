"""Produce a figure dataset and run the oracle comparison grid from Python.

The same operations are available as ``lmg3 sweep`` and ``lmg3 verify``.
"""

from lmg3.sweep import SweepSpec, format_csv, run_sweep
from lmg3.verify import verify_grid

spec = SweepSpec(gamma_steps=5, h_steps=4, quantities=("energies", "berry_abs", "chi_full"))
print(format_csv(run_sweep(spec)))

reports = verify_grid(7)
checks = [c for r in reports for c in r.checks]
print(f"{len(reports)} points: {sum(c.passed is True for c in checks)} checks passed, "
      f"{sum(c.passed is False for c in checks)} failed, {sum(c.skipped for c in checks)} skipped")
