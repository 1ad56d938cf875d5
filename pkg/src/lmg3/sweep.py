"""Grid sweeps over ``(gamma, h)`` and CSV/JSON emission.

Every cell of a table is a finite float or ``None`` (written ``NA`` in CSV,
``null`` in JSON) with a reason code:

* ``DEGENERATE`` within ``skip_radius`` of the crossing line ``h_c^(2)``,
  or on a degenerate point the radius does not cover;
* ``MONOPOLE`` within ``skip_radius`` of ``(1, +-1/3)``;
* ``UNDEFINED`` where the quantity itself does not exist (mixed phase at the
  GHZ point).

On ``h = 0`` the two parity blocks are degenerate mirror images; the sweep
reports the ``h -> 0+`` limit there (the upper block).
"""

from __future__ import annotations

import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import fidelity, geometry
from .errors import LMGError, OutputError, UsageError
from .model import (
    ModelParams,
    distance_to_crossing,
    distance_to_monopole,
    energy_functions,
    ground_state,
    mixing_angle,
)

QUANTITIES = (
    "energies",
    "theta",
    "berry_raw",
    "berry_abs",
    "mixed_berry_abs",
    "chi_full",
    "chi_1q",
    "chi_2q",
    "monopole_mag",
)
ENERGY_COLUMNS = ("e_ground", "e_low_branch", "e_high_branch")
NA = "NA"
DEGENERATE, MONOPOLE, UNDEFINED = "DEGENERATE", "MONOPOLE", "UNDEFINED"


@dataclass(frozen=True)
class SweepSpec:
    gamma_min: float = 0.0
    gamma_max: float = 2.0
    gamma_steps: int = 21
    h_min: float = 0.0
    h_max: float = 1.2
    h_steps: int = 21
    quantities: tuple[str, ...] = ("energies",)
    skip_radius: float = 0.01

    def __post_init__(self):
        for name in ("gamma_min", "gamma_max", "h_min", "h_max", "skip_radius"):
            if not math.isfinite(getattr(self, name)):
                raise UsageError(f"{name} must be finite")
        if self.gamma_max < self.gamma_min or self.h_max < self.h_min:
            raise UsageError("range maximum below minimum")
        if self.gamma_steps < 1 or self.h_steps < 1:
            raise UsageError("steps must be at least 1")
        if self.skip_radius < 0:
            raise UsageError("skip_radius must be non-negative")
        if not self.quantities:
            raise UsageError("no quantities requested")
        unknown = [q for q in self.quantities if q not in QUANTITIES]
        if unknown:
            raise UsageError(f"unknown quantities {unknown}; choose from {', '.join(QUANTITIES)}")
        # canonical order, duplicates dropped
        object.__setattr__(self, "quantities", tuple(q for q in QUANTITIES if q in self.quantities))

    def gammas(self) -> np.ndarray:
        return _axis(self.gamma_min, self.gamma_max, self.gamma_steps)

    def hs(self) -> np.ndarray:
        return _axis(self.h_min, self.h_max, self.h_steps)

    def columns(self) -> tuple[str, ...]:
        cols = ["gamma", "h"]
        for q in self.quantities:
            cols.extend(ENERGY_COLUMNS if q == "energies" else (q,))
        return tuple(cols)


def _axis(lo: float, hi: float, n: int) -> np.ndarray:
    return np.array([lo]) if n == 1 else np.linspace(lo, hi, n)


@dataclass(frozen=True)
class SweepTable:
    spec: SweepSpec
    columns: tuple[str, ...]
    rows: list[list[float | None]] = field(repr=False)
    reasons: list[dict[str, str]] = field(repr=False)

    def column(self, name: str) -> list[float | None]:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


PRESETS = {
    "fig1": ("energies",),
    "fig2": ("berry_raw", "berry_abs"),
    "fig3": ("mixed_berry_abs",),
    "fig4": ("chi_full",),
    "fig5": ("chi_1q",),
    "fig6": ("chi_2q",),
}


def preset_spec(name: str, steps: int = 41) -> SweepSpec:
    if name not in PRESETS:
        raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return SweepSpec(gamma_steps=steps, h_steps=steps, quantities=PRESETS[name])


# ----------------------------------------------------------------------------
# Evaluation
# ----------------------------------------------------------------------------

def _active_block(params: ModelParams, spec: SweepSpec) -> tuple[int | None, str | None]:
    if distance_to_monopole(params.gamma, params.h) < spec.skip_radius:
        return None, MONOPOLE
    if params.gamma >= 0 and distance_to_crossing(params.gamma, params.h) < spec.skip_radius:
        return None, DEGENERATE
    gs = ground_state(params)
    if not gs.is_degenerate:
        return gs.block, None
    # degenerate because of h = 0 rather than h_c^(2): take the h -> 0+ side
    if abs(params.h) < distance_to_crossing(params.gamma, params.h):
        return (1 if params.h >= 0 else -1), None
    return None, DEGENERATE


def _quantity(q: str, params: ModelParams, s: int) -> float:
    if q == "theta":
        return mixing_angle(params, s)
    if q == "berry_raw":
        return geometry.berry_phase_pure(params, s).raw
    if q == "berry_abs":
        return abs(geometry.berry_phase_pure(params, s).principal)
    if q == "mixed_berry_abs":
        return abs(geometry.mixed_berry_phase_two_qubit(params, s).gamma_phase)
    if q == "chi_full":
        return fidelity.fidelity_susceptibility_sum(params, s).value
    if q == "chi_1q":
        return fidelity.partial_fs_one_qubit(params, s).value
    if q == "chi_2q":
        return fidelity.partial_fs_two_qubit(params, s).value
    if q == "monopole_mag":
        return float(np.linalg.norm(geometry.monopole_field(params, 0.0, s)))
    raise UsageError(f"unknown quantity {q!r}")


def evaluate_point(spec: SweepSpec, gamma: float, h: float) -> tuple[list[float | None], dict[str, str]]:
    params = ModelParams(float(gamma), float(h))
    row: list[float | None] = [float(gamma), float(h)]
    reasons: dict[str, str] = {}
    s, why = _active_block(params, spec)
    for q in spec.quantities:
        if q == "energies":
            up = energy_functions(params, 1).e_minus
            lo = energy_functions(params, -1).e_minus
            low_block_e = up if h >= 0 else lo
            high_block_e = lo if h >= 0 else up
            row.extend([min(up, lo), low_block_e, high_block_e])
            continue
        if s is None:
            row.append(None)
            reasons[q] = why
            continue
        try:
            v = _quantity(q, params, s)
        except LMGError:
            v = None
        if v is None or not math.isfinite(v):
            row.append(None)
            reasons[q] = UNDEFINED
        else:
            row.append(float(v))
    return row, reasons


def _evaluate_chunk(args):
    spec, points = args
    return [evaluate_point(spec, g, h) for g, h in points]


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepTable:
    """Evaluate the grid, gamma-major. Output does not depend on ``workers``."""
    points = [(float(g), float(h)) for g in spec.gammas() for h in spec.hs()]
    if workers <= 1 or len(points) < 2:
        results = _evaluate_chunk((spec, points))
    else:
        size = math.ceil(len(points) / workers)
        chunks = [(spec, points[i : i + size]) for i in range(0, len(points), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for chunk in pool.map(_evaluate_chunk, chunks) for r in chunk]
    return SweepTable(
        spec=spec,
        columns=spec.columns(),
        rows=[r for r, _ in results],
        reasons=[why for _, why in results],
    )


# ----------------------------------------------------------------------------
# Output
# ----------------------------------------------------------------------------

def _fmt(v: float | None) -> str:
    return NA if v is None else repr(v)


def _row_reason(reasons: dict[str, str]) -> str:
    return "|".join(sorted(set(reasons.values())))


def format_csv(table: SweepTable) -> str:
    out = io.StringIO()
    out.write(",".join(table.columns + ("reason",)) + "\n")
    for row, why in zip(table.rows, table.reasons):
        out.write(",".join([_fmt(v) for v in row] + [_row_reason(why)]) + "\n")
    return out.getvalue()


def format_json(table: SweepTable) -> str:
    spec = asdict(table.spec)
    spec["quantities"] = list(spec["quantities"])
    doc = {
        "spec": spec,
        "columns": list(table.columns),
        "rows": table.rows,
        "reasons": {str(i): why for i, why in enumerate(table.reasons) if why},
    }
    return json.dumps(doc, indent=None, separators=(",", ":"), allow_nan=False) + "\n"


def emit_table(table: SweepTable, fmt: str = "csv", destination: str | Path | None = None) -> None:
    """Write ``table`` as ``csv`` or ``json`` to a path, or to stdout for ``None``/``-``."""
    if fmt == "csv":
        text = format_csv(table)
    elif fmt == "json":
        text = format_json(table)
    else:
        raise UsageError(f"unknown format {fmt!r}; use csv or json")
    if destination is None or str(destination) == "-":
        sys.stdout.write(text)
        return
    path = Path(destination)
    try:
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
