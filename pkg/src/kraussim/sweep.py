"""Parameter sweeps over the channel presets, emitted as CSV or JSON.

Each grid point runs the compiled circuit on the requested input state
and records the measured Pauli expectations next to the closed-form
values, the fidelity and entropy of the output, and the worst deviation
of the plan from direct Kraus application over random probe states.
Output is deterministic byte-for-byte for identical configurations.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .channels import ChannelPreset, PRESET_KINDS, analytic_output, channel_preset
from .compiler import STRATEGY_NAMES, compile_preset
from .gates import LocalUnitary, count_gates, cost_model, decompose_controlled
from .linalg import (
    BlochVector,
    PAULI_Z,
    bloch_vector,
    fidelity,
    state_from_bloch,
    von_neumann_entropy,
)
from .simulator import run_plan, verify_plan

PLAN_DEVIATION_LIMIT = 1e-9
CSV_HEADER = "param,exp_x,exp_y,exp_z,fid_vs_input,fid_vs_theory,entropy,plan_deviation"

_NAMED_INPUTS = {
    "x": (1.0, 0.0, 0.0),
    "-x": (-1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "-y": (0.0, -1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
    "-z": (0.0, 0.0, -1.0),
}


def parse_input_state(text: str) -> BlochVector:
    """Named axis state (X, -Y, Z, ...) or an explicit 'x,y,z' triple."""
    name = text.strip().lower()
    if name in _NAMED_INPUTS:
        return BlochVector(*_NAMED_INPUTS[name])
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(
            f"input state {text!r} is neither a named axis nor an 'x,y,z' triple"
        )
    try:
        coords = tuple(float(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"input state {text!r} has a non-numeric component") from exc
    v = BlochVector(*coords)
    if v.norm() > 1.0 + 1e-10:
        raise ValueError(f"input Bloch vector {text!r} lies outside the unit ball")
    return v


def parse_grid(text: str) -> tuple[float, float, float]:
    """Parse 'start:stop:step' into a validated grid triple."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid {text!r} must have the form start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise ValueError(f"grid {text!r} has a non-numeric component") from exc
    validate_grid(start, stop, step)
    return start, stop, step


def validate_grid(start: float, stop: float, step: float) -> None:
    if not (0.0 <= start <= stop <= 1.0):
        raise ValueError(f"grid range [{start}, {stop}] must lie inside [0, 1]")
    if step <= 0.0:
        raise ValueError(f"grid step must be positive, got {step}")


def grid_points(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid; the final point is clamped onto stop."""
    validate_grid(start, stop, step)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [min(start + i * step, stop) for i in range(count)]


@dataclass(frozen=True)
class SweepConfig:
    channel: str
    strategy: str = "auto"
    input: str = "X"
    grid: tuple[float, float, float] = (0.0, 1.0, 0.05)
    basis: str = "pauli"
    out_path: str | None = None
    fmt: str = "csv"
    verify_trials: int = 20
    seed: int = 0

    def __post_init__(self) -> None:
        if self.channel not in PRESET_KINDS:
            raise ValueError(
                f"field 'channel': unknown preset {self.channel!r}, expected one of {PRESET_KINDS}"
            )
        if self.strategy not in STRATEGY_NAMES:
            raise ValueError(
                f"field 'strategy': unknown strategy {self.strategy!r}, "
                f"expected one of {STRATEGY_NAMES}"
            )
        if self.basis not in ("pauli", "weyl"):
            raise ValueError(f"field 'basis': expected 'pauli' or 'weyl', got {self.basis!r}")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"field 'format': expected 'csv' or 'json', got {self.fmt!r}")
        if self.verify_trials < 0:
            raise ValueError(f"field 'verify-trials': must be nonnegative, got {self.verify_trials}")
        parse_input_state(self.input)  # raises on a bad field
        validate_grid(*self.grid)


@dataclass(frozen=True)
class SweepRow:
    param: float
    exp_x: float
    exp_y: float
    exp_z: float
    fid_vs_input: float
    fid_vs_theory: float
    entropy: float
    plan_deviation: float


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """One row per grid point, sorted by parameter."""
    v_in = parse_input_state(cfg.input)
    rho_in = state_from_bloch(v_in)
    rows = []
    for param in grid_points(*cfg.grid):
        preset = ChannelPreset(cfg.channel, param)
        ch = channel_preset(preset)
        plan = compile_preset(cfg.channel, param, cfg.strategy, cfg.basis)
        result = run_plan(plan, rho_in)
        measured = bloch_vector(result.output)
        rho_theory = state_from_bloch(analytic_output(preset, v_in))
        rows.append(
            SweepRow(
                param=param,
                exp_x=measured.x,
                exp_y=measured.y,
                exp_z=measured.z,
                fid_vs_input=fidelity(result.output, rho_in),
                fid_vs_theory=fidelity(result.output, rho_theory),
                entropy=von_neumann_entropy(result.output),
                plan_deviation=verify_plan(plan, ch, cfg.verify_trials, cfg.seed),
            )
        )
    return rows


def _fmt(value: float) -> str:
    return format(value, ".12g")


def render_csv(rows: list[SweepRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.param,
                    r.exp_x,
                    r.exp_y,
                    r.exp_z,
                    r.fid_vs_input,
                    r.fid_vs_theory,
                    r.entropy,
                    r.plan_deviation,
                )
            )
        )
    return "\n".join(lines) + "\n"


def render_json(rows: list[SweepRow]) -> str:
    payload = [
        {key: float(_fmt(value)) for key, value in asdict(r).items()} for r in rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def emit_csv(rows: list[SweepRow], path: str) -> None:
    _write_text(render_csv(rows), path)


def emit_json(rows: list[SweepRow], path: str) -> None:
    _write_text(render_json(rows), path)


def _write_text(text: str, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path!r}: {exc}") from exc


def report_costs(n_max: int) -> dict:
    """Model gate costs per system size plus measured decomposer tallies.

    Model rows evaluate the closed-form expressions; measured rows run
    the decomposer on an m-controlled Z and tally actual gates.
    """
    if not 1 <= n_max <= 8:
        raise ValueError(f"n_max must lie in 1..8, got {n_max}")
    model = []
    for n in range(1, n_max + 1):
        lcu = cost_model("lcu", n)
        stine = cost_model("stinespring", n)
        model.append(
            {"n": n, "lcu": lcu, "stinespring": stine, "ratio": stine / lcu}
        )
    measured = []
    target = LocalUnitary((PAULI_Z,))
    for m in range(1, 5):
        counts = count_gates(decompose_controlled(m, target))
        measured.append(
            {
                "controls": m,
                "single": counts.single,
                "cnot": counts.cnot,
                "total": counts.single + counts.cnot,
            }
        )
    return {"model": model, "measured": measured}


def max_plan_deviation(rows: list[SweepRow]) -> float:
    return max((r.plan_deviation for r in rows), default=0.0)
