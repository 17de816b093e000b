"""Named figure-reproduction presets.

Each preset fixes every free parameter and is fully deterministic.  Where the
source material leaves a choice open, the presets pick:

* fig1-fig5 use N = 201 (odd, so site 0 sits at the center of the distance
  axis) with B = 100 in coupling units, plotted over the window t in [0, 20];
  the ring is large enough that the free wavefront (speed 2) cannot wrap
  within the window.
* fig6a/fig6b use the 90-site ring with B = 2 resp. 1.9, period 2*pi, run for
  50 periods.
* fig7/fig8 use theta0 = pi/2 and period 2*pi, run for 50 periods, sampling
  fidelity at the revival times (fig7) or 12 points per period (fig8).

Multi-curve presets write one bundle per curve plus an index.json.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .config import ExperimentConfig, apply_overrides, run
from .errors import DomainError

__all__ = ["PRESET_NAMES", "preset_runs", "run_preset"]

_SQ2 = 1.0 / math.sqrt(2.0)
_PI = math.pi

_PSI0 = [{"coeff": [1.0, 0.0], "sites": [0]}]
_PAIR_SYM = [  # (|psi_1> + |psi_-1>)/sqrt(2)
    {"coeff": [_SQ2, 0.0], "sites": [1]},
    {"coeff": [_SQ2, 0.0], "sites": [-1]},
]
_PAIR_NEAR = [  # (|psi_1> + |psi_0>)/sqrt(2)
    {"coeff": [_SQ2, 0.0], "sites": [1]},
    {"coeff": [_SQ2, 0.0], "sites": [0]},
]
_TWO_SECTOR = [  # two one-magnon terms plus one two-magnon term, 90 sites
    {"coeff": [-math.sqrt(2.0) / 3.0, 0.0], "sites": [20]},
    {"coeff": [1.0 / 3.0, 0.0], "sites": [72]},
    {"coeff": [math.sqrt(2.0 / 3.0), 0.0], "sites": [0, 5]},
]


def _wide_ring(schedule, initial, observables, probe="site_basis", label=""):
    return {
        "ring": {"n_sites": 201, "b_field": 100.0, "coupling": 1.0},
        "schedule": schedule,
        "initial": initial,
        "plan": {"t_final": 20.0, "samples": 600},
        "outputs": {"observables": observables, "probe": probe, "label": label},
    }


def _ninety_ring(b_field, label):
    return {
        "ring": {"n_sites": 90, "b_field": b_field, "coupling": 1.0},
        "schedule": {"type": "step", "theta0": _PI / 2.0, "period": 2.0 * _PI},
        "initial": _TWO_SECTOR,
        "plan": {"periods": 50, "samples": 300, "include_revivals": True},
        "outputs": {"observables": ["fidelity", "revivals"], "label": label},
    }


def _fourier_run(harmonics, initial, label, samples):
    return {
        "ring": {"n_sites": 201, "b_field": 100.0, "coupling": 1.0},
        "schedule": {
            "type": "fourier",
            "theta0": _PI / 2.0,
            "period": 2.0 * _PI,
            "harmonics": harmonics,
        },
        "initial": initial,
        "plan": {"periods": 50, "samples": samples, "include_revivals": True},
        "outputs": {"observables": ["fidelity", "revivals"], "label": label},
    }


def preset_runs(name: str) -> list:
    """(subdir, config dict) pairs for a preset; subdir None means flat."""
    if name == "fig1":
        return [(None, _wide_ring(
            {"type": "constant", "theta0": 0.0}, _PSI0,
            ["overlap_map", "fidelity"], label="localized, unmodulated"))]
    if name == "fig2":
        return [(None, _wide_ring(
            {"type": "constant", "theta0": 0.0}, _PAIR_SYM,
            ["overlap_map"], label="superposition, unmodulated"))]
    if name == "fig3":
        return [
            ("localized", _wide_ring(
                {"type": "constant", "theta0": 0.0}, _PSI0,
                ["fidelity"], label="single excitation")),
            ("superposition", _wide_ring(
                {"type": "constant", "theta0": 0.0}, _PAIR_SYM,
                ["fidelity"], label="superposition")),
        ]
    if name == "fig4":
        cfg = _wide_ring(
            {"type": "step", "theta0": _PI / 2.0, "period": 2.0 * _PI}, _PSI0,
            ["overlap_map", "fidelity", "revivals"], label="step modulation")
        return [(None, cfg)]
    if name == "fig5":
        return [
            ("a", _wide_ring(
                {"type": "step", "theta0": -_PI / 2.0, "period": 2.0 * _PI},
                _PAIR_SYM, ["overlap_map"], label="flip -pi/2 to pi/2")),
            ("b", _wide_ring(
                {"type": "step", "theta0": 0.0, "period": 2.0 * _PI},
                _PAIR_SYM, ["overlap_map"], label="flip 0 to pi")),
        ]
    if name == "fig6a":
        return [(None, _ninety_ring(2.0, "B = 2 (BT = 4π)"))]
    if name == "fig6b":
        return [(None, _ninety_ring(1.9, "B = 1.9 (BT = 3.8π)"))]
    if name == "fig7":
        return [
            (f"m{m}", _fourier_run(m, _PSI0, f"first {m} harmonics", samples=0))
            for m in (5, 13, 25, 50, 100)
        ]
    if name == "fig8":
        runs = []
        for m in (5, 25, 100):
            runs.append((f"single_m{m}", _fourier_run(
                m, _PSI0, f"single, {m} harmonics", samples=600)))
            runs.append((f"super_m{m}", _fourier_run(
                m, _PAIR_NEAR, f"superposition, {m} harmonics", samples=600)))
        return runs
    raise DomainError(f"unknown preset {name!r}; expected {', '.join(PRESET_NAMES)}")


PRESET_NAMES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b", "fig7", "fig8")


def run_preset(name: str, out_dir, overrides=()) -> list:
    """Run every bundle of a preset under out_dir/<name>/; returns bundles."""
    root = Path(out_dir) / name
    runs = preset_runs(name)
    bundles = []
    index = []
    for subdir, obj in runs:
        target = root if subdir is None else root / subdir
        obj = apply_overrides(obj, overrides)
        obj.setdefault("outputs", {})["directory"] = str(target)
        config = ExperimentConfig.from_dict(obj)
        bundles.append(run(config))
        if subdir is not None:
            index.append({"directory": subdir, "label": config.label})
    if index:
        (root / "index.json").write_text(
            json.dumps({"preset": name, "bundles": index}, indent=2, sort_keys=True) + "\n"
        )
    return bundles
