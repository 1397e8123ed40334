"""Feasibility search: which (length ratio, idler delay, mirror reflectivity,
effective length) combinations meet a target linewidth and Bell fidelity.

The response surfaces contain genuine divergences (infinite cluster
spacings), so this is a status-aware grid search rather than a smooth
optimizer.  An empty feasible region is a valid answer and comes back with a
diagnosis of which constraint can never be met on the grid.
"""

from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path

from .biphoton import bell_fidelity, build_comb
from .cavity import finesse, linewidth, required_finesse
from .errors import NumericError, OutOfValidityRange, ScenarioValidation
from .resonator import joint_cluster_spacing
from .sweep import Scenario, builtin_scenario, load_scenario

_DEFAULT_GRID = {
    "length_ratio": [0.25, 0.30, 0.35, 0.40, 0.45],
    "idler_delay_um": [0.0, 50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0,
                       400.0, 450.0, 500.0, 550.0, 600.0, 650.0, 700.0,
                       750.0, 800.0],
    "mirror_reflectivity": [0.999, 0.9995, 0.9998],
    "effective_length_mm": [40.0, 53.0, 70.0],
}

_GRID_KEYS = tuple(_DEFAULT_GRID)


def load_constraints(path: str | Path) -> dict:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ScenarioValidation([f"cannot read constraints {path}: {exc}"])
    except json.JSONDecodeError as exc:
        raise ScenarioValidation([f"{path} is not valid JSON: {exc}"])
    return document


def _validate(constraints: dict) -> tuple[float, float, Scenario, dict]:
    if not isinstance(constraints, dict):
        raise ScenarioValidation(["constraints: top level must be an object"])
    known = {"target_linewidth_hz", "min_bell_fidelity", "scenario", "grid"}
    unknown = [k for k in constraints if k not in known]
    if unknown:
        raise ScenarioValidation([f"constraints: unknown keys {unknown}"])
    target_lw = float(constraints.get("target_linewidth_hz", 4e6))
    min_fid = float(constraints.get("min_bell_fidelity", 0.9))
    if target_lw <= 0:
        raise ScenarioValidation(["target_linewidth_hz must be > 0"])
    if not (0.0 <= min_fid <= 1.0):
        raise ScenarioValidation(["min_bell_fidelity must be in [0, 1]"])
    ref = constraints.get("scenario", "non_degenerate")
    scenario = (load_scenario(ref) if Path(str(ref)).exists()
                else builtin_scenario(str(ref)))
    if scenario.cavity is None:
        raise ScenarioValidation(["design query needs a cavity block in the "
                                  "scenario"])
    grid = dict(_DEFAULT_GRID)
    for key, values in constraints.get("grid", {}).items():
        if key not in _GRID_KEYS:
            raise ScenarioValidation([f"grid: unknown axis {key!r}; "
                                      f"supported: {sorted(_GRID_KEYS)}"])
        if (not isinstance(values, list) or not values
                or not all(isinstance(v, (int, float)) for v in values)):
            raise ScenarioValidation([f"grid.{key} must be a non-empty "
                                      "list of numbers"])
        grid[key] = [float(v) for v in values]
    return target_lw, min_fid, scenario, grid


def design_query(constraints: dict) -> dict:
    """Grid-search the feasible region for a linewidth + fidelity target.

    The source axes (length ratio, idler delay) and the cavity axes
    (reflectivity, effective length) decouple, so each half is evaluated once
    and the report enumerates the product.
    """
    target_lw, min_fid, scenario, grid = _validate(constraints)

    source_cells = []
    for ratio in grid["length_ratio"]:
        for delay_um in grid["idler_delay_um"]:
            settings = dataclasses.replace(scenario.source,
                                           length_ratio=ratio,
                                           idler_delay=delay_um * 1e-6)
            cell = {"length_ratio": ratio, "idler_delay_um": delay_um}
            try:
                cfg = settings.to_config(scenario.poling_period)
                comb = build_comb(cfg, scenario.target)
                cell["bell_fidelity"] = bell_fidelity(comb, scenario.target)
                joint = joint_cluster_spacing(cfg)
                cell["joint_cluster_hz"] = joint
                cell["ok"] = (cell["bell_fidelity"] >= min_fid
                              and math.isfinite(joint))
            except (NumericError, OutOfValidityRange) as exc:
                cell["bell_fidelity"] = math.nan
                cell["error"] = type(exc).__name__
                cell["ok"] = False
            source_cells.append(cell)

    cavity_cells = []
    for refl in grid["mirror_reflectivity"]:
        for length_mm in grid["effective_length_mm"]:
            spec = dataclasses.replace(scenario.cavity, r1=refl, r2=refl,
                                       effective_length=length_mm * 1e-3)
            cell = {"mirror_reflectivity": refl,
                    "effective_length_mm": length_mm,
                    "finesse": finesse(spec),
                    "linewidth_hz": linewidth(spec)}
            cell["ok"] = cell["linewidth_hz"] <= target_lw
            cavity_cells.append(cell)

    feasible = []
    for s in source_cells:
        if not s["ok"]:
            continue
        for c in cavity_cells:
            if not c["ok"]:
                continue
            feasible.append({**{k: v for k, v in s.items() if k != "ok"},
                             **{k: v for k, v in c.items() if k != "ok"}})

    recommendation = None
    if feasible:
        recommendation = max(
            feasible, key=lambda cell: (cell["bell_fidelity"],
                                        -cell["linewidth_hz"]))

    diagnosis = []
    if not feasible:
        if not any(c["ok"] for c in cavity_cells):
            best_l = max(grid["effective_length_mm"]) * 1e-3
            needed = required_finesse(best_l, target_lw)
            achievable = max(c["finesse"] for c in cavity_cells)
            diagnosis.append(
                f"finesse bound: the target linewidth needs finesse "
                f">= {needed:.3g} at the largest grid length, but the best "
                f"grid point reaches {achievable:.3g}")
        if not any(s["ok"] for s in source_cells):
            fids = [s["bell_fidelity"] for s in source_cells
                    if math.isfinite(s.get("bell_fidelity", math.nan))]
            best = max(fids) if fids else math.nan
            diagnosis.append(
                f"fidelity bound: best Bell fidelity on the grid is "
                f"{best:.4f}, below the requested {min_fid}")
        if not diagnosis:
            diagnosis.append("both halves have feasible cells but were "
                             "requested jointly; widen the grid")

    total = len(source_cells) * len(cavity_cells)
    return {
        "constraints": {"target_linewidth_hz": target_lw,
                        "min_bell_fidelity": min_fid,
                        "scenario": scenario.name},
        "grid": grid,
        "total_cells": total,
        "feasible_count": len(feasible),
        "feasible_examples": feasible[:20],
        "recommendation": recommendation,
        "diagnosis": diagnosis,
        "provenance": {
            "scenario_sha256": scenario.document_sha256,
            "coefficients_sha256": scenario.coefficients_sha256,
        },
    }
