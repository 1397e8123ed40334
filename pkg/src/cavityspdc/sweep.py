"""Scenario definition, parameter sweeps, and tabular output.

A scenario is a strict JSON document (unknown keys rejected) naming a
material, a source geometry, optionally a cavity, a Bell target, up to two
sweep axes, and the quantities to evaluate.  Sweeps are deterministic:
identical inputs produce bit-identical tables, cells are independent and may
be farmed out to a process pool, and every cell carries a status
(ok | infinite | error:<Code>) so divergences and per-cell failures are data,
not crashes.

Axis values in the scenario file are SI (m, K, Hz, dimensionless); the
source/cavity blocks use the customary lab units declared by their key names
(nm, mm, um, Celsius).  Output columns are SI with unit strings in headers.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__ as _version
from .biphoton import BellTarget, bell_fidelity, build_comb, \
    single_crystal_fidelity
from .cavity import CavitySpec, ar_face_ledger, finesse, linewidth
from .errors import NumericError, OutOfValidityRange, ScenarioValidation
from .materials import (DispersionModel, builtin_material, load_material,
                        material_sha256)
from .phasematch import (CrystalSpec, PmType, solve_poling_period,
                         spdc_bandwidth, spdc_bandwidth_scan)
from .resonator import (PAIR_CRYSTAL_1, PAIR_CRYSTAL_2, ModeId, SourceConfig,
                        cluster_spacing_first_order,
                        cluster_spacing_second_order, crystal_process, fsr,
                        joint_cluster_spacing, temperature_sensitivity)
from .units import celsius_to_kelvin, wavelength_to_omega

# ---------------------------------------------------------------------------
# source settings: the resolved, sweepable description of the two-crystal
# source.  The poling period is solved once from the base settings and held
# fixed across sweeps (a crystal is poled once; sweeps detune around it).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SourceSettings:
    material: DispersionModel
    pm: PmType
    pump_omega: float       # rad/s
    signal_omega: float     # rad/s
    joint_length: float     # m
    length_ratio: float     # l1 / (l1 + l2)
    air_path: float         # m
    temperature: float      # K
    idler_delay: float = 0.0  # m, applied to modes 2 and 4

    def __post_init__(self):
        if not (0.0 < self.length_ratio < 1.0):
            raise ScenarioValidation("length_ratio must be in (0, 1)")
        if self.joint_length <= 0:
            raise ScenarioValidation("joint_length must be > 0")

    def solve_period(self) -> float:
        return solve_poling_period(self.pump_omega, self.signal_omega,
                                   self.pm, self.material, self.temperature)

    def to_config(self, poling_period: float | None = None) -> SourceConfig:
        if poling_period is None:
            poling_period = self.solve_period()
        l1 = self.length_ratio * self.joint_length
        l2 = self.joint_length - l1
        crystal = lambda l: CrystalSpec(self.material, l, poling_period,
                                        self.temperature)
        delays = {}
        if self.idler_delay:
            delays = {ModeId.IDLER_C1: self.idler_delay,
                      ModeId.IDLER_C2: self.idler_delay}
        return SourceConfig(crystal1=crystal(l1), crystal2=crystal(l2),
                            l_air=self.air_path, pm=self.pm,
                            pump_omega=self.pump_omega,
                            signal_omega=self.signal_omega, delays=delays)


# ---------------------------------------------------------------------------
# sweepable parameters and output quantities
# ---------------------------------------------------------------------------

def _set_source(**kw):
    def apply(settings, cavity, value):
        return dataclasses.replace(settings, **{kw["field"]: value}), cavity
    return apply


def _set_cavity_reflectivity(settings, cavity, value):
    return settings, dataclasses.replace(cavity, r1=value, r2=value)


def _set_cavity_loss(settings, cavity, value):
    from .cavity import LossEntry
    return settings, dataclasses.replace(
        cavity, losses=(LossEntry("swept loss", value, 1),))


def _set_cavity_length(settings, cavity, value):
    return settings, dataclasses.replace(cavity, effective_length=value)


#: parameter name -> (unit, needs_cavity, applicator)
PARAMETERS = {
    "length_ratio": ("1", False, _set_source(field="length_ratio")),
    "joint_length": ("m", False, _set_source(field="joint_length")),
    "idler_delay": ("m", False, _set_source(field="idler_delay")),
    "air_path": ("m", False, _set_source(field="air_path")),
    "temperature": ("K", False, _set_source(field="temperature")),
    "mirror_reflectivity": ("1", True, _set_cavity_reflectivity),
    "intracavity_loss": ("1", True, _set_cavity_loss),
    "effective_length": ("m", True, _set_cavity_length),
}


class _Cell:
    """Lazy per-cell evaluation context shared between quantities."""

    def __init__(self, settings: SourceSettings, cavity: CavitySpec | None,
                 target: BellTarget, poling_period: float):
        self.settings = settings
        self.cavity = cavity
        self.target = target
        self.poling_period = poling_period
        self._config = None
        self._comb = None

    @property
    def config(self) -> SourceConfig:
        if self._config is None:
            self._config = self.settings.to_config(self.poling_period)
        return self._config

    @property
    def comb(self):
        if self._comb is None:
            self._comb = build_comb(self.config, self.target)
        return self._comb

    def need_cavity(self) -> CavitySpec:
        if self.cavity is None:
            raise ScenarioValidation(
                "quantity requires a cavity block in the scenario")
        return self.cavity


#: quantity name -> (unit, evaluator)
QUANTITIES = {
    "poling_period": ("m", lambda c: c.poling_period),
    "bandwidth1": ("Hz", lambda c: spdc_bandwidth(crystal_process(c.config, 1))),
    "bandwidth2": ("Hz", lambda c: spdc_bandwidth(crystal_process(c.config, 2))),
    "bandwidth1_scan": ("Hz", lambda c: spdc_bandwidth_scan(
        crystal_process(c.config, 1))),
    "bandwidth2_scan": ("Hz", lambda c: spdc_bandwidth_scan(
        crystal_process(c.config, 2))),
    "cluster1": ("Hz", lambda c: cluster_spacing_first_order(
        c.config, PAIR_CRYSTAL_1)),
    "cluster2": ("Hz", lambda c: cluster_spacing_first_order(
        c.config, PAIR_CRYSTAL_2)),
    "cluster1_second": ("Hz", lambda c: cluster_spacing_second_order(
        c.config, PAIR_CRYSTAL_1)),
    "cluster2_second": ("Hz", lambda c: cluster_spacing_second_order(
        c.config, PAIR_CRYSTAL_2)),
    "joint": ("Hz", lambda c: joint_cluster_spacing(c.config)),
    "fsr1": ("Hz", lambda c: fsr(c.config, ModeId.SIGNAL_C1)),
    "fsr2": ("Hz", lambda c: fsr(c.config, ModeId.IDLER_C1)),
    "fsr3": ("Hz", lambda c: fsr(c.config, ModeId.SIGNAL_C2)),
    "fsr4": ("Hz", lambda c: fsr(c.config, ModeId.IDLER_C2)),
    "fidelity_single1": ("1", lambda c: single_crystal_fidelity(c.comb, 1)),
    "fidelity_single2": ("1", lambda c: single_crystal_fidelity(c.comb, 2)),
    "fidelity_bell": ("1", lambda c: bell_fidelity(c.comb, c.target)),
    "sensitivity1": ("Hz/K", lambda c: temperature_sensitivity(
        c.config, PAIR_CRYSTAL_1)),
    "sensitivity2": ("Hz/K", lambda c: temperature_sensitivity(
        c.config, PAIR_CRYSTAL_2)),
    "finesse": ("1", lambda c: finesse(c.need_cavity())),
    "linewidth": ("Hz", lambda c: linewidth(c.need_cavity())),
}


def evaluate_quantity(cell: _Cell, quantity: str) -> tuple[float, str]:
    """One cell of one column: (value, status)."""
    _, evaluator = QUANTITIES[quantity]
    try:
        value = float(evaluator(cell))
    except (NumericError, OutOfValidityRange) as exc:
        return math.nan, f"error:{type(exc).__name__}"
    if math.isinf(value):
        return math.inf, "infinite"
    return value, "ok"


# ---------------------------------------------------------------------------
# scenario document
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    start: float
    stop: float
    points: int

    def values(self) -> list[float]:
        if self.points == 1:
            return [self.start]
        step = (self.stop - self.start) / (self.points - 1)
        return [self.start + k * step for k in range(self.points)]


@dataclass(frozen=True)
class Scenario:
    name: str
    source: SourceSettings
    cavity: CavitySpec | None
    target: BellTarget
    axes: tuple[SweepAxis, ...]
    outputs: tuple[str, ...]
    document_sha256: str
    coefficients_sha256: str
    poling_period: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "poling_period", self.source.solve_period())

    def base_cell(self) -> _Cell:
        return _Cell(self.source, self.cavity, self.target,
                     self.poling_period)

    def cell_at(self, axis_values: tuple[float, ...]) -> _Cell:
        settings, cavity = self.source, self.cavity
        for axis, value in zip(self.axes, axis_values):
            _, needs_cavity, apply = PARAMETERS[axis.parameter]
            if needs_cavity and cavity is None:
                raise ScenarioValidation(
                    f"parameter {axis.parameter!r} requires a cavity block")
            settings, cavity = apply(settings, cavity, value)
        return _Cell(settings, cavity, self.target, self.poling_period)


def _fail(messages):
    raise ScenarioValidation(messages)


def _check_keys(mapping, required, optional, context):
    problems = []
    for key in required:
        if key not in mapping:
            problems.append(f"{context}: missing required key '{key}'")
    for key in mapping:
        if key not in required and key not in optional:
            problems.append(f"{context}: unknown key '{key}'")
    if problems:
        _fail(problems)


def _number(mapping, key, context, lo=None, hi=None):
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail([f"{context}.{key} must be a number"])
    value = float(value)
    if lo is not None and value < lo:
        _fail([f"{context}.{key} must be >= {lo}"])
    if hi is not None and value > hi:
        _fail([f"{context}.{key} must be <= {hi}"])
    return value


def _parse_source(block: dict, material: DispersionModel) -> SourceSettings:
    _check_keys(block,
                required=("pm_type", "pump_wavelength_nm", "joint_length_mm",
                          "length_ratio", "air_path_mm", "temperature_c"),
                optional=("signal_wavelength_nm", "signal_split_hz",
                          "idler_delay_um"),
                context="source")
    has_wl = "signal_wavelength_nm" in block
    has_split = "signal_split_hz" in block
    if has_wl == has_split:
        _fail(["source: exactly one of signal_wavelength_nm / signal_split_hz "
               "must be given"])
    pump_omega = wavelength_to_omega(
        _number(block, "pump_wavelength_nm", "source", lo=1e-3) * 1e-9)
    if has_wl:
        signal_omega = wavelength_to_omega(
            _number(block, "signal_wavelength_nm", "source", lo=1e-3) * 1e-9)
    else:
        # near-degenerate split: nu_s - nu_i = split, centered on nu_p / 2
        split = _number(block, "signal_split_hz", "source", lo=0.0)
        signal_omega = pump_omega / 2.0 + math.pi * split
    return SourceSettings(
        material=material,
        pm=PmType.from_name(str(block["pm_type"])),
        pump_omega=pump_omega,
        signal_omega=signal_omega,
        joint_length=_number(block, "joint_length_mm", "source", lo=0.0) * 1e-3,
        length_ratio=_number(block, "length_ratio", "source"),
        air_path=_number(block, "air_path_mm", "source", lo=0.0) * 1e-3,
        temperature=celsius_to_kelvin(
            _number(block, "temperature_c", "source")),
        idler_delay=_number(block, "idler_delay_um", "source", lo=0.0) * 1e-6
        if "idler_delay_um" in block else 0.0,
    )


def _parse_cavity(block: dict) -> CavitySpec:
    _check_keys(block,
                required=("r1", "r2", "effective_length_mm"),
                optional=("ar_loss_per_face", "faces_per_roundtrip"),
                context="cavity")
    losses = ()
    if "ar_loss_per_face" in block:
        losses = ar_face_ledger(
            _number(block, "ar_loss_per_face", "cavity", lo=0.0, hi=1.0),
            int(block.get("faces_per_roundtrip", 4)))
    return CavitySpec(
        r1=_number(block, "r1", "cavity"),
        r2=_number(block, "r2", "cavity"),
        losses=losses,
        effective_length=_number(block, "effective_length_mm", "cavity",
                                 lo=0.0) * 1e-3)


def loads_scenario(document: dict,
                   material_override: str | Path | None = None) -> Scenario:
    """Build a Scenario from a parsed JSON document (strict schema)."""
    if not isinstance(document, dict):
        _fail(["scenario: top level must be an object"])
    _check_keys(document,
                required=("name", "material", "source", "outputs"),
                optional=("cavity", "bell_target", "sweep"),
                context="scenario")
    material_ref = material_override or document["material"]
    if isinstance(material_ref, (str, Path)) and Path(material_ref).exists():
        material = load_material(material_ref)
    else:
        material = builtin_material(str(material_ref))
    source = _parse_source(document["source"], material)
    cavity = (_parse_cavity(document["cavity"])
              if "cavity" in document else None)
    target_name = document.get("bell_target", "psi-minus")
    try:
        target = BellTarget(target_name)
    except ValueError:
        _fail([f"unknown bell_target {target_name!r}"])

    axes = []
    for i, axis in enumerate(document.get("sweep", [])):
        _check_keys(axis, required=("parameter", "start", "stop", "points"),
                    optional=(), context=f"sweep[{i}]")
        name = str(axis["parameter"])
        if name not in PARAMETERS:
            _fail([f"sweep[{i}]: unknown parameter {name!r}; supported: "
                   f"{sorted(PARAMETERS)}"])
        points = axis["points"]
        if not isinstance(points, int) or points < 1:
            _fail([f"sweep[{i}].points must be a positive integer"])
        axes.append(SweepAxis(name, _number(axis, "start", f"sweep[{i}]"),
                              _number(axis, "stop", f"sweep[{i}]"), points))
    if len(axes) > 2:
        _fail(["at most two sweep axes are supported"])

    outputs = document["outputs"]
    if not isinstance(outputs, list) or not outputs:
        _fail(["outputs must be a non-empty list of quantity names"])
    unknown = [q for q in outputs if q not in QUANTITIES]
    if unknown:
        _fail([f"unknown output quantities {unknown}; supported: "
               f"{sorted(QUANTITIES)}"])

    blob = json.dumps(document, sort_keys=True).encode()
    return Scenario(
        name=str(document["name"]),
        source=source,
        cavity=cavity,
        target=target,
        axes=tuple(axes),
        outputs=tuple(outputs),
        document_sha256=hashlib.sha256(blob).hexdigest(),
        coefficients_sha256=material_sha256(material_ref),
    )


def load_scenario(path: str | Path,
                  material_override: str | Path | None = None) -> Scenario:
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        _fail([f"cannot read scenario {path}: {exc}"])
    except json.JSONDecodeError as exc:
        _fail([f"{path} is not valid JSON: {exc}"])
    return loads_scenario(document, material_override)


def builtin_scenario_names() -> list[str]:
    folder = resources.files("cavityspdc") / "scenarios"
    return sorted(p.name[:-5] for p in folder.iterdir()
                  if p.name.endswith(".json"))


def builtin_scenario(name: str) -> Scenario:
    folder = resources.files("cavityspdc") / "scenarios"
    try:
        text = (folder / f"{name}.json").read_text(encoding="utf-8")
    except FileNotFoundError:
        _fail([f"no builtin scenario {name!r}; available: "
               f"{builtin_scenario_names()}"])
    return loads_scenario(json.loads(text))


# ---------------------------------------------------------------------------
# running sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxisColumn:
    parameter: str
    unit: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class QuantityColumn:
    quantity: str
    unit: str
    values: tuple[float, ...]
    status: tuple[str, ...]


@dataclass(frozen=True)
class SweepResult:
    """Tabular sweep output with per-cell status and provenance."""

    name: str
    axes: tuple[AxisColumn, ...]
    columns: tuple[QuantityColumn, ...]
    provenance: dict

    @property
    def n_rows(self) -> int:
        return len(self.axes[0].values) if self.axes else 1

    def column(self, quantity: str) -> QuantityColumn:
        for col in self.columns:
            if col.quantity == quantity:
                return col
        raise KeyError(quantity)

    # -- serialization ------------------------------------------------------
    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        lines = [f"# scenario: {self.name}"]
        for key in sorted(self.provenance):
            lines.append(f"# {key}: {self.provenance[key]}")
        header = [f"{a.parameter}[{a.unit}]" for a in self.axes]
        for col in self.columns:
            header += [f"{col.quantity}[{col.unit}]", f"{col.quantity}.status"]
        lines.append(",".join(header))
        for row in range(self.n_rows):
            cells = [repr(a.values[row]) for a in self.axes]
            for col in self.columns:
                cells += [_csv_value(col.values[row]), col.status[row]]
            lines.append(",".join(cells))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def to_json(self, path: str | Path) -> Path:
        path = Path(path)
        document = {
            "name": self.name,
            "provenance": self.provenance,
            "axes": [{"parameter": a.parameter, "unit": a.unit,
                      "values": list(a.values)} for a in self.axes],
            "columns": [{"quantity": c.quantity, "unit": c.unit,
                         "values": [_json_value(v) for v in c.values],
                         "status": list(c.status)} for c in self.columns],
        }
        path.write_text(json.dumps(document, indent=1), encoding="utf-8")
        return path


def _csv_value(value: float) -> str:
    if math.isinf(value):
        return "inf"
    if math.isnan(value):
        return "nan"
    return repr(value)


def _json_value(value: float):
    # JSON has no inf/nan literals; the status column carries the reason
    return value if math.isfinite(value) else None


def _grid(scenario: Scenario) -> list[tuple[float, ...]]:
    if not scenario.axes:
        return [()]
    if len(scenario.axes) == 1:
        return [(v,) for v in scenario.axes[0].values()]
    outer, inner = scenario.axes
    return [(a, b) for a in outer.values() for b in inner.values()]


def _evaluate_rows(scenario: Scenario,
                   rows: list[tuple[float, ...]]) -> list[list[tuple]]:
    out = []
    for axis_values in rows:
        cell = scenario.cell_at(axis_values)
        out.append([evaluate_quantity(cell, q) for q in scenario.outputs])
    return out


def _pool_task(args):
    scenario, rows = args
    return _evaluate_rows(scenario, rows)


def run_sweep(scenario: Scenario, workers: int = 1) -> SweepResult:
    """Evaluate every requested quantity on the scenario grid.

    workers > 1 distributes contiguous row chunks over a process pool; the
    result is identical to the single-worker run by construction (cells are
    pure functions of their grid point).
    """
    grid = _grid(scenario)
    if workers <= 1 or len(grid) < 2:
        evaluated = _evaluate_rows(scenario, grid)
    else:
        workers = min(workers, len(grid))
        chunk = (len(grid) + workers - 1) // workers
        tasks = [(scenario, grid[i:i + chunk])
                 for i in range(0, len(grid), chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            evaluated = []
            for part in pool.map(_pool_task, tasks):
                evaluated.extend(part)

    axes = []
    for i, axis in enumerate(scenario.axes):
        unit, _, _ = PARAMETERS[axis.parameter]
        axes.append(AxisColumn(axis.parameter, unit,
                               tuple(row[i] for row in grid)))
    columns = []
    for qi, quantity in enumerate(scenario.outputs):
        unit, _ = QUANTITIES[quantity]
        columns.append(QuantityColumn(
            quantity, unit,
            tuple(evaluated[r][qi][0] for r in range(len(grid))),
            tuple(evaluated[r][qi][1] for r in range(len(grid)))))
    provenance = {
        "scenario_sha256": scenario.document_sha256,
        "coefficients_sha256": scenario.coefficients_sha256,
        "tool_version": _version,
    }
    return SweepResult(name=scenario.name, axes=tuple(axes),
                       columns=tuple(columns), provenance=provenance)
