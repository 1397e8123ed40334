"""Reproduction of the design-study figures as CSV tables plus SVG plots.

Each figure id maps to a builder that composes the sweep machinery over the
built-in scenarios and writes one or more CSV (or JSON) tables and a single
SVG.  Figure outputs embed the scenario and coefficient-file hashes so a
curve is always traceable to a dispersion dataset.

Available ids:

    2b  single-crystal fidelity vs cluster-spacing / bandwidth ratio
    3a  near-degenerate: bandwidth and cluster vs joint crystal length
    3b  near-degenerate type-II: spacings vs length ratio
    4a  non-degenerate: bandwidth and cluster vs joint crystal length
    4b  non-degenerate type-II: spacings vs length ratio
    4c  non-degenerate type-0: spacings vs length ratio
    4d  non-degenerate type-II: spacings vs idler path delay
    5   finesse required for a target linewidth vs cavity length
    6   linewidth vs intracavity loss for several reflectivities
    7   first- vs second-order cluster spacing, four panels
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import __version__ as _version  # noqa: E402
from .biphoton import fidelity_from_ratio  # noqa: E402
from .cavity import CavitySpec, LossEntry, linewidth, required_finesse  # noqa: E402
from .errors import UnknownFigure  # noqa: E402
from .sweep import (AxisColumn, QuantityColumn, SweepResult,  # noqa: E402
                    loads_scenario, run_sweep)

_GHZ = 1e9
_THZ = 1e12


def _scenario_doc(name: str) -> dict:
    folder = resources.files("cavityspdc") / "scenarios"
    return json.loads((folder / f"{name}.json").read_text(encoding="utf-8"))


def _write(result: SweepResult, out_dir: Path, stem: str, fmt: str) -> Path:
    if fmt == "json":
        return result.to_json(out_dir / f"{stem}.json")
    return result.to_csv(out_dir / f"{stem}.csv")


def _finite(xs, ys):
    pairs = [(x, y) for x, y in zip(xs, ys) if math.isfinite(y)]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _manual_result(name: str, axis: AxisColumn, columns, provenance):
    return SweepResult(name=name, axes=(axis,), columns=tuple(columns),
                       provenance=provenance)


def _fig_2b(out_dir: Path, fmt: str, workers: int) -> list[Path]:
    ratios = [0.25 + k * (5.0 - 0.25) / 199 for k in range(200)]
    fidelities = [fidelity_from_ratio(r) for r in ratios]
    result = _manual_result(
        "fidelity-vs-cluster-over-bandwidth",
        AxisColumn("cluster_over_bandwidth", "1", tuple(ratios)),
        [QuantityColumn("fidelity_single", "1", tuple(fidelities),
                        ("ok",) * len(ratios))],
        {"scenario_sha256": "universal-curve",
         "coefficients_sha256": "universal-curve", "tool_version": _version})
    table = _write(result, out_dir, "figure2b", fmt)

    fig, ax = plt.subplots(figsize=(5, 3.4))
    ax.plot(ratios, fidelities, color="tab:blue")
    ax.axhline(0.9, color="gray", lw=0.8, ls="--")
    ax.axvline(2.0, color="gray", lw=0.8, ls=":")
    ax.set_xlabel(r"$\Omega / \Delta\nu_{\mathrm{SPDC}}$")
    ax.set_ylabel("fidelity with single-pair state")
    ax.set_ylim(0, 1.02)
    fig.tight_layout()
    svg = out_dir / "figure2b.svg"
    fig.savefig(svg)
    plt.close(fig)
    return [table, svg]


def _length_scan_doc(base: str, pm_type: str) -> dict:
    doc = _scenario_doc(base)
    doc["source"]["pm_type"] = pm_type
    doc["sweep"] = [{"parameter": "joint_length", "start": 5e-3,
                     "stop": 30e-3, "points": 101}]
    if pm_type == "type0":
        doc["bell_target"] = "phi-minus"
        doc["outputs"] = ["cluster1_second", "bandwidth1_scan"]
    else:
        doc["outputs"] = ["cluster1", "bandwidth1"]
    return doc


def _fig_length_scan(out_dir: Path, fmt: str, workers: int, base: str,
                     stem: str) -> list[Path]:
    paths = []
    curves = {}
    for pm_type in ("type2", "type0"):
        result = run_sweep(loads_scenario(_length_scan_doc(base, pm_type)),
                           workers)
        paths.append(_write(result, out_dir, f"{stem}_{pm_type}", fmt))
        curves[pm_type] = result

    fig, ax = plt.subplots(figsize=(5, 3.6))
    x2 = [v * 1e3 for v in curves["type2"].axes[0].values]
    ax.plot(x2, [v / _GHZ for v in curves["type2"].column("cluster1").values],
            label="type-II cluster", color="tab:blue")
    ax.plot(x2, [v / _GHZ for v in curves["type2"].column("bandwidth1").values],
            "--", label="type-II bandwidth", color="tab:blue")
    ax.plot(x2, [v / _GHZ
                 for v in curves["type0"].column("cluster1_second").values],
            label="type-0 cluster", color="tab:red")
    ax.plot(x2, [v / _GHZ
                 for v in curves["type0"].column("bandwidth1_scan").values],
            "--", label="type-0 bandwidth", color="tab:red")
    ax.set_xlabel(r"joint crystal length $l_1 + l_2$ (mm)")
    ax.set_ylabel("frequency (GHz)")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    svg = out_dir / f"{stem}.svg"
    fig.savefig(svg)
    plt.close(fig)
    return paths + [svg]


def _fig_ratio_scan(out_dir: Path, fmt: str, workers: int, base: str,
                    pm_type: str, stem: str) -> list[Path]:
    doc = _scenario_doc(base)
    doc["source"]["pm_type"] = pm_type
    if pm_type == "type0":
        doc["bell_target"] = "phi-minus"
    doc["outputs"] = ["cluster1", "cluster2", "joint", "bandwidth1",
                      "bandwidth2"]
    result = run_sweep(loads_scenario(doc), workers)
    table = _write(result, out_dir, stem, fmt)

    fig, ax = plt.subplots(figsize=(5, 3.6))
    x = list(result.axes[0].values)
    styles = {"cluster1": ("-", "tab:blue", r"$\Omega_1$"),
              "cluster2": ("-", "tab:red", r"$\Omega_2$"),
              "joint": ("-", "tab:green", r"$\Omega_{joint}$"),
              "bandwidth1": ("--", "tab:blue", r"$\Delta\nu_1$"),
              "bandwidth2": ("--", "tab:red", r"$\Delta\nu_2$")}
    for quantity, (ls, color, label) in styles.items():
        xs, ys = _finite(x, result.column(quantity).values)
        ax.plot(xs, [y / _GHZ for y in ys], ls, color=color, label=label,
                lw=1.2)
    ax.set_xlabel(r"length ratio $l_1 / (l_1 + l_2)$")
    ax.set_ylabel("frequency (GHz)")
    ax.set_yscale("log")
    ax.legend(fontsize=8, ncol=2)
    fig.tight_layout()
    svg = out_dir / f"{stem}.svg"
    fig.savefig(svg)
    plt.close(fig)
    return [table, svg]


def _fig_4d(out_dir: Path, fmt: str, workers: int) -> list[Path]:
    result = run_sweep(loads_scenario(_scenario_doc("non_degenerate_delay")),
                       workers)
    table = _write(result, out_dir, "figure4d", fmt)

    fig, ax = plt.subplots(figsize=(5, 3.6))
    x = [v * 1e6 for v in result.axes[0].values]
    for quantity, ls, color, label in (
            ("cluster1", "-", "tab:blue", r"$\Omega_1$"),
            ("cluster2", "-", "tab:red", r"$\Omega_2$"),
            ("bandwidth1", "--", "tab:blue", r"$\Delta\nu_1$"),
            ("bandwidth2", "--", "tab:red", r"$\Delta\nu_2$")):
        xs, ys = _finite(x, result.column(quantity).values)
        ax.plot(xs, [y / _GHZ for y in ys], ls, color=color, label=label,
                lw=1.2)
    ax.set_xlabel(r"idler path delay $\Delta l$ ($\mu$m)")
    ax.set_ylabel("frequency (GHz)")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    svg = out_dir / "figure4d.svg"
    fig.savefig(svg)
    plt.close(fig)
    return [table, svg]


_FIG5_TARGETS_HZ = (1e4, 1e5, 1e6, 4e6)


def _fig_5(out_dir: Path, fmt: str, workers: int) -> list[Path]:
    lengths = [5e-3 + k * (0.5 - 5e-3) / 199 for k in range(200)]
    columns = []
    for target in _FIG5_TARGETS_HZ:
        values = tuple(required_finesse(length, target) for length in lengths)
        columns.append(QuantityColumn(
            f"finesse_for_{target:.0e}Hz", "1", values,
            ("ok",) * len(lengths)))
    result = _manual_result(
        "required-finesse-vs-cavity-length",
        AxisColumn("effective_length", "m", tuple(lengths)), columns,
        {"scenario_sha256": "direct-formula",
         "coefficients_sha256": "not-dispersion-dependent",
         "tool_version": _version})
    table = _write(result, out_dir, "figure5", fmt)

    fig, ax = plt.subplots(figsize=(5, 3.4))
    for column, target in zip(columns, _FIG5_TARGETS_HZ):
        ax.plot([l * 1e3 for l in lengths],
                column.values, label=f"{target/1e6:g} MHz")
    ax.set_xlabel("effective cavity length (mm)")
    ax.set_ylabel("required finesse")
    ax.set_yscale("log")
    ax.legend(title="target linewidth", fontsize=8)
    fig.tight_layout()
    svg = out_dir / "figure5.svg"
    fig.savefig(svg)
    plt.close(fig)
    return [table, svg]


_FIG6_REFLECTIVITIES = (0.999, 0.9995, 0.9998)


def _fig_6(out_dir: Path, fmt: str, workers: int) -> list[Path]:
    etas = [k * 0.05 / 200 for k in range(201)]
    columns = []
    for refl in _FIG6_REFLECTIVITIES:
        values = []
        for eta in etas:
            spec = CavitySpec(refl, refl,
                              (LossEntry("intracavity", eta, 1),), 53e-3)
            values.append(linewidth(spec))
        columns.append(QuantityColumn(f"linewidth_R{refl}", "Hz",
                                      tuple(values), ("ok",) * len(etas)))
    result = _manual_result(
        "linewidth-vs-intracavity-loss",
        AxisColumn("intracavity_loss", "1", tuple(etas)), columns,
        {"scenario_sha256": "direct-formula",
         "coefficients_sha256": "not-dispersion-dependent",
         "tool_version": _version})
    table = _write(result, out_dir, "figure6", fmt)

    fig, ax = plt.subplots(figsize=(5, 3.4))
    for column, refl in zip(columns, _FIG6_REFLECTIVITIES):
        ax.plot([e * 100 for e in etas], [v / 1e6 for v in column.values],
                label=f"R = {refl}")
    ax.set_xlabel("intracavity loss (%)")
    ax.set_ylabel("cavity linewidth (MHz)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    svg = out_dir / "figure6.svg"
    fig.savefig(svg)
    plt.close(fig)
    return [table, svg]


_FIG7_PANELS = (
    ("near_degenerate", "type2", "near-degenerate type-II"),
    ("non_degenerate", "type2", "non-degenerate type-II"),
    ("near_degenerate", "type0", "near-degenerate type-0"),
    ("non_degenerate", "type0", "non-degenerate type-0"),
)


def _fig_7(out_dir: Path, fmt: str, workers: int) -> list[Path]:
    paths = []
    fig, axes = plt.subplots(2, 2, figsize=(8, 6))
    for (base, pm_type, title), ax in zip(_FIG7_PANELS, axes.flat):
        doc = _scenario_doc(base)
        doc["source"]["pm_type"] = pm_type
        if pm_type == "type0":
            doc["bell_target"] = "phi-minus"
        doc["outputs"] = ["cluster1", "cluster1_second"]
        result = run_sweep(loads_scenario(doc), workers)
        stem = f"figure7_{base}_{pm_type}"
        paths.append(_write(result, out_dir, stem, fmt))
        x = list(result.axes[0].values)
        xs, ys = _finite(x, result.column("cluster1").values)
        ax.plot(xs, [y / _THZ for y in ys], label="first order", lw=1.2)
        xs, ys = _finite(x, result.column("cluster1_second").values)
        ax.plot(xs, [y / _THZ for y in ys], "--", label="second order",
                lw=1.2)
        ax.set_yscale("log")
        ax.set_title(title, fontsize=9)
        ax.set_xlabel(r"length ratio $l_1/(l_1+l_2)$", fontsize=8)
        ax.set_ylabel(r"$\Omega_1$ (THz)", fontsize=8)
        ax.legend(fontsize=7)
    fig.tight_layout()
    svg = out_dir / "figure7.svg"
    fig.savefig(svg)
    plt.close(fig)
    return paths + [svg]


_BUILDERS = {
    "2b": _fig_2b,
    "3a": lambda out, fmt, w: _fig_length_scan(out, fmt, w,
                                               "near_degenerate", "figure3a"),
    "3b": lambda out, fmt, w: _fig_ratio_scan(out, fmt, w, "near_degenerate",
                                              "type2", "figure3b"),
    "4a": lambda out, fmt, w: _fig_length_scan(out, fmt, w,
                                               "non_degenerate", "figure4a"),
    "4b": lambda out, fmt, w: _fig_ratio_scan(out, fmt, w, "non_degenerate",
                                              "type2", "figure4b"),
    "4c": lambda out, fmt, w: _fig_ratio_scan(out, fmt, w, "non_degenerate",
                                              "type0", "figure4c"),
    "4d": _fig_4d,
    "5": _fig_5,
    "6": _fig_6,
    "7": _fig_7,
}

FIGURE_IDS = tuple(sorted(_BUILDERS))


def reproduce_figure(figure_id: str, out_dir: str | Path = ".",
                     fmt: str = "csv", workers: int = 1) -> list[Path]:
    """Emit the CSV/JSON table(s) and SVG plot for one figure id."""
    if figure_id not in _BUILDERS:
        raise UnknownFigure(f"unknown figure id {figure_id!r}; "
                            f"available: {', '.join(FIGURE_IDS)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return _BUILDERS[figure_id](out_dir, fmt, workers)
