"""Command line interface.

Exit codes: 0 success, 2 validation error (bad file, unknown name, value out
of contract), 3 numeric failure (no real root, degenerate slope, no positive
poling period).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import __version__
from .biphoton import bell_fidelity, build_comb, single_crystal_fidelity
from .cavity import finesse, fsr_hz, linewidth, loss_budget
from .design import design_query, load_constraints
from .errors import NumericError, ToolError, ValidationError
from .figures import FIGURE_IDS, reproduce_figure
from .materials import (builtin_material, builtin_material_names,
                        dumps_material, load_material)
from .phasematch import phase_mismatch, spdc_bandwidth, spdc_bandwidth_scan
from .resonator import (PAIR_CRYSTAL_1, PAIR_CRYSTAL_2,
                        cluster_spacing_first_order,
                        cluster_spacing_second_order, crystal_process,
                        joint_cluster_spacing, temperature_sensitivity)
from .sweep import (builtin_scenario, builtin_scenario_names, load_scenario,
                    run_sweep)


def _resolve_scenario(ref: str, material: str | None):
    if Path(ref).exists():
        return load_scenario(ref, material_override=material)
    if material is not None:
        document = json.loads(
            (resources.files("cavityspdc") / "scenarios" / f"{ref}.json")
            .read_text(encoding="utf-8"))
        from .sweep import loads_scenario
        return loads_scenario(document, material_override=material)
    return builtin_scenario(ref)


def _fmt_hz(value: float) -> str:
    for scale, unit in ((1e12, "THz"), (1e9, "GHz"), (1e6, "MHz"),
                        (1e3, "kHz")):
        if abs(value) >= scale:
            return f"{value / scale:.6g} {unit}"
    return f"{value:.6g} Hz"


def _cmd_materials(args) -> int:
    if args.action == "list":
        for name in builtin_material_names():
            print(name)
        return 0
    model = (load_material(args.material) if Path(args.material).exists()
             else builtin_material(args.material))
    print(json.dumps(dumps_material(model), indent=2))
    return 0


def _cmd_bandwidth(args) -> int:
    scenario = _resolve_scenario(args.scenario, args.material)
    cell = scenario.base_cell()
    proc = crystal_process(cell.config, args.crystal)
    print(f"poling period: {scenario.poling_period * 1e6:.6f} um")
    print(f"phase mismatch at center: {phase_mismatch(proc):.3e} rad/m")
    value = (spdc_bandwidth_scan(proc) if args.scan
             else spdc_bandwidth(proc))
    kind = "scanned" if args.scan else "linear-expansion"
    print(f"crystal {args.crystal} SPDC bandwidth ({kind} FWHM): "
          f"{_fmt_hz(value)}")
    return 0


def _cmd_cluster(args) -> int:
    scenario = _resolve_scenario(args.scenario, args.material)
    cfg = scenario.base_cell().config
    if args.pair == "joint":
        print(f"joint cluster spacing: {_fmt_hz(joint_cluster_spacing(cfg))}")
        return 0
    pair = PAIR_CRYSTAL_1 if args.pair == "1" else PAIR_CRYSTAL_2
    if args.second_order:
        value = cluster_spacing_second_order(cfg, pair,
                                             args.temperature_offset)
        print(f"pair {args.pair} cluster spacing (second order): "
              f"{_fmt_hz(value)}")
    else:
        value = cluster_spacing_first_order(cfg, pair)
        print(f"pair {args.pair} cluster spacing: {_fmt_hz(value)}")
    print(f"temperature sensitivity: "
          f"{temperature_sensitivity(cfg, pair) / 1e12:+.4f} THz/K")
    return 0


def _cmd_fidelity(args) -> int:
    scenario = _resolve_scenario(args.scenario, args.material)
    cell = scenario.base_cell()
    comb = cell.comb
    print(f"comb half width: {comb.half_width} lines per side")
    print(f"crystal 1 product-state fidelity: "
          f"{single_crystal_fidelity(comb, 1):.6f}")
    print(f"crystal 2 product-state fidelity: "
          f"{single_crystal_fidelity(comb, 2):.6f}")
    print(f"Bell-state fidelity ({scenario.target.value}): "
          f"{bell_fidelity(comb, scenario.target):.6f}")
    return 0


def _cmd_cavity(args) -> int:
    scenario = _resolve_scenario(args.scenario, args.material)
    spec = scenario.cavity
    if spec is None:
        raise ValidationError("scenario has no cavity block")
    budget = loss_budget(spec.losses)
    print(f"intracavity loss: {budget.multiplicative * 100:.4f} % "
          f"(additive estimate {budget.additive * 100:.4f} %)")
    print(f"finesse: {finesse(spec):.2f}")
    print(f"FSR: {_fmt_hz(fsr_hz(spec))}")
    print(f"linewidth (FWHM): {_fmt_hz(linewidth(spec))}")
    return 0


def _cmd_sweep(args) -> int:
    scenario = _resolve_scenario(args.scenario_file, args.material)
    result = run_sweep(scenario, workers=args.workers)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = scenario.name.replace(" ", "_")
    if args.format == "json":
        path = result.to_json(out_dir / f"{stem}.json")
    else:
        path = result.to_csv(out_dir / f"{stem}.csv")
    print(f"wrote {path} ({result.n_rows} rows, "
          f"{len(result.columns)} quantities)")
    return 0


def _cmd_reproduce_figure(args) -> int:
    paths = reproduce_figure(args.figure, out_dir=args.out, fmt=args.format,
                             workers=args.workers)
    for path in paths:
        print(f"wrote {path}")
    return 0


def _cmd_design_query(args) -> int:
    report = design_query(load_constraints(args.constraints_file))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "design_query.json"
    path.write_text(json.dumps(report, indent=1), encoding="utf-8")
    print(f"feasible cells: {report['feasible_count']} / "
          f"{report['total_cells']}")
    if report["recommendation"]:
        rec = report["recommendation"]
        print("recommendation: "
              f"ratio {rec['length_ratio']}, "
              f"delay {rec['idler_delay_um']} um, "
              f"R {rec['mirror_reflectivity']}, "
              f"L_eff {rec['effective_length_mm']} mm "
              f"(F = {rec['bell_fidelity']:.4f}, "
              f"linewidth = {_fmt_hz(rec['linewidth_hz'])})")
    for line in report["diagnosis"]:
        print(f"diagnosis: {line}")
    print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavityspdc",
        description="design calculations for a two-crystal cavity-enhanced "
                    "SPDC entangled-photon source")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_options(p):
        p.add_argument("--scenario", default="non_degenerate",
                       help="builtin scenario name or path to a scenario "
                            f"file (builtins: {builtin_scenario_names()})")
        p.add_argument("--material", default=None,
                       help="override material: builtin name or file path")

    p = sub.add_parser("materials", help="list or show dispersion models")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("--material", default="mgo_ppln")
    p.set_defaults(func=_cmd_materials)

    p = sub.add_parser("bandwidth", help="SPDC bandwidth of one crystal")
    add_scenario_options(p)
    p.add_argument("--crystal", type=int, choices=[1, 2], default=1)
    p.add_argument("--scan", action="store_true",
                   help="locate the half maximum numerically instead of "
                        "using the linear expansion")
    p.set_defaults(func=_cmd_bandwidth)

    p = sub.add_parser("cluster", help="double/quadruple resonance spacings")
    add_scenario_options(p)
    p.add_argument("--pair", choices=["1", "2", "joint"], default="1")
    p.add_argument("--second-order", action="store_true")
    p.add_argument("--temperature-offset", type=float, default=0.0,
                   help="Kelvin offset for the second-order solve")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("fidelity", help="biphoton state fidelities")
    add_scenario_options(p)
    p.set_defaults(func=_cmd_fidelity)

    p = sub.add_parser("cavity", help="finesse, FSR and linewidth")
    add_scenario_options(p)
    p.set_defaults(func=_cmd_cavity)

    p = sub.add_parser("sweep", help="run a scenario sweep to CSV/JSON")
    p.add_argument("scenario_file",
                   help="scenario file path or builtin name")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--material", default=None)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("reproduce-figure",
                       help="emit a figure as CSV + SVG")
    p.add_argument("figure", help=f"one of: {', '.join(FIGURE_IDS)}")
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_reproduce_figure)

    p = sub.add_parser("design-query",
                       help="grid-search feasibility for constraints")
    p.add_argument("constraints_file")
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_design_query)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except ToolError as exc:  # pragma: no cover
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
