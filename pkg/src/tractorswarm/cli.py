"""Command-line entry point: ``tractorswarm compare|simulate|audit|optimize``.

Exit codes: 0 success, 1 infeasible or failed analysis, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

from . import analysis, plotting
from .catalog import DrivetrainError
from .d497 import DomainError
from .pso import enumerate_designs, optimize_fleet
from .scenario import Scenario, ScenarioError, bundled_scenario_path, load_scenario
from .sim import compaction_summary, monte_carlo, simulate

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2


class Table:
    """A header plus rows, rendered as locale-independent CSV."""

    def __init__(self, name: str, header: list[str], rows: list[list] | None = None):
        self.name = name
        self.header = header
        self.rows = rows or []

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([_cell(v) for v in row])
        return buf.getvalue()


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6f}"
    return "" if v is None else str(v)


class Output:
    def __init__(self, args: argparse.Namespace):
        self.out = Path(args.out) if args.out else None
        self.format = args.format
        self.tables: list[Table] = []
        self.lines: list[str] = []
        if self.out is not None:
            self.out.mkdir(parents=True, exist_ok=True)

    def table(self, t: Table) -> None:
        self.tables.append(t)
        if self.out is not None:
            (self.out / f"{t.name}.csv").write_text(t.csv(), encoding="utf-8")

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def figure(self, fn, *args, name: str) -> None:
        if self.out is not None:
            fn(*args, self.out / f"{name}.png")

    def flush(self) -> None:
        if self.format == "csv":
            for i, t in enumerate(self.tables):
                if i:
                    sys.stdout.write("\n")
                sys.stdout.write(f"# {t.name}\n{t.csv()}")
        else:
            stamp = datetime.now(timezone.utc).strftime("%Y-%m-%d %H:%M:%S UTC")
            print(f"[{stamp}]")
            print("\n".join(self.lines))
            if self.out is not None:
                print(f"\noutputs written to {self.out}")


# -- commands ----------------------------------------------------------------

def cmd_compare(sc: Scenario, args, out: Output) -> int:
    c = analysis.compare(sc)
    out.table(Table("comparison", ["item", "value", "unit"], [list(r) for r in c.rows]))
    out.table(Table("costs", ["item", "usd_per_hour"], [list(r) for r in c.cost_rows()]))
    eq = c.equivalence
    out.table(Table("equivalence", ["field", "value"], [
        ["required_fleet", eq.required_fleet],
        ["capacity_large_ha_h", eq.capacity_large],
        ["capacity_small_ha_h", eq.capacity_small],
        ["weight_ratio", eq.weight_ratio],
        ["ground_load_large_n", eq.ground_load_large],
        ["ground_load_small_n", eq.ground_load_small],
    ]))
    out.figure(plotting.cost_chart, c.cost_rows(), name="costs")

    large, small = sc.role("large"), sc.role("small")
    out.say(f"Scenario: {sc.name}")
    out.say(f"{'':32}{large.machine.name:>20}{small.machine.name:>20}")
    out.say(f"{'draft':32}{c.large.draft:>18,.0f} N{c.small.draft:>18,.0f} N")
    out.say(f"{'nominal power':32}{c.large.power:>17,.2f} kW{c.small.power:>17,.2f} kW")
    out.say(f"{'field capacity':32}{c.large.capacity:>15.2f} ha/h{c.small.capacity:>15.2f} ha/h")
    out.say(f"{'ground load per pass':32}{eq.ground_load_large:>18,.0f} N{eq.ground_load_small:>18,.0f} N")
    out.say()
    out.say(f"Robots needed to match capacity: {c.fleet_size}")
    out.say(f"Hourly cost, {large.machine.name}: US$ {c.large_cost.total:,.2f}/h "
            f"(fuel {c.large_cost.fuel_or_energy:,.2f} + operator {c.large_cost.operator:,.2f})")
    for packs, cost in c.swarm_costs.items():
        out.say(f"Hourly cost, {c.fleet_size} x {small.machine.name} with {packs} pack(s): US$ {cost.total:,.2f}/h "
                f"(ratio {c.large_cost.total / cost.total:.2f})")
    out.say(f"Acquisition delta: US$ {c.acquisition_delta:,.2f} "
            f"(robot unit price US$ {c.robot_unit_price:,.2f})")
    out.say(f"Weight ratio (tractor / fleet): {eq.weight_ratio:.2f}")
    return EXIT_OK


def cmd_simulate(sc: Scenario, args, out: Output) -> int:
    sc.require("field")
    role = sc.role(sc.sim_role)
    cfg = sc.sim
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.runs is not None:
        cfg = replace(cfg, monte_carlo_runs=args.runs, stochastic=True)
    if role.machine.is_electric:
        operator = None
    else:
        operator = sc.operator
        cfg = replace(cfg, fleet_size=role.fleet_size or 1)
    res = simulate(sc.field, role.machine, role.implement, cfg, sc.prices, operator, sc.g)

    summary = [
        ["seed", cfg.seed],
        ["machine", role.machine.name],
        ["fleet_size", cfg.fleet_size],
        ["packs_per_robot", cfg.packs_per_robot],
        ["speed_kmh", res.speed_kmh],
        ["field_area_ha", sc.field.area],
        ["plowed_area_ha", res.total_area],
        ["strips", len(res.strips)],
        ["makespan_h", res.makespan],
        ["swap_events", len(res.swap_events)],
        [f"energy_or_fuel_{res.energy_unit}", res.total_energy_or_fuel],
        ["total_cost_usd", res.total_cost],
    ]
    events = [["work", s.robot, s.strip, s.start, s.end, s.end - s.start] for s in res.segments]
    events += [["swap", e.robot, None, e.time, e.time + e.duration, e.duration] for e in res.swap_events]
    events.sort(key=lambda r: (r[3], r[1], r[0]))
    loads = {row.strip: row for row in compaction_summary(res)}
    strips = [[s.index, s.width, s.length, s.direction, s.assigned_robot, loads[s.index].passes,
               loads[s.index].max_load] for s in res.strips]

    mc = None
    if cfg.stochastic:
        mc = monte_carlo(sc.field, role.machine, role.implement, cfg, sc.prices, operator, sc.g)
        for label, stats in (("makespan_h", mc.makespan), ("cost_usd", mc.cost)):
            summary += [[f"mc_{label}_{k}", getattr(stats, k)] for k in ("mean", "stddev", "min", "max")]
        summary.append(["mc_runs", mc.runs])

    out.table(Table("summary", ["field", "value"], summary))
    out.table(Table("events", ["event", "robot", "strip", "start_h", "end_h", "duration_h"], events))
    out.table(Table("strips", ["strip", "width_m", "length_m", "direction", "robot", "passes", "max_load_n"], strips))
    if mc is not None:
        out.table(Table("monte_carlo", ["run", "makespan_h", "cost_usd"],
                        [[i, m, c] for i, (m, c) in enumerate(zip(mc.makespans, mc.costs))]))
        out.figure(plotting.makespan_histogram, list(mc.makespans), name="makespan_hist")
    out.figure(plotting.schedule_chart, res, name="schedule")

    out.say(f"Scenario: {sc.name} (seed {cfg.seed})")
    out.say(f"{cfg.fleet_size} x {role.machine.name}, {len(res.strips)} strips, {sc.field.area:.4f} ha")
    out.say(f"Makespan: {res.makespan:.3f} h, swaps: {len(res.swap_events)}")
    out.say(f"Energy/fuel: {res.total_energy_or_fuel:,.2f} {res.energy_unit}, cost US$ {res.total_cost:,.2f}")
    if res.strip_loads:
        out.say(f"Peak ground load per strip: {max(l for _, l in res.strip_loads):,.0f} N")
    if mc is not None:
        out.say(f"Monte Carlo ({mc.runs} runs): makespan mean {mc.makespan.mean:.3f} h, "
                f"sd {mc.makespan.stddev:.3f}, range [{mc.makespan.min:.3f}, {mc.makespan.max:.3f}]")
    return EXIT_OK


def cmd_audit(sc: Scenario, args, out: Output) -> int:
    a = analysis.audit(sc)
    if a.bom is not None:
        rows = [["line", d.component, d.product_cents / 100, d.printed_cents / 100] for d in a.bom.line_discrepancies]
        rows += [["computed_total", "", a.bom.computed_total, ""],
                 ["declared_total", "", a.bom.declared_total, ""],
                 ["total_discrepancy", "", a.bom.total_discrepancy, ""]]
        out.table(Table("bom_audit", ["kind", "component", "computed_usd", "printed_usd"], rows))
        out.say(f"Bill of materials: line sum US$ {a.bom.computed_total:,.2f}, declared US$ {a.bom.declared_total:,.2f}, "
                f"difference {a.bom.total_discrepancy:+,.2f}")
        for d in a.bom.line_discrepancies:
            out.say(f"  {d.component}: quantity x unit = {d.product_cents / 100:,.2f}, printed {d.printed_cents / 100:,.2f}")
        if a.bom.clean:
            out.say("  no discrepancies")
    if a.energy is not None:
        e = a.energy
        out.table(Table("energy_audit", ["field", "value"], [
            ["pack_energy_kwh", e.pack_energy],
            ["required_power_kw", e.required_power],
            ["claimed_autonomy_h", e.claimed_autonomy],
            ["required_energy_kwh", e.required_energy],
            ["feasible", e.feasible],
            ["shortfall_kwh", e.shortfall],
        ]))
        verdict = "feasible" if e.feasible else f"INFEASIBLE, shortfall {e.shortfall:.2f} kWh"
        out.say(f"Energy: pack {e.pack_energy:.2f} kWh vs {e.required_power:.2f} kW x {e.claimed_autonomy:g} h "
                f"= {e.required_energy:.2f} kWh -> {verdict}")
    return EXIT_OK


def cmd_optimize(sc: Scenario, args, out: Output) -> int:
    problem = sc.fleet_problem()
    opt = sc.optimization
    cfg = opt.pso if args.seed is None else replace(opt.pso, seed=args.seed)
    result = optimize_fleet(problem, opt.deadline, cfg, opt.bounds)
    best = result.best
    d = best.design
    out.table(Table("design", ["field", "value"], [
        ["seed", cfg.seed],
        ["deadline_h", opt.deadline],
        ["robot_count", d.robot_count],
        ["packs_per_robot", d.packs_per_robot],
        ["speed_kmh", d.speed],
        ["makespan_h", best.makespan],
        ["job_cost_usd", best.cost],
        ["objective", best.objective],
        ["feasible", best.feasible],
        ["designs_evaluated", result.evaluations],
    ]))
    out.table(Table("history", ["iteration", "best_value"], [[i + 1, v] for i, v in enumerate(result.history)]))
    out.figure(plotting.convergence_chart, result.history, name="convergence")
    out.say(f"Scenario: {sc.name} (seed {cfg.seed}, deadline {opt.deadline:g} h)")
    out.say(f"Best design: {d.robot_count} robots x {d.packs_per_robot} pack(s) at {d.speed:g} km/h")
    out.say(f"Makespan {best.makespan:.3f} h, job cost US$ {best.cost:,.2f}"
            + ("" if best.feasible else "  [INFEASIBLE]"))
    if args.verify:
        space = enumerate_designs(problem, opt.deadline, opt.bounds)
        top = space[0]
        gap = (best.objective - top.objective) / abs(top.objective) if top.objective else 0.0
        out.say(f"Enumeration optimum over {len(space)} designs: {top.design.robot_count} robots x "
                f"{top.design.packs_per_robot} pack(s), objective {top.objective:,.2f} (gap {gap:.2%})")
    return EXIT_OK if best.feasible else EXIT_INFEASIBLE


COMMANDS = {
    "compare": cmd_compare,
    "simulate": cmd_simulate,
    "audit": cmd_audit,
    "optimize": cmd_optimize,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tractorswarm", description="Large tractor vs robot swarm fleet planning.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", default=None, help="scenario JSON (default: bundled paper_plowing.json)")
    common.add_argument("--out", default=None, help="directory for CSV and PNG outputs")
    common.add_argument("--seed", type=int, default=None, help="override the scenario seed (unsigned 64-bit)")
    common.add_argument("--runs", type=int, default=None, help="Monte Carlo runs (enables stochastic mode)")
    common.add_argument("--format", choices=("csv", "report"), default="report")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("compare", parents=[common], help="tractor vs swarm sizing and cost table")
    sub.add_parser("simulate", parents=[common], help="strip-coverage simulation")
    sub.add_parser("audit", parents=[common], help="bill-of-materials and battery-energy audit")
    p = sub.add_parser("optimize", parents=[common], help="PSO search for the cheapest fleet meeting a deadline")
    p.add_argument("--verify", action="store_true", help="also enumerate every design and report the gap")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.seed is not None and not (0 <= args.seed < 2**64):
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_INPUT
    if args.runs is not None and args.runs < 1:
        print("error: --runs must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        sc = load_scenario(args.scenario or bundled_scenario_path())
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = Output(args)
    try:
        code = COMMANDS[args.command](sc, args, out)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, DrivetrainError) as exc:
        print(f"analysis failed: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
