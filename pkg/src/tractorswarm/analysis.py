"""Composite analyses behind the CLI commands."""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalog import BomReport
from .costs import (
    CostBreakdown,
    acquisition_delta,
    diesel_hourly_cost,
    fleet_hourly_cost,
    operator_hourly_cost,
)
from .d497 import draft_force, field_capacity, hourly_fuel_use, nominal_power, specific_fuel_consumption
from .scenario import Role, Scenario, ScenarioError
from .sizing import EnergyAudit, EquivalenceReport, energy_audit, equivalence_report


@dataclass(frozen=True)
class MachineFigures:
    draft: float
    power: float
    capacity: float


def machine_figures(role: Role, op_efficiency: float) -> MachineFigures:
    impl = role.implement
    d = draft_force(impl, impl.typical_speed)
    return MachineFigures(
        draft=d,
        power=nominal_power(d, impl.typical_speed, role.machine.transfer_efficiency),
        capacity=field_capacity(impl.typical_speed, impl.width_w, op_efficiency),
    )


@dataclass
class Comparison:
    large: MachineFigures
    small: MachineFigures
    equivalence: EquivalenceReport
    fleet_size: int
    large_cost: CostBreakdown
    swarm_costs: dict[int, CostBreakdown]
    acquisition_delta: float
    robot_unit_price: float
    rows: list[tuple[str, float, str]] = field(default_factory=list)

    def cost_rows(self) -> list[tuple[str, float]]:
        out = [
            ("large_fuel_or_energy", self.large_cost.fuel_or_energy),
            ("large_operator", self.large_cost.operator),
            ("large_total", self.large_cost.total),
        ]
        for packs, c in self.swarm_costs.items():
            out.append((f"swarm_total_{packs}_pack", c.total))
        return out


def compare(sc: Scenario) -> Comparison:
    large, small = sc.role("large"), sc.role("small")
    ef = sc.field.op_efficiency if sc.field is not None else 0.7
    lf, sf = machine_figures(large, ef), machine_figures(small, ef)
    eq = equivalence_report(lf.capacity, sf.capacity, large.machine, small.machine, sc.g)
    n = small.fleet_size or eq.required_fleet
    n_large = large.fleet_size or 1

    def hourly(role: Role, count: int, packs: int) -> CostBreakdown:
        operator = None if role.machine.is_electric else sc.operator
        if not role.machine.is_electric and sc.prices is None:
            raise ScenarioError("diesel machine needs a 'prices' section")
        return fleet_hourly_cost(role.machine, count, packs, operator, sc.prices)

    large_cost = hourly(large, n_large, 1)
    swarm = {p: hourly(small, n, p) for p in small.packs_options}
    unit_price = sc.robot_unit_price
    if unit_price is None:
        unit_price = sc.bom.declared_total if sc.bom is not None else small.machine.purchase_price
    delta = acquisition_delta(large.machine.purchase_price * n_large, unit_price, n)

    rows: list[tuple[str, float, str]] = [
        ("draft_large", lf.draft, "N"),
        ("draft_small", sf.draft, "N"),
        ("nominal_power_large", lf.power, "kW"),
        ("nominal_power_small", sf.power, "kW"),
        ("field_capacity_large", lf.capacity, "ha/h"),
        ("field_capacity_small", sf.capacity, "ha/h"),
        ("equivalent_fleet_size", float(n), "robots"),
    ]
    if not large.machine.is_electric:
        fuel = large.machine.require_fuel()
        rows += [
            ("specific_fuel_consumption", specific_fuel_consumption(fuel.pto_power_ratio_x), "L/kWh"),
            (
                "hourly_fuel_use_large",
                hourly_fuel_use(large.machine.rated_power, fuel.pto_power_ratio_x, fuel.cf_decimals),
                "L/h",
            ),
            ("fuel_cost_large", diesel_hourly_cost(large.machine, sc.prices), "USD/h"),
        ]
    if sc.operator is not None:
        rows.append(("operator_cost", operator_hourly_cost(sc.operator), "USD/h"))
    rows.append(("hourly_cost_large", large_cost.total, "USD/h"))
    for p, c in swarm.items():
        rows.append((f"hourly_cost_swarm_{p}_pack", c.total, "USD/h"))
    for p, c in swarm.items():
        rows.append((f"cost_ratio_large_to_swarm_{p}_pack", large_cost.total / c.total, "ratio"))
    rows += [
        ("robot_unit_price", unit_price, "USD"),
        ("acquisition_delta", delta, "USD"),
        ("weight_ratio", eq.weight_ratio, "ratio"),
        ("ground_load_large", eq.ground_load_large, "N"),
        ("ground_load_small", eq.ground_load_small, "N"),
    ]
    return Comparison(lf, sf, eq, n, large_cost, swarm, delta, unit_price, rows)


@dataclass
class Audit:
    bom: BomReport | None
    energy: EnergyAudit | None


def audit(sc: Scenario) -> Audit:
    small = sc.role("small")
    bom = sc.bom.rollup() if sc.bom is not None else None
    energy = None
    if small.machine.is_electric:
        ef = sc.field.op_efficiency if sc.field is not None else 0.7
        energy = energy_audit(small.machine, machine_figures(small, ef).power)
    return Audit(bom, energy)
