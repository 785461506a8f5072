"""Fleet planning for one large diesel tractor versus a swarm of small
electric robot tractors: draft and power sizing, operating costs, strip
coverage simulation and particle-swarm fleet optimisation."""

from .catalog import BatteryModel, BomLine, MachineSpec, bom_rollup, load_boms, load_machines, pack_energy
from .costs import (
    OperatorCostModel,
    PriceBook,
    acquisition_delta,
    diesel_hourly_cost,
    electric_hourly_cost,
    fleet_hourly_cost,
    operator_hourly_cost,
)
from .d497 import (
    DomainError,
    FuelModel,
    ImplementSpec,
    draft_force,
    field_capacity,
    hourly_fuel_use,
    load_implements,
    nominal_power,
    specific_fuel_consumption,
)
from .pso import FleetBounds, FleetDesign, PsoConfig, optimize_fleet, pso_minimize
from .scenario import load_scenario
from .sim import FieldSpec, SimConfig, compaction_summary, decompose_field, monte_carlo, simulate
from .sizing import energy_audit, equivalent_fleet_size, ground_load, weight_ratio

__version__ = "0.1.0"
