"""Fleet equivalence, ground loads and battery-energy audit."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import MachineSpec, pack_energy
from .d497 import DomainError

G_DEFAULT = 10.0


@dataclass(frozen=True)
class EquivalenceReport:
    required_fleet: int
    capacity_large: float
    capacity_small: float
    weight_ratio: float
    ground_load_large: float
    ground_load_small: float


@dataclass(frozen=True)
class EnergyAudit:
    pack_energy: float
    required_power: float
    claimed_autonomy: float
    required_energy: float
    feasible: bool
    shortfall: float


def equivalent_fleet_size(cc_large: float, cc_small: float) -> int:
    """Smallest number of small machines matching the large one's capacity."""
    if cc_large <= 0 or cc_small <= 0:
        raise DomainError("field capacities must be > 0")
    ratio = cc_large / cc_small
    n = math.ceil(ratio)
    # 1.4 / 0.14 lands a hair above 10 in binary floating point
    if n > 1 and math.isclose(ratio, n - 1, rel_tol=1e-9):
        n -= 1
    return n


def ground_load(mass: float, g: float = G_DEFAULT) -> float:
    """Per-pass normal load on the soil in N."""
    if mass < 0 or g <= 0:
        raise DomainError("mass must be >= 0 and g > 0")
    return mass * g


def weight_ratio(tractor_mass: float, robot_mass: float, fleet: int) -> float:
    if tractor_mass <= 0 or robot_mass <= 0 or fleet <= 0:
        raise DomainError("weight ratio inputs must be > 0")
    return tractor_mass / (robot_mass * fleet)


def equivalence_report(
    cc_large: float, cc_small: float, large: MachineSpec, small: MachineSpec, g: float = G_DEFAULT
) -> EquivalenceReport:
    n = equivalent_fleet_size(cc_large, cc_small)
    return EquivalenceReport(
        required_fleet=n,
        capacity_large=cc_large,
        capacity_small=cc_small,
        weight_ratio=weight_ratio(large.mass, small.mass, n),
        ground_load_large=ground_load(large.mass, g),
        ground_load_small=ground_load(small.mass, g),
    )


def energy_audit(machine: MachineSpec, required_power: float) -> EnergyAudit:
    """Check the claimed per-pack autonomy against the energy a pack holds."""
    battery = machine.require_battery()
    if required_power < 0:
        raise DomainError("required power must be >= 0")
    energy = pack_energy(battery)
    needed = required_power * battery.autonomy_per_pack
    feasible = energy >= needed
    return EnergyAudit(
        pack_energy=energy,
        required_power=required_power,
        claimed_autonomy=battery.autonomy_per_pack,
        required_energy=needed,
        feasible=feasible,
        shortfall=0.0 if feasible else needed - energy,
    )
