"""Hourly operating costs and acquisition comparisons.

Only fuel or electricity and the operator are costed. Depreciation,
maintenance and financing are deliberately left out.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import MachineSpec, to_cents
from .d497 import DomainError, hourly_fuel_use


@dataclass(frozen=True)
class OperatorCostModel:
    monthly_salary: float
    charges_rate: float
    insurance_monthly: float
    training_monthly: float
    hours_divisor: float = 40.0

    def __post_init__(self) -> None:
        if min(self.monthly_salary, self.charges_rate, self.insurance_monthly, self.training_monthly) < 0:
            raise DomainError("operator cost inputs must be >= 0")
        if self.hours_divisor <= 0:
            raise DomainError("hours divisor must be > 0")

    @classmethod
    def from_json(cls, d: dict) -> "OperatorCostModel":
        return cls(
            monthly_salary=float(d["monthly_salary_usd"]),
            charges_rate=float(d["charges_rate"]),
            insurance_monthly=float(d["insurance_monthly_usd"]),
            training_monthly=float(d["training_monthly_usd"]),
            hours_divisor=float(d.get("hours_divisor_h", 40.0)),
        )


@dataclass(frozen=True)
class PriceBook:
    diesel_price: float
    exchange_rate: float = 1.0

    def __post_init__(self) -> None:
        if self.diesel_price < 0 or self.exchange_rate <= 0:
            raise DomainError("diesel price must be >= 0 and exchange rate > 0")

    @classmethod
    def from_json(cls, d: dict) -> "PriceBook":
        return cls(float(d["diesel_usd_per_l"]), float(d.get("brl_per_usd", 1.0)))


@dataclass(frozen=True)
class CostBreakdown:
    """Hourly cost split; ``total`` is always derived from the parts."""

    fuel_or_energy: float
    operator: float = 0.0

    @property
    def total(self) -> float:
        return self.fuel_or_energy + self.operator

    def rows(self) -> list[tuple[str, float]]:
        return [
            ("fuel_or_energy", self.fuel_or_energy),
            ("operator", self.operator),
            ("total", self.total),
        ]


def operator_hourly_cost(m: OperatorCostModel) -> float:
    monthly = m.monthly_salary * (1.0 + m.charges_rate) + m.insurance_monthly + m.training_monthly
    return monthly / m.hours_divisor


def diesel_hourly_cost(machine: MachineSpec, prices: PriceBook) -> float:
    fuel = machine.require_fuel()
    litres = hourly_fuel_use(machine.rated_power, fuel.pto_power_ratio_x, fuel.cf_decimals)
    return litres * prices.diesel_price


def electric_hourly_cost(machine: MachineSpec, packs_in_use: int) -> float:
    battery = machine.require_battery()
    if packs_in_use < 1:
        raise DomainError(f"packs in use must be >= 1, got {packs_in_use}")
    return battery.electric_cost_cents_per_hour * packs_in_use / 100


def fleet_hourly_cost(
    machine: MachineSpec,
    fleet_size: int,
    packs_in_use: int = 1,
    operator: OperatorCostModel | None = None,
    prices: PriceBook | None = None,
) -> CostBreakdown:
    """Hourly cost of ``fleet_size`` identical machines working together.

    One operator per machine is charged when ``operator`` is given.
    """
    if fleet_size < 1:
        raise DomainError(f"fleet size must be >= 1, got {fleet_size}")
    if machine.is_electric:
        # integer cents keep 10 x 2.72 at exactly 27.20
        cents = machine.require_battery().electric_cost_cents_per_hour
        if packs_in_use < 1:
            raise DomainError(f"packs in use must be >= 1, got {packs_in_use}")
        energy = cents * packs_in_use * fleet_size / 100
    else:
        if prices is None:
            raise DomainError(f"{machine.name}: diesel costing needs a price book")
        energy = diesel_hourly_cost(machine, prices) * fleet_size
    labour = operator_hourly_cost(operator) * fleet_size if operator is not None else 0.0
    return CostBreakdown(energy, labour)


def acquisition_delta(tractor_price: float, robot_unit_price: float, fleet_size: int) -> float:
    """Purchase price of the tractor minus that of the robot fleet, in USD."""
    if min(tractor_price, robot_unit_price, fleet_size) < 0:
        raise DomainError("acquisition inputs must be >= 0")
    return (to_cents(tractor_price) - to_cents(robot_unit_price) * fleet_size) / 100
