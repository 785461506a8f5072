"""Machine definitions and bill-of-materials rollup."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .d497 import DomainError, FuelModel


class DrivetrainError(TypeError):
    """Operation applied to a machine with the wrong kind of power source."""


class Drivetrain(str, enum.Enum):
    DIESEL_MECHANICAL = "diesel_mechanical"
    ELECTRIC_TRACKED = "electric_tracked"


def to_cents(usd: float) -> int:
    return int(round(usd * 100))


@dataclass(frozen=True)
class BatteryModel:
    """Swappable battery pack of an electric robot tractor.

    ``autonomy_per_pack`` is the claimed working time per pack in hours and
    may be ``math.inf`` for an idealised unlimited pack.
    """

    packs_fitted: int
    cells_per_pack: int
    cell_voltage: float
    cell_capacity: float
    autonomy_per_pack: float
    swap_duration: float
    electric_cost_cents_per_hour: int

    def __post_init__(self) -> None:
        if self.packs_fitted < 1 or self.cells_per_pack < 1:
            raise DomainError("battery needs at least one pack and one cell")
        if self.cell_voltage <= 0 or self.cell_capacity < 0:
            raise DomainError("cell voltage must be > 0 and capacity >= 0")
        if self.autonomy_per_pack <= 0:
            raise DomainError("autonomy per pack must be > 0")
        if self.swap_duration < 0 or self.electric_cost_cents_per_hour < 0:
            raise DomainError("swap duration and electricity cost must be >= 0")

    @property
    def electric_cost_per_hour(self) -> float:
        return self.electric_cost_cents_per_hour / 100


@dataclass(frozen=True)
class MachineSpec:
    name: str
    drivetrain: Drivetrain
    rated_power: float
    mass: float
    transfer_efficiency: float
    purchase_price: float
    max_power: float | None = None
    fuel: FuelModel | None = None
    battery: BatteryModel | None = None
    bom: str | None = None

    def __post_init__(self) -> None:
        if self.rated_power <= 0 or self.mass <= 0:
            raise DomainError(f"{self.name}: rated power and mass must be > 0")
        if not (0.0 < self.transfer_efficiency <= 1.0):
            raise DomainError(f"{self.name}: transfer efficiency must be in (0, 1]")
        if self.purchase_price < 0:
            raise DomainError(f"{self.name}: negative purchase price")
        if self.drivetrain is Drivetrain.DIESEL_MECHANICAL:
            if self.fuel is None or self.battery is not None:
                raise DomainError(f"{self.name}: diesel machine needs a fuel model and no battery")
        elif self.battery is None or self.fuel is not None:
            raise DomainError(f"{self.name}: electric machine needs a battery and no fuel model")

    @property
    def is_electric(self) -> bool:
        return self.drivetrain is Drivetrain.ELECTRIC_TRACKED

    @property
    def power_limit(self) -> float:
        return self.max_power if self.max_power is not None else self.rated_power

    def require_fuel(self) -> FuelModel:
        if self.fuel is None:
            raise DrivetrainError(f"{self.name} has no diesel fuel model")
        return self.fuel

    def require_battery(self) -> BatteryModel:
        if self.battery is None:
            raise DrivetrainError(f"{self.name} has no battery")
        return self.battery


@dataclass(frozen=True)
class BomLine:
    component: str
    quantity: int
    unit_value_cents: int
    line_value_cents: int

    def __post_init__(self) -> None:
        if self.quantity < 1:
            raise DomainError(f"{self.component}: quantity must be >= 1")
        if self.unit_value_cents < 0:
            raise DomainError(f"{self.component}: negative unit value")


@dataclass(frozen=True)
class LineDiscrepancy:
    component: str
    product_cents: int
    printed_cents: int


@dataclass(frozen=True)
class BomReport:
    computed_total_cents: int
    declared_total_cents: int
    line_discrepancies: list[LineDiscrepancy] = field(default_factory=list)

    @property
    def total_discrepancy_cents(self) -> int:
        return self.computed_total_cents - self.declared_total_cents

    @property
    def computed_total(self) -> float:
        return self.computed_total_cents / 100

    @property
    def declared_total(self) -> float:
        return self.declared_total_cents / 100

    @property
    def total_discrepancy(self) -> float:
        return self.total_discrepancy_cents / 100

    @property
    def clean(self) -> bool:
        return not self.line_discrepancies and self.total_discrepancy_cents == 0


def bom_rollup(lines: list[BomLine], declared_total: float, tolerance: float = 1.0) -> BomReport:
    """Sum printed line values and flag every line whose quantity times unit
    value differs from its printed value by more than ``tolerance`` USD.

    Lines are processed in component-name order so the report does not
    depend on the order of ``lines``.
    """
    if not lines:
        raise DomainError("bill of materials is empty")
    tol_cents = to_cents(tolerance)
    ordered = sorted(lines, key=lambda ln: (ln.component, ln.quantity, ln.unit_value_cents, ln.line_value_cents))
    computed = sum(ln.line_value_cents for ln in ordered)
    flagged = []
    for ln in ordered:
        product = ln.quantity * ln.unit_value_cents
        if abs(product - ln.line_value_cents) > tol_cents:
            flagged.append(LineDiscrepancy(ln.component, product, ln.line_value_cents))
    return BomReport(computed, to_cents(declared_total), flagged)


def pack_energy(b: BatteryModel) -> float:
    """Energy of one pack in kWh."""
    return b.cells_per_pack * b.cell_voltage * b.cell_capacity / 1000.0


# -- JSON loading ------------------------------------------------------------

def _read(path: str | Path | None, default: str) -> dict | list:
    if path is None:
        return json.loads(resources.files("tractorswarm.data").joinpath(default).read_text())
    return json.loads(Path(path).read_text())


def battery_from_json(d: dict) -> BatteryModel:
    autonomy = d.get("autonomy_per_pack_h")
    return BatteryModel(
        packs_fitted=int(d["packs_fitted"]),
        cells_per_pack=int(d["cells_per_pack"]),
        cell_voltage=float(d["cell_voltage_v"]),
        cell_capacity=float(d["cell_capacity_ah"]),
        autonomy_per_pack=float("inf") if autonomy is None else float(autonomy),
        swap_duration=float(d.get("swap_duration_h", 0.0)),
        electric_cost_cents_per_hour=to_cents(float(d["electric_cost_usd_per_h"])),
    )


def machine_from_json(name: str, d: dict) -> MachineSpec:
    fuel = battery = None
    if "fuel" in d:
        f = d["fuel"]
        fuel = FuelModel(float(f["pto_power_ratio_x"]), f.get("cf_decimals", 2))
    if "battery" in d:
        battery = battery_from_json(d["battery"])
    return MachineSpec(
        name=name,
        drivetrain=Drivetrain(d["drivetrain"]),
        rated_power=float(d["rated_power_kw"]),
        max_power=None if d.get("max_power_kw") is None else float(d["max_power_kw"]),
        mass=float(d["mass_kg"]),
        transfer_efficiency=float(d["transfer_efficiency"]),
        purchase_price=float(d["purchase_price_usd"]),
        fuel=fuel,
        battery=battery,
        bom=d.get("bom"),
    )


def load_machines(path: str | Path | None = None) -> dict[str, MachineSpec]:
    data = _read(path, "machines.json")
    return {name: machine_from_json(name, d) for name, d in data.items()}


@dataclass(frozen=True)
class Bom:
    name: str
    lines: list[BomLine]
    declared_total: float

    def rollup(self, tolerance: float = 1.0) -> BomReport:
        return bom_rollup(self.lines, self.declared_total, tolerance)


def bom_from_json(name: str, d: dict) -> Bom:
    lines = []
    for row in d["lines"]:
        line_cents = to_cents(float(row["line_value_usd"]))
        qty = row.get("quantity")
        unit = row.get("unit_value_usd")
        # lines printed without quantity or unit price count as one lump sum
        if qty is None:
            lines.append(BomLine(row["component"], 1, line_cents, line_cents))
        else:
            lines.append(BomLine(row["component"], int(qty), to_cents(float(unit)), line_cents))
    return Bom(name, lines, float(d["declared_total_usd"]))


def load_boms(path: str | Path | None = None) -> dict[str, Bom]:
    data = _read(path, "boms.json")
    return {name: bom_from_json(name, d) for name, d in data.items()}
