"""Machinery-management equations for tillage draft, power, capacity and fuel.

Unit conventions used throughout the package:

* travel speed is always given in km/h at the public interface
* implement width in metres, working depth in centimetres
* draft in newtons, power in kW, field capacity in ha/h

The power equation converts speed to m/s internally.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

KMH_PER_MS = 3.6


class DomainError(ValueError):
    """An input lies outside the domain of a model equation."""


@dataclass(frozen=True)
class ImplementSpec:
    """Draft coefficients and geometry of a tillage implement.

    ``coeff_b`` multiplies speed in km/h and ``coeff_c`` its square.
    """

    name: str
    coeff_a: float
    coeff_b: float
    coeff_c: float
    soil_factor_fi: float
    width_w: float
    depth_t: float
    typical_speed: float

    def __post_init__(self) -> None:
        if self.coeff_a < 0 or self.coeff_c < 0:
            raise DomainError(f"{self.name}: coefficients A and C must be >= 0")
        if self.soil_factor_fi <= 0:
            raise DomainError(f"{self.name}: soil factor must be > 0")
        if self.width_w < 0 or self.depth_t < 0:
            raise DomainError(f"{self.name}: negative implement geometry")
        if self.typical_speed < 0:
            raise DomainError(f"{self.name}: negative typical speed")

    def with_width(self, width_m: float) -> "ImplementSpec":
        return replace(self, width_w=width_m)

    @classmethod
    def from_json(cls, row: dict) -> "ImplementSpec":
        return cls(
            name=row["name"],
            coeff_a=float(row["a"]),
            coeff_b=float(row["b"]),
            coeff_c=float(row["c"]),
            soil_factor_fi=float(row["fi"]),
            width_w=float(row["width_m"]),
            depth_t=float(row["depth_cm"]),
            typical_speed=float(row["speed_kmh"]),
        )

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "a": self.coeff_a,
            "b": self.coeff_b,
            "c": self.coeff_c,
            "fi": self.soil_factor_fi,
            "width_m": self.width_w,
            "depth_cm": self.depth_t,
            "speed_kmh": self.typical_speed,
        }


@dataclass(frozen=True)
class OperationPoint:
    speed: float
    draft: float

    def __post_init__(self) -> None:
        if self.speed < 0 or self.draft < 0:
            raise DomainError("operation point speed and draft must be >= 0")


@dataclass(frozen=True)
class FuelModel:
    """Diesel consumption model.

    Parameters
    ----------
    pto_power_ratio_x : float
        Fraction of available PTO-equivalent power demanded by the
        operation, in (0, 1].
    cf_decimals : int or None
        Decimal places the specific consumption is rounded to before it is
        multiplied by engine power. Consumption is conventionally tabulated
        at two decimals (0.42 L/kWh at full load); ``None`` keeps the raw
        value.
    """

    pto_power_ratio_x: float = 1.0
    cf_decimals: int | None = 2

    def __post_init__(self) -> None:
        _check_x(self.pto_power_ratio_x)


def _check_x(x: float) -> None:
    if not (0.0 < x <= 1.0):
        raise DomainError(f"PTO power ratio must be in (0, 1], got {x}")


def draft_force(impl: ImplementSpec, speed: float) -> float:
    """Implement draft in N at ``speed`` km/h."""
    if speed < 0:
        raise DomainError(f"speed must be >= 0, got {speed}")
    per_unit = impl.coeff_a + impl.coeff_b * speed + impl.coeff_c * speed**2
    return impl.soil_factor_fi * per_unit * impl.width_w * impl.depth_t


def nominal_power(draft: float, speed: float, efficiency: float) -> float:
    """Engine power in kW needed to pull ``draft`` N at ``speed`` km/h.

    ``efficiency`` is the overall tractor/implement power-transfer
    efficiency.
    """
    if not (0.0 < efficiency <= 1.0):
        raise DomainError(f"efficiency must be in (0, 1], got {efficiency}")
    if draft < 0 or speed < 0:
        raise DomainError("draft and speed must be >= 0")
    return draft * (speed / KMH_PER_MS) / efficiency / 1000.0


def field_capacity(speed: float, width: float, op_efficiency: float) -> float:
    """Effective field capacity in ha/h (speed km/h, width m)."""
    if not (0.0 <= op_efficiency <= 1.0):
        raise DomainError(f"operational efficiency must be in [0, 1], got {op_efficiency}")
    if speed < 0 or width < 0:
        raise DomainError("speed and width must be >= 0")
    return speed * width * op_efficiency / 10.0


def specific_fuel_consumption(x: float) -> float:
    """Diesel use in L/kWh at PTO load ratio ``x``."""
    _check_x(x)
    return 2.64 * x + 3.91 - 0.203 * math.sqrt(738.0 * x + 173.0)


def hourly_fuel_use(rated_power: float, x: float, cf_decimals: int | None = 2) -> float:
    """Diesel use in L/h for an engine of ``rated_power`` kW.

    The rated engine power is used, not the draft requirement.
    """
    if rated_power < 0:
        raise DomainError(f"rated power must be >= 0, got {rated_power}")
    cf = specific_fuel_consumption(x)
    if cf_decimals is not None:
        cf = round(cf, cf_decimals)
    return rated_power * cf


def load_implements(path: str | Path | None = None) -> dict[str, ImplementSpec]:
    """Load an implement-coefficient table keyed by name.

    Without ``path`` the bundled table is read.
    """
    if path is None:
        text = resources.files("tractorswarm.data").joinpath("implements.json").read_text()
    else:
        text = Path(path).read_text()
    rows = json.loads(text)
    table = {}
    for row in rows:
        spec = ImplementSpec.from_json(row)
        table[spec.name] = spec
    return table
