"""Scenario files: a JSON document tying catalog entries to a job.

Keys carry their units (``speed_kmh``, ``width_m``, ``mass_kg``). Machine,
implement and BOM names resolve against the bundled catalog unless the
scenario's ``catalog`` section points at other files (paths relative to
the scenario file).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from dataclasses import field as dc_field
from importlib import resources
from pathlib import Path

from .catalog import Bom, MachineSpec, load_boms, load_machines
from .costs import OperatorCostModel, PriceBook
from .d497 import DomainError, ImplementSpec, load_implements
from .pso import FleetBounds, FleetProblem, PsoConfig
from .sim import FieldSpec, SimConfig
from .sizing import G_DEFAULT


class ScenarioError(ValueError):
    """The scenario file is malformed or references unknown catalog entries."""


@dataclass(frozen=True)
class Role:
    """One side of a comparison: a machine pulling a sized implement."""

    machine: MachineSpec
    implement: ImplementSpec
    fleet_size: int | None = None
    packs_options: tuple[int, ...] = (1,)


@dataclass(frozen=True)
class Optimization:
    deadline: float
    pso: PsoConfig
    bounds: FleetBounds
    penalty: float = 1e6


@dataclass(frozen=True)
class Scenario:
    name: str
    large: Role | None = None
    small: Role | None = None
    prices: PriceBook | None = None
    operator: OperatorCostModel | None = None
    field: FieldSpec | None = None
    sim_role: str = "small"
    sim: SimConfig = dc_field(default_factory=SimConfig)
    optimization: Optimization | None = None
    bom: Bom | None = None
    robot_unit_price: float | None = None
    g: float = G_DEFAULT

    def role(self, which: str) -> Role:
        r = self.large if which == "large" else self.small if which == "small" else None
        if r is None:
            raise ScenarioError(f"scenario has no '{which}' machine")
        return r

    def require(self, *sections: str) -> None:
        missing = [s for s in sections if getattr(self, s) is None]
        if missing:
            raise ScenarioError(f"scenario is missing section(s): {', '.join(missing)}")

    def fleet_problem(self) -> FleetProblem:
        self.require("field", "optimization")
        role = self.role(self.sim_role)
        operator = self.operator if not role.machine.is_electric else None
        return FleetProblem(
            self.field, role.machine, role.implement, self.sim, self.prices, operator, self.optimization.penalty
        )


def _lookup(table: dict, key: str, kind: str):
    try:
        return table[key]
    except KeyError:
        raise ScenarioError(f"unknown {kind} '{key}' (known: {', '.join(sorted(table))})") from None


def _role(d: dict, machines: dict, implements: dict, default_impl: str | None) -> Role:
    machine = _lookup(machines, d["machine"], "machine")
    impl_name = d.get("implement", default_impl)
    if impl_name is None:
        raise ScenarioError("no implement given for role")
    impl = _lookup(implements, impl_name, "implement")
    changes = {}
    if "width_m" in d:
        changes["width_w"] = float(d["width_m"])
    if "depth_cm" in d:
        changes["depth_t"] = float(d["depth_cm"])
    if "speed_kmh" in d:
        changes["typical_speed"] = float(d["speed_kmh"])
    if "fi" in d:
        changes["soil_factor_fi"] = float(d["fi"])
    if changes:
        impl = replace(impl, **changes)
    fleet = d.get("fleet_size")
    packs = tuple(int(p) for p in d.get("packs_options", [1]))
    return Role(machine, impl, None if fleet is None else int(fleet), packs)


def _optimization(d: dict) -> Optimization:
    b = d.get("bounds", {})
    bounds = FleetBounds(
        robot_count=tuple(int(v) for v in b.get("robot_count", (1, 30))),
        packs_per_robot=tuple(int(v) for v in b.get("packs_per_robot", (1, 3))),
        speed=tuple(float(v) for v in b.get("speed_kmh", (5.0, 5.0))),
    )
    deadline = d.get("deadline_h")
    pso = PsoConfig(
        bounds=bounds.as_box(),
        swarm_size=int(d.get("swarm_size", 20)),
        iterations=int(d.get("iterations", 40)),
        inertia_w=float(d.get("inertia_w", 0.729)),
        cognitive_c1=float(d.get("cognitive_c1", 1.49445)),
        social_c2=float(d.get("social_c2", 1.49445)),
        seed=int(d.get("seed", 0)),
        velocity_clamp=float(d.get("velocity_clamp", 0.5)),
    )
    return Optimization(
        deadline=math.inf if deadline is None else float(deadline),
        pso=pso,
        bounds=bounds,
        penalty=float(d.get("penalty_usd_per_h", 1e6)),
    )


def scenario_from_dict(data: dict, base_dir: Path | None = None) -> Scenario:
    base_dir = base_dir or Path.cwd()
    cat = data.get("catalog", {})

    def path_of(key: str):
        return None if key not in cat else base_dir / cat[key]

    try:
        machines = load_machines(path_of("machines"))
        implements = load_implements(path_of("implements"))
        boms = load_boms(path_of("boms"))
        default_impl = data.get("implement")
        large = _role(data["large"], machines, implements, default_impl) if "large" in data else None
        small = _role(data["small"], machines, implements, default_impl) if "small" in data else None
        bom = None
        if "bom" in data:
            bom = _lookup(boms, data["bom"], "bill of materials")
        elif small is not None and small.machine.bom is not None:
            bom = _lookup(boms, small.machine.bom, "bill of materials")
        price = data.get("robot_unit_price_usd")
        return Scenario(
            name=data.get("name", "scenario"),
            large=large,
            small=small,
            prices=PriceBook.from_json(data["prices"]) if "prices" in data else None,
            operator=OperatorCostModel.from_json(data["operator"]) if "operator" in data else None,
            field=FieldSpec.from_json(data["field"]) if "field" in data else None,
            sim_role=data.get("simulation", {}).get("machine_role", "small"),
            sim=SimConfig.from_json(data.get("simulation", {})),
            optimization=_optimization(data["optimization"]) if "optimization" in data else None,
            bom=bom,
            robot_unit_price=None if price is None else float(price),
            g=float(data.get("g_m_s2", G_DEFAULT)),
        )
    except ScenarioError:
        raise
    except (KeyError, TypeError) as exc:
        raise ScenarioError(f"malformed scenario: missing or invalid key {exc}") from exc
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(str(exc)) from exc


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    return scenario_from_dict(data, path.parent)


def bundled_scenario_path(name: str = "paper_plowing.json") -> Path:
    return Path(str(resources.files("tractorswarm.data").joinpath(name)))
