"""Strip-coverage simulation of a robot swarm or a single tractor.

The field is cut into parallel strips one implement width wide. Machines
claim the lowest-index free strip whenever they become idle (lower machine
id first on ties) and drive it end to end. Electric machines drain their
packs by operating hours; when the packs run dry a fixed-duration swap
pauses the machine in place.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .catalog import MachineSpec
from .costs import OperatorCostModel, PriceBook, fleet_hourly_cost
from .d497 import DomainError, ImplementSpec, draft_force, field_capacity, hourly_fuel_use, nominal_power
from .sizing import G_DEFAULT, ground_load

_EPS = 1e-9


@dataclass(frozen=True)
class FieldSpec:
    length: float
    width: float
    op_efficiency: float = 0.7

    def __post_init__(self) -> None:
        if self.length < 0 or self.width < 0:
            raise DomainError("field dimensions must be >= 0")
        if not (0.0 < self.op_efficiency <= 1.0):
            raise DomainError("operational efficiency must be in (0, 1]")

    @property
    def area(self) -> float:
        """Area in hectares."""
        return self.length * self.width / 10_000.0

    @classmethod
    def from_json(cls, d: dict) -> "FieldSpec":
        return cls(float(d["length_m"]), float(d["width_m"]), float(d.get("op_efficiency", 0.7)))


@dataclass
class Strip:
    index: int
    width: float
    length: float
    direction: int = 1
    assigned_robot: int | None = None
    plowed: bool = False

    @property
    def area(self) -> float:
        return self.length * self.width / 10_000.0


@dataclass(frozen=True)
class SimConfig:
    """Run parameters.

    ``swap_duration`` of ``None`` uses the machine's battery value and
    ``speed_kmh`` of ``None`` the implement's typical speed.
    """

    fleet_size: int = 1
    packs_per_robot: int = 1
    swap_duration: float | None = None
    stochastic: bool = False
    seed: int = 0
    monte_carlo_runs: int = 1
    fi_variation: float = 0.0
    speed_variation: float = 0.0
    speed_kmh: float | None = None

    def __post_init__(self) -> None:
        if self.fleet_size < 1:
            raise DomainError("fleet size must be >= 1")
        if self.packs_per_robot < 1:
            raise DomainError("packs per robot must be >= 1")
        if self.monte_carlo_runs < 1:
            raise DomainError("monte carlo runs must be >= 1")
        if self.swap_duration is not None and self.swap_duration < 0:
            raise DomainError("swap duration must be >= 0")
        for spread in (self.fi_variation, self.speed_variation):
            if not (0.0 <= spread <= 0.5):
                raise DomainError("variation spreads must be in [0, 0.5]")
        if not (0 <= self.seed < 2**64):
            raise DomainError("seed must be an unsigned 64-bit integer")

    @classmethod
    def from_json(cls, d: dict) -> "SimConfig":
        swap = d.get("swap_duration_h")
        speed = d.get("speed_kmh")
        return cls(
            fleet_size=int(d.get("fleet_size", 1)),
            packs_per_robot=int(d.get("packs_per_robot", 1)),
            swap_duration=None if swap is None else float(swap),
            stochastic=bool(d.get("stochastic", False)),
            seed=int(d.get("seed", 0)),
            monte_carlo_runs=int(d.get("monte_carlo_runs", 1)),
            fi_variation=float(d.get("fi_variation", 0.0)),
            speed_variation=float(d.get("speed_variation", 0.0)),
            speed_kmh=None if speed is None else float(speed),
        )


@dataclass(frozen=True)
class WorkSegment:
    robot: int
    strip: int
    start: float
    end: float


@dataclass(frozen=True)
class SwapEvent:
    robot: int
    time: float
    duration: float


@dataclass
class SimResult:
    makespan: float
    total_area: float
    per_robot_busy_hours: list[float]
    swap_events: list[SwapEvent]
    total_energy_or_fuel: float
    energy_unit: str
    total_cost: float
    strip_loads: list[tuple[int, float]]
    segments: list[WorkSegment] = field(default_factory=list)
    strips: list[Strip] = field(default_factory=list)
    seed: int = 0
    speed_kmh: float = 0.0
    fi_factor: float = 1.0


def decompose_field(field_spec: FieldSpec, cut_width: float) -> list[Strip]:
    """Split the field into boustrophedon strips of ``cut_width`` metres.

    The last strip takes whatever width is left over.
    """
    if cut_width <= 0:
        raise DomainError(f"cut width must be > 0, got {cut_width}")
    if field_spec.width == 0 or field_spec.length == 0:
        return []
    n = max(1, math.ceil(field_spec.width / cut_width - _EPS))
    strips = []
    for i in range(n):
        w = cut_width if i < n - 1 else field_spec.width - (n - 1) * cut_width
        strips.append(Strip(i, w, field_spec.length, 1 if i % 2 == 0 else -1))
    return strips


def _perturbations(cfg: SimConfig, rng: np.random.Generator) -> tuple[float, float]:
    # fixed draw order: speed first, then soil factor
    speed_f = 1.0 + rng.uniform(-cfg.speed_variation, cfg.speed_variation)
    fi_f = 1.0 + rng.uniform(-cfg.fi_variation, cfg.fi_variation)
    return float(speed_f), float(fi_f)


def _run(
    field_spec: FieldSpec,
    machine: MachineSpec,
    impl: ImplementSpec,
    cfg: SimConfig,
    speed_factor: float,
    fi_factor: float,
    prices: PriceBook | None,
    operator: OperatorCostModel | None,
    g: float,
) -> SimResult:
    speed = (cfg.speed_kmh if cfg.speed_kmh is not None else impl.typical_speed) * speed_factor
    strips = decompose_field(field_spec, impl.width_w)
    ef = field_spec.op_efficiency
    if strips and field_capacity(speed, impl.width_w, ef) <= 0:
        raise DomainError("zero field capacity: the field can never be finished")
    # hours per metre of strip; one strip takes the same time whatever its width
    hours_per_m = 1.0 / (1000.0 * speed * ef) if strips else 0.0

    if machine.is_electric:
        battery = machine.require_battery()
        charge = battery.autonomy_per_pack * cfg.packs_per_robot
        swap = battery.swap_duration if cfg.swap_duration is None else cfg.swap_duration
    else:
        charge = math.inf
        swap = 0.0

    n = cfg.fleet_size
    battery_left = [charge] * n
    busy = [0.0] * n
    finish = [0.0] * n
    segments: list[WorkSegment] = []
    swaps: list[SwapEvent] = []
    queue = [(0.0, r) for r in range(n)]
    heapq.heapify(queue)
    next_strip = 0

    while queue and next_strip < len(strips):
        t, r = heapq.heappop(queue)
        strip = strips[next_strip]
        next_strip += 1
        strip.assigned_robot = r
        remaining = strip.length * hours_per_m
        while remaining > 0:
            done = battery_left[r] >= remaining * (1 - _EPS)
            work = remaining if done else battery_left[r]
            if work > 0:
                segments.append(WorkSegment(r, strip.index, t, t + work))
                t += work
                busy[r] += work
                battery_left[r] = max(0.0, battery_left[r] - work)
            if done:
                break
            remaining -= work
            swaps.append(SwapEvent(r, t, swap))
            t += swap
            battery_left[r] = charge
        strip.plowed = True
        finish[r] = t
        heapq.heappush(queue, (t, r))

    makespan = max(finish) if strips else 0.0

    width_scaled = replace(impl, soil_factor_fi=impl.soil_factor_fi * fi_factor)
    if machine.is_electric:
        unit = "kWh"
        power_by_strip = {
            s.index: nominal_power(draft_force(width_scaled.with_width(s.width), speed), speed, machine.transfer_efficiency)
            for s in strips
        }
        consumed = math.fsum(power_by_strip[seg.strip] * (seg.end - seg.start) for seg in segments)
        hourly = fleet_hourly_cost(machine, n, cfg.packs_per_robot, operator, prices).total
    else:
        unit = "L"
        fuel = machine.require_fuel()
        rate = hourly_fuel_use(machine.rated_power, fuel.pto_power_ratio_x, fuel.cf_decimals)
        consumed = rate * math.fsum(busy)
        hourly = fleet_hourly_cost(machine, n, 1, operator, prices).total if prices is not None else math.nan

    load = ground_load(machine.mass, g)
    return SimResult(
        makespan=makespan,
        total_area=math.fsum(s.area for s in strips if s.plowed),
        per_robot_busy_hours=busy,
        swap_events=swaps,
        total_energy_or_fuel=consumed,
        energy_unit=unit,
        total_cost=hourly * makespan,
        strip_loads=[(s.index, load) for s in strips if s.plowed],
        segments=segments,
        strips=strips,
        seed=cfg.seed,
        speed_kmh=speed,
        fi_factor=fi_factor,
    )


def simulate(
    field_spec: FieldSpec,
    machine: MachineSpec,
    impl: ImplementSpec,
    cfg: SimConfig,
    prices: PriceBook | None = None,
    operator: OperatorCostModel | None = None,
    g: float = G_DEFAULT,
) -> SimResult:
    """Run one coverage job.

    In stochastic mode a single speed/soil perturbation is drawn from
    ``cfg.seed``. Diesel runs without ``prices`` report a NaN cost.
    """
    if cfg.stochastic:
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
        speed_f, fi_f = _perturbations(cfg, rng)
    else:
        speed_f = fi_f = 1.0
    return _run(field_spec, machine, impl, cfg, speed_f, fi_f, prices, operator, g)


@dataclass(frozen=True)
class Summary:
    mean: float
    stddev: float
    min: float
    max: float

    @classmethod
    def of(cls, values: list[float]) -> "Summary":
        # sorting first makes the result independent of completion order
        vals = sorted(values)
        mean = math.fsum(vals) / len(vals)
        var = math.fsum((v - mean) ** 2 for v in vals) / len(vals)
        return cls(mean, math.sqrt(var), vals[0], vals[-1])


@dataclass(frozen=True)
class MonteCarloSummary:
    runs: int
    seed: int
    makespan: Summary
    cost: Summary
    makespans: tuple[float, ...]
    costs: tuple[float, ...]


def monte_carlo(
    field_spec: FieldSpec,
    machine: MachineSpec,
    impl: ImplementSpec,
    cfg: SimConfig,
    prices: PriceBook | None = None,
    operator: OperatorCostModel | None = None,
    g: float = G_DEFAULT,
) -> MonteCarloSummary:
    """Repeat the job ``cfg.monte_carlo_runs`` times with per-run uniform
    perturbations of speed and soil factor.

    Each run gets its own child seed spawned from ``cfg.seed``, so runs are
    independent of each other and of evaluation order.
    """
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.monte_carlo_runs)
    makespans, costs = [], []
    for child in children:
        speed_f, fi_f = _perturbations(cfg, np.random.default_rng(child))
        res = _run(field_spec, machine, impl, cfg, speed_f, fi_f, prices, operator, g)
        makespans.append(res.makespan)
        costs.append(res.total_cost)
    return MonteCarloSummary(
        runs=cfg.monte_carlo_runs,
        seed=cfg.seed,
        makespan=Summary.of(makespans),
        cost=Summary.of(costs),
        makespans=tuple(makespans),
        costs=tuple(costs),
    )


@dataclass(frozen=True)
class CompactionRow:
    strip: int
    passes: int
    max_load: float


def compaction_summary(result: SimResult, machine: MachineSpec | None = None, g: float = G_DEFAULT) -> list[CompactionRow]:
    """Per-strip pass count and peak ground load.

    With ``machine`` the load is recomputed at gravity ``g``; otherwise the
    loads recorded in the result are used.
    """
    passes: dict[int, set[int]] = {}
    for seg in result.segments:
        passes.setdefault(seg.strip, set()).add(seg.robot)
    rows = []
    for idx, load in result.strip_loads:
        if machine is not None:
            load = ground_load(machine.mass, g)
        rows.append(CompactionRow(idx, len(passes.get(idx, ())), load))
    return rows
