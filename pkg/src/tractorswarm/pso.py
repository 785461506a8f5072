"""Global-best particle swarm optimisation and the fleet-design search."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .catalog import MachineSpec
from .costs import OperatorCostModel, PriceBook, fleet_hourly_cost
from .d497 import DomainError, ImplementSpec, draft_force, nominal_power
from .sim import FieldSpec, SimConfig, simulate

# objective value assigned to positions where the objective is not finite
INFEASIBLE = 1e300


@dataclass(frozen=True)
class PsoConfig:
    bounds: tuple[tuple[float, float], ...]
    swarm_size: int = 30
    iterations: int = 100
    inertia_w: float = 0.729
    cognitive_c1: float = 1.49445
    social_c2: float = 1.49445
    seed: int = 0
    velocity_clamp: float = 0.5

    def __post_init__(self) -> None:
        if self.swarm_size < 2:
            raise DomainError("swarm size must be >= 2")
        if self.iterations < 1:
            raise DomainError("iterations must be >= 1")
        if not self.bounds:
            raise DomainError("at least one dimension is required")
        for lo, hi in self.bounds:
            if not lo <= hi:
                raise DomainError(f"bad bounds ({lo}, {hi})")
        if self.velocity_clamp <= 0:
            raise DomainError("velocity clamp must be > 0")


@dataclass(frozen=True)
class PsoResult:
    best_position: np.ndarray
    best_value: float
    history: list[float]


def pso_minimize(objective: Callable[[np.ndarray], float], cfg: PsoConfig) -> PsoResult:
    """Minimise ``objective`` over the box ``cfg.bounds``.

    Uses the inertia-weight global-best update. Positions are clamped to the
    box and velocities to ``velocity_clamp`` times each dimension's range.
    Objectives are evaluated in particle-index order, so a run is fully
    determined by ``cfg.seed``. A degenerate dimension (low == high) is
    simply held fixed.
    """
    rng = np.random.default_rng(cfg.seed)
    lo = np.array([b[0] for b in cfg.bounds], dtype=float)
    hi = np.array([b[1] for b in cfg.bounds], dtype=float)
    span = hi - lo
    vmax = cfg.velocity_clamp * span
    n, d = cfg.swarm_size, len(cfg.bounds)

    def evaluate(x: np.ndarray) -> float:
        try:
            v = float(objective(x))
        except (ArithmeticError, ValueError):
            return INFEASIBLE
        return v if math.isfinite(v) else INFEASIBLE

    x = lo + rng.random((n, d)) * span
    v = (rng.random((n, d)) * 2.0 - 1.0) * vmax
    pbest = x.copy()
    pbest_val = np.array([evaluate(p) for p in x])
    g = int(np.argmin(pbest_val))
    gbest, gbest_val = pbest[g].copy(), float(pbest_val[g])
    history = []

    for _ in range(cfg.iterations):
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        v = cfg.inertia_w * v + cfg.cognitive_c1 * r1 * (pbest - x) + cfg.social_c2 * r2 * (gbest - x)
        v = np.clip(v, -vmax, vmax)
        x = np.clip(x + v, lo, hi)
        for i in range(n):
            val = evaluate(x[i])
            if val < pbest_val[i]:
                pbest_val[i] = val
                pbest[i] = x[i]
                if val < gbest_val:
                    gbest_val = val
                    gbest = x[i].copy()
        history.append(gbest_val)

    return PsoResult(gbest, gbest_val, history)


# -- fleet design ------------------------------------------------------------

@dataclass(frozen=True)
class FleetDesign:
    robot_count: int
    packs_per_robot: int
    speed: float


@dataclass(frozen=True)
class FleetEvaluation:
    design: FleetDesign
    cost: float
    makespan: float
    objective: float
    feasible: bool


@dataclass(frozen=True)
class FleetProblem:
    """A fleet-sizing job: plough ``field`` with copies of ``machine``."""

    field: FieldSpec
    machine: MachineSpec
    implement: ImplementSpec
    sim: SimConfig
    prices: PriceBook | None = None
    operator: OperatorCostModel | None = None
    penalty: float = 1e6


@dataclass(frozen=True)
class FleetBounds:
    robot_count: tuple[int, int] = (1, 30)
    packs_per_robot: tuple[int, int] = (1, 3)
    speed: tuple[float, float] = (5.0, 5.0)

    def as_box(self) -> tuple[tuple[float, float], ...]:
        return (
            (float(self.robot_count[0]), float(self.robot_count[1])),
            (float(self.packs_per_robot[0]), float(self.packs_per_robot[1])),
            (float(self.speed[0]), float(self.speed[1])),
        )

    def decode(self, position: Sequence[float]) -> FleetDesign:
        count = int(np.clip(round(position[0]), *self.robot_count))
        packs = int(np.clip(round(position[1]), *self.packs_per_robot))
        speed = float(np.clip(position[2], *self.speed))
        return FleetDesign(count, packs, speed)


def evaluate_design(problem: FleetProblem, design: FleetDesign, deadline: float) -> FleetEvaluation:
    """Simulate ``design`` and price the whole job.

    The job cost is the fleet's hourly cost over the makespan, rounded to the
    cent. Missing the deadline, or asking for more drawbar power than the
    machine can deliver, adds ``penalty`` per hour (or kW) of violation.
    """
    cfg = replace(
        problem.sim,
        fleet_size=design.robot_count,
        packs_per_robot=design.packs_per_robot,
        speed_kmh=design.speed,
        stochastic=False,
    )
    res = simulate(problem.field, problem.machine, problem.implement, cfg, problem.prices, problem.operator)
    hourly = fleet_hourly_cost(
        problem.machine, design.robot_count, design.packs_per_robot, problem.operator, problem.prices
    ).total
    cost = round(hourly * res.makespan, 2)
    lateness = max(0.0, res.makespan - deadline) if math.isfinite(deadline) else 0.0
    if lateness <= 1e-9 * max(1.0, deadline):
        lateness = 0.0
    power = nominal_power(
        draft_force(problem.implement, design.speed), design.speed, problem.machine.transfer_efficiency
    )
    overload = max(0.0, power - problem.machine.power_limit)
    violation = lateness + overload
    return FleetEvaluation(design, cost, res.makespan, cost + problem.penalty * violation, violation == 0.0)


def _rank(ev: FleetEvaluation) -> tuple:
    # equal cost: prefer the smaller, slower fleet
    d = ev.design
    return (ev.objective, d.robot_count, d.packs_per_robot, d.speed)


@dataclass(frozen=True)
class FleetOptimum:
    best: FleetEvaluation
    history: list[float]
    evaluations: int


def optimize_fleet(problem: FleetProblem, deadline: float, cfg: PsoConfig, bounds: FleetBounds) -> FleetOptimum:
    """Search robot count, packs per robot and speed with PSO.

    Integer dimensions are rounded from the particle position at every
    evaluation; evaluations are cached per decoded design. The returned
    design is the best of everything evaluated, re-simulated from scratch.
    """
    if deadline <= 0:
        raise DomainError("deadline must be > 0")
    cfg = replace(cfg, bounds=bounds.as_box())
    cache: dict[FleetDesign, FleetEvaluation] = {}

    def objective(pos: np.ndarray) -> float:
        design = bounds.decode(pos)
        if design not in cache:
            cache[design] = evaluate_design(problem, design, deadline)
        return cache[design].objective

    result = pso_minimize(objective, cfg)
    chosen = min(cache.values(), key=_rank)
    best = evaluate_design(problem, chosen.design, deadline)
    return FleetOptimum(best, result.history, len(cache))


def enumerate_designs(
    problem: FleetProblem, deadline: float, bounds: FleetBounds, speeds: Sequence[float] | None = None
) -> list[FleetEvaluation]:
    """Evaluate every integer design in the box, best first."""
    if speeds is None:
        lo, hi = bounds.speed
        speeds = [lo] if lo == hi else [lo, hi]
    evals = [
        evaluate_design(problem, FleetDesign(n, p, s), deadline)
        for n, p, s in itertools.product(
            range(bounds.robot_count[0], bounds.robot_count[1] + 1),
            range(bounds.packs_per_robot[0], bounds.packs_per_robot[1] + 1),
            speeds,
        )
    ]
    return sorted(evals, key=_rank)
