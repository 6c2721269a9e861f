"""Operator timing and workload model.

Execution paths compile into primitive operator actions (visual search,
pointing, clicking, reading, recall, mental preparation). Summed primitive
times give a median required time; required time is modeled lognormal with
shape sigma = 0.28, and the time-based failure probability is the chance
that required time exceeds the time available:

    P_t = 1 - Phi((ln t_avail - mu) / sigma),   mu = ln(median)

Pointing time follows an index-of-difficulty law, a + b * log2(D/W + 1).
All operations here are pure; defaults are config-overridable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from statistics import NormalDist

from .procedures import ExecutionPath, StepKind

_STD_NORMAL = NormalDist()

DEFAULT_SIGMA = 0.28


class PrimitiveKind(str, Enum):
    VISUAL_SEARCH = "visual_search"
    POINT = "point"
    CLICK = "click"
    READ_VALUE = "read_value"
    MEMORY_RETRIEVE = "memory_retrieve"
    MENTAL_PREP = "mental_prep"


@dataclass(frozen=True)
class PrimitiveAction:
    kind: PrimitiveKind
    distance_px: float | None = None  # point only
    width_px: float | None = None  # point only

    def __post_init__(self) -> None:
        if self.distance_px is not None and self.distance_px < 0:
            raise ValueError("distance_px must be >= 0")
        if self.width_px is not None and self.width_px <= 0:
            raise ValueError("width_px must be > 0")


@dataclass(frozen=True)
class TimingConfig:
    """Per-primitive point estimates in seconds, plus the pointing law."""

    visual_search_s: float = 1.10
    click_s: float = 0.20
    read_value_s: float = 1.35
    memory_retrieve_s: float = 1.20
    mental_prep_s: float = 1.35
    point_a_s: float = 0.10
    point_b_s_per_bit: float = 0.15
    default_target_width_px: float = 30.0
    home_position: tuple[float, float] = (960.0, 540.0)
    sigma: float = DEFAULT_SIGMA

    @classmethod
    def from_dict(cls, data: dict) -> "TimingConfig":
        kwargs = dict(data)
        if "home_position" in kwargs:
            kwargs["home_position"] = tuple(kwargs["home_position"])
        return cls(**kwargs)


@dataclass(frozen=True)
class TimeEstimate:
    """Lognormal required-time distribution; mu is pinned to ln(median)."""

    median_s: float
    sigma: float = DEFAULT_SIGMA

    def __post_init__(self) -> None:
        if self.median_s <= 0:
            raise ValueError("median_s must be > 0")
        if self.sigma <= 0:
            raise ValueError("sigma must be > 0")

    @property
    def mu(self) -> float:
        return math.log(self.median_s)


def compile_primitives(
    path: ExecutionPath,
    step_kind: StepKind | None = None,
    config: TimingConfig = TimingConfig(),
) -> list[PrimitiveAction]:
    """Expand a path into the operator's primitive action sequence.

    Each node costs a visual search, a pointing movement (distance from the
    previous node, or from the configured home position for the entry node)
    and a click. Steps that read parameters (parameter_check, checklist)
    append a read_value per node. One mental preparation opens the step.
    """
    if not path.nodes:
        raise ValueError(f"path for step {path.step_id!r} is empty")
    reads = step_kind in (StepKind.PARAMETER_CHECK, StepKind.CHECKLIST)
    primitives: list[PrimitiveAction] = [PrimitiveAction(PrimitiveKind.MENTAL_PREP)]
    prev_x, prev_y = config.home_position
    for node in path.nodes:
        distance = math.dist((prev_x, prev_y), (node.x, node.y))
        primitives.append(PrimitiveAction(PrimitiveKind.VISUAL_SEARCH))
        primitives.append(
            PrimitiveAction(
                PrimitiveKind.POINT,
                distance_px=distance,
                width_px=config.default_target_width_px,
            )
        )
        primitives.append(PrimitiveAction(PrimitiveKind.CLICK))
        if reads:
            primitives.append(PrimitiveAction(PrimitiveKind.READ_VALUE))
        prev_x, prev_y = node.x, node.y
    return primitives


def primitive_time_s(primitive: PrimitiveAction, config: TimingConfig = TimingConfig()) -> float:
    if primitive.kind is PrimitiveKind.POINT:
        width = primitive.width_px or config.default_target_width_px
        distance = primitive.distance_px or 0.0
        return config.point_a_s + config.point_b_s_per_bit * math.log2(distance / width + 1.0)
    return {
        PrimitiveKind.VISUAL_SEARCH: config.visual_search_s,
        PrimitiveKind.CLICK: config.click_s,
        PrimitiveKind.READ_VALUE: config.read_value_s,
        PrimitiveKind.MEMORY_RETRIEVE: config.memory_retrieve_s,
        PrimitiveKind.MENTAL_PREP: config.mental_prep_s,
    }[primitive.kind]


def estimate_median(
    primitives: list[PrimitiveAction], config: TimingConfig = TimingConfig()
) -> float:
    """Summed median execution time in seconds (0 for an empty list)."""
    return sum(primitive_time_s(p, config) for p in primitives)


def p_t(estimate: TimeEstimate, t_avail_s: float) -> float:
    """Probability that required time exceeds the available time."""
    if t_avail_s <= 0:
        raise ValueError("t_avail_s must be > 0")
    z = (math.log(t_avail_s) - estimate.mu) / estimate.sigma
    return 1.0 - _STD_NORMAL.cdf(z)


# -- workload ------------------------------------------------------------------

@dataclass(frozen=True)
class WorkloadVector:
    """Six demand dimensions, each scored 0-100."""

    mental: float
    physical: float
    temporal: float
    performance: float
    effort: float
    frustration: float

    def __post_init__(self) -> None:
        for name, value in self.as_dict().items():
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"workload component {name} out of [0, 100]: {value}")

    def as_dict(self) -> dict[str, float]:
        return {
            "mental": self.mental,
            "physical": self.physical,
            "temporal": self.temporal,
            "performance": self.performance,
            "effort": self.effort,
            "frustration": self.frustration,
        }


def aggregate_workload(w: WorkloadVector) -> float:
    """Single 0-100 demand score; performance enters inverted."""
    return (
        w.mental + w.physical + w.temporal + (100.0 - w.performance)
        + w.effort + w.frustration
    ) / 6.0


@dataclass(frozen=True)
class LoadContext:
    """Run-time drivers of predicted workload."""

    path_len: int
    time_pressure_ratio: float
    pending_steps: int = 0

    def __post_init__(self) -> None:
        if self.path_len < 0 or self.time_pressure_ratio < 0 or self.pending_steps < 0:
            raise ValueError("load context inputs must be non-negative")


def _clamp(value: float) -> float:
    return min(100.0, max(0.0, value))


def predict_workload(context: LoadContext) -> WorkloadVector:
    """Rule-based workload prediction: linear ramps clamped to [0, 100].

    Every dimension is non-decreasing in path length and time-pressure
    ratio; physical demand stays low because soft control is all clicking.
    """
    L = float(context.path_len)
    r = context.time_pressure_ratio
    k = float(context.pending_steps)
    return WorkloadVector(
        mental=_clamp(20.0 + 5.0 * L + 30.0 * r),
        physical=10.0,
        temporal=_clamp(10.0 + 70.0 * r + 2.0 * L),
        performance=80.0,
        effort=_clamp(15.0 + 5.0 * L + 30.0 * r),
        frustration=_clamp(5.0 + 2.0 * L + 30.0 * r + 2.0 * k),
    )
