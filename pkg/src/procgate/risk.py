"""Contextual failure probability from performance influencing factors.

Each step engages a subset of four macro-cognitive functions (detection,
understanding, decision making, action execution). Every engaged function f
carries a base error probability that the current PIF severities multiply:

    h_f = min(base_f * prod(multiplier(pif, level)), 1)
    P_c = 1 - prod over engaged f of (1 - h_f)

The severity assessment itself sits behind a small interface so a richer
assessor (e.g. an LLM-backed one honoring a response deadline) can replace
the deterministic table-driven default without touching the P_c math.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol

from .errors import MissingFunctionConfigError
from .procedures import ExecutionPath, ProcedureStep, StepKind


class PifLevel(str, Enum):
    NOMINAL = "nominal"
    MODERATE = "moderate"
    HIGH = "high"


_LEVEL_ORDER = {PifLevel.NOMINAL: 0, PifLevel.MODERATE: 1, PifLevel.HIGH: 2}

DEFAULT_PIFS = (
    "information_completeness",
    "hsi_complexity",
    "time_pressure",
    "task_complexity",
    "workload",
)


class CognitiveFunction(str, Enum):
    DETECTION = "detection"
    UNDERSTANDING = "understanding"
    DECISION_MAKING = "decision_making"
    ACTION_EXECUTION = "action_execution"


# Which macro-cognitive functions a step kind exercises.
ENGAGEMENT: dict[StepKind, tuple[CognitiveFunction, ...]] = {
    StepKind.PARAMETER_CHECK: (
        CognitiveFunction.DETECTION,
        CognitiveFunction.UNDERSTANDING,
    ),
    StepKind.CHECKLIST: (
        CognitiveFunction.DETECTION,
        CognitiveFunction.UNDERSTANDING,
    ),
    StepKind.SCREEN_NAVIGATION: (
        CognitiveFunction.DETECTION,
        CognitiveFunction.ACTION_EXECUTION,
    ),
    StepKind.TOP_LEFT_TOGGLE: (
        CognitiveFunction.DETECTION,
        CognitiveFunction.ACTION_EXECUTION,
    ),
    StepKind.FLOWCHART_EXECUTION: (
        CognitiveFunction.DETECTION,
        CognitiveFunction.UNDERSTANDING,
        CognitiveFunction.DECISION_MAKING,
        CognitiveFunction.ACTION_EXECUTION,
    ),
}


@dataclass(frozen=True)
class PIFState:
    """One severity level per configured PIF."""

    levels: dict[str, PifLevel]

    def level(self, pif: str) -> PifLevel:
        return self.levels[pif]

    def as_dict(self) -> dict[str, str]:
        return {pif: level.value for pif, level in sorted(self.levels.items())}


def _default_multipliers() -> dict[str, dict[PifLevel, float]]:
    return {
        pif: {PifLevel.NOMINAL: 1.0, PifLevel.MODERATE: 3.0, PifLevel.HIGH: 10.0}
        for pif in DEFAULT_PIFS
    }


@dataclass(frozen=True)
class AssessorThresholds:
    """Cut points for the deterministic severity rules."""

    hsi_moderate_nodes: int = 4
    hsi_high_nodes: int = 8
    task_moderate_targets: int = 4
    task_high_targets: int = 8
    workload_moderate: float = 30.0
    workload_high: float = 50.0
    time_pressure_moderate: float = 0.5
    time_pressure_high: float = 0.8


@dataclass
class RiskModelConfig:
    """Per-function base HEPs plus a shared (PIF, level) multiplier table."""

    base_hep: dict[CognitiveFunction, float] = field(
        default_factory=lambda: {
            CognitiveFunction.DETECTION: 1e-3,
            CognitiveFunction.UNDERSTANDING: 2e-3,
            CognitiveFunction.DECISION_MAKING: 2e-3,
            CognitiveFunction.ACTION_EXECUTION: 1e-3,
        }
    )
    multipliers: dict[str, dict[PifLevel, float]] = field(default_factory=_default_multipliers)
    thresholds: AssessorThresholds = field(default_factory=AssessorThresholds)

    def __post_init__(self) -> None:
        for fn, hep in self.base_hep.items():
            if not 0.0 < hep < 1.0:
                raise ValueError(f"base HEP for {fn.value} must be in (0, 1): {hep}")
        for pif, table in self.multipliers.items():
            if table.get(PifLevel.NOMINAL, 1.0) != 1.0:
                raise ValueError(f"nominal multiplier for {pif} must be 1")
            for level, factor in table.items():
                if factor < 1.0:
                    raise ValueError(f"multiplier ({pif}, {level.value}) must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "RiskModelConfig":
        base = {
            CognitiveFunction(name): float(value)
            for name, value in data.get("base_hep", {}).items()
        } or None
        multipliers = None
        if "multipliers" in data:
            multipliers = {}
            for pif, table in data["multipliers"].items():
                row = {PifLevel(level): float(v) for level, v in table.items()}
                row.setdefault(PifLevel.NOMINAL, 1.0)
                multipliers[pif] = row
        thresholds = (
            AssessorThresholds(**data["assessor"]) if "assessor" in data else None
        )
        kwargs = {}
        if base is not None:
            kwargs["base_hep"] = base
        if multipliers is not None:
            kwargs["multipliers"] = multipliers
        if thresholds is not None:
            kwargs["thresholds"] = thresholds
        return cls(**kwargs)


class PifAssessor(Protocol):
    """Anything able to grade PIF severities for a step in context.

    ``deadline_s`` is an upper bound the caller is willing to wait; the
    deterministic default ignores it, a remote assessor must honor it.
    """

    def assess(
        self,
        step: ProcedureStep,
        path: ExecutionPath,
        workload_score: float,
        time_pressure_ratio: float,
        deadline_s: float | None = None,
    ) -> PIFState: ...


class TableAssessor:
    """Deterministic threshold rules over path size, targets, load and pressure."""

    def __init__(self, thresholds: AssessorThresholds | None = None) -> None:
        self.thresholds = thresholds or AssessorThresholds()

    def assess(
        self,
        step: ProcedureStep,
        path: ExecutionPath,
        workload_score: float,
        time_pressure_ratio: float,
        deadline_s: float | None = None,
    ) -> PIFState:
        t = self.thresholds

        def graded(value: float, moderate: float, high: float) -> PifLevel:
            if value >= high:
                return PifLevel.HIGH
            if value >= moderate:
                return PifLevel.MODERATE
            return PifLevel.NOMINAL

        # A parameter check without stated expectations forces the operator
        # to fetch acceptance limits from elsewhere.
        info = (
            PifLevel.MODERATE
            if step.kind in (StepKind.PARAMETER_CHECK, StepKind.CHECKLIST)
            and not step.expected_states
            else PifLevel.NOMINAL
        )
        return PIFState(
            levels={
                "information_completeness": info,
                "hsi_complexity": graded(len(path.nodes), t.hsi_moderate_nodes, t.hsi_high_nodes),
                "task_complexity": graded(
                    len(step.targets), t.task_moderate_targets, t.task_high_targets
                ),
                "workload": graded(workload_score, t.workload_moderate, t.workload_high),
                "time_pressure": graded(
                    time_pressure_ratio, t.time_pressure_moderate, t.time_pressure_high
                ),
            }
        )


def assess_pifs(
    step: ProcedureStep,
    path: ExecutionPath,
    workload_score: float,
    time_pressure_ratio: float,
    thresholds: AssessorThresholds | None = None,
) -> PIFState:
    """Grade PIF severities with the default table-driven assessor."""
    return TableAssessor(thresholds).assess(step, path, workload_score, time_pressure_ratio)


def function_failure_probability(
    function: CognitiveFunction, pif_state: PIFState, config: RiskModelConfig
) -> float:
    if function not in config.base_hep:
        raise MissingFunctionConfigError(f"no base HEP configured for {function.value}")
    h = config.base_hep[function]
    for pif, level in pif_state.levels.items():
        table = config.multipliers.get(pif)
        if table is None:
            continue
        h *= table.get(level, 1.0)
    return min(h, 1.0)


def p_c(
    step: ProcedureStep, pif_state: PIFState, config: RiskModelConfig
) -> float:
    """Contextual failure probability across the step's engaged functions."""
    survival = 1.0
    for function in ENGAGEMENT[step.kind]:
        survival *= 1.0 - function_failure_probability(function, pif_state, config)
    return 1.0 - survival


def severity_rank(level: PifLevel) -> int:
    return _LEVEL_ORDER[level]
