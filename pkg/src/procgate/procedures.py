"""Procedure documents: parsing, path compilation, step lifecycle, checklists.

Procedure files are line oriented and deliberately dumb to keep fixtures
diffable::

    [STEP NAV-1 screen_navigation] Check the drain line valve states.
    target: Screen Lookup
    target: Reactor
    expect: LBH10AA101=Closed

Blank lines and ``#`` comments are ignored. Each step compiles against an
interface graph into an ordered, coordinate-grounded execution path.

Lifecycle follows the two-step verification discipline: a step is marked
Intended while the operator reads it and Executed only afterwards, and no
sequence of calls can reach Executed without passing through Intended.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    AmbiguousTargetError,
    DuplicateStepError,
    LifecycleViolation,
    MalformedStepError,
    UnresolvableTargetError,
)
from .interface_graph import EdgeAction, InterfaceGraph


class StepKind(str, Enum):
    FLOWCHART_EXECUTION = "flowchart_execution"
    SCREEN_NAVIGATION = "screen_navigation"
    TOP_LEFT_TOGGLE = "top_left_toggle"
    PARAMETER_CHECK = "parameter_check"
    CHECKLIST = "checklist"


class Lifecycle(str, Enum):
    PENDING = "Pending"
    INTENDED = "Intended"
    EXECUTED = "Executed"


class ValveState(str, Enum):
    OPEN = "Open"
    CLOSED = "Closed"
    AUTO = "Auto"


@dataclass
class ProcedureStep:
    id: str
    kind: StepKind
    text: str
    targets: list[str] = field(default_factory=list)
    expected_states: dict[str, ValveState] = field(default_factory=dict)
    lifecycle: Lifecycle = Lifecycle.PENDING


@dataclass(frozen=True)
class PathNode:
    element_id: str
    x: int
    y: int
    action: EdgeAction


@dataclass
class ExecutionPath:
    step_id: str
    nodes: list[PathNode]
    multi_action: bool


@dataclass
class ChecklistItem:
    index: int
    valve_code: str
    valve_name: str
    expected: ValveState
    actual: ValveState | None = None


@dataclass(frozen=True)
class ChecklistMismatch:
    valve_code: str
    expected: ValveState
    observed: ValveState | None  # None when no observation arrived at all


# -- parsing -----------------------------------------------------------------

def parse_procedure(document: str) -> list[ProcedureStep]:
    """Parse a procedure document into ordered steps, all Pending.

    Raises MalformedStepError for broken headers, unknown kinds, stray
    directives or a non-checklist step without targets; DuplicateStepError
    when a step id repeats.
    """
    steps: list[ProcedureStep] = []
    seen: set[str] = set()
    current: ProcedureStep | None = None

    def close(step: ProcedureStep | None) -> None:
        if step is None:
            return
        if not step.targets and step.kind is not StepKind.CHECKLIST:
            raise MalformedStepError(f"step {step.id!r} has no targets")
        steps.append(step)

    for lineno, raw in enumerate(document.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[STEP"):
            close(current)
            header, _, text = line.partition("]")
            parts = header[1:].split()
            if len(parts) != 3 or not text.strip():
                raise MalformedStepError(f"line {lineno}: bad step header {line!r}")
            _, step_id, kind_name = parts
            try:
                kind = StepKind(kind_name)
            except ValueError:
                raise MalformedStepError(
                    f"line {lineno}: unknown step kind {kind_name!r}"
                ) from None
            if step_id in seen:
                raise DuplicateStepError(f"line {lineno}: duplicate step id {step_id!r}")
            seen.add(step_id)
            current = ProcedureStep(id=step_id, kind=kind, text=text.strip())
        elif line.startswith("target:"):
            if current is None:
                raise MalformedStepError(f"line {lineno}: target outside a step block")
            target = line[len("target:"):].strip()
            if not target:
                raise MalformedStepError(f"line {lineno}: empty target")
            current.targets.append(target)
        elif line.startswith("expect:"):
            if current is None:
                raise MalformedStepError(f"line {lineno}: expect outside a step block")
            code, sep, state = line[len("expect:"):].strip().partition("=")
            if not sep or not code.strip():
                raise MalformedStepError(f"line {lineno}: bad expect line {line!r}")
            try:
                current.expected_states[code.strip()] = ValveState(state.strip())
            except ValueError:
                raise MalformedStepError(
                    f"line {lineno}: unknown state {state.strip()!r}"
                ) from None
        else:
            raise MalformedStepError(f"line {lineno}: unrecognized line {line!r}")
    close(current)
    return steps


# -- compilation --------------------------------------------------------------

def _resolve_target(target: str, graph: InterfaceGraph) -> str:
    exact = [el.id for el in graph.elements() if el.id == target or el.label == target]
    if len(set(exact)) == 1:
        return exact[0]
    if len(set(exact)) > 1:
        raise AmbiguousTargetError(f"target {target!r} matches several elements exactly")
    folded = target.casefold()
    loose = sorted(
        {el.id for el in graph.elements()
         if el.id.casefold() == folded or el.label.casefold() == folded}
    )
    if len(loose) == 1:
        return loose[0]
    if len(loose) > 1:
        raise AmbiguousTargetError(
            f"target {target!r} matches {len(loose)} elements case-insensitively: {loose}"
        )
    raise UnresolvableTargetError(f"target {target!r} matches no graph element")


def compile_step(step: ProcedureStep, graph: InterfaceGraph) -> ExecutionPath:
    """Ground a step's targets into an ordered execution path over the graph.

    Targets resolve by exact id/label match first, then by a unique
    case-insensitive match. The path concatenates shortest routes through
    the targets in order, collapsing consecutive repeats; a node's action
    is the action of the edge used to reach it (entry node counts as a
    click).
    """
    ids = [_resolve_target(t, graph) for t in step.targets]
    sequence: list[str] = []
    for idx, element_id in enumerate(ids):
        hop = [element_id] if idx == 0 else graph.resolve_path(sequence[-1], element_id)
        for node_id in hop:
            if sequence and sequence[-1] == node_id:
                continue
            sequence.append(node_id)
    nodes: list[PathNode] = []
    for idx, element_id in enumerate(sequence):
        el = graph.element(element_id)
        if idx == 0:
            action = EdgeAction.CLICK
        else:
            edge = graph.edge_between(sequence[idx - 1], element_id)
            action = edge.action if edge else EdgeAction.NAVIGATE
        nodes.append(PathNode(element_id=el.id, x=el.x, y=el.y, action=action))
    return ExecutionPath(step_id=step.id, nodes=nodes, multi_action=len(nodes) > 1)


# -- lifecycle ----------------------------------------------------------------

def mark_intended(step: ProcedureStep) -> ProcedureStep:
    if step.lifecycle is not Lifecycle.PENDING:
        raise LifecycleViolation(
            f"step {step.id!r}: cannot mark intended from {step.lifecycle.value}"
        )
    step.lifecycle = Lifecycle.INTENDED
    return step


def mark_executed(step: ProcedureStep) -> ProcedureStep:
    if step.lifecycle is not Lifecycle.INTENDED:
        raise LifecycleViolation(
            f"step {step.id!r}: cannot mark executed from {step.lifecycle.value}"
        )
    step.lifecycle = Lifecycle.EXECUTED
    return step


# -- checklists ----------------------------------------------------------------

def load_checklist(path) -> list[ChecklistItem]:
    """Read a checklist CSV with columns index, valve_code, valve_name, expected."""
    items: list[ChecklistItem] = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            items.append(
                ChecklistItem(
                    index=int(row["index"]),
                    valve_code=row["valve_code"].strip(),
                    valve_name=row["valve_name"].strip(),
                    expected=ValveState(row["expected"].strip()),
                )
            )
    return items


def verify_checklist(
    items: list[ChecklistItem],
    observed_states: dict[str, ValveState | str],
) -> list[ChecklistMismatch]:
    """Compare observed valve states against the checklist expectations.

    Returns one mismatch per item whose observation differs from the
    expected state or is missing entirely; an empty list is a pass.
    """
    mismatches: list[ChecklistMismatch] = []
    for item in items:
        raw = observed_states.get(item.valve_code)
        observed = ValveState(raw) if raw is not None else None
        if observed is not item.expected:
            mismatches.append(
                ChecklistMismatch(
                    valve_code=item.valve_code,
                    expected=item.expected,
                    observed=observed,
                )
            )
    return mismatches
