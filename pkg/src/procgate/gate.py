"""Safety gate: Bayesian risk fusion and the Allow/Suggest/Block policy.

A small discrete Bayesian network (default: four root factors feeding one
binary ActionRisk node) fuses time pressure, cognitive load, PIF severity
and confusion into an Action Risk Probability. Inference is exact, by
enumeration; networks here are tiny by construction (<= a dozen nodes).

Per-step failure probabilities combine under independence:

    step_hep = 1 - (1 - p_t)(1 - p_c)
    systemic = 1 - prod(1 - hep_i)

The independence assumption is deliberately isolated in these two
functions so an alternative coupling can replace them wholesale.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from .errors import (
    CyclicTopologyError,
    InvalidThresholdsError,
    UnknownNodeError,
    UnknownStateError,
    UnnormalizedCptError,
)

CPT_TOLERANCE = 1e-9


@dataclass
class BayesNode:
    """One discrete node: ordered states, ordered parents, CPT rows.

    The CPT maps each parent-state combination (joined with commas, in
    parent order; empty string for roots) to a distribution over states.
    """

    name: str
    states: list[str]
    parents: list[str] = field(default_factory=list)
    cpt: dict[str, list[float]] = field(default_factory=dict)


class BayesNetwork:
    """Validated acyclic network with normalized CPTs; immutable after build."""

    def __init__(self, nodes: list[BayesNode]) -> None:
        self.nodes: dict[str, BayesNode] = {}
        for node in nodes:
            if node.name in self.nodes:
                raise CyclicTopologyError(f"duplicate node name {node.name!r}")
            self.nodes[node.name] = node
        self._order = self._topological_order()
        self._validate_cpts()

    def _topological_order(self) -> list[str]:
        for node in self.nodes.values():
            for parent in node.parents:
                if parent not in self.nodes:
                    raise UnknownNodeError(
                        f"node {node.name!r} references unknown parent {parent!r}"
                    )
        order: list[str] = []
        state: dict[str, int] = {}  # 0 unseen, 1 visiting, 2 done

        def visit(name: str) -> None:
            mark = state.get(name, 0)
            if mark == 1:
                raise CyclicTopologyError(f"cycle through node {name!r}")
            if mark == 2:
                return
            state[name] = 1
            for parent in self.nodes[name].parents:
                visit(parent)
            state[name] = 2
            order.append(name)

        for name in self.nodes:
            visit(name)
        return order

    def _validate_cpts(self) -> None:
        for node in self.nodes.values():
            if len(node.states) < 2:
                raise UnnormalizedCptError(f"node {node.name!r} needs >= 2 states")
            expected_rows = [
                ",".join(combo)
                for combo in itertools.product(
                    *(self.nodes[p].states for p in node.parents)
                )
            ] or [""]
            for key in expected_rows:
                row = node.cpt.get(key)
                if row is None:
                    raise UnnormalizedCptError(
                        f"node {node.name!r} missing CPT row for parents ({key or 'none'})"
                    )
                if len(row) != len(node.states):
                    raise UnnormalizedCptError(
                        f"node {node.name!r} row ({key or 'none'}) has {len(row)} entries, "
                        f"expected {len(node.states)}"
                    )
                if any(p < 0 for p in row) or abs(sum(row) - 1.0) > CPT_TOLERANCE:
                    raise UnnormalizedCptError(
                        f"node {node.name!r} row ({key or 'none'}) sums to {sum(row)!r}"
                    )

    # -- inference --------------------------------------------------------

    def _check_evidence(self, evidence: dict[str, str]) -> None:
        for name, state in evidence.items():
            if name not in self.nodes:
                raise UnknownNodeError(f"evidence names unknown node {name!r}")
            if state not in self.nodes[name].states:
                raise UnknownStateError(
                    f"node {name!r} has no state {state!r} (states: {self.nodes[name].states})"
                )

    def _local_probability(self, name: str, assignment: dict[str, str]) -> float:
        node = self.nodes[name]
        key = ",".join(assignment[p] for p in node.parents)
        row = node.cpt[key]
        return row[node.states.index(assignment[name])]

    def _enumerate_all(self, names: list[str], assignment: dict[str, str]) -> float:
        if not names:
            return 1.0
        first, rest = names[0], names[1:]
        if first in assignment:
            return self._local_probability(first, assignment) * self._enumerate_all(
                rest, assignment
            )
        total = 0.0
        for state in self.nodes[first].states:
            assignment[first] = state
            total += self._local_probability(first, assignment) * self._enumerate_all(
                rest, assignment
            )
        del assignment[first]
        return total

    def posterior(self, query: str, evidence: dict[str, str]) -> dict[str, float]:
        """Exact posterior distribution of one node given evidence."""
        if query not in self.nodes:
            raise UnknownNodeError(f"unknown query node {query!r}")
        self._check_evidence(evidence)
        if query in evidence:
            return {
                state: 1.0 if state == evidence[query] else 0.0
                for state in self.nodes[query].states
            }
        weights: dict[str, float] = {}
        for state in self.nodes[query].states:
            assignment = dict(evidence)
            assignment[query] = state
            weights[state] = self._enumerate_all(list(self._order), assignment)
        total = sum(weights.values())
        if total <= 0.0:
            raise UnknownStateError("evidence has zero probability under this network")
        return {state: weight / total for state, weight in weights.items()}


def build_network(config: dict) -> BayesNetwork:
    """Build a validated network from a config dict (see the JSON schema)."""
    nodes = [
        BayesNode(
            name=raw["name"],
            states=list(raw["states"]),
            parents=list(raw.get("parents", [])),
            cpt={key: [float(v) for v in row] for key, row in raw["cpt"].items()},
        )
        for raw in config["nodes"]
    ]
    return BayesNetwork(nodes)


RISK_NODE = "ActionRisk"
RISK_HIGH = "high"


def infer(network: BayesNetwork, evidence: dict[str, str]) -> float:
    """Posterior probability that ActionRisk is high, given the evidence."""
    return network.posterior(RISK_NODE, evidence)[RISK_HIGH]


def default_gate_config(
    weights: dict[str, float] | None = None,
    leak: float = 5e-4,
    priors: dict[str, float] | None = None,
) -> dict:
    """Default 5-node topology with noisy-OR rows for the ActionRisk child.

    Each active parent independently contributes its weight to the chance
    of high risk; ``leak`` is the residual risk with everything quiet.
    """
    weights = weights or {
        "TimePressure": 0.03,
        "CognitiveLoad": 0.02,
        "PIFSeverity": 0.04,
        "Confusion": 0.25,
    }
    priors = priors or {
        "TimePressure": 0.10,
        "CognitiveLoad": 0.15,
        "PIFSeverity": 0.10,
        "Confusion": 0.02,
    }
    active_state = {
        "TimePressure": "high",
        "CognitiveLoad": "high",
        "PIFSeverity": "high",
        "Confusion": "true",
    }
    parent_states = {
        "TimePressure": ["low", "high"],
        "CognitiveLoad": ["low", "high"],
        "PIFSeverity": ["low", "high"],
        "Confusion": ["false", "true"],
    }
    parents = list(weights)
    nodes = [
        {
            "name": name,
            "states": parent_states[name],
            "parents": [],
            "cpt": {"": [1.0 - priors[name], priors[name]]},
        }
        for name in parents
    ]
    cpt = {}
    for combo in itertools.product(*(parent_states[p] for p in parents)):
        survive = 1.0 - leak
        for parent, state in zip(parents, combo):
            if state == active_state[parent]:
                survive *= 1.0 - weights[parent]
        cpt[",".join(combo)] = [survive, 1.0 - survive]
    nodes.append(
        {"name": RISK_NODE, "states": ["low", "high"], "parents": parents, "cpt": cpt}
    )
    return {"nodes": nodes}


# -- fusion ---------------------------------------------------------------

def fuse_step_hep(p_t: float, p_c: float) -> float:
    """Couple the time-based and cognition-based failure probabilities."""
    for name, value in (("p_t", p_t), ("p_c", p_c)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name} must be in [0, 1]: {value}")
    return 1.0 - (1.0 - p_t) * (1.0 - p_c)


def systemic_hep(step_heps: list[float]) -> float:
    """Procedure-level failure probability across completed steps."""
    survival = 1.0
    for hep in step_heps:
        if not 0.0 <= hep <= 1.0:
            raise ValueError(f"step HEP must be in [0, 1]: {hep}")
        survival *= 1.0 - hep
    return 1.0 - survival


# -- decisions --------------------------------------------------------------

class Verdict(str, Enum):
    ALLOW = "Allow"
    SUGGEST = "Suggest"
    BLOCK = "Block"


VERDICT_SEVERITY = {Verdict.ALLOW: 0, Verdict.SUGGEST: 1, Verdict.BLOCK: 2}


@dataclass(frozen=True)
class GateThresholds:
    allow_below: float = 1e-3
    suggest_below: float = 5e-2

    def __post_init__(self) -> None:
        if not 0.0 < self.allow_below <= self.suggest_below <= 1.0:
            raise InvalidThresholdsError(
                f"need 0 < allow_below <= suggest_below <= 1, "
                f"got ({self.allow_below}, {self.suggest_below})"
            )


@dataclass(frozen=True)
class GateDecision:
    verdict: Verdict
    explanation: tuple[dict, ...]
    approval_required: bool

    def __post_init__(self) -> None:
        if self.verdict is not Verdict.ALLOW and not self.explanation:
            raise ValueError(f"{self.verdict.value} decisions require an explanation")


@dataclass(frozen=True)
class RiskAssessment:
    """Everything the gate knew about one step at decision time."""

    step_id: str
    p_t: float
    p_c: float
    step_hep: float
    workload_score: float
    confusion: bool
    action_risk: float
    decision: GateDecision

    def __post_init__(self) -> None:
        for name in ("p_t", "p_c", "step_hep", "action_risk"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]: {value}")
        if abs(self.step_hep - fuse_step_hep(self.p_t, self.p_c)) > 1e-12:
            raise ValueError("step_hep must equal the p_t/p_c fusion")

    def to_dict(self) -> dict:
        return {
            "step_id": self.step_id,
            "p_t": self.p_t,
            "p_c": self.p_c,
            "step_hep": self.step_hep,
            "workload_score": self.workload_score,
            "confusion": self.confusion,
            "action_risk": self.action_risk,
            "verdict": self.decision.verdict.value,
            "approval_required": self.decision.approval_required,
            "explanation": list(self.decision.explanation),
        }


def decide(
    action_risk: float,
    thresholds: GateThresholds = GateThresholds(),
    factors: tuple[dict, ...] = (),
) -> GateDecision:
    """Map an action risk probability to a gate verdict.

    ``factors`` carries contributing evidence assembled by the caller
    (PIF levels, p_t, p_c, BN evidence states); the threshold comparison
    itself is always appended so every decision is self-explanatory.
    """
    if not 0.0 <= action_risk <= 1.0:
        raise ValueError(f"action_risk must be in [0, 1]: {action_risk}")
    if action_risk < thresholds.allow_below:
        verdict = Verdict.ALLOW
    elif action_risk < thresholds.suggest_below:
        verdict = Verdict.SUGGEST
    else:
        verdict = Verdict.BLOCK
    explanation = tuple(factors) + (
        {
            "factor": "action_risk",
            "value": action_risk,
            "allow_below": thresholds.allow_below,
            "suggest_below": thresholds.suggest_below,
        },
    )
    return GateDecision(
        verdict=verdict,
        explanation=explanation,
        approval_required=verdict is not Verdict.ALLOW,
    )
