"""Risk-gated procedure support runtime for digital control rooms."""

from .gate import (
    GateDecision,
    GateThresholds,
    RiskAssessment,
    Verdict,
    build_network,
    decide,
    default_gate_config,
    fuse_step_hep,
    infer,
    systemic_hep,
)
from .interface_graph import (
    EdgeAction,
    ElementKind,
    InterfaceElement,
    InterfaceGraph,
    NavigationEdge,
    load_graph,
)
from .operator_model import (
    LoadContext,
    PrimitiveAction,
    PrimitiveKind,
    TimeEstimate,
    TimingConfig,
    WorkloadVector,
    aggregate_workload,
    compile_primitives,
    estimate_median,
    p_t,
    predict_workload,
)
from .perception import (
    EventLabel,
    EventSignature,
    NominalStats,
    TelemetryFrame,
    detect,
    ingest,
    window_features,
)
from .procedures import (
    ChecklistItem,
    ExecutionPath,
    Lifecycle,
    ProcedureStep,
    StepKind,
    ValveState,
    compile_step,
    mark_executed,
    mark_intended,
    parse_procedure,
    verify_checklist,
)
from .risk import (
    CognitiveFunction,
    PIFState,
    PifLevel,
    RiskModelConfig,
    TableAssessor,
    assess_pifs,
    p_c,
)
from .runtime import Runtime, RunMode, ScriptedApprovals, run_replay

__version__ = "0.1.0"
