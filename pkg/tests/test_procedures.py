import pytest
from hypothesis import given, strategies as st

from conftest import REFERENCE_PATHS
from procgate.errors import (
    AmbiguousTargetError,
    DuplicateStepError,
    LifecycleViolation,
    MalformedStepError,
    UnresolvableTargetError,
)
from procgate.interface_graph import EdgeAction, ElementKind, InterfaceElement, InterfaceGraph
from procgate.procedures import (
    ChecklistItem,
    Lifecycle,
    ProcedureStep,
    StepKind,
    ValveState,
    compile_step,
    load_checklist,
    mark_executed,
    mark_intended,
    parse_procedure,
    verify_checklist,
)

SIMPLE_DOC = """
# comment
[STEP S-1 screen_navigation] Go somewhere.
target: A
target: B

[STEP S-2 parameter_check] Check a value.
target: B
expect: LBH10AA101=Closed
"""


def make_graph():
    g = InterfaceGraph()
    g.add_element(InterfaceElement("A", "A", ElementKind.SCREEN, 10, 10))
    g.add_element(InterfaceElement("B", "The B Button", ElementKind.BUTTON, 500, 400, parent="A"))
    g.add_element(InterfaceElement("C", "C", ElementKind.BUTTON, 700, 100, parent="A"))
    g.add_edge("A", "B", EdgeAction.CLICK)
    g.add_edge("B", "C", EdgeAction.CLICK)
    return g


class TestParse:
    def test_simple_document(self):
        steps = parse_procedure(SIMPLE_DOC)
        assert [s.id for s in steps] == ["S-1", "S-2"]
        assert steps[0].kind is StepKind.SCREEN_NAVIGATION
        assert steps[0].targets == ["A", "B"]
        assert steps[1].expected_states == {"LBH10AA101": ValveState.CLOSED}
        assert all(s.lifecycle is Lifecycle.PENDING for s in steps)

    def test_empty_document(self):
        assert parse_procedure("") == []
        assert parse_procedure("# only comments\n\n") == []

    def test_step_without_targets_is_malformed(self):
        with pytest.raises(MalformedStepError):
            parse_procedure("[STEP X screen_navigation] no targets here\n")

    def test_checklist_step_may_lack_targets(self):
        steps = parse_procedure("[STEP C checklist] container step\n")
        assert steps[0].targets == []

    def test_unknown_kind_is_malformed(self):
        with pytest.raises(MalformedStepError):
            parse_procedure("[STEP X teleport] zap\ntarget: A\n")

    def test_duplicate_id_rejected(self):
        doc = "[STEP X checklist] a\n[STEP X checklist] b\n"
        with pytest.raises(DuplicateStepError):
            parse_procedure(doc)

    def test_stray_directive_rejected(self):
        with pytest.raises(MalformedStepError):
            parse_procedure("target: floating\n")

    def test_shutdown_fixture_covers_all_path_categories(self, shutdown_procedure_text):
        steps = parse_procedure(shutdown_procedure_text)
        ids = [s.id for s in steps]
        for step_id in REFERENCE_PATHS:
            assert step_id in ids
        assert "CHK-1" in ids


class TestCompile:
    def test_single_target_single_node(self):
        step = ProcedureStep("S", StepKind.SCREEN_NAVIGATION, "go", targets=["A"])
        path = compile_step(step, make_graph())
        assert [n.element_id for n in path.nodes] == ["A"]
        assert path.multi_action is False

    def test_multi_hop_concatenation_dedupes_consecutive(self):
        step = ProcedureStep("S", StepKind.SCREEN_NAVIGATION, "go", targets=["A", "B", "C"])
        path = compile_step(step, make_graph())
        assert [n.element_id for n in path.nodes] == ["A", "B", "C"]
        assert path.multi_action is True

    def test_intermediate_hops_fill_in(self):
        step = ProcedureStep("S", StepKind.SCREEN_NAVIGATION, "go", targets=["A", "C"])
        path = compile_step(step, make_graph())
        assert [n.element_id for n in path.nodes] == ["A", "B", "C"]

    def test_label_resolution(self):
        step = ProcedureStep("S", StepKind.SCREEN_NAVIGATION, "go", targets=["The B Button"])
        path = compile_step(step, make_graph())
        assert path.nodes[0].element_id == "B"

    def test_case_insensitive_fallback(self):
        step = ProcedureStep("S", StepKind.SCREEN_NAVIGATION, "go", targets=["the b button"])
        assert compile_step(step, make_graph()).nodes[0].element_id == "B"

    def test_unresolvable_target_names_the_label(self):
        step = ProcedureStep("S", StepKind.SCREEN_NAVIGATION, "go", targets=["Zorp"])
        with pytest.raises(UnresolvableTargetError, match="Zorp"):
            compile_step(step, make_graph())

    def test_ambiguous_target(self):
        g = make_graph()
        g.add_element(InterfaceElement("bb", "THE B BUTTON", ElementKind.BUTTON, 20, 20))
        step = ProcedureStep("S", StepKind.SCREEN_NAVIGATION, "go", targets=["ThE b BuTtOn"])
        with pytest.raises(AmbiguousTargetError):
            compile_step(step, g)

    def test_node_coords_match_registered_elements(self, shutdown_graph, shutdown_procedure_text):
        for step in parse_procedure(shutdown_procedure_text):
            for node in compile_step(step, shutdown_graph).nodes:
                el = shutdown_graph.element(node.element_id)
                assert (node.x, node.y) == (el.x, el.y)

    def test_compilation_is_deterministic(self, shutdown_graph, shutdown_procedure_text):
        steps_a = parse_procedure(shutdown_procedure_text)
        steps_b = parse_procedure(shutdown_procedure_text)
        for a, b in zip(steps_a, steps_b):
            assert compile_step(a, shutdown_graph) == compile_step(b, shutdown_graph)

    def test_fixture_paths_match_reference_sequences(self, shutdown_graph, shutdown_procedure_text):
        steps = {s.id: s for s in parse_procedure(shutdown_procedure_text)}
        for step_id, expected in REFERENCE_PATHS.items():
            got = [n.element_id for n in compile_step(steps[step_id], shutdown_graph).nodes]
            assert got == expected, step_id

    def test_nav1_shape(self, shutdown_graph, shutdown_procedure_text):
        steps = {s.id: s for s in parse_procedure(shutdown_procedure_text)}
        path = compile_step(steps["NAV-1"], shutdown_graph)
        assert len(path.nodes) == 12  # 11 interactions after the entry node
        assert path.nodes[0].element_id == "Screen Lookup"
        assert (path.nodes[0].x, path.nodes[0].y) == (1390, 87)
        assert path.nodes[-1].element_id == "LBH50AA101"
        assert (path.nodes[-1].x, path.nodes[-1].y) == (1508, 577)


class TestLifecycle:
    def test_happy_path(self):
        step = ProcedureStep("S", StepKind.CHECKLIST, "x")
        mark_intended(step)
        assert step.lifecycle is Lifecycle.INTENDED
        mark_executed(step)
        assert step.lifecycle is Lifecycle.EXECUTED

    def test_cannot_execute_from_pending(self):
        step = ProcedureStep("S", StepKind.CHECKLIST, "x")
        with pytest.raises(LifecycleViolation):
            mark_executed(step)

    def test_cannot_intend_twice(self):
        step = ProcedureStep("S", StepKind.CHECKLIST, "x")
        mark_intended(step)
        with pytest.raises(LifecycleViolation):
            mark_intended(step)

    @given(st.lists(st.sampled_from(["intend", "execute"]), max_size=6))
    def test_no_sequence_reaches_executed_without_intended(self, ops):
        step = ProcedureStep("S", StepKind.CHECKLIST, "x")
        passed_through_intended = False
        for op in ops:
            try:
                if op == "intend":
                    mark_intended(step)
                    passed_through_intended = True
                else:
                    mark_executed(step)
            except LifecycleViolation:
                pass
        if step.lifecycle is Lifecycle.EXECUTED:
            assert passed_through_intended


FIXTURE_EXPECTED = {
    "LBH10AA101": "Closed", "LBH10AA201": "Open", "LBH10AA102": "Closed",
    "LBH20AA101": "Closed", "LBH09AA101": "Open", "LBH30AA101": "Open",
    "LBH30AA201": "Open", "LBH50AA101": "Open", "LBF20AA201": "Auto",
    "LBF20AA101": "Open", "LBA20AA101": "Open", "LBA20AA102": "Open",
}


class TestChecklist:
    @pytest.fixture
    def items(self):
        from conftest import SHUTDOWN
        return load_checklist(SHUTDOWN / "checklist.csv")

    def test_fixture_has_twelve_items(self, items):
        assert len(items) == 12
        assert items[0].valve_code == "LBH10AA101"
        assert items[0].expected is ValveState.CLOSED
        assert items[1].valve_code == "LBH10AA201"
        assert items[1].expected is ValveState.OPEN
        assert items[8].valve_code == "LBF20AA201"
        assert items[8].expected is ValveState.AUTO

    def test_all_expected_passes(self, items):
        assert verify_checklist(items, dict(FIXTURE_EXPECTED)) == []

    def test_single_flip_reports_that_valve(self, items):
        observed = dict(FIXTURE_EXPECTED)
        observed["LBH10AA101"] = "Open"  # expected Closed
        mismatches = verify_checklist(items, observed)
        assert len(mismatches) == 1
        assert mismatches[0].valve_code == "LBH10AA101"
        assert mismatches[0].expected is ValveState.CLOSED
        assert mismatches[0].observed is ValveState.OPEN

    def test_empty_observation_reports_all_missing(self, items):
        mismatches = verify_checklist(items, {})
        assert len(mismatches) == 12
        assert all(m.observed is None for m in mismatches)

    def test_mismatch_count_never_exceeds_item_count(self, items):
        observed = {code: "Auto" for code in FIXTURE_EXPECTED}
        assert len(verify_checklist(items, observed)) <= len(items)

    @given(st.sets(st.sampled_from(sorted(FIXTURE_EXPECTED)), max_size=12))
    def test_flipped_rows_are_exactly_the_reported_rows(self, flipped):
        items = [
            ChecklistItem(i + 1, code, code, ValveState(FIXTURE_EXPECTED[code]))
            for i, code in enumerate(sorted(FIXTURE_EXPECTED))
        ]
        flip = {"Open": "Closed", "Closed": "Open", "Auto": "Open"}
        observed = {
            code: flip[FIXTURE_EXPECTED[code]] if code in flipped else FIXTURE_EXPECTED[code]
            for code in FIXTURE_EXPECTED
        }
        mismatches = verify_checklist(items, observed)
        assert {m.valve_code for m in mismatches} == flipped
