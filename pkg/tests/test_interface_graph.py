import json

import pytest
from hypothesis import given, strategies as st

from procgate.errors import (
    DuplicateElementError,
    GraphInvariantError,
    MissingParentError,
    UnknownElementError,
    UnreachableError,
    UnsupportedFormatError,
)
from procgate.interface_graph import (
    EdgeAction,
    ElementKind,
    InterfaceElement,
    InterfaceGraph,
)


def el(eid, x, y, kind=ElementKind.BUTTON, parent=None, layer=None, label=None):
    return InterfaceElement(
        id=eid, label=label or eid, kind=kind, x=x, y=y, layer=layer, parent=parent
    )


@pytest.fixture
def small_graph():
    g = InterfaceGraph()
    g.add_element(el("Screen Lookup", 1390, 87, ElementKind.LOOKUP))
    g.add_element(el("Reactor", 1393, 126, ElementKind.SCREEN, parent="Screen Lookup"))
    g.add_element(
        el("Conventional Island", 1341, 237, ElementKind.SCREEN, parent="Reactor")
    )
    g.add_edge("Screen Lookup", "Reactor", EdgeAction.LOOKUP)
    g.add_edge("Reactor", "Conventional Island", EdgeAction.NAVIGATE)
    return g


class TestAddElement:
    def test_root_gets_layer_zero(self):
        g = InterfaceGraph()
        added = g.add_element(el("Screen Lookup", 1390, 87, ElementKind.LOOKUP))
        assert added.layer == 0
        assert g.element("Screen Lookup").x == 1390

    def test_child_layer_derived_from_parent(self, small_graph):
        assert small_graph.element("Reactor").layer == 1
        assert small_graph.element("Conventional Island").layer == 2

    def test_duplicate_id_rejected(self, small_graph):
        with pytest.raises(DuplicateElementError):
            small_graph.add_element(el("Reactor", 1, 1))

    def test_missing_parent_rejected(self):
        g = InterfaceGraph()
        with pytest.raises(MissingParentError):
            g.add_element(el("orphan", 5, 5, parent="nope"))

    def test_wrong_explicit_layer_rejected(self, small_graph):
        with pytest.raises(GraphInvariantError):
            small_graph.add_element(el("bad", 5, 5, parent="Reactor", layer=7))

    def test_coords_outside_bounds_rejected(self):
        g = InterfaceGraph(bounds=(800, 600))
        with pytest.raises(GraphInvariantError):
            g.add_element(el("off", 900, 10))

    def test_self_loop_edge_rejected(self, small_graph):
        with pytest.raises(GraphInvariantError):
            small_graph.add_edge("Reactor", "Reactor", EdgeAction.CLICK)

    def test_edge_to_unknown_element_rejected(self, small_graph):
        with pytest.raises(UnknownElementError):
            small_graph.add_edge("Reactor", "ghost", EdgeAction.CLICK)


class TestResolvePath:
    def test_identity_is_single_element(self, small_graph):
        assert small_graph.resolve_path("Reactor", "Reactor") == ["Reactor"]

    def test_two_hop_chain_has_three_nodes(self, small_graph):
        path = small_graph.resolve_path("Screen Lookup", "Conventional Island")
        assert path == ["Screen Lookup", "Reactor", "Conventional Island"]

    def test_disconnected_is_unreachable(self, small_graph):
        small_graph.add_element(el("island", 10, 10))
        with pytest.raises(UnreachableError):
            small_graph.resolve_path("Screen Lookup", "island")

    def test_edges_are_directed_as_authored(self, small_graph):
        with pytest.raises(UnreachableError):
            small_graph.resolve_path("Conventional Island", "Screen Lookup")

    def test_unknown_endpoint(self, small_graph):
        with pytest.raises(UnknownElementError):
            small_graph.resolve_path("Screen Lookup", "ghost")

    def test_shortest_route_wins(self):
        g = InterfaceGraph()
        for name in "abcd":
            g.add_element(el(name, 10, 10))
        g.add_edge("a", "b", EdgeAction.CLICK)
        g.add_edge("b", "c", EdgeAction.CLICK)
        g.add_edge("c", "d", EdgeAction.CLICK)
        g.add_edge("a", "d", EdgeAction.CLICK)
        assert g.resolve_path("a", "d") == ["a", "d"]

    def test_path_is_a_valid_edge_walk(self, small_graph):
        path = small_graph.resolve_path("Screen Lookup", "Conventional Island")
        for prev, nxt in zip(path, path[1:]):
            assert small_graph.edge_between(prev, nxt) is not None


class TestElementAt:
    def test_exact_hit(self, small_graph):
        assert small_graph.element_at(1390, 87, 5) == "Screen Lookup"

    def test_far_from_everything_is_absent(self, small_graph):
        assert small_graph.element_at(5, 1000, 5) is None

    def test_equidistant_tie_goes_to_deeper_layer(self):
        g = InterfaceGraph()
        g.add_element(el("shallow", 100, 100))
        g.add_element(el("child", 100, 120, parent="shallow"))
        # query point (100, 110) is 10 px from both
        assert g.element_at(100, 110, 50) == "child"

    def test_equidistant_same_layer_tie_goes_to_smaller_id(self):
        g = InterfaceGraph()
        g.add_element(el("bbb", 100, 100))
        g.add_element(el("aaa", 100, 120))
        assert g.element_at(100, 110, 50) == "aaa"

    def test_negative_tolerance_rejected(self, small_graph):
        with pytest.raises(ValueError):
            small_graph.element_at(0, 0, -1)

    @given(
        x=st.integers(min_value=0, max_value=1920),
        y=st.integers(min_value=0, max_value=1080),
        tol=st.floats(min_value=0, max_value=3000, allow_nan=False),
    )
    def test_deterministic_under_repetition(self, x, y, tol):
        g = InterfaceGraph()
        g.add_element(el("a", 10, 10))
        g.add_element(el("b", 10, 30, parent="a"))
        g.add_element(el("c", 30, 10))
        assert g.element_at(x, y, tol) == g.element_at(x, y, tol)


class TestExport:
    def test_empty_graph_json(self):
        g = InterfaceGraph()
        doc = json.loads(g.export("json"))
        assert doc == {"elements": [], "edges": []}

    def test_json_round_trip(self, small_graph):
        restored = InterfaceGraph.from_json(small_graph.export("json"))
        assert restored == small_graph

    def test_dot_has_one_node_line_per_element(self, small_graph):
        dot = small_graph.export("dot").decode()
        node_lines = [l for l in dot.splitlines() if "[label=" in l and "->" not in l]
        assert len(node_lines) == len(small_graph)

    def test_unsupported_format(self, small_graph):
        with pytest.raises(UnsupportedFormatError):
            small_graph.export("yaml")

    @given(
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=1920),
                st.integers(min_value=0, max_value=1080),
            ),
            min_size=0,
            max_size=12,
        ),
        st.randoms(use_true_random=False),
    )
    def test_round_trip_bijection_on_random_graphs(self, coords, rnd):
        g = InterfaceGraph()
        ids = []
        for i, (x, y) in enumerate(coords):
            parent = rnd.choice(ids) if ids and rnd.random() < 0.5 else None
            g.add_element(el(f"e{i}", x, y, parent=parent))
            ids.append(f"e{i}")
        for _ in range(len(ids)):
            a, b = rnd.choice(ids), rnd.choice(ids)
            if a != b:
                g.add_edge(a, b, EdgeAction.CLICK)
        assert InterfaceGraph.from_json(g.export("json")) == g


class TestForestProperty:
    def test_parent_chain_terminates_within_max_layer(self, small_graph):
        max_layer = max(e.layer for e in small_graph.elements())
        for element in small_graph.elements():
            assert small_graph.depth_of(element.id) <= max_layer
            assert small_graph.depth_of(element.id) == element.layer


class TestShutdownFixture:
    def test_screen_lookup_hit(self, shutdown_graph):
        assert shutdown_graph.element_at(1390, 87, 5) == "Screen Lookup"

    def test_lookup_to_island_is_three_nodes(self, shutdown_graph):
        path = shutdown_graph.resolve_path("Screen Lookup", "Conventional Island")
        assert path == ["Screen Lookup", "Reactor", "Conventional Island"]

    def test_forest_holds_across_fixture(self, shutdown_graph):
        for element in shutdown_graph.elements():
            assert shutdown_graph.depth_of(element.id) == element.layer

    def test_round_trip(self, shutdown_graph):
        from procgate.interface_graph import InterfaceGraph

        assert InterfaceGraph.from_json(shutdown_graph.export("json")) == shutdown_graph
