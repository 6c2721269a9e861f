"""Interface knowledge graph: screen elements with coordinates plus navigation edges.

The graph is the ground truth for what an operator can touch on the
soft-control screens. Elements form a parent forest (screen hierarchy,
``layer`` = depth); directed edges describe how the interface is navigated.
Graphs are authored as JSON fixture files, built once, then treated as
immutable: concurrent readers are safe, mutation happens only during
construction by a single writer.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum

from .errors import (
    DuplicateElementError,
    GraphInvariantError,
    MissingParentError,
    UnknownElementError,
    UnreachableError,
    UnsupportedFormatError,
)

DEFAULT_BOUNDS = (1920, 1080)


class ElementKind(str, Enum):
    SCREEN = "screen"
    PANEL = "panel"
    BUTTON = "button"
    TOGGLE = "toggle"
    VALVE_CONTROL = "valve_control"
    INDICATOR = "indicator"
    LOOKUP = "lookup"


class EdgeAction(str, Enum):
    CLICK = "click"
    TOGGLE = "toggle"
    LOOKUP = "lookup"
    NAVIGATE = "navigate"


@dataclass
class InterfaceElement:
    """One clickable/readable element with its on-screen position.

    ``layer`` may be omitted at construction; it is derived from the parent
    when the element is added to a graph (roots sit at layer 0).
    """

    id: str
    label: str
    kind: ElementKind
    x: int
    y: int
    layer: int | None = None
    parent: str | None = None


@dataclass(frozen=True)
class NavigationEdge:
    from_id: str
    to_id: str
    action: EdgeAction


class InterfaceGraph:
    """Element store plus directed navigation edges.

    Edges are directed as authored; back-navigation exists only where an
    explicit reverse edge was added.
    """

    def __init__(self, bounds: tuple[int, int] = DEFAULT_BOUNDS) -> None:
        if bounds[0] <= 0 or bounds[1] <= 0:
            raise GraphInvariantError(f"screen bounds must be positive, got {bounds}")
        self.bounds = (int(bounds[0]), int(bounds[1]))
        self._elements: dict[str, InterfaceElement] = {}
        self._edges: list[NavigationEdge] = []
        self._adjacency: dict[str, list[NavigationEdge]] = {}

    # -- construction ---------------------------------------------------

    def add_element(self, element: InterfaceElement) -> InterfaceElement:
        """Insert an element, deriving/validating its layer from the parent."""
        if element.id in self._elements:
            raise DuplicateElementError(f"element id already present: {element.id!r}")
        if element.parent is not None:
            parent = self._elements.get(element.parent)
            if parent is None:
                raise MissingParentError(
                    f"element {element.id!r} names missing parent {element.parent!r}"
                )
            expected = parent.layer + 1  # type: ignore[operator]
        else:
            expected = 0
        if element.layer is None:
            element.layer = expected
        elif element.layer != expected:
            raise GraphInvariantError(
                f"element {element.id!r} layer {element.layer} != expected {expected}"
            )
        w, h = self.bounds
        if not (0 <= element.x <= w and 0 <= element.y <= h):
            raise GraphInvariantError(
                f"element {element.id!r} coords ({element.x}, {element.y}) "
                f"outside screen bounds {self.bounds}"
            )
        self._elements[element.id] = element
        return element

    def add_edge(self, from_id: str, to_id: str, action: EdgeAction | str) -> NavigationEdge:
        if from_id == to_id:
            raise GraphInvariantError(f"self-loop edge on {from_id!r}")
        for end in (from_id, to_id):
            if end not in self._elements:
                raise UnknownElementError(f"edge endpoint not in graph: {end!r}")
        edge = NavigationEdge(from_id, to_id, EdgeAction(action))
        self._edges.append(edge)
        self._adjacency.setdefault(from_id, []).append(edge)
        return edge

    # -- queries ----------------------------------------------------------

    def __contains__(self, element_id: str) -> bool:
        return element_id in self._elements

    def __len__(self) -> int:
        return len(self._elements)

    def element(self, element_id: str) -> InterfaceElement:
        try:
            return self._elements[element_id]
        except KeyError:
            raise UnknownElementError(f"no element with id {element_id!r}") from None

    def elements(self) -> list[InterfaceElement]:
        return list(self._elements.values())

    def edges(self) -> list[NavigationEdge]:
        return list(self._edges)

    def edge_between(self, from_id: str, to_id: str) -> NavigationEdge | None:
        """First authored edge from -> to, if any."""
        for edge in self._adjacency.get(from_id, ()):
            if edge.to_id == to_id:
                return edge
        return None

    def resolve_path(self, from_id: str, to_id: str) -> list[str]:
        """Shortest edge walk between two elements, endpoints included.

        BFS over edges in authored order, so results are deterministic for a
        given graph file. ``from_id == to_id`` yields the single-element path
        (zero edges traversed).
        """
        for end in (from_id, to_id):
            if end not in self._elements:
                raise UnknownElementError(f"no element with id {end!r}")
        if from_id == to_id:
            return [from_id]
        came_from: dict[str, str] = {}
        queue: deque[str] = deque([from_id])
        seen = {from_id}
        while queue:
            current = queue.popleft()
            for edge in self._adjacency.get(current, ()):
                nxt = edge.to_id
                if nxt in seen:
                    continue
                seen.add(nxt)
                came_from[nxt] = current
                if nxt == to_id:
                    path = [to_id]
                    while path[-1] != from_id:
                        path.append(came_from[path[-1]])
                    path.reverse()
                    return path
                queue.append(nxt)
        raise UnreachableError(f"no navigation route from {from_id!r} to {to_id!r}")

    def element_at(self, x: int, y: int, tolerance_px: float) -> str | None:
        """Nearest element within Euclidean tolerance of a point, or None.

        Exact distance ties go to the deeper layer (more specific control),
        then to the lexicographically smaller id.
        """
        if tolerance_px < 0:
            raise ValueError("tolerance_px must be >= 0")
        limit = tolerance_px * tolerance_px
        best: tuple[float, int, str] | None = None
        for el in self._elements.values():
            d2 = (el.x - x) ** 2 + (el.y - y) ** 2
            if d2 > limit:
                continue
            key = (d2, -int(el.layer or 0), el.id)
            if best is None or key < best:
                best = key
        return best[2] if best else None

    def roots(self) -> list[InterfaceElement]:
        return [el for el in self._elements.values() if el.parent is None]

    def depth_of(self, element_id: str) -> int:
        """Steps to a root following parent links (also re-checks the forest)."""
        steps = 0
        current = self.element(element_id)
        visited = {current.id}
        while current.parent is not None:
            current = self.element(current.parent)
            if current.id in visited:
                raise GraphInvariantError(f"parent cycle through {current.id!r}")
            visited.add(current.id)
            steps += 1
        return steps

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "elements": [
                {
                    "id": el.id,
                    "label": el.label,
                    "kind": el.kind.value,
                    "x": el.x,
                    "y": el.y,
                    "layer": el.layer,
                    "parent": el.parent,
                }
                for el in self._elements.values()
            ],
            "edges": [
                {"from": e.from_id, "to": e.to_id, "action": e.action.value}
                for e in self._edges
            ],
        }

    def export(self, fmt: str) -> bytes:
        """Serialize as 'json' (round-trippable) or 'dot' (visualization)."""
        if fmt == "json":
            return (json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n").encode()
        if fmt == "dot":
            lines = ["digraph interface {"]
            for el in self._elements.values():
                lines.append(
                    f'  "{el.id}" [label="{el.label}\\n({el.x}, {el.y})" layer={el.layer}];'
                )
            for e in self._edges:
                lines.append(f'  "{e.from_id}" -> "{e.to_id}" [label="{e.action.value}"];')
            lines.append("}")
            return ("\n".join(lines) + "\n").encode()
        raise UnsupportedFormatError(f"unsupported export format {fmt!r}")

    @classmethod
    def from_dict(cls, data: dict, bounds: tuple[int, int] = DEFAULT_BOUNDS) -> "InterfaceGraph":
        graph = cls(bounds=bounds)
        raw_elements = list(data.get("elements", []))
        if all(raw.get("layer") is not None for raw in raw_elements):
            # parents must exist before children; a stable sort by layer
            # makes files insertion-order independent
            raw_elements.sort(key=lambda raw: raw["layer"])
        for raw in raw_elements:
            graph.add_element(
                InterfaceElement(
                    id=raw["id"],
                    label=raw["label"],
                    kind=ElementKind(raw["kind"]),
                    x=int(raw["x"]),
                    y=int(raw["y"]),
                    layer=raw.get("layer"),
                    parent=raw.get("parent"),
                )
            )
        for raw in data.get("edges", []):
            graph.add_edge(raw["from"], raw["to"], raw["action"])
        return graph

    @classmethod
    def from_json(cls, payload: bytes | str, bounds: tuple[int, int] = DEFAULT_BOUNDS) -> "InterfaceGraph":
        if isinstance(payload, bytes):
            payload = payload.decode("utf-8")
        return cls.from_dict(json.loads(payload), bounds=bounds)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, InterfaceGraph):
            return NotImplemented
        return self._elements == other._elements and self._edges == other._edges


def load_graph(path, bounds: tuple[int, int] = DEFAULT_BOUNDS) -> InterfaceGraph:
    with open(path, "rb") as fh:
        return InterfaceGraph.from_json(fh.read(), bounds=bounds)
