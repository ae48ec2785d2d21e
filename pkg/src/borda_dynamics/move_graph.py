"""Cover graph of the weak-order lattice and the deterministic bounded step.

Two weak orders are adjacent when one arises from the other by splitting a
single indifference class into two consecutive nonempty classes (or merging
two adjacent classes, the inverse move).  The bounded step advances one edge
along a shortest path toward a target order, breaking ties by smallest
canonical id.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .weak_orders import WeakOrder, enumerate_weak_orders, format_order

_STEP_MODES = ("min-canonical-id",)


@dataclass(frozen=True)
class StepPolicy:
    """Deterministic tie-breaking for the bounded step.

    With `allow_no_move_on_ambiguity` the step stays put whenever several
    neighbors decrease the distance; by default it always moves to the
    distance-decreasing neighbor of smallest canonical id.
    """

    mode: str = "min-canonical-id"
    allow_no_move_on_ambiguity: bool = False

    def __post_init__(self):
        if self.mode not in _STEP_MODES:
            raise ValueError(f"unknown step mode {self.mode!r}")


class MoveGraph:
    """Undirected cover graph on all weak orders for a fixed m.

    Vertices are canonical ids; BFS distance rows are computed on demand and
    cached, so `distance_table` is only materialized when actually read.
    """

    def __init__(self, m: int, orders: tuple[WeakOrder, ...], adjacency: tuple[tuple[int, ...], ...]):
        self.m = m
        self.orders = orders
        self.adjacency = adjacency
        self._dist_rows: dict[int, list[int]] = {}

    @property
    def order_count(self) -> int:
        return len(self.orders)

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.adjacency) // 2

    def edges(self):
        """All edges as (i, j) id pairs with i < j, in id order."""
        for i, nb in enumerate(self.adjacency):
            for j in nb:
                if i < j:
                    yield i, j

    def degree(self, order: WeakOrder) -> int:
        return len(self.adjacency[order.canonical_id])

    def distance_row(self, source_id: int) -> list[int]:
        """BFS distances from one vertex to all vertices (cached per source)."""
        row = self._dist_rows.get(source_id)
        if row is None:
            row = [-1] * self.order_count
            row[source_id] = 0
            queue = deque([source_id])
            while queue:
                u = queue.popleft()
                for v in self.adjacency[u]:
                    if row[v] < 0:
                        row[v] = row[u] + 1
                        queue.append(v)
            self._dist_rows[source_id] = row
        return row

    def distance_ids(self, i: int, j: int) -> int:
        return self.distance_row(i)[j]

    @property
    def distance_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self.distance_row(i)) for i in range(self.order_count))

    @property
    def diameter(self) -> int:
        return max(max(self.distance_row(i)) for i in range(self.order_count))


def _splits(order: WeakOrder):
    """All orders obtained by splitting one class into two consecutive classes."""
    classes = order.classes
    for ci, cls in enumerate(classes):
        c = len(cls)
        if c < 2:
            continue
        for mask in range(1, (1 << c) - 1):
            top = tuple(cls[k] for k in range(c) if mask >> k & 1)
            bottom = tuple(cls[k] for k in range(c) if not mask >> k & 1)
            yield WeakOrder(classes[:ci] + (top, bottom) + classes[ci + 1 :])


@lru_cache(maxsize=None)
def build_cover_graph(m: int) -> MoveGraph:
    """Construct the cover graph for 2 <= m <= 6 (cached; graphs are immutable)."""
    if not 2 <= m <= 6:
        raise ValueError(f"move graph supported for 2 <= m <= 6, got {m}")
    orders = enumerate_weak_orders(m)
    neighbors: list[set[int]] = [set() for _ in orders]
    for w in orders:
        i = w.canonical_id
        for finer in _splits(w):
            j = finer.canonical_id
            neighbors[i].add(j)
            neighbors[j].add(i)
    adjacency = tuple(tuple(sorted(nb)) for nb in neighbors)
    return MoveGraph(m, orders, adjacency)


def distance(graph: MoveGraph, order1: WeakOrder, order2: WeakOrder) -> int:
    """Exact shortest-path hop count between two orders."""
    return graph.distance_ids(order1.canonical_id, order2.canonical_id)


def step(policy: StepPolicy, graph: MoveGraph, current: WeakOrder, target: WeakOrder) -> WeakOrder:
    """One bounded step from `current` toward `target`.

    Returns `current` when already at the target; otherwise moves to a
    neighbor one unit closer to the target, chosen by smallest canonical id
    (or stays put under the no-move-on-ambiguity policy when the choice is
    not unique).
    """
    a = current.canonical_id
    b = target.canonical_id
    if a == b:
        return current
    to_target = graph.distance_row(b)
    want = to_target[a] - 1
    candidates = [v for v in graph.adjacency[a] if to_target[v] == want]
    if policy.allow_no_move_on_ambiguity and len(candidates) > 1:
        return current
    return graph.orders[candidates[0]]


def geodesic_count(graph: MoveGraph, order1: WeakOrder, order2: WeakOrder) -> int:
    """Number of distinct shortest paths, counted over BFS layers."""
    a = order1.canonical_id
    b = order2.canonical_id
    dist = graph.distance_row(a)
    counts = [0] * graph.order_count
    counts[a] = 1
    for v in sorted(range(graph.order_count), key=lambda v: dist[v]):
        if v == a:
            continue
        counts[v] = sum(counts[u] for u in graph.adjacency[v] if dist[u] == dist[v] - 1)
    return counts[b]


def geodesic_unique(graph: MoveGraph, order1: WeakOrder, order2: WeakOrder) -> bool:
    """True when exactly one shortest path joins the two orders."""
    return geodesic_count(graph, order1, order2) == 1


def find_cycle(graph: MoveGraph, length: int) -> tuple[WeakOrder, ...] | None:
    """First simple cycle of exactly `length` vertices in deterministic DFS order.

    The search fixes the smallest vertex of the cycle as the start and visits
    neighbors in increasing id; returns None when no such cycle exists.
    """
    if length < 3:
        raise ValueError("cycle length must be at least 3")
    n = graph.order_count
    adjacency = graph.adjacency

    for start in range(n):
        back = graph.distance_row(start)
        path = [start]
        on_path = {start}

        def dfs() -> bool:
            last = path[-1]
            remaining = length - len(path)
            if remaining == 0:
                return start in adjacency[last]
            for v in adjacency[last]:
                # only cycles whose minimum vertex is `start`; prune vertices
                # too far from start to close the cycle in time
                if v <= start or v in on_path or back[v] > remaining:
                    continue
                path.append(v)
                on_path.add(v)
                if dfs():
                    return True
                on_path.discard(v)
                path.pop()
            return False

        if dfs():
            return tuple(graph.orders[i] for i in path)
    return None


def move_graph_to_dot(graph: MoveGraph) -> str:
    """DOT export with vertices labeled by order text, in canonical id order."""
    lines = [f"graph move_graph_m{graph.m} {{"]
    for i, w in enumerate(graph.orders):
        lines.append(f'  n{i} [label="{format_order(w)}"];')
    for i, j in graph.edges():
        lines.append(f"  n{i} -- n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
