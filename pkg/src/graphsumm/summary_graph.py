"""Mutable supergraph over a partition of an undirected graph's vertices.

Every supernode knows how many original vertices it holds (``size_n``), how
many original edges lie entirely inside it (``internal_e``), and a cached
real number ``d_value`` = sum over neighbors i of cross_e(a,i)^2 / size_n(i).
The cache is what makes per-pair scoring and per-node weighting constant
time; it is maintained incrementally on every merge and only ever recomputed
from scratch by the validation helpers.

A superedge is stored once and shared by both endpoints' adjacency maps, so
updating the multiplicity (or dropping the edge) on one side is automatically
visible from the other side without scanning anybody's list.
"""

from __future__ import annotations

from typing import Iterable, Iterator


class SuperNode:
    """One class of the vertex partition."""

    __slots__ = ("id", "size_n", "internal_e", "d_value", "members", "alive")

    def __init__(self, node_id: int, size_n: int = 1, internal_e: int = 0,
                 d_value: float = 0.0, members: set | None = None):
        self.id = node_id
        self.size_n = size_n
        self.internal_e = internal_e
        self.d_value = d_value
        self.members = members
        self.alive = True

    def __repr__(self):
        return (f"SuperNode(id={self.id}, n={self.size_n}, e={self.internal_e}, "
                f"alive={self.alive})")


class SuperEdge:
    """Undirected superedge; one object shared by both endpoints' adjacency maps.

    Sharing is what replaces an explicit mirror pointer: ``g.adj[a][b]`` and
    ``g.adj[b][a]`` are the same object, so the symmetric view can never drift.
    """

    __slots__ = ("a", "b", "cross_e")

    def __init__(self, a: int, b: int, cross_e: int):
        self.a = a
        self.b = b
        self.cross_e = cross_e

    def other(self, node_id: int) -> int:
        return self.b if node_id == self.a else self.a

    def __repr__(self):
        return f"SuperEdge({self.a}, {self.b}, cross_e={self.cross_e})"


class SummaryGraph:
    """The evolving supergraph.

    Thread contract: ``merge`` is the only mutator and requires exclusive
    access; read-only operations (``neighbors``, score inputs) may run
    concurrently in between merges.
    """

    def __init__(self):
        self.nodes: dict[int, SuperNode] = {}
        self.adj: dict[int, dict[int, SuperEdge]] = {}
        self.alive_count = 0
        self.original_vertex_count = 0
        self.original_edge_count = 0
        self._next_id = 0
        # Adjacency entries read or removed by the most recent merge; the
        # count excludes creation of the merged node's new entries so that
        # 2*(deg(a)+deg(b)) is the right yardstick for the merge cost.
        self.last_merge_touched = 0

    # ------------------------------------------------------------------
    # construction

    @classmethod
    def from_edge_list(cls, edges: Iterable[tuple[int, int]],
                       retain_members: bool = False) -> "SummaryGraph":
        """Build the identity summary: one singleton supernode per vertex.

        Duplicate edges (in either orientation) and self-loops are dropped.
        ``retain_members`` keeps per-supernode vertex sets, which the
        evaluation queries need; the summarization loop itself does not.
        """
        edges = list(edges)
        if not edges:
            raise ValueError("empty graph")
        g = cls()
        nodes = g.nodes
        adj = g.adj
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u < 0 or v < 0:
                raise ValueError(f"negative vertex id in edge ({u}, {v})")
            for w in (u, v):
                if w not in nodes:
                    nodes[w] = SuperNode(w, members={w} if retain_members else None)
                    adj[w] = {}
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in seen:
                continue
            seen.add(key)
            edge = SuperEdge(key[0], key[1], 1)
            adj[u][v] = edge
            adj[v][u] = edge
        for w, node in nodes.items():
            node.d_value = float(len(adj[w]))  # singleton terms are 1^2/1 each
        g.alive_count = len(nodes)
        g.original_vertex_count = len(nodes)
        g.original_edge_count = len(seen)
        g._next_id = max(nodes) + 1
        return g

    # ------------------------------------------------------------------
    # queries

    def is_alive(self, a: int) -> bool:
        node = self.nodes.get(a)
        return node is not None and node.alive

    def alive_ids(self) -> Iterator[int]:
        return (i for i, node in self.nodes.items() if node.alive)

    def degree(self, a: int) -> int:
        return len(self.adj[a])

    def cross_count(self, a: int, b: int) -> int:
        """Superedge multiplicity between a and b, 0 when absent."""
        edge = self.adj[a].get(b)
        return edge.cross_e if edge is not None else 0

    def neighbors(self, a: int) -> Iterator[tuple[int, int]]:
        """Yield (neighbor id, cross edge count) for an alive node."""
        node = self.nodes.get(a)
        if node is None or not node.alive:
            raise ValueError(f"node {a} is dead or unknown")
        return ((x, edge.cross_e) for x, edge in self.adj[a].items())

    # ------------------------------------------------------------------
    # mutation

    def merge(self, a: int, b: int) -> int:
        """Collapse supernodes a and b into a new supernode; return its id.

        Work is proportional to deg(a) + deg(b): both adjacency lists are
        coalesced through one scratch map, neighbor-side entries are removed
        by key (the shared-edge analogue of a mirror pointer), and every
        affected d_value is patched incrementally.
        """
        node_a = self.nodes.get(a)
        node_b = self.nodes.get(b)
        if (a == b or node_a is None or node_b is None
                or not node_a.alive or not node_b.alive):
            raise ValueError("invalid merge pair")
        nodes = self.nodes
        adj = self.adj
        adj_a = adj[a]
        adj_b = adj[b]
        size_a = node_a.size_n
        size_b = node_b.size_n
        size_z = size_a + size_b
        pair_edge = adj_a.get(b)
        e_ab = pair_edge.cross_e if pair_edge is not None else 0

        touched = 0
        new_cross: dict[int, int] = {}
        for x, edge in adj_a.items():
            touched += 1
            if x == b:
                continue
            e_ax = edge.cross_e
            new_cross[x] = e_ax
            nodes[x].d_value -= e_ax * e_ax / size_a
            del adj[x][a]
            touched += 1
        for x, edge in adj_b.items():
            touched += 1
            if x == a:
                continue
            e_bx = edge.cross_e
            new_cross[x] = new_cross.get(x, 0) + e_bx
            nodes[x].d_value -= e_bx * e_bx / size_b
            del adj[x][b]
            touched += 1

        z = self._next_id
        self._next_id += 1
        members = None
        if node_a.members is not None:
            members = node_a.members | node_b.members
        node_z = SuperNode(z, size_z, node_a.internal_e + node_b.internal_e + e_ab,
                           0.0, members)
        nodes[z] = node_z
        adj_z: dict[int, SuperEdge] = {}
        adj[z] = adj_z
        d_z = 0.0
        for x, e_zx in new_cross.items():
            edge = SuperEdge(z, x, e_zx)
            adj_z[x] = edge
            adj[x][z] = edge
            nodes[x].d_value += e_zx * e_zx / size_z
            d_z += e_zx * e_zx / nodes[x].size_n
        node_z.d_value = d_z

        node_a.alive = False
        node_b.alive = False
        node_a.members = None
        node_b.members = None
        node_a.d_value = 0.0
        node_b.d_value = 0.0
        del adj[a]
        del adj[b]
        self.alive_count -= 1
        self.last_merge_touched = touched
        return z

    # ------------------------------------------------------------------
    # copying and validation

    def copy(self) -> "SummaryGraph":
        """Deep copy preserving ids and the shared-edge structure."""
        g = SummaryGraph()
        g.alive_count = self.alive_count
        g.original_vertex_count = self.original_vertex_count
        g.original_edge_count = self.original_edge_count
        g._next_id = self._next_id
        for i, node in self.nodes.items():
            members = set(node.members) if node.members is not None else None
            clone = SuperNode(i, node.size_n, node.internal_e, node.d_value, members)
            clone.alive = node.alive
            g.nodes[i] = clone
        for a, entries in self.adj.items():
            g.adj[a] = {}
        for a, entries in self.adj.items():
            for x, edge in entries.items():
                if x < a:
                    continue
                clone = SuperEdge(edge.a, edge.b, edge.cross_e)
                g.adj[a][x] = clone
                g.adj[x][a] = clone
        return g

    def recomputed_d_value(self, a: int) -> float:
        """From-scratch d_value; validation only, never used by the loop."""
        return sum(edge.cross_e ** 2 / self.nodes[x].size_n
                   for x, edge in self.adj[a].items())

    def validate(self, rel_tol: float = 1e-9) -> None:
        """Check every structural invariant; raises AssertionError on failure."""
        alive = [node for node in self.nodes.values() if node.alive]
        assert len(alive) == self.alive_count, "alive_count out of sync"
        assert sum(node.size_n for node in alive) == self.original_vertex_count, \
            "supernode sizes do not partition the vertex set"
        internal_total = 0
        cross_total = 0
        for node in alive:
            a = node.id
            pairs = node.size_n * (node.size_n - 1) // 2
            assert 0 <= node.internal_e <= pairs, f"internal_e bound violated at {a}"
            internal_total += node.internal_e
            for x, edge in self.adj[a].items():
                other = self.nodes[x]
                assert other.alive, f"edge {a}-{x} points at a dead node"
                assert self.adj[x][a] is edge, f"mirror broken for {a}-{x}"
                assert {edge.a, edge.b} == {a, x}, f"edge endpoints wrong for {a}-{x}"
                assert 1 <= edge.cross_e <= node.size_n * other.size_n, \
                    f"cross_e bound violated for {a}-{x}"
                if x > a:
                    cross_total += edge.cross_e
            expect = self.recomputed_d_value(a)
            assert abs(node.d_value - expect) <= rel_tol * max(1.0, abs(expect)), \
                f"d_value drift at {a}: stored {node.d_value}, recomputed {expect}"
        assert internal_total + cross_total == self.original_edge_count, \
            "edge conservation violated"
