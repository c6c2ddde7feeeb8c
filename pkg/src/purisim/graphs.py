"""Graphs, colorings, target partitions, and Pauli actions on syndrome strings.

Vertices are labeled 1..N.  Syndrome bit i of an integer-encoded bit string
corresponds to vertex i, with vertex 1 in the least significant position;
display strings read mu_1 mu_2 ... mu_N left to right.

Pauli phases are dropped throughout: states are always classical mixtures
over the graph-state basis, where only the basis relabeling matters.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass


class NotTwoColorableError(ValueError):
    """Raised when a graph contains an odd cycle."""


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with contiguous 1-based vertex labels."""

    n: int
    edges: frozenset[tuple[int, int]]
    neighborhoods: tuple[tuple[int, ...], ...]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.neighborhoods[v - 1]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.neighborhoods[v - 1])


@dataclass(frozen=True)
class TwoColoring:
    set_a: frozenset[int]
    set_b: frozenset[int]


@dataclass(frozen=True)
class TargetPartition:
    """Target vertex, its neighborhood, and the untouched remainder."""

    target: int
    neighbors: frozenset[int]
    rest: frozenset[int]


@dataclass(frozen=True)
class FlipMask:
    """Set of syndrome bits flipped by a physical Pauli (bit i-1 <-> vertex i)."""

    bits: int
    n: int

    def as_string(self) -> str:
        return "".join("1" if (self.bits >> i) & 1 else "0" for i in range(self.n))


@dataclass(frozen=True)
class Star:
    """GHZ auxiliary graph: relabeled star plus the map back to physical labels.

    Aux label 1 is always the star center (the target qubit); leaves get
    labels 2..k in ascending order of their physical labels.
    """

    graph: Graph
    center: int
    physical: tuple[int, ...]

    def aux_label(self, physical_vertex: int) -> int:
        return self.physical.index(physical_vertex) + 1


def make_graph(n: int, edge_list) -> Graph:
    """Build a Graph from an edge iterable, validating the invariants."""
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    edges = set()
    for u, v in edge_list:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise ValueError(f"edge ({u},{v}) outside 1..{n}")
        key = (min(u, v), max(u, v))
        if key in edges:
            raise ValueError(f"duplicate edge {key}")
        edges.add(key)
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u - 1].append(v)
        nbrs[v - 1].append(u)
    return Graph(
        n=n,
        edges=frozenset(edges),
        neighborhoods=tuple(tuple(sorted(ns)) for ns in nbrs),
    )


def linear_cluster(n: int) -> Graph:
    """Path graph 1-2-...-n."""
    if n < 1:
        raise ValueError(f"linear cluster needs n >= 1, got {n}")
    return make_graph(n, [(i, i + 1) for i in range(1, n)])


def grid_cluster(rows: int, cols: int) -> Graph:
    """rows x cols lattice with row-major labels and nearest-neighbor edges."""
    if rows < 1 or cols < 1:
        raise ValueError(f"grid dimensions must be positive, got {rows}x{cols}")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c + 1
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return make_graph(rows * cols, edges)


def ghz_star(center: int, leaves) -> Star:
    """Star graph on {center} | leaves, relabeled 1..k with center first."""
    leaves = sorted(set(leaves))
    if not leaves:
        raise ValueError("ghz_star needs a nonempty leaf set")
    if center in leaves:
        raise ValueError(f"center {center} cannot also be a leaf")
    physical = (center, *leaves)
    k = len(physical)
    graph = make_graph(k, [(1, j) for j in range(2, k + 1)])
    return Star(graph=graph, center=1, physical=physical)


def two_coloring(g: Graph) -> TwoColoring:
    """Deterministic bipartition: per component, lowest label starts in set A,
    colors propagate breadth-first over sorted neighborhoods."""
    color: dict[int, int] = {}
    for root in range(1, g.n + 1):
        if root in color:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.neighbors(u):
                if v not in color:
                    color[v] = color[u] ^ 1
                    queue.append(v)
                elif color[v] == color[u]:
                    raise NotTwoColorableError(
                        f"graph is not two-colorable: odd cycle through edge ({u},{v})"
                    )
    return TwoColoring(
        set_a=frozenset(v for v, c in color.items() if c == 0),
        set_b=frozenset(v for v, c in color.items() if c == 1),
    )


def partition_for_target(g: Graph, t: int) -> TargetPartition:
    if not 1 <= t <= g.n:
        raise ValueError(f"target {t} outside 1..{g.n}")
    nbrs = frozenset(g.neighbors(t))
    rest = frozenset(range(1, g.n + 1)) - nbrs - {t}
    return TargetPartition(target=t, neighbors=nbrs, rest=rest)


def pauli_flip_mask(g: Graph, qubit: int, pauli: str) -> FlipMask:
    """Syndrome-bit flips induced by a physical Pauli on `qubit`.

    Z flips the qubit's own bit; X flips the bits of its neighborhood (the
    residue of the correlation operator once phases are discarded); Y
    composes both.
    """
    if not 1 <= qubit <= g.n:
        raise ValueError(f"qubit {qubit} outside 1..{g.n}")
    z_bits = 1 << (qubit - 1)
    x_bits = 0
    for v in g.neighbors(qubit):
        x_bits |= 1 << (v - 1)
    if pauli == "Z":
        bits = z_bits
    elif pauli == "X":
        bits = x_bits
    elif pauli == "Y":
        bits = x_bits ^ z_bits
    else:
        raise ValueError(f"pauli must be one of X, Y, Z, got {pauli!r}")
    return FlipMask(bits=bits, n=g.n)


def vertex_set_mask(vertices) -> int:
    """Bit mask with bit v-1 set for every vertex v."""
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def describe(g: Graph) -> str:
    """Canonical short descriptor used in trace metadata."""
    return f"n={g.n};edges=" + ",".join(
        f"{u}-{v}" for u, v in sorted(g.edges)
    )
