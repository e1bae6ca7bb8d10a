"""Gadget reductions: uniform degree specs to (a,b)-matching, and (a,b)-matching
to perfect matching on a simple graph, both with invertible lift maps.

The first stage turns a parity-constrained degree spec {lo, lo+2, ..., hi}
into plain bounds by attaching (hi-lo)/2 weight-0 loops at the vertex and
pinning its degree to hi; selecting k loops lowers the effective original
degree by 2k, which walks the parity class.

The second stage is a vertex gadget.  Every edge end becomes an external
node and each edge joins its two externals, carrying the original weight.
A vertex v of degree d contributes d - a(v) internal nodes joined to all of
its externals: unselected ends must be absorbed by internals, so at least
a(v) ends stay on original edges.  b(v) - a(v) of the internals may instead
escape into a global pool (a weight-0 clique), letting the degree rise up to
b(v).  The pool absorbs global slack; its size is padded by one node when
sum(b) is odd so a perfect matching can exist at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from bmatch.blossom import SimpleWeightedGraph
from bmatch.core import BInstance, Matching, MultiGraph


class BadSpec(ValueError):
    """A uniform spec does not fit the instance it was given for."""


class BoundsError(ValueError):
    """An (a,b) bound exceeds what the vertex degree can support."""


@dataclass(frozen=True)
class Interval:
    """Admissible degrees {a, a+1, ..., b}."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if not 0 <= self.a <= self.b:
            raise BadSpec(f"bad interval bounds [{self.a}, {self.b}]")

    def degrees(self) -> range:
        return range(self.a, self.b + 1)


@dataclass(frozen=True)
class Parity:
    """Admissible degrees {lo, lo+2, ..., hi}."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if not 0 <= self.lo <= self.hi:
            raise BadSpec(f"bad parity bounds [{self.lo}, {self.hi}]")
        if (self.hi - self.lo) % 2 != 0:
            raise BadSpec(f"parity bounds {self.lo}, {self.hi} differ in parity")

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1, 2)


VertexSpec = Interval | Parity


@dataclass(frozen=True)
class UniformSpec:
    """One Interval or Parity constraint per vertex."""

    per_vertex: tuple[VertexSpec, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_vertex", tuple(self.per_vertex))

    def allows(self, v: int, d: int) -> bool:
        return d in self.per_vertex[v].degrees()


@dataclass(frozen=True)
class ABInstance:
    """Multigraph with per-vertex degree bounds a(v) <= d_F(v) <= b(v)."""

    graph: MultiGraph
    a: tuple[int, ...]
    b: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "b", tuple(self.b))
        n = self.graph.vertex_count
        if len(self.a) != n or len(self.b) != n:
            raise ValueError("need one (a, b) pair per vertex")
        for v in range(n):
            if not 0 <= self.a[v] <= self.b[v]:
                raise ValueError(f"bad bounds a={self.a[v]}, b={self.b[v]} at vertex {v}")


@dataclass(frozen=True)
class OriginalEdge:
    """Reduced edge that carries over a source edge."""

    index: int


@dataclass(frozen=True)
class GadgetEdge:
    """Reduced edge invented by a reduction; weight 0, lifts to nothing."""


EdgeProvenance = OriginalEdge | GadgetEdge


@dataclass(frozen=True)
class LiftMap:
    """Provenance of every reduced-graph edge, in reduced edge order."""

    provenance: tuple[EdgeProvenance, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @cached_property
    def original_of(self) -> dict[int, int]:
        return {
            e: p.index
            for e, p in enumerate(self.provenance)
            if isinstance(p, OriginalEdge)
        }


def lift(lift_map: LiftMap, solution) -> Matching:
    """Restrict a reduced solution to the edges that carry source edges.

    Accepts anything iterable over reduced edge indices (a Matching, a set,
    or a PerfectMatching's selected set).
    """
    if hasattr(solution, "selected"):
        solution = solution.selected
    table = lift_map.original_of
    return Matching(frozenset(table[e] for e in solution if e in table))


def uniform_to_ab(instance: BInstance, spec: UniformSpec) -> tuple[ABInstance, LiftMap]:
    """Loop construction: parity specs become degree-pinned vertices with
    weight-0 loops; interval specs turn into bounds directly."""
    g = instance.graph
    n = g.vertex_count
    if len(spec.per_vertex) != n:
        raise BadSpec("spec size does not match the graph")
    a = [0] * n
    b = [0] * n
    loops: list[tuple[int, int, int]] = []
    for v in range(n):
        s = spec.per_vertex[v]
        if isinstance(s, Interval):
            if s.b > g.degree(v):
                raise BadSpec(f"interval bound {s.b} exceeds degree of vertex {v}")
            a[v], b[v] = s.a, s.b
        else:
            if s.hi > g.degree(v):
                raise BadSpec(f"parity bound {s.hi} exceeds degree of vertex {v}")
            for _ in range((s.hi - s.lo) // 2):
                loops.append((v, v, 0))
            a[v] = b[v] = s.hi
    reduced = MultiGraph(n, g.edges + tuple(loops))
    prov: list[EdgeProvenance] = [OriginalEdge(i) for i in range(g.edge_count)]
    prov.extend(GadgetEdge() for _ in loops)
    return ABInstance(reduced, tuple(a), tuple(b)), LiftMap(tuple(prov))


@dataclass(frozen=True)
class GadgetLayout:
    """Node roles inside the perfect-matching gadget (for checks and dumps)."""

    externals_at: tuple[tuple[int, ...], ...]  # per source vertex
    internals_at: tuple[tuple[int, ...], ...]
    pool_connected: tuple[int, ...]
    pool: tuple[int, ...]
    node_count: int


def gadget_layout(ab: ABInstance) -> GadgetLayout:
    g = ab.graph
    n = g.vertex_count
    m = g.edge_count
    for v in range(n):
        if ab.b[v] > g.degree(v):
            raise BoundsError(
                f"upper bound {ab.b[v]} exceeds degree {g.degree(v)} at vertex {v}"
            )
    # Externals: ids 2e and 2e+1 for edge e; grouped per vertex for the gadget.
    externals: list[list[int]] = [[] for _ in range(n)]
    for e, (u, v, _w) in enumerate(g.edges):
        externals[u].append(2 * e)
        externals[v].append(2 * e + 1)
    next_id = 2 * m
    internals: list[list[int]] = [[] for _ in range(n)]
    pool_connected: list[int] = []
    for v in range(n):
        count = g.degree(v) - ab.a[v]
        internals[v] = list(range(next_id, next_id + count))
        next_id += count
        pool_connected.extend(internals[v][: ab.b[v] - ab.a[v]])
    pool_size = sum(ab.b[v] - ab.a[v] for v in range(n)) + (sum(ab.b) % 2)
    pool = list(range(next_id, next_id + pool_size))
    next_id += pool_size
    return GadgetLayout(
        externals_at=tuple(tuple(x) for x in externals),
        internals_at=tuple(tuple(x) for x in internals),
        pool_connected=tuple(pool_connected),
        pool=tuple(pool),
        node_count=next_id,
    )


def ab_to_pm(ab: ABInstance) -> tuple[SimpleWeightedGraph, LiftMap]:
    """Vertex gadget from (a,b)-matching to maximum-weight perfect matching.

    Reduced edge order: one edge per source edge first (same index, carrying
    the weight), then the vertex gadgets in vertex order, then pool spokes,
    then the pool clique.  The reduced graph is always simple; a source loop
    contributes two distinct external nodes at its vertex.
    """
    layout = gadget_layout(ab)
    g = ab.graph
    edges: list[tuple[int, int, int]] = []
    prov: list[EdgeProvenance] = []
    for e, (_u, _v, w) in enumerate(g.edges):
        edges.append((2 * e, 2 * e + 1, w))
        prov.append(OriginalEdge(e))
    for v in range(g.vertex_count):
        for i in layout.internals_at[v]:
            for x in layout.externals_at[v]:
                edges.append((i, x, 0))
                prov.append(GadgetEdge())
    for i in layout.pool_connected:
        for q in layout.pool:
            edges.append((i, q, 0))
            prov.append(GadgetEdge())
    pool = layout.pool
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            edges.append((pool[i], pool[j], 0))
            prov.append(GadgetEdge())
    graph = SimpleWeightedGraph(layout.node_count, tuple(edges))
    return graph, LiftMap(tuple(prov))


def embed_ab_matching(ab: ABInstance, matching: Matching) -> frozenset[int]:
    """Build a perfect matching of the gadget realising a given (a,b)-matching.

    Used to check the correspondence in the other direction: the result is a
    valid perfect matching of ab_to_pm's graph whose lift is `matching`.
    Raises ValueError if the matching does not respect the (a,b) bounds.
    """
    layout = gadget_layout(ab)
    g = ab.graph
    pairs: list[tuple[int, int]] = []
    free_externals: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for e, (u, v, _w) in enumerate(g.edges):
        if e in matching.selected:
            pairs.append((2 * e, 2 * e + 1))
        else:
            free_externals[u].append(2 * e)
            free_externals[v].append(2 * e + 1)
    free_pool = list(layout.pool)
    for v in range(g.vertex_count):
        ext = free_externals[v]
        ints = list(layout.internals_at[v])
        deg = g.degree(v) - len(ext)
        if not ab.a[v] <= deg <= ab.b[v]:
            raise ValueError(f"degree {deg} at vertex {v} violates its bounds")
        # deg - a(v) internals escape to the pool; they must be pool-connected.
        escapees = ints[: deg - ab.a[v]]
        stay = ints[deg - ab.a[v] :]
        if len(stay) != len(ext):
            raise AssertionError("internal/external mismatch in embedding")
        pairs.extend(zip(stay, ext))
        for i in escapees:
            pairs.append((i, free_pool.pop()))
    # Remaining pool nodes pair up inside the clique; their count is even.
    if len(free_pool) % 2 != 0:
        raise AssertionError("pool parity broke in embedding")
    while free_pool:
        x = free_pool.pop()
        y = free_pool.pop()
        pairs.append((x, y))
    # Translate vertex pairs to reduced edge indices.
    graph, _ = ab_to_pm(ab)
    index = {}
    for k, (x, y, _w) in enumerate(graph.edges):
        index[(x, y)] = k
        index[(y, x)] = k
    return frozenset(index[p] for p in pairs)
