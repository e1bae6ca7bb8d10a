"""Structural machinery for B-matchings: alternating-walk decompositions of
symmetric differences, meta-paths and meta-cycles, canonical paths, basic-ness
and the classification checks over basic canonical paths.

Conventions.  An alternating walk is an edge sequence alternating between
matched and unmatched edges; vertices may repeat, edges may not.  A walk is a
"cycle" only if the alternation also holds around the wrap (first edge
matched, closing edge unmatched), which preserves every degree.  A closed
walk whose two ending edges lie on the same side is a path P(v, v), not a
cycle; it shifts the degree of v by 2.

In any maximal decomposition, all walk ends at a vertex lie on the same side
(otherwise two walks would concatenate), so walk ends sit exactly where the
two matchings disagree, on the majority side.  Canonical paths are built
from such walks: meta-cycles attached at one or two endpoint vertices plus a
connecting meta-path, whose joint application lands on a matching of
neighbouring type.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product

from bmatch.core import (
    BInstance,
    Matching,
    NotFeasible,
    degree,
    degrees,
    interval_of,
    is_b_matching,
    parity_intervals,
)


class NotBasic(ValueError):
    """A canonical path failed a cheap necessary condition of basic-ness."""


# -- walks and meta-structures -------------------------------------------------


@dataclass(frozen=True)
class AlternatingWalk:
    """An alternating edge sequence: kind 'path' or 'cycle'.

    vertices spells out the traversal (len(edges) + 1 entries, first == last
    for cycles and for closed paths P(v, v)).
    """

    kind: str
    edges: tuple[int, ...]
    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("path", "cycle"):
            raise ValueError(f"bad walk kind {self.kind!r}")
        if len(self.vertices) != len(self.edges) + 1:
            raise ValueError("vertex sequence must have one more entry than edges")
        if self.kind == "cycle" and self.vertices[0] != self.vertices[-1]:
            raise ValueError("cycle must return to its starting vertex")

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.vertices[0], self.vertices[-1])

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(self.edges)


def walk_problems(instance: BInstance, matching: Matching, walk: AlternatingWalk) -> list[str]:
    """Violations of the alternating-walk invariants; empty when valid."""
    g = instance.graph
    out = []
    if len(set(walk.edges)) != len(walk.edges):
        out.append("an edge occurs more than once")
    for i, e in enumerate(walk.edges):
        u, v, _w = g.edges[e]
        a, b = walk.vertices[i], walk.vertices[i + 1]
        if {u, v} != {a, b}:
            out.append(f"edge {e} does not join step vertices {a}, {b}")
    sides = [e in matching for e in walk.edges]
    for i in range(len(sides) - 1):
        if sides[i] == sides[i + 1]:
            out.append(f"edges {walk.edges[i]} and {walk.edges[i + 1]} do not alternate")
    if walk.kind == "cycle":
        if not sides or not sides[0] or sides[-1]:
            out.append("cycle must start in the matching and close outside it")
    elif walk.vertices[0] == walk.vertices[-1] and sides and sides[0] != sides[-1]:
        out.append("closed path must have both ending edges on the same side")
    return out


@dataclass(frozen=True)
class MetaCycle:
    """Walks P(v1,v2), ..., P(vk,v1) with pairwise distinct junctions."""

    walks: tuple[AlternatingWalk, ...]
    junctions: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.walks) != len(self.junctions):
            raise ValueError("one junction per constituent walk")
        if len(set(self.junctions)) != len(self.junctions):
            raise ValueError("meta-cycle junctions must be pairwise distinct")

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(e for w in self.walks for e in w.edges)


@dataclass(frozen=True)
class MetaPath:
    """Walks P(v1,v2), ..., P(vk,vk+1) with pairwise distinct junctions."""

    walks: tuple[AlternatingWalk, ...]
    junctions: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.junctions) != len(self.walks) + 1:
            raise ValueError("a meta-path on k walks has k + 1 junctions")
        if len(set(self.junctions)) != len(self.junctions):
            raise ValueError("meta-path junctions must be pairwise distinct")

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(e for w in self.walks for e in w.edges)


@dataclass(frozen=True)
class CanonicalPath:
    """Meta-cycles at the two endpoints plus a meta-path between them.

    The meta-path is absent exactly when the endpoints coincide.
    """

    v_first: int
    v_last: int
    cycles_first: tuple[MetaCycle, ...]
    cycles_last: tuple[MetaCycle, ...]
    meta_path: MetaPath | None

    def __post_init__(self) -> None:
        if (self.meta_path is None) != (self.v_first == self.v_last):
            raise ValueError("meta-path present iff the endpoints differ")
        if self.meta_path is not None:
            if self.meta_path.junctions[0] != self.v_first:
                raise ValueError("meta-path must start at v_first")
            if self.meta_path.junctions[-1] != self.v_last:
                raise ValueError("meta-path must end at v_last")
        for c in self.cycles_first:
            if self.v_first not in c.junctions:
                raise ValueError("cycle not incident to v_first")
        for c in self.cycles_last:
            if self.v_last not in c.junctions:
                raise ValueError("cycle not incident to v_last")

    @property
    def cycles(self) -> tuple[MetaCycle, ...]:
        return self.cycles_first + self.cycles_last

    @property
    def walks(self) -> tuple[AlternatingWalk, ...]:
        out = [w for c in self.cycles for w in c.walks]
        if self.meta_path is not None:
            out.extend(self.meta_path.walks)
        return tuple(out)

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(e for w in self.walks for e in w.edges)


def _edges_of(obj) -> frozenset[int]:
    if hasattr(obj, "edge_set"):
        return obj.edge_set
    if hasattr(obj, "selected"):
        return obj.selected
    return frozenset(obj)


# -- apply / weight ------------------------------------------------------------


def apply(matching: Matching, component) -> Matching:
    """Symmetric difference of a matching with an edge set (an involution)."""
    return Matching(matching.selected ^ _edges_of(component))


def weight_of(instance: BInstance, matching: Matching, component) -> int:
    """Weight effect of applying: added edges count +, removed edges count -."""
    g = instance.graph
    total = 0
    for e in _edges_of(component):
        w = g.edges[e][2]
        total += -w if e in matching else w
    return total


def shifts_within(
    instance: BInstance, m: Matching, n: Matching, edges: frozenset[int]
) -> bool:
    """Whether `edges` moves every degree toward n without overshooting.

    Holds exactly when `edges` is a union of whole alternating paths of
    some maximal decomposition of M (+) N, so it is the subset relation
    under which canonical paths of the pair (M, N) live: a canonical
    component of the pair must never shift a degree against the overall
    direction or past the target.
    """
    g = instance.graph
    base = degrees(g, m)
    full = degrees(g, n)
    part = degrees(g, apply(m, edges))
    for v in range(g.vertex_count):
        lo, hi = sorted((0, full[v] - base[v]))
        if not lo <= part[v] - base[v] <= hi:
            return False
    return True


# -- maximal decomposition -----------------------------------------------------


def decompose_symmetric_difference(
    instance: BInstance, m_one: Matching, m_two: Matching
) -> tuple[tuple[AlternatingWalk, ...], tuple[AlternatingWalk, ...]]:
    """A deterministic maximal decomposition of the symmetric difference.

    At each vertex, matched and unmatched difference-edge ends are paired in
    ascending edge order; leftover ends (the degree imbalance, all on one
    side) become walk ends.  Following the pairings yields open alternating
    paths (started from free ends in ascending order) and alternating cycles
    (started from the smallest unused matched edge).  No two output paths
    concatenate, since all free ends at a vertex lie on the same side.
    """
    for m in (m_one, m_two):
        if not is_b_matching(instance, m):
            raise NotFeasible("decomposition requires feasible B-matchings")
    g = instance.graph
    diff = sorted(m_one.selected ^ m_two.selected)
    in_m = lambda e: e in m_one
    # Edge e has slot 0 at its first endpoint and slot 1 at its second.
    at: dict[int, list[tuple[int, int]]] = {}
    for e in diff:
        u, v, _w = g.edges[e]
        at.setdefault(u, []).append((e, 0))
        at.setdefault(v, []).append((e, 1))
    link: dict[tuple[int, int], tuple[int, int]] = {}
    free: list[tuple[int, int]] = []
    for v in sorted(at):
        matched = [s for s in sorted(at[v]) if in_m(s[0])]
        unmatched = [s for s in sorted(at[v]) if not in_m(s[0])]
        for a, b in zip(matched, unmatched):
            link[a] = b
            link[b] = a
        free.extend(matched[len(unmatched):])
        free.extend(unmatched[len(matched):])

    def vertex_at(slot: tuple[int, int]) -> int:
        e, s = slot
        u, v, _w = g.edges[e]
        return u if s == 0 else v

    used: set[int] = set()

    def traverse(start: tuple[int, int], stop_slot=None) -> AlternatingWalk | None:
        edges: list[int] = []
        verts = [vertex_at(start)]
        slot = start
        while True:
            e, s = slot
            used.add(e)
            edges.append(e)
            exit_slot = (e, 1 - s)
            verts.append(vertex_at(exit_slot))
            nxt = link.get(exit_slot)
            if nxt is None:
                return AlternatingWalk("path", tuple(edges), tuple(verts))
            if nxt == stop_slot:
                return AlternatingWalk("cycle", tuple(edges), tuple(verts))
            slot = nxt

    paths = []
    for slot in sorted(free):
        if slot[0] not in used:
            paths.append(traverse(slot))
    cycles = []
    for e in diff:
        if e not in used and in_m(e):
            cycles.append(traverse((e, 0), stop_slot=(e, 0)))
    assert all(e in used for e in diff)
    if __debug__:
        for w in paths + cycles:
            assert not walk_problems(instance, m_one, w), walk_problems(
                instance, m_one, w
            )
        # maximality: all free ends at one vertex share their side
        for p, q in combinations(paths, 2):
            for x in p.endpoints:
                for y in q.endpoints:
                    if x == y:
                        assert (p.edges[0 if p.vertices[0] == x else -1] in m_one) == (
                            q.edges[0 if q.vertices[0] == x else -1] in m_one
                        )
    return tuple(paths), tuple(cycles)


# -- type predicates -----------------------------------------------------------


def is_same_uniform_type(instance: BInstance, m: Matching, n: Matching) -> bool:
    """Does every d_N(v) stay in the interval of B(v) holding d_M(v)?"""
    deg_m = degrees(instance.graph, m)
    deg_n = degrees(instance.graph, n)
    for v in range(instance.graph.vertex_count):
        iv = interval_of(instance.b(v), deg_m[v])
        if deg_n[v] not in iv.members():
            return False
    return True


def _adjacent(lower, upper) -> bool:
    return lower.hi + 1 == upper.lo


def is_neighbouring_type(instance: BInstance, m: Matching, n: Matching) -> bool:
    """The |W| <= 2 deviation test from the neighbouring-type definition."""
    if not is_b_matching(instance, n):
        return False
    deg_m = degrees(instance.graph, m)
    deg_n = degrees(instance.graph, n)
    deviating: list[tuple] = []
    for v in range(instance.graph.vertex_count):
        b_m = interval_of(instance.b(v), deg_m[v])
        if deg_n[v] in b_m.members():
            continue
        b_n = interval_of(instance.b(v), deg_n[v])
        deviating.append((v, b_m, b_n))
        if len(deviating) > 2:
            return False
    if not deviating:
        return True
    if len(deviating) == 2:
        return all(
            _adjacent(b_m, b_n) or _adjacent(b_n, b_m) for _v, b_m, b_n in deviating
        )
    ((w, b_m, b_n),) = deviating
    for middle in parity_intervals(instance.b(w)):
        if (_adjacent(b_m, middle) or _adjacent(middle, b_m)) and (
            _adjacent(b_n, middle) or _adjacent(middle, b_n)
        ):
            return True
    return False


# -- canonical-path recognition ------------------------------------------------


def _end_profile(
    instance: BInstance, m: Matching, edges: frozenset[int]
) -> dict[int, tuple[int, bool]] | None:
    """Per vertex: (number of forced walk ends, side) for the edge set.

    side True means the ends lie on matched edges (applying lowers the
    degree).  Returns None if some connected component of the edge set is
    balanced everywhere, because such a component only decomposes into
    alternating cycles, which no canonical path may contain.
    """
    g = instance.graph
    matched: dict[int, int] = {}
    unmatched: dict[int, int] = {}
    for e in edges:
        u, v, _w = g.edges[e]
        side = matched if e in m else unmatched
        for x in (u, v):
            side[x] = side.get(x, 0) + 1
    profile: dict[int, tuple[int, bool]] = {}
    for v in set(matched) | set(unmatched):
        k = matched.get(v, 0) - unmatched.get(v, 0)
        if k:
            profile[v] = (abs(k), k > 0)
    # balanced-component test
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        u, v, _w = g.edges[e]
        parent[find(u)] = find(v)
    live = {find(v) for v in profile}
    for e in edges:
        if find(g.edges[e][0]) not in live:
            return None
    return profile


def _pairings(ms: tuple, ns: tuple):
    """All ways to pair every element of the shorter tuple across the two."""
    if not ms or not ns:
        yield ()
        return
    if len(ms) < len(ns):
        for pairing in _pairings(ns, ms):
            yield tuple((b, a) for a, b in pairing)
        return
    # |ms| >= |ns|: every element of ns pairs; choose a partner for ns[0]
    n0 = ns[0]
    for i, m0 in enumerate(ms):
        for rest in _pairings(ms[:i] + ms[i + 1 :], ns[1:]):
            yield ((m0, n0),) + rest


def _walk_decompositions(instance: BInstance, m: Matching, edges: frozenset[int]):
    """Yield open-walk decompositions of the edge set, one per distinct
    multiset of walk endpoint pairs.

    Every maximal decomposition pairs matched with unmatched edge ends at
    each vertex, leaving the imbalance free; enumerating the pairings
    enumerates the decompositions.  Pairings that close a trail are skipped
    (a canonical path contains no alternating cycles).  Yields tuples of
    AlternatingWalk.
    """
    g = instance.graph
    at: dict[int, list[tuple[int, int]]] = {}
    for e in sorted(edges):
        u, v, _w = g.edges[e]
        at.setdefault(u, []).append((e, 0))
        at.setdefault(v, []).append((e, 1))

    def vertex_at(slot):
        e, s = slot
        u, v, _w = g.edges[e]
        return u if s == 0 else v

    verts = sorted(at)
    seen = set()

    def rec(i: int, link: dict):
        if i == len(verts):
            used = set()
            walks = []
            free = [s for v in verts for s in at[v] if s not in link]
            for slot in sorted(free):
                if slot[0] in used:
                    continue
                walk_edges = []
                walk_verts = [vertex_at(slot)]
                cur = slot
                while True:
                    e, s = cur
                    used.add(e)
                    walk_edges.append(e)
                    walk_verts.append(vertex_at((e, 1 - s)))
                    nxt = link.get((e, 1 - s))
                    if nxt is None:
                        break
                    cur = nxt
                walks.append(
                    AlternatingWalk("path", tuple(walk_edges), tuple(walk_verts))
                )
            if len(used) != len(edges):
                return  # a closed trail remained
            key = tuple(sorted(tuple(sorted(w.endpoints)) for w in walks))
            if key not in seen:
                seen.add(key)
                yield tuple(walks)
            return
        v = verts[i]
        ms = tuple(s for s in at[v] if s[0] in m)
        ns = tuple(s for s in at[v] if s[0] not in m)
        for pairing in _pairings(ms, ns):
            link2 = dict(link)
            for a, b in pairing:
                link2[a] = b
                link2[b] = a
            yield from rec(i + 1, link2)

    yield from rec(0, {})


def _shape_partition(walk_edges: tuple, v_first: int, v_last: int):
    """Partition walk-graph edges into simple cycles through v_first or
    v_last plus (for distinct endpoints) one simple path between them.

    walk_edges is a tuple of (a, b) endpoint pairs.  Returns a tuple
    (path_indices, cycle_groups) of indices into walk_edges, or None.
    cycle_groups is a tuple of (anchor, indices) with anchor in
    {v_first, v_last}.
    """
    n = len(walk_edges)

    def cycles_only(remaining: frozenset):
        if not remaining:
            return ()
        first = min(remaining)
        for anchor in dict.fromkeys((v_first, v_last)):
            # find simple cycles through anchor containing edge `first`
            for cyc in _simple_cycles_through(walk_edges, remaining, first, anchor):
                rest = cycles_only(remaining - frozenset(cyc))
                if rest is not None:
                    return ((anchor, tuple(cyc)),) + rest
        return None

    if v_first == v_last:
        groups = cycles_only(frozenset(range(n)))
        return None if groups is None else ((), groups)
    for path in _simple_paths(walk_edges, frozenset(range(n)), v_first, v_last):
        groups = cycles_only(frozenset(range(n)) - frozenset(path))
        if groups is not None:
            return (tuple(path), groups)
    return None


def _simple_paths(walk_edges, allowed: frozenset, src: int, dst: int):
    """Simple paths src -> dst (distinct junctions) over the walk graph."""

    def rec(cur: int, remaining: frozenset, visited: frozenset, acc: tuple):
        if cur == dst:
            yield acc
            return
        for i in sorted(remaining):
            a, b = walk_edges[i]
            if cur not in (a, b) or a == b:
                continue
            nxt = b if a == cur else a
            if nxt in visited:
                continue
            yield from rec(
                nxt, remaining - {i}, visited | {nxt}, acc + (i,)
            )

    yield from rec(src, allowed, frozenset([src]), ())


def _simple_cycles_through(walk_edges, allowed: frozenset, must_use: int, anchor: int):
    """Simple cycles (distinct junctions) through anchor using edge must_use."""
    a, b = walk_edges[must_use]
    if a == b:
        if a == anchor:
            yield (must_use,)
        return
    remaining = allowed - {must_use}
    if anchor in (a, b):
        start, goal = (b, a) if anchor == a else (a, b)
        # close with a simple path back to the anchor; the path's distinct
        # junctions together with the closing edge keep all junctions distinct
        for path in _simple_paths(walk_edges, remaining, start, goal):
            yield (must_use,) + tuple(path)
        return
    # anchor elsewhere on the cycle: go a -> anchor -> b, junctions distinct
    for first in _simple_paths(walk_edges, remaining, a, anchor):
        used = frozenset(first)
        visited = _path_vertices(walk_edges, first, a)
        for second in _simple_paths(walk_edges, remaining - used, anchor, b):
            if _path_vertices(walk_edges, second, anchor) & (visited - {anchor}):
                continue
            yield (must_use,) + tuple(first) + tuple(second)


def _path_vertices(walk_edges, path: tuple, start: int) -> frozenset:
    verts = {start}
    cur = start
    for i in path:
        a, b = walk_edges[i]
        cur = b if a == cur else a
        verts.add(cur)
    return frozenset(verts)


def _junction_sequence(walk_edges, cyc: tuple) -> tuple[int, ...]:
    """Junction vertices of an ordered cycle of walk-graph edges.

    junction[i] is the vertex shared by cyc[i-1] and cyc[i].  Generated
    cycles are vertex-simple, so consecutive walks share exactly one vertex
    except for a length-two cycle of parallel walks, whose junctions are the
    two shared endpoints in either order.
    """
    if len(cyc) == 2 and set(walk_edges[cyc[0]]) == set(walk_edges[cyc[1]]):
        a, b = walk_edges[cyc[0]]
        return (a, b) if a != b else (a,)
    out = []
    for i in range(len(cyc)):
        common = set(walk_edges[cyc[i - 1]]) & set(walk_edges[cyc[i]])
        assert len(common) == 1, "consecutive cycle walks must share one junction"
        out.append(next(iter(common)))
    return tuple(out)


def _structure_from(
    walks: tuple[AlternatingWalk, ...], v_first: int, v_last: int, partition
) -> CanonicalPath:
    path_idx, cycle_groups = partition
    pairs = tuple(w.endpoints for w in walks)
    cycles_first = []
    cycles_last = []
    for anchor, cyc in cycle_groups:
        junctions = _junction_sequence(pairs, cyc)
        meta = MetaCycle(tuple(walks[i] for i in cyc), junctions)
        (cycles_first if anchor == v_first else cycles_last).append(meta)
    meta_path = None
    if v_first != v_last:
        junctions = [v_first]
        for i in path_idx:
            a, b = pairs[i]
            junctions.append(b if a == junctions[-1] else a)
        meta_path = MetaPath(tuple(walks[i] for i in path_idx), tuple(junctions))
    return CanonicalPath(
        v_first, v_last, tuple(cycles_first), tuple(cycles_last), meta_path
    )


_structure_cache: dict = {}


def canonical_structure(
    instance: BInstance, matching: Matching, component
) -> CanonicalPath | None:
    """A canonical-path structure over the edge set, or None.

    None means the edge set is not a canonical path w.r.t. the matching:
    its application is infeasible or not of neighbouring type, or no
    decomposition into open alternating walks arranges as meta-cycles at the
    endpoints plus a connecting meta-path.
    """
    edges = _edges_of(component)
    key = (instance, matching.selected, edges)
    if key in _structure_cache:
        return _structure_cache[key]
    result = _canonical_structure_uncached(instance, matching, edges)
    _structure_cache[key] = result
    return result


def _canonical_structure_uncached(instance, matching, edges):
    if not edges:
        return None
    after = apply(matching, edges)
    if not is_b_matching(instance, after):
        return None
    if not is_neighbouring_type(instance, matching, after):
        return None
    profile = _end_profile(instance, matching, edges)
    if profile is None:
        return None
    odd = sorted(v for v, (k, _side) in profile.items() if k % 2)
    if len(odd) > 2:
        return None
    if len(odd) == 2:
        anchors = [(odd[0], odd[1])]
    else:
        anchors = [(v, v) for v in sorted(profile)]
    for walks in _walk_decompositions(instance, matching, edges):
        pairs = tuple(w.endpoints for w in walks)
        for v_first, v_last in anchors:
            partition = _shape_partition(pairs, v_first, v_last)
            if partition is not None:
                return _structure_from(walks, v_first, v_last, partition)
    return None


def is_canonical(instance: BInstance, matching: Matching, component) -> bool:
    """Whether the edge set admits a canonical-path structure whose
    application yields a B-matching of neighbouring type."""
    edges = _edges_of(component)
    if not edges:
        return True
    return canonical_structure(instance, matching, edges) is not None


# -- canonical-sequence extraction ----------------------------------------------


def _end_edge_at(walk: AlternatingWalk, v: int) -> int:
    """Smallest ending-edge index of the walk at vertex v."""
    ids = []
    if walk.vertices[0] == v:
        ids.append(walk.edges[0])
    if walk.vertices[-1] == v:
        ids.append(walk.edges[-1])
    assert ids, "walk does not end at the requested vertex"
    return min(ids)


def _pool_witness(instance, matching, walks) -> CanonicalPath | None:
    """Canonical-path structure whose constituents are exactly these walks.

    Unlike canonical_structure this never re-pairs edge ends; the walks are
    kept whole, which the sequence extraction relies on to keep the unused
    remainder of a maximal decomposition maximal.
    """
    edges = frozenset(e for w in walks for e in w.edges)
    if not edges:
        return None
    after = apply(matching, edges)
    if not is_b_matching(instance, after):
        return None
    if not is_neighbouring_type(instance, matching, after):
        return None
    counts: Counter = Counter()
    for w in walks:
        a, b = w.endpoints
        counts[a] += 1
        counts[b] += 1
    odd = sorted(v for v, k in counts.items() if k % 2)
    if len(odd) > 2:
        return None
    if len(odd) == 2:
        anchors = [(odd[0], odd[1])]
    else:
        anchors = [(v, v) for v in sorted(counts)]
    pairs = tuple(w.endpoints for w in walks)
    for v_first, v_last in anchors:
        partition = _shape_partition(pairs, v_first, v_last)
        if partition is not None:
            return _structure_from(tuple(walks), v_first, v_last, partition)
    return None


def _meta_options(s: CanonicalPath) -> list[tuple[frozenset[int], ...]]:
    """Per-component edge-set choices for the meta-granularity subset search.

    Each component contributes the empty set (leave it out) and its full
    edge set; a cycle through both endpoints additionally contributes its
    two arcs between them, each a chain of whole walks.
    """
    empty: frozenset[int] = frozenset()
    options: list[tuple[frozenset[int], ...]] = []
    if s.meta_path is not None:
        options.append((empty, s.meta_path.edge_set))
    for c in s.cycles:
        choice = [empty, c.edge_set]
        if (
            s.v_first != s.v_last
            and s.v_first in c.junctions
            and s.v_last in c.junctions
        ):
            p = c.junctions.index(s.v_first)
            q = c.junctions.index(s.v_last)
            k = len(c.walks)
            arc = []
            i = p
            while i != q:
                arc.append(c.walks[i])
                i = (i + 1) % k
            other = [w for w in c.walks if w not in arc]
            for part in (arc, other):
                choice.append(frozenset(e for w in part for e in w.edges))
        options.append(tuple(choice))
    return options


def _meta_subsets(s: CanonicalPath) -> list[frozenset[int]]:
    """Proper nonempty component-union subsets of the canonical path."""
    full = s.edge_set
    out: set[frozenset[int]] = set()
    for pick in product(*_meta_options(s)):
        edges = frozenset().union(*pick) if pick else frozenset()
        if edges and edges != full:
            out.add(edges)
    return sorted(out, key=lambda e: (len(e), tuple(sorted(e))))


def _pool_basic(instance, matching, witness: CanonicalPath) -> CanonicalPath:
    """Meta-granularity basic subset, keeping whole constituent walks."""
    walks = list(witness.walks)
    while True:
        w_s = weight_of(instance, matching, witness.edge_set)
        best = None
        for edges in _meta_subsets(witness):
            sub = [w for w in walks if w.edge_set <= edges]
            if frozenset(e for w in sub for e in w.edges) != edges:
                continue
            rebuilt = _pool_witness(instance, matching, sub)
            if rebuilt is None:
                continue
            wt = weight_of(instance, matching, edges)
            if wt >= w_s or wt > 0:
                key = (wt, -len(edges), tuple(sorted(edges)))
                if best is None or key > best[0]:
                    best = (key, rebuilt)
        if best is None:
            return witness
        witness = best[1]
        walks = list(witness.walks)


def extract_canonical_sequence(
    instance: BInstance, m: Matching, n: Matching
) -> tuple[list[AlternatingWalk], list[CanonicalPath]]:
    """Decompose M (+) N into peeled alternating cycles and a sequence of
    canonical paths, each canonical for the running matching.

    Follows the constructive argument: peel the cycles of a maximal
    decomposition, then repeatedly grow a candidate from the walk holding
    the smallest edge, attaching a further walk at a wrong endpoint until
    the candidate is canonical; a meta-granularity basic subset is applied
    and the unused walks stay in the pool.  When an attachment closes a
    meta-cycle at a vertex that is wrong in the candidate but fine in the
    cycle alone, the cycle is emitted by itself.
    """
    g = instance.graph
    paths, cycles = decompose_symmetric_difference(instance, m, n)
    m_cur = m
    for c in cycles:
        m_cur = apply(m_cur, c.edge_set)
    assert is_b_matching(instance, m_cur), "cycle peeling must preserve degrees"
    pool = list(paths)
    seq: list[CanonicalPath] = []

    while pool:
        seed = min(pool, key=lambda w: min(w.edges))
        pool.remove(seed)
        h = [seed]
        counts: Counter = Counter()
        a, b = seed.endpoints
        counts[a] += 1
        counts[b] += 1
        pin = a if a == b else None

        def endpoints_of() -> tuple[int, int]:
            odd = sorted(v for v, k in counts.items() if k % 2)
            if odd:
                assert len(odd) == 2, "candidate must have zero or two odd ends"
                return odd[0], odd[1]
            assert pin is not None, "joined candidate lost its pinned endpoint"
            return pin, pin

        emitted = None
        while emitted is None:
            e_h = frozenset(e for w in h for e in w.edges)
            after = apply(m_cur, e_h)
            witness = _pool_witness(instance, m_cur, h)
            if witness is None and is_b_matching(instance, after):
                witness = canonical_structure(instance, m_cur, e_h)
            if witness is not None:
                if all(w in h for w in witness.walks):
                    emitted = _pool_basic(instance, m_cur, witness)
                else:
                    emitted = witness
                break

            ends = endpoints_of()
            deg_after = degrees(g, after)
            wrong = sorted(v for v in set(ends) if deg_after[v] not in instance.b(v))
            if not wrong:
                # endpoints fine yet no structure: push on wherever possible
                wrong = sorted(
                    v
                    for v in set(ends)
                    if any(v in w.endpoints for w in pool)
                )
            assert wrong, "candidate is not canonical and cannot grow"
            grown = False
            for v1 in wrong:
                at_v1 = [w for w in pool if v1 in w.endpoints]
                if not at_v1:
                    continue
                w_new = min(at_v1, key=lambda w: _end_edge_at(w, v1))
                pool.remove(w_new)
                h.append(w_new)
                wa, wb = w_new.endpoints
                far = wb if wa == v1 else wa
                prev_far = counts[far]
                counts[wa] += 1
                counts[wb] += 1
                if not any(k % 2 for k in counts.values()):
                    pin = far
                grown = True
                if wa != wb and prev_far >= 2:
                    emitted = _try_cycle_escape(
                        instance, m_cur, h, w_new, far
                    )
                break
            assert grown, "no pool walk ends at a wrong endpoint"

        seq.append(emitted)
        m_cur = apply(m_cur, emitted.edge_set)
        leftover = frozenset(e for w in h for e in w.edges) - emitted.edge_set
        back = [w for w in h if w.edge_set <= leftover]
        assert frozenset(e for w in back for e in w.edges) == leftover, (
            "emitted component must split the candidate along whole walks"
        )
        pool.extend(back)

    assert m_cur.selected == n.selected, "extraction must land on the target"
    return list(cycles), seq


def _try_cycle_escape(instance, m_cur, h, w_new, far):
    """Emit the meta-cycle just closed at `far`, when `far` is wrong in the
    candidate but its degree may still shift by two.

    Growing past this state would strand walk ends at an inner vertex where
    no canonical shape can place them; the closed cycle alone is canonical.
    """
    g = instance.graph
    e_h = frozenset(e for w in h for e in w.edges)
    deg_after = degrees(g, apply(m_cur, e_h))
    if deg_after[far] in instance.b(far):
        return None
    end_edge = _end_edge_at(w_new, far)
    sigma = -1 if end_edge in m_cur else 1
    if degree(g, m_cur, far) + 2 * sigma not in instance.b(far):
        return None
    pairs = tuple(w.endpoints for w in h)
    idx_new = len(h) - 1
    for cyc in _simple_cycles_through(
        pairs, frozenset(range(len(h))), idx_new, far
    ):
        walks = [h[i] for i in cyc]
        witness = _pool_witness(instance, m_cur, walks)
        if witness is not None:
            return witness
    return None


# -- basic-ness ------------------------------------------------------------------

GRANULARITIES = ("meta", "edges")

_EDGE_SEARCH_LIMIT = 12


def _subset_pool(instance, m: Matching, s: CanonicalPath, granularity: str):
    if granularity == "meta":
        return _meta_subsets(s)
    if granularity == "edges":
        full = sorted(s.edge_set)
        if len(full) > _EDGE_SEARCH_LIMIT:
            raise ValueError(
                f"edge-granularity subset search handles at most "
                f"{_EDGE_SEARCH_LIMIT} edges, got {len(full)}"
            )
        out = []
        for r in range(1, len(full)):
            out.extend(frozenset(c) for c in combinations(full, r))
        return out
    raise ValueError(f"granularity must be one of {GRANULARITIES}, got {granularity!r}")


def _disqualifier(instance, m: Matching, s: CanonicalPath, granularity: str):
    """Best proper nonempty canonical subset with weight >= w(S) or > 0.

    At edge granularity a subset only counts when its degree shifts stay
    within the shifts of s itself; meta subsets are unions of whole walks
    of s and satisfy that by construction.
    """
    w_s = weight_of(instance, m, s.edge_set)
    target = apply(m, s.edge_set)
    best = None
    for edges in _subset_pool(instance, m, s, granularity):
        if granularity == "edges" and not shifts_within(instance, m, target, edges):
            continue
        if canonical_structure(instance, m, edges) is None:
            continue
        wt = weight_of(instance, m, edges)
        if wt >= w_s or wt > 0:
            key = (wt, -len(edges), tuple(sorted(edges)))
            if best is None or key > best[0]:
                best = (key, edges)
    return None if best is None else best[1]


def is_basic(
    instance: BInstance, m: Matching, s: CanonicalPath, granularity: str = "meta"
) -> bool:
    """No proper nonempty canonical subset disqualifies s (weight >= w(s) or
    positive), at the requested search granularity."""
    return _disqualifier(instance, m, s, granularity) is None


def make_basic(
    instance: BInstance, m: Matching, s: CanonicalPath, granularity: str = "meta"
) -> CanonicalPath:
    """Shrink a canonical path to a basic one by repeatedly replacing it
    with its best disqualifying subset; terminates because every
    replacement is a proper subset."""
    while True:
        edges = _disqualifier(instance, m, s, granularity)
        if edges is None:
            return s
        rebuilt = canonical_structure(instance, m, edges)
        assert rebuilt is not None, "disqualifying subset lost its structure"
        s = rebuilt


# -- classification of basic canonical paths -------------------------------------


@dataclass(frozen=True)
class ClassifyReport:
    """Endpoint parity labels and any violated structural rule."""

    v_first: int
    v_last: int
    odd_first: bool
    odd_last: bool
    sigma_first: int
    sigma_last: int
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def classify(instance: BInstance, m: Matching, s: CanonicalPath) -> ClassifyReport:
    """Check a basic canonical path against the endpoint-parity rules.

    Labels each endpoint odd or even (degree one step further in the shift
    direction allowed or not) and verifies the degree-set containments and
    cycle-sign rules that every basic canonical path must satisfy.  Raises
    NotBasic when a cheap necessary condition of basic-ness already fails;
    full basic-ness is the caller's responsibility.
    """
    edges = s.edge_set
    profile = _end_profile(instance, m, edges)
    assert profile is not None, "canonical paths decompose into open walks"
    w_s = weight_of(instance, m, edges)

    for c in s.cycles:
        ce = c.edge_set
        wc = weight_of(instance, m, ce)
        if ce != edges and wc > 0 and is_canonical(instance, m, ce):
            raise NotBasic(
                f"meta-cycle at {c.junctions[0]} alone is canonical with "
                f"positive weight {wc}"
            )
        rest = edges - ce
        if rest and is_canonical(instance, m, rest):
            wr = weight_of(instance, m, rest)
            if wr >= w_s or wr > 0:
                raise NotBasic(
                    f"dropping the meta-cycle at {c.junctions[0]} leaves a "
                    f"canonical path of weight {wr} (>= {w_s} or positive)"
                )

    deg_m = degrees(instance.graph, m)

    def sigma_of(v: int) -> int:
        count, matched_side = profile.get(v, (0, False))
        return -1 if matched_side else 1

    def d_s(v: int) -> int:
        return profile.get(v, (0, False))[0]

    def contains(v: int, k: int) -> bool:
        return deg_m[v] + sigma_of(v) * k in instance.b(v)

    def is_odd(v: int) -> bool:
        return contains(v, 1)

    u, v = s.v_first, s.v_last
    violations: list[str] = []

    for x in sorted(profile):
        if x in (u, v):
            continue
        for k in range(0, d_s(x) + 1, 2):
            if not contains(x, k):
                violations.append(
                    f"non-endpoint {x}: relative degree {k} not allowed"
                )

    if u != v:
        for x in (u, v):
            d = d_s(x)
            if is_odd(x):
                need = [0] + list(range(1, d + 1, 2))
            else:
                need = list(range(0, d, 2)) + [d]
            for k in need:
                if not contains(x, k):
                    violations.append(
                        f"{'odd' if is_odd(x) else 'even'} endpoint {x}: "
                        f"relative degree {k} not allowed"
                    )
        for c in s.cycles:
            inc_u = u in c.junctions
            inc_v = v in c.junctions
            wc = weight_of(instance, m, c.edge_set)
            if inc_u and inc_v:
                if is_odd(u) == is_odd(v):
                    violations.append(
                        f"cycle through both endpoints but {u} and {v} have "
                        f"equal parity"
                    )
            else:
                anchor = u if inc_u else v
                if is_odd(anchor) and wc <= 0:
                    violations.append(
                        f"cycle only at odd endpoint {anchor} has weight {wc} <= 0"
                    )
                if not is_odd(anchor) and wc > 0:
                    violations.append(
                        f"cycle only at even endpoint {anchor} has weight {wc} > 0"
                    )
    else:
        d = d_s(u)
        single = len(s.cycles) == 1 and s.meta_path is None
        option_a = single and contains(u, 0) and contains(u, 2)
        need = [0] + list(range(1, d, 2)) + [d]
        option_b = all(contains(u, k) for k in need)
        if not (option_a or option_b):
            violations.append(
                f"coinciding endpoint {u}: neither the single-cycle rule nor "
                f"the full odd ladder holds"
            )

    return ClassifyReport(
        v_first=u,
        v_last=v,
        odd_first=is_odd(u),
        odd_last=is_odd(v),
        sigma_first=sigma_of(u),
        sigma_last=sigma_of(v),
        violations=tuple(violations),
    )
