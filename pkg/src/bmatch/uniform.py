"""Exact uniform B-matching solver: compose the two reductions and the
perfect-matching solver.  Minimization is maximization on negated weights."""

from __future__ import annotations

from bmatch.blossom import max_weight_perfect_matching
from bmatch.core import BInstance, Matching, MultiGraph, degrees
from bmatch.reduce import (
    BadSpec,
    Interval,
    Parity,
    UniformSpec,
    ab_to_pm,
    lift,
    uniform_to_ab,
)

SENSES = ("max", "min")


def spec_of_instance(instance: BInstance) -> UniformSpec:
    """Read each effective degree set as one dense interval or one parity run.

    Raises BadSpec when a vertex fits neither shape; such instances need the
    full neighbouring-type solver rather than a single reduction pass.
    """
    per_vertex: list[Interval | Parity] = []
    for v in range(instance.graph.vertex_count):
        values = instance.b(v).values
        if not values:
            raise BadSpec(f"vertex {v} has an empty effective degree set")
        gaps = {b - a for a, b in zip(values, values[1:])}
        if gaps <= {1}:
            per_vertex.append(Interval(values[0], values[-1]))
        elif gaps == {2}:
            per_vertex.append(Parity(values[0], values[-1]))
        else:
            raise BadSpec(
                f"vertex {v} has degree set {values}, which is neither a "
                f"dense interval nor a single parity run"
            )
    return UniformSpec(tuple(per_vertex))


def solve_uniform(
    instance: BInstance, spec: UniformSpec, sense: str = "max"
) -> Matching | None:
    """Optimum-weight matching with d_F(v) in spec(v) for every v, or None.

    Deterministic: ties are broken by the perfect-matching solver's fixed
    edge scan order, which the reductions preserve (source edges keep their
    indices in both reduced graphs).
    """
    if sense not in SENSES:
        raise ValueError(f"sense must be one of {SENSES}, got {sense!r}")
    g = instance.graph
    work = instance
    if sense == "min":
        flipped = MultiGraph(g.vertex_count, tuple((u, v, -w) for u, v, w in g.edges))
        work = BInstance(flipped, instance.degree_sets, instance.objective)
    ab, from_loops = uniform_to_ab(work, spec)
    reduced, from_gadget = ab_to_pm(ab)
    pm = max_weight_perfect_matching(reduced)
    if pm is None:
        return None
    result = lift(from_loops, lift(from_gadget, pm))
    deg = degrees(g, result)
    for v in range(g.vertex_count):
        assert deg[v] in spec.per_vertex[v].degrees(), (
            f"lifted matching has degree {deg[v]} at vertex {v}, outside its spec"
        )
    return result
