"""Exact minimization of c.x over the relaxation P(G, T).

P(G, T) is cut out by ``x(delta(W)) >= 2`` for every W with ``|W & T|`` even,
``x(delta(partition)) >= |partition| - 1`` for every vertex partition and
``0 <= x <= 2``.  Constraints are generated lazily; separation is exhaustive.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .graph import (
    DEFAULT_CAPS,
    CapacityError,
    Caps,
    Cut,
    Instance,
    Partition,
    cut_edges,
    cut_values,
    labels_to_partition,
    mask_vertices,
    partition_cross_edges,
    scale_to_int,
    set_partitions,
    vertex_mask,
)
from .simplex import maximize

log = logging.getLogger(__name__)

Constraint = Union[Cut, Partition]

# violated constraints of each family added per round
PER_ROUND = 6


@dataclass(frozen=True)
class LpSolution:
    x_star: tuple[Fraction, ...]
    value: Fraction
    active_constraints: tuple[Constraint, ...]
    rounds: int = 0

    def constraint_lines(self) -> list[str]:
        return [format_constraint(c) for c in self.active_constraints]


def format_constraint(c: Constraint) -> str:
    if isinstance(c, Cut):
        return f"cut {c.describe()} >= 2"
    classes = "|".join(" ".join(map(str, sorted(k))) for k in c)
    return f"partition {classes} >= {len(c) - 1}"


def _even_cut_violations(inst: Instance, x: Sequence[Fraction], caps: Caps) -> list[tuple[int, int]]:
    """(shortfall, side mask) for every violated even cut, most violated first."""
    sides, values, d = cut_values(inst.graph, x, caps)
    tmask = vertex_mask(inst.terminals)
    out = []
    for side, val in zip(sides, values):
        if bin(side & tmask).count("1") % 2 == 0 and val < 2 * d:
            out.append((2 * d - val, side))
    out.sort(key=lambda p: (-p[0], sorted(mask_vertices(p[1]))))
    return out


def _partition_violations(inst: Instance, x: Sequence[Fraction], caps: Caps,
                          limit: int | None = None) -> list[tuple[int, Partition]]:
    g = inst.graph
    if g.n > caps.partition_enum:
        raise CapacityError(f"partition enumeration capped at n <= {caps.partition_enum}, got n = {g.n}")
    xs, d = scale_to_int(x)
    live = [(u, v, xs[e]) for e, (u, v) in enumerate(g.edges) if xs[e]]
    out = []
    for labels in set_partitions(g.n):
        k = max(labels) + 1
        if k == 1:
            continue
        val = sum(w for u, v, w in live if labels[u] != labels[v])
        short = (k - 1) * d - val
        if short > 0:
            out.append((short, labels_to_partition(labels)))
    # stable sort keeps enumeration order among equal shortfalls
    out.sort(key=lambda p: -p[0])
    return out if limit is None else out[:limit]


def separate_even_cut(inst: Instance, x: Sequence[Fraction], caps: Caps = DEFAULT_CAPS) -> Cut | None:
    found = _even_cut_violations(inst, x, caps)
    if not found:
        return None
    return cut_edges(inst.graph, mask_vertices(found[0][1]))


def separate_partition(inst: Instance, x: Sequence[Fraction], caps: Caps = DEFAULT_CAPS) -> Partition | None:
    found = _partition_violations(inst, x, caps)
    return found[0][1] if found else None


def _row(inst: Instance, c: Constraint) -> tuple[frozenset[int], int]:
    if isinstance(c, Cut):
        return c.edges, 2
    return partition_cross_edges(inst.graph, c), len(c) - 1


def _initial_constraints(inst: Instance) -> list[Constraint]:
    g = inst.graph
    out: list[Constraint] = []
    for v in range(1, g.n):
        if v not in inst.terminals:
            out.append(cut_edges(g, {v}))
    # vertex 0 shares its cut with the complement side
    if g.n > 1 and 0 not in inst.terminals:
        c0 = cut_edges(g, {0})
        if c0 not in out:
            out.append(c0)
    if g.n > 1:
        out.append(tuple(frozenset({v}) for v in range(g.n)))
    return out


def _solve_restricted(inst: Instance, constraints: Sequence[Constraint]) -> tuple[Fraction, ...]:
    """Optimum over the listed constraints and the bounds, via y = 2 - x."""
    m = inst.graph.m
    A = []
    b = []
    for c in constraints:
        edges, rhs = _row(inst, c)
        A.append([1 if e in edges else 0 for e in range(m)])
        b.append(2 * len(edges) - rhs)
    for e in range(m):
        A.append([1 if j == e else 0 for j in range(m)])
        b.append(2)
    res = maximize(inst.lengths, A, b)
    return tuple(2 - y for y in res.x)


def solve_relaxation(inst: Instance, caps: Caps = DEFAULT_CAPS) -> LpSolution:
    g = inst.graph
    if g.n > caps.cut_enum:
        raise CapacityError(f"cut enumeration capped at n <= {caps.cut_enum}, got n = {g.n}")
    if g.n > caps.partition_enum:
        raise CapacityError(f"partition enumeration capped at n <= {caps.partition_enum}, got n = {g.n}")
    constraints = _initial_constraints(inst)
    rounds = 0
    while True:
        rounds += 1
        x = _solve_restricted(inst, constraints)
        cuts = _even_cut_violations(inst, x, caps)[:PER_ROUND]
        parts = _partition_violations(inst, x, caps, PER_ROUND)
        if not cuts and not parts:
            break
        for _, side in cuts:
            constraints.append(cut_edges(g, mask_vertices(side)))
        for _, p in parts:
            constraints.append(p)
        log.debug("round %d: added %d cuts, %d partitions", rounds, len(cuts), len(parts))
    active = tuple(c for c in constraints
                   if sum((x[e] for e in _row(inst, c)[0]), Fraction(0)) == _row(inst, c)[1])
    return LpSolution(x_star=x, value=inst.dot(x), active_constraints=active, rounds=rounds)


def satisfies_relaxation(inst: Instance, x: Sequence[Fraction], caps: Caps = DEFAULT_CAPS) -> bool:
    if any(v < 0 or v > 2 for v in x):
        return False
    return separate_even_cut(inst, x, caps) is None and separate_partition(inst, x, caps) is None
