"""Instance text format, built-in fixtures and the seeded random generator.

Format::

    n m |T|
    t_1 t_2 ...          (blank line when T is empty)
    u v weight           (m lines; weight is a decimal or p/q)

``#`` starts a comment.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .graph import Graph, Instance, InstanceError


class ParseError(InstanceError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_instance(text: str) -> Instance:
    # whole-line comments vanish; blank lines only matter as an empty T line
    lines = [(i + 1, _strip(raw)) for i, raw in enumerate(text.splitlines())
             if not raw.lstrip().startswith("#")]
    filled = [(no, s) for no, s in lines if s]
    if not filled:
        raise ParseError("empty instance")
    no, header = filled[0]
    try:
        n, m, tsize = (int(tok) for tok in header.split())
    except ValueError:
        raise ParseError("header must be 'n m |T|'", no) from None
    if n < 1:
        raise ParseError("n must be positive", no)
    rest = filled[1:]
    terminals: list[int] = []
    if tsize:
        if not rest:
            raise ParseError("missing terminal line", no)
        t_no, t_line = rest.pop(0)
        try:
            terminals = [int(tok) for tok in t_line.split()]
        except ValueError:
            raise ParseError("terminals must be integers", t_no) from None
        if len(terminals) != tsize:
            raise ParseError(f"expected {tsize} terminals, got {len(terminals)}", t_no)
        if len(set(terminals)) != len(terminals):
            raise ParseError("repeated terminal", t_no)
    if len(rest) != m:
        where = rest[-1][0] if rest else no
        raise ParseError(f"expected {m} edge lines, got {len(rest)}", where)
    edges = []
    lengths = []
    for k, s in rest:
        toks = s.split()
        if len(toks) != 3:
            raise ParseError("edge line must be 'u v weight'", k)
        try:
            u, v = int(toks[0]), int(toks[1])
            w = Fraction(toks[2])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad edge line {s!r}", k) from None
        if w < 0:
            raise ParseError("negative weight", k)
        edges.append((u, v))
        lengths.append(w)
    return Instance(Graph(n, tuple(edges)), frozenset(terminals), tuple(lengths))


def format_instance(inst: Instance) -> str:
    g = inst.graph
    out = [f"{g.n} {g.m} {len(inst.terminals)}",
           " ".join(map(str, sorted(inst.terminals)))]
    for (u, v), c in zip(g.edges, inst.lengths):
        out.append(f"{u} {v} {c}")
    return "\n".join(out) + "\n"


def _unit(edges: Sequence[tuple[int, int]], n: int, terminals: Sequence[int]) -> Instance:
    return Instance(Graph(n, tuple(edges)), frozenset(terminals), tuple(Fraction(1) for _ in edges))


FIXTURES = {
    "FIX-EDGE": lambda: _unit([(0, 1)], 2, [0, 1]),
    "FIX-TRI-TOUR": lambda: _unit([(0, 1), (1, 2), (0, 2)], 3, []),
    "FIX-TRI-PATH": lambda: _unit([(0, 1), (1, 2), (0, 2)], 3, [0, 2]),
    "FIX-C4": lambda: _unit([(0, 1), (1, 2), (2, 3), (3, 0)], 4, []),
}


def fixture(name: str) -> Instance:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}") from None


def gen_random(n: int, m: int, seed: int, weight_range: tuple[int, int] = (1, 9),
               t_size: int = 2, denominators: Sequence[int] = (1, 2, 3, 4)) -> Instance:
    """Connected simple graph: random spanning tree plus random extra pairs."""
    if n < 1:
        raise ValueError("n must be positive")
    if m < n - 1:
        raise ValueError(f"m = {m} cannot connect n = {n} vertices")
    if m > n * (n - 1) // 2:
        raise ValueError(f"m = {m} exceeds the {n * (n - 1) // 2} vertex pairs")
    if t_size % 2 or not 0 <= t_size <= n:
        raise ValueError(f"bad terminal count {t_size}")
    lo, hi = weight_range
    if lo < 0 or hi < lo:
        raise ValueError(f"bad weight range {weight_range}")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    pairs = set()
    for i in range(1, n):
        u, v = order[i], order[rng.randrange(i)]
        pairs.add((min(u, v), max(u, v)))
    others = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in pairs]
    pairs.update(rng.sample(others, m - (n - 1)))
    edges = sorted(pairs)
    rng.shuffle(edges)
    lengths = []
    for _ in edges:
        d = rng.choice(list(denominators))
        lengths.append(Fraction(rng.randint(lo * d, hi * d), d))
    terminals = frozenset(rng.sample(range(n), t_size))
    return Instance(Graph(n, tuple(edges)), terminals, tuple(lengths))
