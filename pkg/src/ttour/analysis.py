"""Exact certificates for the 8/5 analysis of Best-of-Many Christofides.

Every check here is a theorem about the LP optimum ``x*`` and the tree
combination ``lambda`` returned by :func:`ttour.bom.best_of_many`; a failing
check therefore signals a bug and carries a concrete witness.  All
comparisons are exact: rationals, or :class:`~ttour.constants.QuadSurd` when
``f(beta)`` is irrational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .bom import BomReport, OptResult, brute_force_opt, christofides_single
from .constants import HIGH, LOW, DomainError, QuadSurd, f_beta_exact
from .decomposition import TreeCombination, verify_domination
from .graph import (
    DEFAULT_CAPS,
    Caps,
    Cut,
    Instance,
    all_cuts,
    cut_values,
    fundamental_cut,
    indicator,
    mask_vertices,
    min_odd_cut,
    min_spanning_tree,
    odd_degree_vertices,
    tree_join,
    validate_ttour,
    vertex_mask,
)
from .tjoin import min_tjoin, qplus_contains, shortest_path_metric

ZERO = Fraction(0)


@dataclass(frozen=True)
class ParityVectors:
    p_star: tuple[Fraction, ...]
    q_star: tuple[Fraction, ...]


@dataclass(frozen=True)
class NarrowCut:
    cut: Cut
    x_star_value: Fraction
    xq: tuple[Fraction, ...]
    one_tree_prob: Fraction


def parity_vectors(combo: TreeCombination, t: Sequence[int]) -> ParityVectors:
    g = combo.graph
    p = [ZERO] * g.m
    q = [ZERO] * g.m
    for f, lam in combo.members:
        ft = tree_join(g, f, t)
        for e in f:
            if e in ft:
                p[e] += lam
            else:
                q[e] += lam
    return ParityVectors(tuple(p), tuple(q))


def _repair_vector(combo: TreeCombination, cut: Cut) -> tuple[tuple[Fraction, ...], Fraction]:
    xq = [ZERO] * combo.graph.m
    prob = ZERO
    for f, lam in combo.members:
        hit = f & cut.edges
        if len(hit) == 1:
            (e,) = hit
            xq[e] += lam
            prob += lam
    return tuple(xq), prob


def _ordered(cuts) -> list[Cut]:
    return sorted(cuts, key=lambda c: (len(c.side), sorted(c.side)))


def fundamental_cut_candidates(combo: TreeCombination) -> list[Cut]:
    seen: dict[frozenset[int], Cut] = {}
    for f, _ in combo.members:
        for e in sorted(f):
            c = fundamental_cut(combo.graph, f, e)
            seen.setdefault(c.edges, c)
    return _ordered(seen.values())


def narrow_cuts(inst: Instance, x_star: Sequence[Fraction], combo: TreeCombination) -> list[NarrowCut]:
    """Cuts with ``x*(Q) < 2`` and their repair vectors.

    A cut crossed exactly once by some tree in the combination is that tree's
    fundamental cut, and every narrow cut is crossed once with positive
    probability, so the fundamental cuts are a complete candidate list.
    """
    out = []
    for c in fundamental_cut_candidates(combo):
        val = c.value(x_star)
        if val < 2:
            xq, prob = _repair_vector(combo, c)
            out.append(NarrowCut(c, val, xq, prob))
    return out


def narrow_cuts_by_enumeration(inst: Instance, x_star: Sequence[Fraction],
                               caps: Caps = DEFAULT_CAPS) -> list[Cut]:
    return _ordered(c for c in all_cuts(inst.graph, caps) if c.value(x_star) < 2)


def _check_beta(beta: Fraction) -> None:
    if not LOW < beta < HIGH:
        raise DomainError(f"beta = {beta} outside (1/3, 1/2)")


def f_q(beta: Fraction, x_star_value: Fraction) -> Fraction:
    """Repair coefficient ``max(0, (4b - 1 - b x*(Q)) / (2 - x*(Q)))`` of a narrow cut."""
    beta = Fraction(beta)
    _check_beta(beta)
    if x_star_value >= 2:
        raise DomainError(f"x*(Q) = {x_star_value} is not below 2")
    return max(ZERO, (4 * beta - 1 - beta * x_star_value) / (2 - x_star_value))


def s_vector(inst: Instance, f: frozenset[int], beta: Fraction,
             narrow: Sequence[NarrowCut]) -> tuple[Fraction, ...]:
    s = [ZERO] * inst.graph.m
    for nc in narrow:
        if len(f & nc.cut.edges) >= 2:
            k = f_q(beta, nc.x_star_value)
            if k:
                for e, v in enumerate(nc.xq):
                    if v:
                        s[e] += k * v
    return tuple(s)


def deficit(inst: Instance, f: frozenset[int], c_cut: Cut, beta: Fraction,
            x_star: Sequence[Fraction]) -> Fraction:
    beta = Fraction(beta)
    _check_beta(beta)
    xc = c_cut.value(x_star)
    crossing = len(f & c_cut.edges)
    if xc < 2 and crossing == 1:
        return ZERO
    return max(ZERO, 1 - (beta * xc + (1 - 2 * beta) * crossing))


# -- certificate plumbing ----------------------------------------------------

def _fmt(v: Any) -> Any:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, QuadSurd):
        return str(v)
    if isinstance(v, (frozenset, set)):
        return sorted(v)
    if isinstance(v, Cut):
        return {"side": sorted(v.side), "edges": sorted(v.edges)}
    if isinstance(v, dict):
        return {k: _fmt(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_fmt(x) for x in v]
    return v


@dataclass
class Check:
    name: str
    passed: bool | None  # None: skipped
    lhs: Any = None
    rhs: Any = None
    count: int = 0
    witness: dict = field(default_factory=dict)
    note: str = ""

    def to_json(self) -> dict:
        out = {"pass": self.passed, "lhs": _fmt(self.lhs), "rhs": _fmt(self.rhs),
               "count": self.count, "witness": _fmt(self.witness)}
        if self.note:
            out["note"] = self.note
        return out


class _Tally:
    """Collects sub-inequalities ``lhs <= rhs``; reports the first failure or the tightest one."""

    def __init__(self, name: str):
        self.name = name
        self.count = 0
        self.failure: tuple | None = None
        self.tight: tuple | None = None

    def leq(self, lhs: Fraction, rhs: Fraction | QuadSurd, **witness: Any) -> bool:
        self.count += 1
        gap = rhs - lhs
        ok = gap.sign() >= 0 if isinstance(gap, QuadSurd) else gap >= 0
        if not ok and self.failure is None:
            self.failure = (lhs, rhs, witness)
        slack = float(gap)
        if self.tight is None or slack < self.tight[0]:
            self.tight = (slack, lhs, rhs, witness)
        return ok

    def holds(self, ok: bool, **witness: Any) -> bool:
        self.count += 1
        if not ok and self.failure is None:
            self.failure = (None, None, witness)
        return ok

    def result(self, note: str = "") -> Check:
        if self.failure is not None:
            lhs, rhs, w = self.failure
            return Check(self.name, False, lhs, rhs, self.count, w, note)
        if self.tight is not None:
            _, lhs, rhs, w = self.tight
            return Check(self.name, True, lhs, rhs, self.count, w, note)
        return Check(self.name, True, None, None, self.count, {}, note)


def _skipped(name: str, why: str) -> Check:
    return Check(name, None, note=why)


@dataclass
class Certificate:
    beta: Fraction
    checks: dict[str, Check]

    @property
    def all_passed(self) -> bool:
        return all(c.passed is not False for c in self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, c in self.checks.items() if c.passed is False]

    def to_json(self) -> dict:
        return {"beta": _fmt(self.beta), "all_pass": self.all_passed,
                "checks": {k: c.to_json() for k, c in self.checks.items()}}


@dataclass
class _Context:
    inst: Instance
    report: BomReport
    beta: Fraction
    caps: Caps
    x: tuple[Fraction, ...]
    members: tuple[tuple[frozenset[int], Fraction], ...]
    pq: ParityVectors
    narrow: list[NarrowCut]
    taus: list[Fraction]
    tprimes: list[frozenset[int]]
    f_beta: QuadSurd
    opt: OptResult | None
    full_cuts: list[Cut] | None  # None above the enumeration cap

    @property
    def expected_tau(self) -> Fraction:
        return sum((lam * t for (_, lam), t in zip(self.members, self.taus)), ZERO)

    @property
    def cx(self) -> Fraction:
        return self.report.lp.value


def _prob_split(members, cut: Cut) -> tuple[Fraction, Fraction]:
    one = two = ZERO
    for f, lam in members:
        k = len(f & cut.edges)
        if k == 1:
            one += lam
        elif k >= 2:
            two += lam
    return one, two


def _lemma2(ctx: _Context) -> Check:
    tally = _Tally("lemma2")
    cuts = {c.edges: c for c in fundamental_cut_candidates(ctx.report.combo)}
    for c in ctx.full_cuts or ():
        cuts.setdefault(c.edges, c)
    for c in _ordered(cuts.values()):
        xc = c.value(ctx.x)
        one, two = _prob_split(ctx.members, c)
        tally.holds(one + two == 1, cut=c, reason="some tree misses the cut")
        tally.leq(two, xc - 1, cut=c, inequality="Pr(|C&F|>=2) <= x*(C)-1")
        tally.leq(2 - xc, one, cut=c, inequality="Pr(|C&F|=1) >= 2-x*(C)")
        if xc < 2:
            for (f, _), tp in zip(ctx.members, ctx.tprimes):
                if len(f & c.edges) == 1:
                    tally.holds(not c.is_odd(tp), cut=c, tree=f,
                                reason="narrow cut crossed once is a T_F^T-cut")
    return tally.result()


def _lemma3(ctx: _Context) -> Check:
    tally = _Tally("lemma3")
    t = ctx.inst.terminals
    for nc in ctx.narrow:
        tally.holds(nc.cut.is_odd(t), cut=nc.cut, reason="narrow cut is not a T-cut")
    for f, _ in ctx.members:
        ft = tree_join(ctx.inst.graph, f, t)
        for e in sorted(f):
            owners = [nc.cut for nc in ctx.narrow if nc.cut.edges & f == {e}]
            tally.holds(len(owners) <= 1, tree=f, edge=e, cuts=owners,
                        reason="tree edge is the single crossing of two narrow cuts")
            if owners:
                tally.holds(e in ft, tree=f, edge=e, reason="single crossing edge outside F(T)")
    return tally.result()


def _lemma4(ctx: _Context) -> Check:
    tally = _Tally("lemma4")
    total = [ZERO] * ctx.inst.graph.m
    for nc in ctx.narrow:
        outside = [e for e, v in enumerate(nc.xq) if v and e not in nc.cut.edges]
        tally.holds(not outside, cut=nc.cut, edges=outside, reason="x^Q nonzero outside Q")
        mass = sum(nc.xq, ZERO)
        tally.holds(mass == nc.one_tree_prob, cut=nc.cut, reason="x^Q(Q) != Pr(|Q&F|=1)")
        tally.leq(2 - nc.x_star_value, mass, cut=nc.cut, inequality="x^Q(Q) >= 2-x*(Q)")
        for e, v in enumerate(nc.xq):
            total[e] += v
    for e in range(ctx.inst.graph.m):
        tally.leq(total[e], ctx.pq.p_star[e], edge=e, inequality="sum_Q x^Q <= p*")
    return tally.result()


def _lemma5(ctx: _Context) -> Check:
    if ctx.full_cuts is None:
        return _skipped("lemma5", "n above the full cut enumeration cap")
    tally = _Tally("lemma5")
    b = ctx.beta
    for (f, _), tp in zip(ctx.members, ctx.tprimes):
        for c in ctx.full_cuts:
            if not c.is_odd(tp):
                continue
            d = deficit(ctx.inst, f, c, b, ctx.x)
            if d > 0:
                xc = c.value(ctx.x)
                tally.holds(xc < 2 and len(f & c.edges) >= 2, tree=f, cut=c,
                            reason="positive deficit outside narrow cuts crossed twice")
                tally.leq(d, 4 * b - 1 - b * xc, tree=f, cut=c,
                          inequality="deficit <= 4b-1-b x*(C)")
            else:
                tally.count += 1
    return tally.result()


def _lemma6_vector(ctx: _Context, f: frozenset[int]) -> tuple[Fraction, ...]:
    b = ctx.beta
    chi = indicator(ctx.inst.graph, f)
    s = s_vector(ctx.inst, f, b, ctx.narrow)
    return tuple(b * xv + (1 - 2 * b) * cv + sv for xv, cv, sv in zip(ctx.x, chi, s))


def _lemma6(ctx: _Context) -> Check:
    tally = _Tally("lemma6")
    for (f, _), tp in zip(ctx.members, ctx.tprimes):
        if not tp:
            tally.count += 1
            continue
        v = _lemma6_vector(ctx, f)
        cut, value = min_odd_cut(ctx.inst.graph, tp, v, ctx.caps)
        tally.leq(Fraction(1), value, tree=f, cut=cut, inequality="v(C) >= 1 on every T_F^T-cut")
    return tally.result()


def _polyhedron(ctx: _Context) -> Check:
    """A shortest T'-join never costs more than a dominating vector of Q+(G,T')."""
    tally = _Tally("polyhedron")
    half = tuple((a + p) / 2 for a, p in zip(ctx.x, ctx.pq.p_star))
    for (f, _), tp, tau in zip(ctx.members, ctx.tprimes, ctx.taus):
        for label, v in (("lemma6", _lemma6_vector(ctx, f)), ("half", half)):
            if qplus_contains(ctx.inst.graph, tp, v, ctx.caps)[0]:
                tally.leq(tau, ctx.inst.dot(v), tree=f, vector=label)
    return tally.result()


def _claim1(ctx: _Context) -> tuple[Check, tuple[Fraction, ...]]:
    tally = _Tally("claim1")
    es = [ZERO] * ctx.inst.graph.m
    for f, lam in ctx.members:
        for e, v in enumerate(s_vector(ctx.inst, f, ctx.beta, ctx.narrow)):
            es[e] += lam * v
    rhs = (1 - ctx.beta) * ctx.cx + ctx.inst.dot(es)
    tally.leq(ctx.expected_tau, rhs, inequality="E[tau] <= (1-b) c.x* + c.E[s]")
    return tally.result(), tuple(es)


def _claim2(ctx: _Context) -> Check:
    tally = _Tally("claim2")
    for nc in ctx.narrow:
        _, two = _prob_split(ctx.members, nc.cut)
        tally.leq(two * f_q(ctx.beta, nc.x_star_value), ctx.f_beta, cut=nc.cut,
                  inequality="Pr(|Q&F|>=2) f^Q <= f(b)")
    return tally.result()


def _claim3(ctx: _Context, es: Sequence[Fraction]) -> Check:
    tally = _Tally("claim3")
    for e in range(ctx.inst.graph.m):
        tally.leq(es[e], ctx.f_beta * ctx.pq.p_star[e], edge=e, inequality="E[s] <= f(b) p*")
    return tally.result()


def _hoogeveen(ctx: _Context) -> Check:
    if ctx.opt is None:
        return _skipped("hoogeveen", "optimum oracle above its edge cap")
    tally = _Tally("hoogeveen")
    inst = ctx.inst
    f = min_spanning_tree(inst.graph, inst.lengths)
    tour = christofides_single(inst, f, ctx.caps)
    opt = ctx.opt.length
    tally.leq(tour.join_length, Fraction(2, 3) * opt, tree=f,
              inequality="tau(T_F^T) <= 2/3 OPT for a c-minimum tree")
    tally.leq(tour.length, Fraction(5, 3) * opt, tree=f, inequality="single-tree tour <= 5/3 OPT")
    return tally.result()


def _half_vector(ctx: _Context) -> Check:
    tally = _Tally("half_vector")
    g = ctx.inst.graph
    half = tuple((a + p) / 2 for a, p in zip(ctx.x, ctx.pq.p_star))
    if g.n == 1:
        return tally.result()
    sides, values, d = cut_values(g, half, ctx.caps)
    tsets = {vertex_mask(tp) for tp in ctx.tprimes}
    universal = g.n <= ctx.caps.universal_tprime
    if universal:
        # every even subset T' of V
        tsets |= {s for s in range(1 << g.n) if bin(s).count("1") % 2 == 0}
    tsets.discard(0)
    for tmask in sorted(tsets):
        best = min((val, side) for side, val in zip(sides, values)
                   if bin(side & tmask).count("1") % 2)
        tally.leq(Fraction(1), Fraction(best[0], d), tprime=mask_vertices(tmask),
                  side=mask_vertices(best[1]), inequality="(x*+p*)/2 on T'-cuts >= 1")
    note = "all even T'" if universal else "T' = T_F ^ T for the combination only"
    return tally.result(note)


def _two_bounds(ctx: _Context) -> Check:
    tally = _Tally("two_bounds")
    cq = ctx.inst.dot(ctx.pq.q_star)
    et = ctx.expected_tau
    tally.leq(et, ctx.cx - cq / 2, inequality="E[tau] <= c.x* - c.q*/2")
    tally.leq(et, cq, inequality="E[tau] <= c.q*")
    tally.leq(min(ctx.cx - cq / 2, cq), Fraction(2, 3) * ctx.cx, inequality="min(...) <= 2/3 c.x*")
    return tally.result()


def _theorem2(ctx: _Context) -> Check:
    tally = _Tally("theorem2")
    tally.leq(ctx.expected_tau, Fraction(3, 5) * ctx.cx, inequality="E[tau] <= 3/5 c.x*")
    return tally.result()


def _fact_lower_bound(ctx: _Context) -> Check:
    if ctx.opt is None:
        return _skipped("fact_lower_bound", "optimum oracle above its edge cap")
    tally = _Tally("fact_lower_bound")
    tally.leq(ctx.cx, ctx.opt.length, inequality="c.x* <= OPT")
    return tally.result()


def _fact_pq(ctx: _Context) -> Check:
    tally = _Tally("fact_pq")
    for e in range(ctx.inst.graph.m):
        tally.leq(ctx.pq.p_star[e] + ctx.pq.q_star[e], ctx.x[e], edge=e,
                  inequality="p* + q* <= x*")
    return tally.result()


def _ratios(ctx: _Context) -> dict[str, Check]:
    best = ctx.report.best_tour.length
    out = {}
    t = _Tally("ratio_lp")
    t.leq(best, Fraction(8, 5) * ctx.cx, inequality="best <= 8/5 c.x*")
    t.leq(best, ctx.cx + ctx.expected_tau, inequality="best <= c.x* + E[tau]")
    out["ratio_lp"] = t.result()
    if ctx.opt is None:
        out["ratio_opt"] = _skipped("ratio_opt", "optimum oracle above its edge cap")
    else:
        t = _Tally("ratio_opt")
        t.leq(best, Fraction(8, 5) * ctx.opt.length, inequality="best <= 8/5 OPT")
        out["ratio_opt"] = t.result()
    if ctx.inst.terminals:
        out["wolsey"] = _skipped("wolsey", "only for T empty")
    else:
        t = _Tally("wolsey")
        t.leq(best, Fraction(3, 2) * ctx.cx, inequality="best <= 3/2 c.x* when T is empty")
        out["wolsey"] = t.result()
    return out


def _structure(ctx: _Context) -> dict[str, Check]:
    out = {}
    t = _Tally("decomposition")
    t.holds(verify_domination(ctx.report.combo, ctx.x), reason="combination not dominated by x*")
    out["decomposition"] = t.result()
    t = _Tally("tours")
    for k, tour in enumerate(ctx.report.per_tree):
        t.holds(validate_ttour(ctx.inst, tour.tour), index=k, reason="not a T-tour")
        t.holds(tour.length == tour.tree_length + tour.join_length, index=k,
                reason="length mismatch")
    lengths = [tour.length for tour in ctx.report.per_tree]
    t.holds(lengths[ctx.report.best] == min(lengths), reason="best is not the shortest")
    out["tours"] = t.result()
    if ctx.full_cuts is None:
        out["narrow_complete"] = _skipped("narrow_complete", "n above the narrow-cut oracle cap")
    else:
        t = _Tally("narrow_complete")
        full = {c.edges for c in ctx.full_cuts if c.value(ctx.x) < 2}
        found = {nc.cut.edges for nc in ctx.narrow}
        t.holds(full == found, missing=[sorted(e) for e in full - found],
                extra=[sorted(e) for e in found - full])
        out["narrow_complete"] = t.result()
    return out


def verify_certificates(inst: Instance, report: BomReport, beta: Fraction = Fraction(4, 9),
                        caps: Caps = DEFAULT_CAPS, opt: OptResult | None = None) -> Certificate:
    beta = Fraction(beta)
    _check_beta(beta)
    g = inst.graph
    x = report.lp.x_star
    combo = report.combo
    if opt is None and g.m <= caps.bruteforce_edges:
        opt = brute_force_opt(inst, caps)
    metric = shortest_path_metric(inst)
    tprimes = [odd_degree_vertices(g, f) ^ inst.terminals for f in combo.trees]
    taus = [min_tjoin(inst, tp, caps, metric).length for tp in tprimes]
    full = list(all_cuts(g, caps)) if g.n <= min(caps.narrow_oracle, caps.cut_enum) else None
    ctx = _Context(inst=inst, report=report, beta=beta, caps=caps, x=x, members=combo.members,
                   pq=parity_vectors(combo, inst.terminals),
                   narrow=narrow_cuts(inst, x, combo), taus=taus, tprimes=tprimes,
                   f_beta=f_beta_exact(beta), opt=opt, full_cuts=full)
    claim1, es = _claim1(ctx)
    checks = {
        "lemma2": _lemma2(ctx),
        "lemma3": _lemma3(ctx),
        "lemma4": _lemma4(ctx),
        "lemma5": _lemma5(ctx),
        "lemma6": _lemma6(ctx),
        "claim1": claim1,
        "claim2": _claim2(ctx),
        "claim3": _claim3(ctx, es),
        "hoogeveen": _hoogeveen(ctx),
        "half_vector": _half_vector(ctx),
        "two_bounds": _two_bounds(ctx),
        "theorem2": _theorem2(ctx),
        "fact_lower_bound": _fact_lower_bound(ctx),
        "fact_pq": _fact_pq(ctx),
        "polyhedron": _polyhedron(ctx),
    }
    checks.update(_ratios(ctx))
    checks.update(_structure(ctx))
    return Certificate(beta, checks)
