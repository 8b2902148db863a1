"""Command-line front end.

Commands: ``solve``, ``certify``, ``oracle``, ``constants`` and ``gen``.
Exit codes: 0 success, 1 unsupported request, 2 parse or input error,
3 capacity exceeded, 4 certificate failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .analysis import Certificate, narrow_cuts, narrow_cuts_by_enumeration, verify_certificates
from .bom import BomReport, best_of_many, brute_force_opt
from .constants import (
    BETA_STAR,
    DomainError,
    constants_table,
    minimize_mixed_bound,
    mixed_bound,
    printed_omegas,
)
from .decomposition import packing_value_oracle
from .graph import DEFAULT_CAPS, CapacityError, Caps, Instance, InstanceError, odd_degree_vertices
from .instances import FIXTURES, fixture, format_instance, gen_random, parse_instance
from .tjoin import brute_force_tjoin, min_tjoin

log = logging.getLogger("ttour")

EXIT_OK = 0
EXIT_UNSUPPORTED = 1
EXIT_PARSE = 2
EXIT_CAPACITY = 3
EXIT_CERTIFICATE = 4

TJOIN_ORACLE_EDGES = 12


@dataclass
class RunConfig:
    command: str
    instance: str | None = None
    beta: Fraction = BETA_STAR
    seed: int = 0
    caps: Caps = DEFAULT_CAPS
    out: str | None = None
    fmt: str = "json"
    gen: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.beta = Fraction(self.beta)
        if not Fraction(1, 3) < self.beta < Fraction(1, 2):
            raise DomainError(f"beta = {self.beta} outside (1/3, 1/2)")
        if self.fmt not in ("json", "text"):
            raise ValueError(f"unknown format {self.fmt!r}")


def rat(v: Fraction) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def load_instance(source: str) -> Instance:
    if source in FIXTURES:
        return fixture(source)
    text = sys.stdin.read() if source == "-" else Path(source).read_text()
    return parse_instance(text)


def instance_json(inst: Instance) -> dict:
    return {
        "n": inst.graph.n,
        "m": inst.graph.m,
        "terminals": sorted(inst.terminals),
        "edges": [[u, v, rat(c)] for (u, v), c in zip(inst.graph.edges, inst.lengths)],
    }


def report_json(inst: Instance, rep: BomReport) -> dict:
    return {
        "lp_value": rat(rep.lp.value),
        "x_star": [rat(v) for v in rep.lp.x_star],
        "active_constraints": rep.lp.constraint_lines(),
        "combo": [{"lambda": rat(lam), "tree": sorted(f)} for f, lam in rep.combo.members],
        "tours": [
            {
                "tree": sorted(t.tree),
                "join": sorted(t.join),
                "tour": list(t.tour),
                "length": rat(t.length),
                "tree_length": rat(t.tree_length),
                "join_length": rat(t.join_length),
            }
            for t in rep.per_tree
        ],
        "best": rep.best,
        "best_length": rat(rep.best_tour.length),
        "ratio_R": None if rep.ratio_R is None else rat(rep.ratio_R),
    }


def _oracle(inst: Instance, caps: Caps) -> tuple[int, dict]:
    g = inst.graph
    rep = best_of_many(inst, caps)
    opt = brute_force_opt(inst, caps)
    comparisons: dict[str, Any] = {}
    comparisons["lp_le_opt"] = {"lp": rat(rep.lp.value), "opt": rat(opt.length),
                                "ok": rep.lp.value <= opt.length}
    best = rep.best_tour.length
    comparisons["best_le_8_5_opt"] = {"best": rat(best), "bound": rat(Fraction(8, 5) * opt.length),
                                      "ok": best <= Fraction(8, 5) * opt.length}
    if g.m <= TJOIN_ORACLE_EDGES:
        targets = {frozenset(inst.terminals)}
        targets |= {odd_degree_vertices(g, f) ^ inst.terminals for f in rep.combo.trees}
        rows = []
        for tp in sorted(targets, key=sorted):
            fast = min_tjoin(inst, tp, caps).length
            slow = brute_force_tjoin(inst, tp, TJOIN_ORACLE_EDGES)
            rows.append({"tprime": sorted(tp), "matching": rat(fast), "subsets": rat(slow),
                         "ok": fast == slow})
        comparisons["tjoin"] = rows
    if g.m <= caps.tree_enum:
        nu = packing_value_oracle(g, rep.lp.x_star, caps)
        comparisons["packing"] = {"oracle": rat(nu), "column_generation": rat(rep.combo.packing_value),
                                  "ok": (nu >= 1) and nu == rep.combo.packing_value}
    if g.n <= caps.narrow_oracle:
        fast = {nc.cut.edges for nc in narrow_cuts(inst, rep.lp.x_star, rep.combo)}
        slow = {c.edges for c in narrow_cuts_by_enumeration(inst, rep.lp.x_star, caps)}
        comparisons["narrow_cuts"] = {"count": len(slow), "ok": fast == slow}

    def oks(v: Any) -> list[bool]:
        if isinstance(v, dict):
            return [v["ok"]] if "ok" in v else []
        return [r["ok"] for r in v]

    all_ok = all(ok for v in comparisons.values() for ok in oks(v))
    payload = {"opt": {"length": rat(opt.length), "tour": list(opt.tour)},
               "comparisons": comparisons, "all_ok": all_ok}
    payload.update(report_json(inst, rep))
    return (EXIT_OK if all_ok else EXIT_CERTIFICATE), payload


def _constants() -> dict:
    mix = minimize_mixed_bound()
    return {
        "table": constants_table(),
        "mixed_bound": {
            "beta": mix.beta,
            "y": mix.y,
            "epsilon": mix.epsilon,
            "sample_4_9_y_0.05": mixed_bound(4 / 9, 0.05),
            "printed_omegas_at_optimum": printed_omegas(mix.beta, mix.y),
        },
    }


def run(config: RunConfig) -> tuple[int, dict]:
    cmd = config.command
    report: dict[str, Any] = {"command": cmd}
    if cmd == "constants":
        report.update(_constants())
        return EXIT_OK, report
    if cmd == "gen":
        opts = config.gen
        if opts.get("family", "random") != "random":
            report["error"] = f"instance family {opts['family']!r} is not available"
            return EXIT_UNSUPPORTED, report
        inst = gen_random(opts["n"], opts["m"], config.seed, opts.get("weights", (1, 9)),
                          opts.get("t_size", 2))
        report["instance"] = instance_json(inst)
        report["text"] = format_instance(inst)
        return EXIT_OK, report

    inst = load_instance(config.instance)
    report["instance"] = {"source": config.instance, **instance_json(inst)}
    if cmd == "solve":
        report.update(report_json(inst, best_of_many(inst, config.caps)))
        return EXIT_OK, report
    if cmd == "certify":
        rep = best_of_many(inst, config.caps)
        report.update(report_json(inst, rep))
        cert: Certificate = verify_certificates(inst, rep, config.beta, config.caps)
        report["certificate"] = cert.to_json()
        return (EXIT_OK if cert.all_passed else EXIT_CERTIFICATE), report
    if cmd == "oracle":
        code, payload = _oracle(inst, config.caps)
        report.update(payload)
        return code, report
    raise ValueError(f"unknown command {cmd!r}")


def _text(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if cmd == "gen" and "text" in report:
        return report["text"]
    if cmd == "constants":
        for row in report["table"]:
            ex = row.get("exact")
            extra = f"  exact: omega={ex['omega']} f={ex['f']} eps={ex['epsilon']}" if ex else ""
            lines.append(f"beta={row['beta']:>6}  omega={row['omega']:.6f}  f={row['f']:.6f}  "
                         f"eps={row['epsilon']:.6f}  ratio={row['ratio']:.6f}{extra}")
        mb = report["mixed_bound"]
        lines.append(f"mixed bound minimum: beta={mb['beta']:.6f} y={mb['y']:.2e} eps={mb['epsilon']:.8f}")
        return "\n".join(lines) + "\n"
    if "lp_value" in report:
        lines.append(f"lp value        {report['lp_value']}")
        for c in report["combo"]:
            lines.append(f"lambda {c['lambda']} : " + " ".join(f"e{e}" for e in c["tree"]))
        lines.append(f"best tour       #{report['best']} length {report['best_length']}")
        lines.append(f"ratio R         {report['ratio_R']}")
    if "certificate" in report:
        for name, chk in report["certificate"]["checks"].items():
            status = {True: "PASS", False: "FAIL", None: "SKIP"}[chk["pass"]]
            lines.append(f"{status} {name:<17} lhs={chk['lhs']} rhs={chk['rhs']} ({chk['count']} checks)")
    if "comparisons" in report:
        lines.append(f"opt             {report['opt']['length']}")
        lines.append(f"all oracle comparisons agree: {report['all_ok']}")
    return "\n".join(lines) + "\n"


def _parse_weights(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi or lo)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ttour", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0)
        for f in fields(Caps):
            p.add_argument(f"--cap-{f.name.replace('_', '-')}", type=int, default=f.default,
                           dest=f"cap_{f.name}")

    for name, help_text in (("solve", "LP, tree decomposition and Best-of-Many"),
                            ("certify", "solve, then check every inequality of the analysis"),
                            ("oracle", "solve and compare against exhaustive oracles")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("instance", help="instance file, '-' for stdin, or a fixture name")
        p.add_argument("--beta", type=Fraction, default=BETA_STAR)
        common(p)
    common(sub.add_parser("constants", help="beta table and mixed-bound minimization"))
    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("family", nargs="?", default="random")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--m", type=int, default=9)
    p.add_argument("--t-size", type=int, default=2)
    p.add_argument("--weights", type=_parse_weights, default=(1, 9), help="lo:hi")
    common(p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        caps = Caps(**{f.name: getattr(args, f"cap_{f.name}") for f in fields(Caps)})
        config = RunConfig(command=args.command, instance=getattr(args, "instance", None),
                           beta=getattr(args, "beta", BETA_STAR), seed=args.seed, caps=caps,
                           out=args.out, fmt=args.fmt)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.command == "gen":
        config.gen = {"family": args.family, "n": args.n, "m": args.m,
                      "t_size": args.t_size, "weights": args.weights}
        if args.fmt == "json" and not args.out:
            config.fmt = "text"
    try:
        code, report = run(config)
    except (InstanceError, DomainError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapacityError as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    if code == EXIT_UNSUPPORTED:
        print(f"error: {report['error']}", file=sys.stderr)
        return code
    if config.command == "gen" and config.out:
        body = report["text"]
    else:
        body = json.dumps(report, indent=2) + "\n" if config.fmt == "json" else _text(report)
    if config.out:
        Path(config.out).write_text(body)
    else:
        sys.stdout.write(body)
    return code


if __name__ == "__main__":
    sys.exit(main())
