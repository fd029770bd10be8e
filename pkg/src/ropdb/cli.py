"""Command-line front end: ``ropdb <subcommand> [options]``.

Exit codes: 0 for a read-once (or empty) result, 2 for valid input whose
expression is not read-once, 1 for input errors, 3 when ``oracle`` finds a
disagreement between the algorithm and the exhaustive checks.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .chainprob import chain_probability
from .cotable import Mode, comp_cotable, cooccurrence_from_idnf, has_induced_p4
from .errors import DomainError, EmptyResultError, RopdbError
from .expr import (equivalent_on_all_assignments, exact_probability, expand_to_idnf,
                   is_read_once_tree, to_expr)
from .generators import GenSpec, generate, write_generated
from .pdb import load_instance
from .pipeline import Report, evaluate
from .provenance import default_plan, eval_plan, parse_plan, read_expression
from .query import parse_query, table_adjacency

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_READ_ONCE = 2
EXIT_MISMATCH = 3

READ_COMMANDS = ("eval", "cotable", "oracle", "stats")


@dataclass
class CliConfig:
    subcommand: str
    instance: Path | None = None
    query: str | None = None
    plan: Path | None = None
    mode: str = "cotable"
    format: str = "text"
    cap: int = 22
    seed: int = 0
    debug: bool = False
    # gen / chain
    family: str | None = None
    n: int | None = None
    k: int | None = None
    arity: int | None = None
    rows: int | None = None
    domain: int | None = None
    p: str | None = None
    out: Path | None = None


def _env_cap() -> int:
    raw = os.environ.get("ROPDB_ENUM_CAP", "22")
    try:
        return int(raw)
    except ValueError:
        raise DomainError(f"ROPDB_ENUM_CAP must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ropdb",
        description="Read-once evaluation of boolean conjunctive queries on "
                    "tuple-independent probabilistic databases.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, mode=False):
        p.add_argument("--instance", type=Path, required=True,
                       help="directory of <relation>.tsv files")
        p.add_argument("--query", help="query file or rule text "
                       "(default: <instance>/query.txt)")
        p.add_argument("--plan", type=Path, help="s-expression plan file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--cap", type=int, default=None,
                       help="enumeration cap in variables (env ROPDB_ENUM_CAP)")
        if mode:
            p.add_argument("--mode", choices=("cotable", "cooccurrence"), default="cotable")

    p_eval = sub.add_parser("eval", help="decide read-once-ness and compute the probability")
    common(p_eval)
    p_eval.add_argument("--debug", action="store_true",
                        help="check that row and table splits never both apply")
    common(sub.add_parser("cotable", help="print the co-table or co-occurrence graph"),
           mode=True)
    common(sub.add_parser("oracle", help="cross-check against exhaustive oracles"))
    common(sub.add_parser("stats", help="print size statistics only"))

    p_gen = sub.add_parser("gen", help="write a generated instance directory")
    p_gen.add_argument("--family", required=True,
                       choices=("running_example", "repeated_blocks", "cross_product",
                                "star", "chain", "random"))
    p_gen.add_argument("--n", type=int)
    p_gen.add_argument("--k", type=int)
    p_gen.add_argument("--arity", type=int)
    p_gen.add_argument("--rows", type=int)
    p_gen.add_argument("--domain", type=int)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--p", help="probability (comma list or uniform:<v> for chain)")
    p_gen.add_argument("--out", type=Path, required=True)

    p_chain = sub.add_parser("chain", help="probability of the chain formula E_n")
    p_chain.add_argument("--n", type=int, required=True)
    p_chain.add_argument("--p", default="uniform:0.5",
                         help="comma list of n+1 probabilities or uniform:<v>")
    p_chain.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def config_from_args(argv=None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    cfg = CliConfig(subcommand=ns.subcommand)
    for name in vars(ns):
        if hasattr(cfg, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    if getattr(ns, "cap", None) is None:
        cfg.cap = _env_cap()
    return cfg


def _parse_probs(text: str, count: int) -> list:
    if text.startswith("uniform:"):
        return [float(text.split(":", 1)[1])] * count
    values = [float(x) for x in text.split(",") if x.strip()]
    if len(values) != count:
        raise DomainError(f"expected {count} probabilities, got {len(values)}")
    return values


def _query_text(cfg: CliConfig) -> str:
    if cfg.query is None:
        path = cfg.instance / "query.txt"
        if not path.is_file():
            raise DomainError(f"no --query given and {path} does not exist")
        return path.read_text(encoding="utf-8")
    if Path(cfg.query).is_file():
        return Path(cfg.query).read_text(encoding="utf-8")
    if ":-" in cfg.query:
        return cfg.query
    raise DomainError(f"query file {cfg.query} does not exist")


def _check_config(cfg: CliConfig) -> None:
    if cfg.cap < 1:
        raise DomainError("cap must be at least 1")
    if cfg.subcommand in READ_COMMANDS:
        if not cfg.instance.is_dir():
            raise DomainError(f"instance directory {cfg.instance} does not exist")
        if cfg.plan is not None and not cfg.plan.is_file():
            raise DomainError(f"plan file {cfg.plan} does not exist")


def _emit(text: str, out) -> None:
    if not text:
        return
    out.write(text if text.endswith("\n") else text + "\n")


def _report_text(report: Report) -> str:
    d = report.to_dict()
    lines = [f"read_once: {str(d['read_once']).lower()}", f"outcome: {d['outcome']}"]
    if d["expression"] is not None:
        lines.append(f"expression: {d['expression']}")
    if d["probability"] is not None:
        lines.append(f"probability: {d['probability']!r}")
    if d["p4_witness"]:
        lines.append("p4_witness: " + " - ".join(d["p4_witness"]))
    lines += [f"{k}: {v}" for k, v in d["stats"].items()]
    return "\n".join(lines)


def _load(cfg: CliConfig):
    inst = load_instance(cfg.instance)
    q = parse_query(_query_text(cfg))
    q.check_against(inst)
    plan = parse_plan(cfg.plan.read_text(encoding="utf-8"), q) if cfg.plan else default_plan(q)
    return inst, q, plan


def _cmd_eval(cfg: CliConfig, out) -> int:
    inst, q, plan = _load(cfg)
    report = evaluate(q, inst, plan, cap=cfg.cap, debug=cfg.debug)
    _emit(report.to_json() if cfg.format == "json" else _report_text(report), out)
    if report.outcome == "not_read_once":
        return EXIT_NOT_READ_ONCE
    return EXIT_OK


def _cmd_stats(cfg: CliConfig, out) -> int:
    inst, q, plan = _load(cfg)
    stats = evaluate(q, inst, plan, cap=cfg.cap).to_dict()["stats"]
    if cfg.format == "json":
        _emit(json.dumps(stats, sort_keys=True, indent=2), out)
    else:
        _emit("\n".join(f"{k}: {v}" for k, v in stats.items()), out)
    return EXIT_OK


def _cmd_cotable(cfg: CliConfig, out) -> int:
    inst, q, plan = _load(cfg)
    try:
        _, dag = eval_plan(plan, inst)
    except EmptyResultError:
        _emit("{}" if cfg.format == "json" else "", out)
        return EXIT_OK
    mode = Mode(cfg.mode)
    g = comp_cotable(dag, table_adjacency(q) if mode is Mode.COTABLE else None, mode)
    names = inst.names
    if cfg.format == "json":
        adj = g.adjacency()
        payload = {names[v]: sorted((names[u] for u in adj[v]), key=names.index)
                   for v in g.vertices}
        _emit(json.dumps(payload, sort_keys=True, indent=2), out)
    else:
        _emit("\n".join(f"{names[u]}\t{names[v]}" for u, v in g.sorted_edges()), out)
    return EXIT_OK


def _cmd_oracle(cfg: CliConfig, out) -> int:
    inst, q, plan = _load(cfg)
    report = evaluate(q, inst, plan, cap=cfg.cap)
    checks = {}
    if report.outcome != "empty":
        _, dag = eval_plan(plan, inst)
        expr = read_expression(dag)
        n = report.stats["n"]
        idnf = expand_to_idnf(expr)
        gco = comp_cotable(dag, None, Mode.COOCCURRENCE)
        checks["cooccurrence_matches_idnf"] = (
            gco.edges == cooccurrence_from_idnf(idnf, gco.vertices).edges)
        checks["read_once_iff_p4_free"] = report.read_once == (not has_induced_p4(gco))
        if report.read_once:
            checks["tree_is_read_once"] = is_read_once_tree(report.tree)
            checks["tree_idnf_matches"] = expand_to_idnf(to_expr(report.tree)) == idnf
            if n <= cfg.cap:
                checks["tree_equivalent"] = equivalent_on_all_assignments(
                    to_expr(report.tree), expr, cap=cfg.cap)
                exact = exact_probability(expr, inst.probabilities, cap=cfg.cap)
                checks["probability_matches"] = abs(exact - report.probability) <= 1e-9
    ok = all(checks.values())
    if cfg.format == "json":
        _emit(json.dumps({"checks": checks, "ok": ok, "report": report.to_dict()},
                         sort_keys=True, indent=2), out)
    else:
        lines = [f"{'PASS' if v else 'FAIL'} {k}" for k, v in checks.items()]
        lines.append(f"oracle: {'ok' if ok else 'mismatch'}")
        _emit("\n".join(lines), out)
    return EXIT_OK if ok else EXIT_MISMATCH


def _cmd_gen(cfg: CliConfig, out) -> int:
    family = cfg.family
    params: dict = {}
    if family in ("repeated_blocks", "cross_product", "chain", "star"):
        if cfg.n is None:
            raise DomainError(f"--n is required for {family}")
        params["n"] = cfg.n
    if family == "star":
        params["k"] = cfg.k if cfg.k is not None else 3
    if family == "random":
        params = {"k": cfg.k or 3, "arity": cfg.arity or 2, "rows": cfg.rows or 4,
                  "domain": cfg.domain or 2, "seed": cfg.seed}
    if cfg.p is not None:
        if family == "chain":
            params["p"] = _parse_probs(cfg.p, cfg.n + 1)
        elif family in ("repeated_blocks", "cross_product", "star"):
            params["p"] = float(cfg.p)
        else:
            raise DomainError(f"--p is not supported for {family}")
    inst, q = generate(GenSpec(family, params))
    path = write_generated(inst, q, cfg.out)
    _emit(str(path), out)
    return EXIT_OK


def _cmd_chain(cfg: CliConfig, out) -> int:
    if cfg.n < 1:
        raise DomainError("--n must be at least 1")
    probs = _parse_probs(cfg.p, cfg.n + 1)
    for v in probs:
        if not 0.0 < v <= 1.0:
            raise DomainError(f"probability {v} outside (0, 1]")
    value = chain_probability(probs)
    if cfg.format == "json":
        _emit(json.dumps({"n": cfg.n, "probability": value}, sort_keys=True), out)
    else:
        _emit(repr(value), out)
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "cotable": _cmd_cotable,
    "oracle": _cmd_oracle,
    "stats": _cmd_stats,
    "gen": _cmd_gen,
    "chain": _cmd_chain,
}


def run(cfg: CliConfig, out=None, err=None) -> int:
    """Execute one subcommand and return its exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        _check_config(cfg)
        return _COMMANDS[cfg.subcommand](cfg, out)
    except RopdbError as exc:
        err.write(f"error[{exc.code}]: {exc}\n")
    except (OSError, ValueError) as exc:
        err.write(f"error[input_error]: {exc}\n")
    return EXIT_INPUT


def main(argv=None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    try:
        cfg = config_from_args(argv)
    except RopdbError as exc:
        sys.stderr.write(f"error[{exc.code}]: {exc}\n")
        return EXIT_INPUT
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
