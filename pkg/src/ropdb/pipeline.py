"""End-to-end evaluation: parse, plan, provenance DAG, co-table graph,
read-once decomposition, probability."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .cotable import Mode, comp_cotable, find_induced_p4
from .errors import EmptyResultError
from .expr import DEFAULT_ENUM_CAP, readonce_probability, render
from .pdb import Instance, load_instance, restrict
from .provenance import dag_stats, default_plan, eval_plan, parse_plan
from .query import Query, parse_query, table_adjacency
from .readonce import Outcome, comp_ro

STAT_KEYS = ("n", "k", "m_H", "beta_H", "m_co", "m_C", "m_T", "depth",
             "row_decomps", "table_decomps")


@dataclass
class Report:
    read_once: bool
    outcome: str
    expression: str | None = None
    probability: float | None = None
    stats: dict = field(default_factory=dict)
    p4_witness: list | None = None
    tree: object = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "read_once": self.read_once,
            "outcome": self.outcome,
            "expression": self.expression,
            "probability": self.probability,
            "stats": {k: self.stats.get(k) for k in STAT_KEYS},
            "p4_witness": self.p4_witness,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _load_query(query) -> Query:
    if isinstance(query, Query):
        return query
    text = str(query)
    if not text.lstrip().startswith(("Q", "q")) or ":-" not in text:
        path = Path(text)
        if path.is_file():
            text = path.read_text(encoding="utf-8")
    return parse_query(text)


def evaluate(query, instance, plan=None, *, cap: int | None = None,
             debug: bool = False, cooccurrence: bool = True) -> Report:
    """Run the whole pipeline for a boolean query on one instance.

    Parameters
    ----------
    query : Query, str or path
        Query object, rule text, or a file containing the rule.
    instance : Instance or path
        Instance object or a TSV directory.
    plan : Plan, str or None
        Plan object or s-expression; defaults to left-deep joins.
    cap : int
        Variable limit for the P4 witness search on non-read-once results.
    debug : bool
        Check that row and table decomposition never both apply.
    cooccurrence : bool
        Also compute the co-occurrence graph (fills ``m_co`` and the witness).
    """
    q = _load_query(query)
    inst = instance if isinstance(instance, Instance) else load_instance(instance)
    q.check_against(inst)
    if plan is None:
        plan = default_plan(q)
    elif isinstance(plan, (str, Path)):
        text = str(plan)
        if not text.lstrip().startswith("("):
            text = Path(text).read_text(encoding="utf-8")
        plan = parse_plan(text, q)
    gt = table_adjacency(q)
    stats = {"k": q.k, "m_T": gt.m_T}
    try:
        _, dag = eval_plan(plan, inst)
    except EmptyResultError:
        stats.update(n=0, m_H=0, beta_H=0, m_co=0, m_C=0, depth=0,
                     row_decomps=0, table_decomps=0)
        return Report(True, Outcome.EMPTY.value, None, 0.0, stats)

    ds = dag_stats(dag)
    stats.update(n=ds.n, m_H=ds.m_H, beta_H=ds.beta_H, n_H=ds.n_H)
    gc = comp_cotable(dag, gt, Mode.COTABLE)
    gco = comp_cotable(dag, None, Mode.COOCCURRENCE) if cooccurrence else None
    stats.update(m_C=gc.m, m_co=gco.m if gco is not None else None)

    used = restrict(inst, dag.leaves())
    res = comp_ro(q, used, gc, gt, debug=debug)
    stats.update({k: res.stats.get(k) for k in ("depth", "row_decomps", "table_decomps")})
    if res.outcome is Outcome.SUCCESS:
        prob = readonce_probability(res.tree, inst.probabilities)
        return Report(True, res.outcome.value, render(res.tree, inst.names), prob, stats,
                      tree=res.tree)
    witness = None
    limit = DEFAULT_ENUM_CAP if cap is None else cap
    if gco is not None and ds.n <= limit:
        found = find_induced_p4(gco)
        if found is not None:
            witness = [inst.names[v] for v in found]
    return Report(False, res.outcome.value, None, None, stats, witness)
