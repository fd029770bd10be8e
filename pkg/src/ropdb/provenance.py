"""SPJ plans over event tables and the provenance DAG they build.

Every scanned tuple becomes a leaf, every joined row pair an ``AND`` node over
the two operand roots, and every projection group an ``OR`` node over the
group's roots. Nodes not reachable from the final root are dropped, which is
the same as recursively deleting dangling roots after each operator.

Plan text is an s-expression over the query's relations::

    (project () (join (join (scan R) (scan S)) (scan T)))
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import EmptyResultError, PlanError
from .expr import And, Or, Var
from .query import Const, FoVar, Query, Subgoal

LEAF, AND, OR = 0, 1, 2


# ---------------------------------------------------------------------------
# plans


@dataclass(frozen=True)
class Scan:
    subgoal: Subgoal


@dataclass(frozen=True)
class Join:
    left: "Plan"
    right: "Plan"


@dataclass(frozen=True)
class Project:
    child: "Plan"
    keep: tuple = ()


Plan = Union[Scan, Join, Project]


def plan_relations(plan: Plan) -> list:
    if isinstance(plan, Scan):
        return [plan.subgoal.relation]
    if isinstance(plan, Join):
        return plan_relations(plan.left) + plan_relations(plan.right)
    return plan_relations(plan.child)


def plan_columns(plan: Plan) -> list:
    if isinstance(plan, Scan):
        return plan.subgoal.fo_vars()
    if isinstance(plan, Join):
        left = plan_columns(plan.left)
        return left + [c for c in plan_columns(plan.right) if c not in left]
    return list(plan.keep)


def plan_to_text(plan: Plan) -> str:
    if isinstance(plan, Scan):
        return f"(scan {plan.subgoal.relation})"
    if isinstance(plan, Join):
        return f"(join {plan_to_text(plan.left)} {plan_to_text(plan.right)})"
    return f"(project ({' '.join(plan.keep)}) {plan_to_text(plan.child)})"


def default_plan(q: Query) -> Plan:
    """Left-deep joins in subgoal order under a final empty projection."""
    plan: Plan = Scan(q.subgoals[0])
    for g in q.subgoals[1:]:
        plan = Join(plan, Scan(g))
    return Project(plan, ())


def right_deep_plan(q: Query) -> Plan:
    plan: Plan = Scan(q.subgoals[-1])
    for g in reversed(q.subgoals[:-1]):
        plan = Join(Scan(g), plan)
    return Project(plan, ())


def validate_plan(plan: Plan, q: Query) -> None:
    """Raise :class:`PlanError` unless ``plan`` computes the boolean query ``q``."""
    if not (isinstance(plan, Project) and plan.keep == ()):
        raise PlanError("plan root must project onto the empty attribute list")
    rels = plan_relations(plan)
    if sorted(rels) != sorted(q.relations):
        raise PlanError(f"plan relations {rels} do not match query {list(q.relations)}")

    def check(node):
        if isinstance(node, Join):
            check(node.left)
            check(node.right)
        elif isinstance(node, Project):
            check(node.child)
            cols = plan_columns(node.child)
            missing = [v for v in node.keep if v not in cols]
            if missing:
                raise PlanError(f"projection keeps unknown variables {missing}")
            inside = set(plan_relations(node))
            outside = {v for g in q.subgoals if g.relation not in inside for v in g.fo_vars()}
            dropped = (set(cols) - set(node.keep)) & outside
            if dropped:
                raise PlanError(f"projection drops variables {sorted(dropped)} still needed")

    check(plan)


_PLAN_TOKEN = re.compile(r"\s*([()]|[^\s()]+)")


def parse_plan(text: str, q: Query) -> Plan:
    """Parse the s-expression plan syntax, binding scans to ``q``'s subgoals."""
    toks = _PLAN_TOKEN.findall(text.strip())
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(toks) or toks[pos] != tok:
            got = toks[pos] if pos < len(toks) else "end of input"
            raise PlanError(f"expected {tok!r}, found {got!r}")
        pos += 1

    def node():
        nonlocal pos
        expect("(")
        if pos >= len(toks):
            raise PlanError("unexpected end of plan")
        op = toks[pos]
        pos += 1
        if op == "scan":
            name = toks[pos]
            pos += 1
            try:
                out = Scan(q.subgoal(name))
            except KeyError:
                raise PlanError(f"relation {name!r} is not in the query") from None
        elif op == "join":
            out = Join(node(), node())
        elif op == "project":
            expect("(")
            keep = []
            while pos < len(toks) and toks[pos] != ")":
                keep.append(toks[pos])
                pos += 1
            expect(")")
            out = Project(node(), tuple(keep))
        else:
            raise PlanError(f"unknown plan operator {op!r}")
        expect(")")
        return out

    plan = node()
    if pos != len(toks):
        raise PlanError("trailing input after plan")
    validate_plan(plan, q)
    return plan


# ---------------------------------------------------------------------------
# provenance DAG


@dataclass(frozen=True)
class ProvenanceDag:
    """Provenance DAG with integer node ids in creation order.

    ``kind[u]`` is LEAF, AND or OR; ``var[u]`` the variable id of a leaf (-1
    otherwise); ``succ[u]`` the ordered successor ids; ``layer[u]`` the index
    of the plan operator that created the node; ``leaf_relation[u]`` the
    relation a leaf's tuple belongs to.
    """

    kind: tuple
    var: tuple
    succ: tuple
    layer: tuple
    root: int
    leaf_relation: tuple = ()

    @property
    def num_nodes(self) -> int:
        return len(self.kind)

    @property
    def num_edges(self) -> int:
        return sum(len(s) for s in self.succ)

    def leaves(self) -> list:
        return [self.var[u] for u in range(self.num_nodes) if self.kind[u] == LEAF]

    def topological_order(self) -> list:
        """Node ids, every node before its successors; ties by node id."""
        indeg = [0] * self.num_nodes
        for s in self.succ:
            for v in s:
                indeg[v] += 1
        ready = [u for u in range(self.num_nodes) if indeg[u] == 0]
        heapq.heapify(ready)
        order = []
        while ready:
            u = heapq.heappop(ready)
            order.append(u)
            for v in self.succ[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    heapq.heappush(ready, v)
        if len(order) != self.num_nodes:
            raise ValueError("provenance graph has a cycle")
        return order

    def var_sets(self) -> list:
        """``Var(u)`` for every node as a frozenset (test/oracle helper)."""
        out: list = [None] * self.num_nodes
        for u in reversed(self.topological_order()):
            if self.kind[u] == LEAF:
                out[u] = frozenset([self.var[u]])
            else:
                out[u] = frozenset().union(*(out[v] for v in self.succ[u]))
        return out


@dataclass(frozen=True)
class EventTable:
    columns: tuple
    rows: tuple  # (values tuple, node id)


@dataclass(frozen=True)
class DagStats:
    n: int
    n_H: int
    m_H: int
    beta_H: int


class _Builder:
    def __init__(self):
        self.kind: list = []
        self.var: list = []
        self.succ: list = []
        self.layer: list = []
        self.rel_sets: list = []
        self.op = -1

    def node(self, kind, var=-1, succ=(), rels=frozenset()):
        self.kind.append(kind)
        self.var.append(var)
        self.succ.append(tuple(succ))
        self.layer.append(self.op)
        self.rel_sets.append(rels)
        return len(self.kind) - 1

    def run(self, plan: Plan, inst) -> EventTable:
        if isinstance(plan, Scan):
            return self.scan(plan.subgoal, inst)
        if isinstance(plan, Join):
            left = self.run(plan.left, inst)
            right = self.run(plan.right, inst)
            self.op += 1
            return self.join(left, right)
        child = self.run(plan.child, inst)
        self.op += 1
        return self.project(child, plan.keep)

    def scan(self, g: Subgoal, inst) -> EventTable:
        self.op += 1
        rel = inst.relation(g.relation)
        if rel.arity != g.arity:
            raise PlanError(f"{g.relation}: arity {rel.arity} vs subgoal arity {g.arity}")
        cols = g.fo_vars()
        first = {v: g.terms.index(FoVar(v)) for v in cols}
        rows = []
        for row in rel.rows:
            ok = True
            for pos, t in enumerate(g.terms):
                if isinstance(t, Const):
                    ok = row.values[pos] == t.value
                else:
                    ok = row.values[pos] == row.values[first[t.name]]
                if not ok:
                    break
            if ok:
                u = self.node(LEAF, var=row.var, rels=frozenset([g.relation]))
                rows.append((tuple(row.values[first[v]] for v in cols), u))
        return EventTable(tuple(cols), tuple(rows))

    def join(self, left: EventTable, right: EventTable) -> EventTable:
        shared = [c for c in left.columns if c in right.columns]
        li = [left.columns.index(c) for c in shared]
        ri = [right.columns.index(c) for c in shared]
        extra = [i for i, c in enumerate(right.columns) if c not in left.columns]
        index: dict = {}
        for values, u in right.rows:
            index.setdefault(tuple(values[i] for i in ri), []).append((values, u))
        rows = []
        for lvalues, lu in left.rows:
            for rvalues, ru in index.get(tuple(lvalues[i] for i in li), ()):
                lr, rr = self.rel_sets[lu], self.rel_sets[ru]
                # self-join freedom: operands never share a relation, so each
                # leaf below the new node sits under exactly one successor
                assert not (lr & rr), "join operands share a relation"
                u = self.node(AND, succ=(lu, ru), rels=lr | rr)
                rows.append((lvalues + tuple(rvalues[i] for i in extra), u))
        cols = left.columns + tuple(right.columns[i] for i in extra)
        return EventTable(cols, tuple(rows))

    def project(self, child: EventTable, keep: tuple) -> EventTable:
        idx = [child.columns.index(c) for c in keep]
        groups: dict = {}
        for values, u in child.rows:
            groups.setdefault(tuple(values[i] for i in idx), []).append(u)
        rows = []
        for key, members in groups.items():
            rels = frozenset().union(*(self.rel_sets[m] for m in members))
            rows.append((key, self.node(OR, succ=members, rels=rels)))
        return EventTable(tuple(keep), tuple(rows))


def eval_plan(plan: Plan, inst) -> tuple:
    """Evaluate ``plan`` on ``inst``; return ``(EventTable, ProvenanceDag)``.

    Raises
    ------
    EmptyResultError
        If the boolean query has no answer tuple on ``inst``.
    """
    b = _Builder()
    table = b.run(plan, inst)
    if not table.rows:
        raise EmptyResultError("query has no satisfying tuples")
    if len(table.rows) != 1 or table.columns:
        raise PlanError("plan does not compute a boolean query")
    root = table.rows[0][1]

    # keep nodes reachable from the root, renumbered in creation order
    live = np.zeros(len(b.kind), dtype=bool)
    stack = [root]
    live[root] = True
    while stack:
        u = stack.pop()
        for v in b.succ[u]:
            if not live[v]:
                live[v] = True
                stack.append(v)
    new_id = np.cumsum(live) - 1
    keep = np.flatnonzero(live)
    dag = ProvenanceDag(
        kind=tuple(b.kind[u] for u in keep),
        var=tuple(b.var[u] for u in keep),
        succ=tuple(tuple(int(new_id[v]) for v in b.succ[u]) for u in keep),
        layer=tuple(b.layer[u] for u in keep),
        root=int(new_id[root]),
        leaf_relation=tuple(
            next(iter(b.rel_sets[u])) if b.kind[u] == LEAF else None for u in keep),
    )
    out_table = EventTable((), (((), dag.root),))
    return out_table, dag


def read_expression(dag: ProvenanceDag, node: int | None = None):
    """Monotone expression rooted at ``node`` (default: the DAG root).

    Shared sub-DAGs are shared Python objects in the result; semantically
    they are duplicated subexpressions.
    """
    memo: dict = {}
    start = dag.root if node is None else node
    for u in reversed(dag.topological_order()):
        if u in memo:
            continue
        k = dag.kind[u]
        if k == LEAF:
            memo[u] = Var(dag.var[u])
        else:
            kids = tuple(memo[v] for v in dag.succ[u])
            memo[u] = And(kids) if k == AND else Or(kids)
    return memo[start]


def dag_stats(dag: ProvenanceDag) -> DagStats:
    """Leaf count, node count, edge count and width (largest operator layer)."""
    counts: dict = {}
    for lay in dag.layer:
        counts[lay] = counts.get(lay, 0) + 1
    return DagStats(
        n=sum(1 for k in dag.kind if k == LEAF),
        n_H=dag.num_nodes,
        m_H=dag.num_edges,
        beta_H=max(counts.values()),
    )
