"""Deciding read-once-ness from the co-table graph and building the read-once form.

The recursion alternates two splits:

* row decomposition -- connected components of the co-table graph restricted
  to the current tuples; the results are combined with ``+``;
* table decomposition -- connected components of the table-adjacency graph
  after removing every edge whose two relations are completely connected in
  the co-table graph; shared variables on removed edges are renamed apart in
  each subgoal, and the results are combined with ``*``.

A single relation is the base case (the sum of its tuples). If neither split
applies to a context with two or more relations, the expression is not
read-once.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .cotable import CoGraph
from .expr import Leaf, Product, Sum, canonicalize
from .query import FoVar, Query, Subgoal, TableAdjacencyGraph


class Outcome(str, enum.Enum):
    SUCCESS = "success"
    NOT_READ_ONCE = "not_read_once"
    EMPTY = "empty"


@dataclass
class RoResult:
    outcome: Outcome
    tree: object = None
    stats: dict = field(default_factory=dict)

    @property
    def read_once(self) -> bool:
        return self.outcome is Outcome.SUCCESS


@dataclass
class DecompositionContext:
    """One node of the recursion: the current (possibly rewritten) query,
    the surviving tuples of each of its relations, and which split to try."""

    query: Query
    tuples: dict  # relation name -> list of variable ids
    flag: str  # "row" or "table"
    depth: int = 1

    @property
    def k(self) -> int:
        return self.query.k

    def all_tuples(self) -> list:
        return [v for g in self.query.subgoals for v in self.tuples[g.relation]]


class _NotReadOnce(Exception):
    pass


class _Solver:
    def __init__(self, adj: dict, gt: TableAdjacencyGraph, debug: bool):
        self.adj = adj
        self.gt = gt
        self.debug = debug
        self.rel_index = {r: i for i, r in enumerate(gt.vertices)}
        self.generation = itertools.count(1)
        self.stats = {"depth": 0, "row_decomps": 0, "table_decomps": 0,
                      "exclusion_checks": 0}

    # -- splits ------------------------------------------------------------

    def row_decomp(self, ctx: DecompositionContext):
        """Child contexts, one per connected component, or None if connected."""
        members = set(ctx.all_tuples())
        comp_of: dict = {}
        comps: list = []
        for start in sorted(members):
            if start in comp_of:
                continue
            cid = len(comps)
            comp_of[start] = cid
            stack, comp = [start], []
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.adj.get(x, ()):
                    if y in members and y not in comp_of:
                        comp_of[y] = cid
                        stack.append(y)
            comps.append(comp)
        if len(comps) < 2:
            return None
        children = []
        for cid in range(len(comps)):
            groups = {r: [v for v in vs if comp_of[v] == cid] for r, vs in ctx.tuples.items()}
            children.append(DecompositionContext(ctx.query, groups, "table", ctx.depth + 1))
        return children

    def mark_edges(self, ctx: DecompositionContext) -> dict:
        """``{frozenset({Ri, Rj}): True}`` for "+" edges (every tuple pair
        adjacent in the co-table graph), False for "-" edges."""
        rels = set(ctx.query.relations)
        marks = {}
        for e in self.gt.edges:
            if not e <= rels:
                continue
            a, b = sorted(e, key=self.rel_index.get)
            ta, tb = ctx.tuples[a], set(ctx.tuples[b])
            need = len(tb)
            marks[e] = all(
                sum(1 for y in self.adj.get(x, ()) if y in tb) == need for x in ta)
        return marks

    def table_decomp(self, ctx: DecompositionContext):
        """Child contexts with rewritten queries, or None if only one group."""
        marks = self.mark_edges(ctx)
        rels = list(ctx.query.relations)
        group = {r: r for r in rels}

        def find(r):
            while group[r] != r:
                group[r] = group[group[r]]
                r = group[r]
            return r

        for e, plus in marks.items():
            if not plus:
                a, b = tuple(e)
                ra, rb = find(a), find(b)
                if ra != rb:
                    group[rb] = ra
        roots: dict = {}
        for r in rels:
            roots.setdefault(find(r), []).append(r)
        if len(roots) < 2:
            return None

        gen = next(self.generation)
        comp_of = {r: find(r) for r in rels}
        renamed = []
        for g in ctx.query.subgoals:
            cut_vars = set()
            for e, plus in marks.items():
                if g.relation in e:
                    (other,) = e - {g.relation}
                    if comp_of[other] != comp_of[g.relation]:
                        cut_vars |= _shared(g, ctx.query.subgoal(other))
            if cut_vars:
                tag = self.rel_index[g.relation]
                terms = tuple(
                    FoVar(f"{t.name}#{tag}#{gen}") if isinstance(t, FoVar) and t.name in cut_vars
                    else t
                    for t in g.terms)
                g = Subgoal(g.relation, terms)
            renamed.append(g)
        children = []
        for members in sorted(roots.values(), key=lambda m: min(
                (v for r in m for v in ctx.tuples[r]), default=-1)):
            keep = set(members)
            q = Query(tuple(g for g in renamed if g.relation in keep))
            tuples = {r: ctx.tuples[r] for r in q.relations}
            children.append(DecompositionContext(q, tuples, "row", ctx.depth + 1))
        return children

    # -- recursion -----------------------------------------------------------

    def solve(self, ctx: DecompositionContext):
        self.stats["depth"] = max(self.stats["depth"], ctx.depth)
        if ctx.k == 1:
            (vs,) = ctx.tuples.values()
            leaves = [Leaf(v) for v in sorted(vs)]
            return leaves[0] if len(leaves) == 1 else Sum(tuple(leaves))

        if self.debug:
            row, table = self.row_decomp(ctx), self.table_decomp(ctx)
            self.stats["exclusion_checks"] += 1
            if row is not None and table is not None:
                raise AssertionError(
                    f"row and table decomposition both succeed at depth {ctx.depth}")
            parts = row if ctx.flag == "row" else table
        elif ctx.flag == "row":
            parts = self.row_decomp(ctx)
        else:
            parts = self.table_decomp(ctx)
        if parts is None:
            raise _NotReadOnce
        if ctx.flag == "row":
            self.stats["row_decomps"] += 1
            return Sum(tuple(self.solve(c) for c in parts))
        self.stats["table_decomps"] += 1
        return Product(tuple(self.solve(c) for c in parts))


def _shared(a: Subgoal, b: Subgoal) -> set:
    return set(a.fo_vars()) & set(b.fo_vars())


def _adjacency(gc: CoGraph) -> dict:
    adj: dict = {}
    for u, v in gc.edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def _tuples_by_relation(query: Query, inst, keep) -> dict:
    keep = set(keep)
    return {g.relation: [row.var for row in inst.relation(g.relation).rows if row.var in keep]
            for g in query.subgoals}


def row_decomp(ctx: DecompositionContext, gc: CoGraph, gt: TableAdjacencyGraph):
    """Split ``ctx`` by connected components of the co-table graph.

    Returns a list of at least two child contexts, or None when the induced
    co-table graph is connected.
    """
    return _Solver(_adjacency(gc), gt, False).row_decomp(ctx)


def table_decomp(ctx: DecompositionContext, gc: CoGraph, gt: TableAdjacencyGraph):
    """Split the relations of ``ctx`` along completely connected relation
    pairs, renaming the shared variables on cut edges. None when no split."""
    return _Solver(_adjacency(gc), gt, False).table_decomp(ctx)


def initial_context(query: Query, inst, gc: CoGraph, gt: TableAdjacencyGraph) -> DecompositionContext:
    tuples = _tuples_by_relation(query, inst, gc.vertices)
    ctx = DecompositionContext(query, tuples, "row")
    if _Solver(_adjacency(gc), gt, False).row_decomp(ctx) is None:
        ctx.flag = "table"
    return ctx


def comp_ro(query: Query, inst, gc: CoGraph, gt: TableAdjacencyGraph,
            *, debug: bool = False) -> RoResult:
    """Decide whether the query's event expression on ``inst`` is read-once.

    Parameters
    ----------
    query, inst
        The self-join-free boolean query and its instance. Tuples that are
        not vertices of ``gc`` are ignored.
    gc : CoGraph
        Co-table graph of the query on ``inst``.
    gt : TableAdjacencyGraph
        Table-adjacency graph of ``query``.
    debug : bool
        Try both splits at every recursion node and raise if both succeed.

    Returns
    -------
    RoResult
        ``SUCCESS`` with the canonical read-once tree, ``NOT_READ_ONCE``, or
        ``EMPTY`` if some relation has no participating tuple.
    """
    tuples = _tuples_by_relation(query, inst, gc.vertices)
    if any(not vs for vs in tuples.values()):
        return RoResult(Outcome.EMPTY, None, {"depth": 0, "row_decomps": 0, "table_decomps": 0})
    solver = _Solver(_adjacency(gc), gt, debug)
    parts = []
    try:
        for comp in gt.components():
            sub_q = query.restricted_to(comp)
            sub_t = {r: tuples[r] for r in sub_q.relations}
            ctx = DecompositionContext(sub_q, sub_t, "row")
            if sub_q.k > 1 and solver.row_decomp(ctx) is None:
                ctx.flag = "table"
            parts.append(solver.solve(ctx))
    except _NotReadOnce:
        return RoResult(Outcome.NOT_READ_ONCE, None, solver.stats)
    tree = parts[0] if len(parts) == 1 else Product(tuple(parts))
    return RoResult(Outcome.SUCCESS, canonicalize(tree), solver.stats)
