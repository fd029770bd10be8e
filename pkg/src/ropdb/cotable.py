"""Co-table and co-occurrence graphs computed from the provenance DAG.

One bottom-up pass over the DAG maintains ``Var(u)`` (the leaves below each
node) as boolean membership vectors. At every ``AND`` node each variable of
the first operand is paired with each variable of the second; in co-table
mode only pairs whose relations are adjacent in the table-adjacency graph are
kept. The DNF is never built.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .provenance import AND, LEAF, ProvenanceDag
from .query import TableAdjacencyGraph

DENSE_LIMIT = 8192


class Mode(str, enum.Enum):
    COTABLE = "cotable"
    COOCCURRENCE = "cooccurrence"


@dataclass(frozen=True)
class CoGraph:
    """Simple undirected graph on variable ids; edges stored as ``(u, v)``
    with ``u < v``."""

    vertices: tuple
    edges: frozenset
    mode: Mode = Mode.COOCCURRENCE
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def restricted(self, keep) -> "CoGraph":
        keep = set(keep)
        return CoGraph(
            tuple(v for v in self.vertices if v in keep),
            frozenset(e for e in self.edges if e[0] in keep and e[1] in keep),
            self.mode,
        )


def comp_cotable(
    dag: ProvenanceDag,
    gt: TableAdjacencyGraph | None = None,
    mode: Mode | str = Mode.COTABLE,
    *,
    instrument: bool = False,
    dense_limit: int = DENSE_LIMIT,
) -> CoGraph:
    """Co-table (or co-occurrence) graph of the expression encoded by ``dag``.

    Parameters
    ----------
    dag : ProvenanceDag
        Provenance DAG of a plan for a self-join-free boolean query.
    gt : TableAdjacencyGraph
        Table-adjacency graph of the same query; required in co-table mode,
        ignored in co-occurrence mode.
    mode : Mode
        ``Mode.COTABLE`` keeps only pairs from adjacent relations.
    instrument : bool
        Count how often each variable pair is examined; the maximum lands in
        ``graph.stats["max_pair_visits"]``.
    dense_limit : int
        Above this many variables edges are deduplicated in a hash set
        instead of an ``n x n`` bit table.
    """
    mode = Mode(mode)
    if mode is Mode.COTABLE and gt is None:
        raise ValueError("co-table mode needs the table-adjacency graph")

    leaf_nodes = [u for u in range(dag.num_nodes) if dag.kind[u] == LEAF]
    order_vars = sorted(dag.var[u] for u in leaf_nodes)
    n = len(order_vars)
    pos = {v: i for i, v in enumerate(order_vars)}
    rel_names = sorted({dag.leaf_relation[u] for u in leaf_nodes})
    rel_idx = {r: i for i, r in enumerate(rel_names)}
    rel_of = np.empty(n, dtype=np.int64)
    for u in leaf_nodes:
        rel_of[pos[dag.var[u]]] = rel_idx[dag.leaf_relation[u]]
    rel_mask = [rel_of == i for i in range(len(rel_names))]
    adjacent_pairs = []
    if mode is Mode.COTABLE:
        for a, b in combinations(range(len(rel_names)), 2):
            if gt.adjacent(rel_names[a], rel_names[b]):
                adjacent_pairs += [(a, b), (b, a)]

    dense = n <= dense_limit
    if dense:
        marked = np.zeros((n, n), dtype=bool)
    else:
        edge_set: set = set()
    visits = np.zeros((n, n), dtype=np.int32) if instrument else None
    examined = 0

    npred = [0] * dag.num_nodes
    for s in dag.succ:
        for v in s:
            npred[v] += 1
    var_vec: list = [None] * dag.num_nodes
    rel_bits = [0] * dag.num_nodes  # relations below each node, as a bitmask

    def record(xs, ys):
        nonlocal examined
        if not len(xs) or not len(ys):
            return
        examined += len(xs) * len(ys)
        if visits is not None:
            lo = np.minimum.outer(xs, ys)
            hi = np.maximum.outer(xs, ys)
            np.add.at(visits, (lo, hi), 1)
        if dense:
            marked[np.ix_(xs, ys)] = True
        else:
            edge_set.update((min(x, y), max(x, y)) for x in xs.tolist() for y in ys.tolist())

    for u in reversed(dag.topological_order()):
        kind = dag.kind[u]
        if kind == LEAF:
            vec = np.zeros(n, dtype=bool)
            vec[pos[dag.var[u]]] = True
            rel_bits[u] = 1 << int(rel_of[pos[dag.var[u]]])
        else:
            succ = dag.succ[u]
            vec = var_vec[succ[0]].copy()
            bits = rel_bits[succ[0]]
            for v in succ[1:]:
                vec |= var_vec[v]
                bits |= rel_bits[v]
            rel_bits[u] = bits
            if kind == AND:
                a, b = var_vec[succ[0]], var_vec[succ[1]]
                if np.any(a & b):
                    raise AssertionError("a variable lies below both operands of a join node")
                if mode is Mode.COOCCURRENCE:
                    record(np.flatnonzero(a), np.flatnonzero(b))
                else:
                    ra, rb = rel_bits[succ[0]], rel_bits[succ[1]]
                    for i, j in adjacent_pairs:
                        if ra >> i & 1 and rb >> j & 1:
                            record(np.flatnonzero(a & rel_mask[i]), np.flatnonzero(b & rel_mask[j]))
            for v in succ:
                npred[v] -= 1
                if npred[v] == 0:
                    var_vec[v] = None
        var_vec[u] = vec

    if dense:
        sym = marked | marked.T
        iu, ju = np.nonzero(np.triu(sym, k=1))
        edges = frozenset((order_vars[i], order_vars[j]) for i, j in zip(iu.tolist(), ju.tolist()))
    else:
        edges = frozenset(
            (min(order_vars[i], order_vars[j]), max(order_vars[i], order_vars[j]))
            for i, j in edge_set)
    stats = {"pairs_examined": examined}
    if visits is not None:
        stats["max_pair_visits"] = int(visits.max()) if n else 0
    return CoGraph(tuple(order_vars), edges, mode, stats)


def cooccurrence_from_idnf(idnf, vertices=None) -> CoGraph:
    """Co-occurrence graph straight from its definition: an edge for every
    pair of variables sharing a prime implicant."""
    edges = set()
    for imp in idnf.implicants:
        edges.update(combinations(sorted(imp), 2))
    verts = sorted(idnf.variables() if vertices is None else vertices)
    return CoGraph(tuple(verts), frozenset(edges), Mode.COOCCURRENCE)


def cotable_from_cooccurrence(gco: CoGraph, relation_of, gt: TableAdjacencyGraph) -> CoGraph:
    """Keep only co-occurrence edges whose relations are adjacent."""
    edges = frozenset(
        (u, v) for u, v in gco.edges if gt.adjacent(relation_of[u], relation_of[v]))
    return CoGraph(gco.vertices, edges, Mode.COTABLE)


def find_induced_p4(g: CoGraph):
    """Return four vertices ``(a, b, c, d)`` inducing the path a-b-c-d, or None.

    Exhaustive: every edge is tried as the middle edge of the path.
    """
    adj = g.adjacency()
    for b, c in g.edges:
        for mid_l, mid_r in ((b, c), (c, b)):
            left = adj[mid_l] - adj[mid_r] - {mid_r}
            right = adj[mid_r] - adj[mid_l] - {mid_l}
            for a in sorted(left):
                for d in sorted(right):
                    if a != d and d not in adj[a]:
                        return (a, mid_l, mid_r, d)
    return None


def has_induced_p4(g: CoGraph) -> bool:
    """True iff some four vertices of ``g`` induce a path (``g`` is not a cograph)."""
    return find_induced_p4(g) is not None
