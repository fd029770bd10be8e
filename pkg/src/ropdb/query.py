"""Boolean conjunctive queries in rule form and the table-adjacency graph.

Concrete syntax::

    Q() :- R(x), S(x, y), T(y, 'c1', 42).

Unquoted identifiers are first-order variables; single-quoted strings and
bare numerals are constants. The head must be empty (boolean query) and
relation names must be pairwise distinct (no self-joins).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import HeadVariableError, ParseError, SelfJoinError


@dataclass(frozen=True)
class FoVar:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: str

    def __str__(self):
        if self.value.isdigit():
            return self.value
        return "'" + self.value + "'"


Term = FoVar | Const


@dataclass(frozen=True)
class Subgoal:
    relation: str
    terms: tuple

    @property
    def arity(self) -> int:
        return len(self.terms)

    def fo_vars(self) -> list:
        """Distinct FO variable names in first-occurrence order."""
        out = []
        for t in self.terms:
            if isinstance(t, FoVar) and t.name not in out:
                out.append(t.name)
        return out

    def __str__(self):
        return f"{self.relation}({', '.join(str(t) for t in self.terms)})"


@dataclass(frozen=True)
class Query:
    subgoals: tuple

    def __post_init__(self):
        if not self.subgoals:
            raise ParseError("query needs at least one subgoal")
        names = [g.relation for g in self.subgoals]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise SelfJoinError(f"relation(s) {sorted(dup)} used more than once")

    @property
    def k(self) -> int:
        return len(self.subgoals)

    @property
    def alpha(self) -> int:
        return max(g.arity for g in self.subgoals)

    @property
    def relations(self) -> tuple:
        return tuple(g.relation for g in self.subgoals)

    def subgoal(self, relation: str) -> Subgoal:
        for g in self.subgoals:
            if g.relation == relation:
                return g
        raise KeyError(relation)

    def restricted_to(self, relations: Iterable[str]) -> "Query":
        keep = set(relations)
        return Query(tuple(g for g in self.subgoals if g.relation in keep))

    def check_against(self, inst) -> None:
        """Raise if a subgoal names a missing relation or has the wrong arity."""
        for g in self.subgoals:
            rel = inst.relation(g.relation)
            if rel.arity != g.arity:
                raise ParseError(
                    f"{g.relation} has arity {rel.arity} but subgoal has {g.arity} terms")

    def __str__(self):
        return "Q() :- " + ", ".join(str(g) for g in self.subgoals) + "."


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>:-)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_#]*)
  | (?P<num>[0-9]+)
  | (?P<str>'[^']*')
  | (?P<punct>[(),.])
""", re.VERBOSE)


def _tokenize(text: str) -> list:
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), m.start()))
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind, value=None):
        tok = self.toks[self.i]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParseError(f"expected {want!r} at offset {tok[2]}, found {tok[1]!r}")
        self.i += 1
        return tok

    def query(self) -> Query:
        self.take("ident")
        self.take("punct", "(")
        if self.peek()[1] != ")":
            raise HeadVariableError("only boolean queries with an empty head are supported")
        self.take("punct", ")")
        self.take("arrow")
        goals = [self.atom()]
        while self.peek()[1] == ",":
            self.take("punct", ",")
            goals.append(self.atom())
        self.take("punct", ".")
        self.take("eof")
        return Query(tuple(goals))

    def atom(self) -> Subgoal:
        name = self.take("ident")[1]
        self.take("punct", "(")
        terms = [self.term()]
        while self.peek()[1] == ",":
            self.take("punct", ",")
            terms.append(self.term())
        self.take("punct", ")")
        return Subgoal(name, tuple(terms))

    def term(self):
        kind, value, off = self.peek()
        self.i += 1
        if kind == "ident":
            return FoVar(value)
        if kind == "num":
            return Const(value)
        if kind == "str":
            return Const(value[1:-1])
        raise ParseError(f"expected a term at offset {off}, found {value!r}")


def parse_query(text: str) -> Query:
    """Parse a single boolean rule ``Q() :- Atom, ..., Atom.``"""
    return _Parser(text).query()


@dataclass(frozen=True)
class TableAdjacencyGraph:
    """Relations as vertices; an edge wherever two subgoals share an FO
    variable, labelled with the shared variable set."""

    vertices: tuple
    edges: dict  # frozenset({Ri, Rj}) -> frozenset of shared FO variables

    @property
    def m_T(self) -> int:
        return len(self.edges)

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def common(self, a: str, b: str) -> frozenset:
        return self.edges.get(frozenset((a, b)), frozenset())

    def neighbors(self, v: str) -> list:
        return [u for u in self.vertices if u != v and self.adjacent(u, v)]

    def induced(self, keep: Iterable[str]) -> "TableAdjacencyGraph":
        keep = set(keep)
        verts = tuple(v for v in self.vertices if v in keep)
        edges = {e: c for e, c in self.edges.items() if e <= keep}
        return TableAdjacencyGraph(verts, edges)

    def components(self) -> list:
        """Connected components as lists of relation names, in vertex order."""
        seen, comps = set(), []
        for v in self.vertices:
            if v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.neighbors(u):
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            comps.append(sorted(comp, key=self.vertices.index))
        return comps


def sorted_intersection(a: list, b: list) -> list:
    """Intersect two sorted lists by a linear merge."""
    i = j = 0
    out = []
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif a[i] < b[j]:
            i += 1
        else:
            j += 1
    return out


def table_adjacency(q: Query) -> TableAdjacencyGraph:
    """Build the table-adjacency graph of ``q`` (sort each subgoal's
    variables once, then merge pairwise)."""
    sorted_vars = {g.relation: sorted(g.fo_vars()) for g in q.subgoals}
    edges = {}
    for a, b in combinations(q.relations, 2):
        shared = sorted_intersection(sorted_vars[a], sorted_vars[b])
        if shared:
            edges[frozenset((a, b))] = frozenset(shared)
    return TableAdjacencyGraph(q.relations, edges)
