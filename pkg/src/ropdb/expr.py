"""Monotone event expressions, irredundant DNFs and read-once trees.

Variables are dense non-negative integers (tuple ids). Display names live
outside the expressions and are passed to :func:`render` when needed.

Two families of nodes exist side by side:

* ``Var`` / ``And`` / ``Or`` -- arbitrary monotone expressions, e.g. the
  expression read off a provenance DAG.
* ``Leaf`` / ``Sum`` / ``Product`` -- read-once trees, where every variable
  occurs exactly once.

The exhaustive oracles (:func:`exact_probability`,
:func:`equivalent_on_all_assignments`, :func:`expand_to_idnf`) work at desk
scale and refuse inputs above ``DEFAULT_ENUM_CAP`` variables.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import CapExceededError

DEFAULT_ENUM_CAP = int(os.environ.get("ROPDB_ENUM_CAP", "22"))
DEFAULT_IMPLICANT_CAP = 200_000


# ---------------------------------------------------------------------------
# monotone expressions


@dataclass(frozen=True)
class Var:
    id: int


@dataclass(frozen=True)
class And:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise ValueError("And needs at least one child")


@dataclass(frozen=True)
class Or:
    children: tuple

    def __post_init__(self):
        if not self.children:
            raise ValueError("Or needs at least one child")


MonotoneExpr = Union[Var, And, Or]


def conj(*children: MonotoneExpr) -> And:
    return And(tuple(children))


def disj(*children: MonotoneExpr) -> Or:
    return Or(tuple(children))


def variables(expr) -> frozenset:
    """Set of variable ids occurring in an expression or read-once tree."""
    out = set()
    stack = [expr]
    seen = set()
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, (Var, Leaf)):
            out.add(node.id)
        else:
            stack.extend(node.children)
    return frozenset(out)


def evaluate(expr: MonotoneExpr, true_vars) -> bool:
    """Truth value of ``expr`` when exactly the variables in ``true_vars`` hold."""
    if isinstance(expr, (Var, Leaf)):
        return expr.id in true_vars
    if isinstance(expr, (And, Product)):
        return all(evaluate(c, true_vars) for c in expr.children)
    return any(evaluate(c, true_vars) for c in expr.children)


def condition(expr: MonotoneExpr, fixed: Mapping[int, bool]):
    """Substitute constants for some variables and simplify.

    Returns ``True``/``False`` if the expression collapses to a constant,
    otherwise a monotone expression over the remaining variables.
    """
    if isinstance(expr, Var):
        return fixed.get(expr.id, expr)
    is_and = isinstance(expr, And)
    kept = []
    for child in expr.children:
        c = condition(child, fixed)
        if c is True or c is False:
            if c is not is_and:
                return c
            continue
        kept.append(c)
    if not kept:
        return is_and
    if len(kept) == 1:
        return kept[0]
    return And(tuple(kept)) if is_and else Or(tuple(kept))


# ---------------------------------------------------------------------------
# irredundant DNF


class Idnf:
    """Irredundant DNF: a set of implicants, none contained in another.

    Implicants are stored as sorted tuples of variable ids.
    """

    __slots__ = ("implicants",)

    def __init__(self, implicants: Iterable[Iterable[int]]):
        imps = set()
        for imp in implicants:
            t = tuple(sorted(set(imp)))
            if not t:
                raise ValueError("empty implicant")
            imps.add(t)
        self.implicants = frozenset(imps)
        if not _is_irredundant(self.implicants):
            raise ValueError("implicant set is not irredundant")

    def __eq__(self, other):
        return isinstance(other, Idnf) and self.implicants == other.implicants

    def __hash__(self):
        return hash(self.implicants)

    def __len__(self):
        return len(self.implicants)

    def __iter__(self) -> Iterator[tuple]:
        return iter(sorted(self.implicants))

    def __repr__(self):
        return f"Idnf({sorted(self.implicants)!r})"

    def as_sets(self) -> set:
        return {frozenset(t) for t in self.implicants}

    def variables(self) -> frozenset:
        return frozenset(v for imp in self.implicants for v in imp)

    def to_expr(self) -> MonotoneExpr:
        terms = []
        for imp in self:
            vs = tuple(Var(v) for v in imp)
            terms.append(vs[0] if len(vs) == 1 else And(vs))
        if len(terms) == 1:
            return terms[0]
        return Or(tuple(terms))


def _is_subset_sorted(a: tuple, b: tuple) -> bool:
    # a, b sorted; True iff set(a) <= set(b)
    i = 0
    for x in b:
        if i < len(a) and a[i] == x:
            i += 1
    return i == len(a)


def _is_irredundant(imps) -> bool:
    by_len = sorted(imps, key=len)
    for i, a in enumerate(by_len):
        for b in by_len[i + 1:]:
            if len(a) < len(b) and _is_subset_sorted(a, b):
                return False
    return True


def absorb(implicants: Iterable[frozenset]) -> list:
    """Drop every implicant that strictly contains another one."""
    kept: list = []
    for imp in sorted(set(implicants), key=len):
        if not any(k <= imp for k in kept):
            kept.append(imp)
    return kept


def distribute(expr: MonotoneExpr, cap: int = DEFAULT_IMPLICANT_CAP) -> set:
    """DNF of ``expr`` by distributivity and idempotence only (no absorption)."""
    memo: dict = {}

    def go(node) -> frozenset:
        key = id(node)
        if key in memo:
            return memo[key][1]
        if isinstance(node, Var):
            res = frozenset([frozenset([node.id])])
        elif isinstance(node, Or):
            acc = set()
            for c in node.children:
                acc |= go(c)
            res = frozenset(acc)
        else:
            acc = {frozenset()}
            for c in node.children:
                sub = go(c)
                if len(acc) * len(sub) > cap:
                    raise CapExceededError(
                        f"DNF expansion exceeds {cap} implicants")
                acc = {a | b for a in acc for b in sub}
            res = frozenset(acc)
        if len(res) > cap:
            raise CapExceededError(f"DNF expansion exceeds {cap} implicants")
        memo[key] = (node, res)
        return res

    return set(go(expr))


def expand_to_idnf(expr: MonotoneExpr, cap: int = DEFAULT_IMPLICANT_CAP) -> Idnf:
    """Expand a monotone expression into its irredundant DNF.

    Parameters
    ----------
    expr : MonotoneExpr
        Any monotone expression.
    cap : int
        Maximum number of implicants tolerated during expansion.

    Raises
    ------
    CapExceededError
        If the expansion grows beyond ``cap`` implicants.
    """
    return Idnf(absorb(distribute(expr, cap)))


# ---------------------------------------------------------------------------
# read-once trees


@dataclass(frozen=True)
class Leaf:
    id: int


@dataclass(frozen=True)
class Sum:
    children: tuple


@dataclass(frozen=True)
class Product:
    children: tuple


ReadOnceTree = Union[Leaf, Sum, Product]


def min_var(tree) -> int:
    if isinstance(tree, (Leaf, Var)):
        return tree.id
    return min(min_var(c) for c in tree.children)


def canonicalize(tree: ReadOnceTree) -> ReadOnceTree:
    """Flatten nested Sum/Sum and Product/Product, drop unary nodes, and
    order children by their smallest variable id."""
    if isinstance(tree, Leaf):
        return tree
    kind = type(tree)
    flat = []
    for child in tree.children:
        c = canonicalize(child)
        if type(c) is kind:
            flat.extend(c.children)
        else:
            flat.append(c)
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=min_var)
    return kind(tuple(flat))


def is_read_once_tree(tree) -> bool:
    """True iff ``tree`` is a read-once tree in canonical (alternating) form."""
    seen: set = set()

    def go(node, parent_kind) -> bool:
        if isinstance(node, Leaf):
            if node.id in seen:
                return False
            seen.add(node.id)
            return True
        if not isinstance(node, (Sum, Product)):
            return False
        if len(node.children) < 2 or type(node) is parent_kind:
            return False
        keys = [min_var(c) for c in node.children]
        if keys != sorted(keys):
            return False
        return all(go(c, type(node)) for c in node.children)

    return go(tree, None)


def to_expr(tree: ReadOnceTree) -> MonotoneExpr:
    """View a read-once tree as a plain monotone expression."""
    if isinstance(tree, Leaf):
        return Var(tree.id)
    children = tuple(to_expr(c) for c in tree.children)
    return Or(children) if isinstance(tree, Sum) else And(children)


def readonce_probability(tree: ReadOnceTree, p) -> float:
    """Probability of a read-once tree from independent variable probabilities.

    Products multiply their children; sums combine them as
    ``1 - prod(1 - p_child)``. Runs in time linear in the tree size.
    """
    if isinstance(tree, Leaf):
        return float(p[tree.id])
    probs = [readonce_probability(c, p) for c in tree.children]
    if isinstance(tree, Product):
        return math.prod(probs)
    return 1.0 - math.prod(1.0 - q for q in probs)


# ---------------------------------------------------------------------------
# rendering


def _name(names, i: int) -> str:
    if names is None:
        return f"x{i}"
    return names[i]


def render(expr, names: Sequence[str] | Mapping[int, str] | None = None) -> str:
    """Text form: ``+`` for disjunction, ``*`` for conjunction.

    Parentheses appear only around a disjunction nested in a conjunction.
    Works for both monotone expressions and read-once trees.
    """
    if isinstance(expr, (Var, Leaf)):
        return _name(names, expr.id)
    if isinstance(expr, (Or, Sum)):
        return " + ".join(render(c, names) for c in expr.children)
    parts = []
    for c in expr.children:
        s = render(c, names)
        if isinstance(c, (Or, Sum)) and len(c.children) > 1:
            s = f"({s})"
        parts.append(s)
    return "*".join(parts)


# ---------------------------------------------------------------------------
# exhaustive oracles


def _check_cap(nvars: int, cap: int | None) -> int:
    cap = DEFAULT_ENUM_CAP if cap is None else cap
    if nvars > cap:
        raise CapExceededError(
            f"{nvars} variables exceed the enumeration cap of {cap}")
    return cap


def _normal(expr):
    # hashable flattened form: int | ("&", frozenset) | ("|", frozenset)
    if isinstance(expr, (Var, Leaf)):
        return expr.id
    tag = "&" if isinstance(expr, (And, Product)) else "|"
    items = set()
    for c in expr.children:
        n = _normal(c)
        if isinstance(n, tuple) and n[0] == tag:
            items |= n[1]
        else:
            items.add(n)
    if len(items) == 1:
        return next(iter(items))
    return (tag, frozenset(items))


def _cond(node, v: int, val: bool, memo: dict):
    if isinstance(node, int):
        return val if node == v else node
    key = node
    if key in memo:
        return memo[key]
    tag, items = node
    is_and = tag == "&"
    out = set()
    result = None
    for c in items:
        r = _cond(c, v, val, memo)
        if r is True or r is False:
            if r is not is_and:
                result = r
                break
            continue
        if isinstance(r, tuple) and r[0] == tag:
            out |= r[1]
        else:
            out.add(r)
    if result is None:
        if not out:
            result = is_and
        elif len(out) == 1:
            result = next(iter(out))
        else:
            result = (tag, frozenset(out))
    memo[key] = result
    return result


def _count_vars(node, counts: Counter):
    if isinstance(node, int):
        counts[node] += 1
    else:
        for c in node[1]:
            _count_vars(c, counts)


def exact_probability(expr: MonotoneExpr, p, cap: int | None = None) -> float:
    """Exact probability of a monotone expression over independent variables.

    Sums the weight of every satisfying possible world, organised as a
    Shannon expansion on the most frequent remaining variable so that
    branches stop as soon as the expression becomes constant.

    Raises
    ------
    CapExceededError
        If the expression has more variables than ``cap`` (default 22).
    """
    _check_cap(len(variables(expr)), cap)
    memo: dict = {}

    def prob(node) -> float:
        if node is True:
            return 1.0
        if node is False:
            return 0.0
        if isinstance(node, int):
            return float(p[node])
        if node in memo:
            return memo[node]
        counts: Counter = Counter()
        _count_vars(node, counts)
        v = min(counts, key=lambda k: (-counts[k], k))
        pv = float(p[v])
        hi = prob(_cond(node, v, True, {}))
        lo = prob(_cond(node, v, False, {})) if pv < 1.0 else 0.0
        res = pv * hi + (1.0 - pv) * lo
        memo[node] = res
        return res

    return prob(_normal(expr))


_WORD_PATTERNS = [
    0xAAAAAAAAAAAAAAAA,
    0xCCCCCCCCCCCCCCCC,
    0xF0F0F0F0F0F0F0F0,
    0xFF00FF00FF00FF00,
    0xFFFF0000FFFF0000,
    0xFFFFFFFF00000000,
]


def truth_table(expr, order: Sequence[int]) -> np.ndarray:
    """Packed truth table of ``expr`` over the variables in ``order``.

    Bit ``a`` of the result (little-endian within uint64 words) is the value
    of ``expr`` under the assignment whose i-th variable is bit i of ``a``.
    """
    nbits = max(len(order), 6)
    words = 1 << (nbits - 6)
    w = np.arange(words, dtype=np.uint64)
    tables = {}
    for i, v in enumerate(order):
        if i < 6:
            tables[v] = np.full(words, _WORD_PATTERNS[i], dtype=np.uint64)
        else:
            bit = (w >> np.uint64(i - 6)) & np.uint64(1)
            tables[v] = bit * np.uint64(0xFFFFFFFFFFFFFFFF)
    memo: dict = {}

    def go(node):
        key = id(node)
        if key in memo:
            return memo[key][1]
        if isinstance(node, (Var, Leaf)):
            res = tables[node.id]
        else:
            kids = [go(c) for c in node.children]
            op = np.bitwise_and if isinstance(node, (And, Product)) else np.bitwise_or
            res = kids[0].copy()
            for k in kids[1:]:
                op(res, k, out=res)
        memo[key] = (node, res)
        return res

    return go(expr)


def equivalent_on_all_assignments(a, b, cap: int | None = None) -> bool:
    """True iff ``a`` and ``b`` agree on every assignment of their variables.

    Both arguments may be monotone expressions or read-once trees. The check
    is a bit-parallel truth-table comparison.
    """
    order = sorted(variables(a) | variables(b))
    _check_cap(len(order), cap)
    return bool(np.array_equal(truth_table(a, order), truth_table(b, order)))
