"""Linear-time probability of the chain formulas x1x2 + x2x3 + ... + xn x(n+1).

These formulas are not read-once for n >= 3, yet a short dynamic program
computes their probability exactly. ``chain_instance`` builds a three-relation
instance (with a deterministic middle relation) whose lineage is the chain.
"""

from __future__ import annotations

from typing import Sequence

from .pdb import Instance, build_instance
from .query import Query, parse_query


def chain_probability(p: Sequence[float]) -> float:
    """P(x1x2 + ... + xn x(n+1)) for independent ``x_i`` with ``P(x_i) = p[i-1]``.

    With ``P_n`` the probability of the first ``n`` terms, the new term
    ``x_n x_(n+1)`` adds the worlds where it holds but the shorter chain
    fails. Given ``x_n`` true, the shorter chain fails iff ``x_(n-1)`` is
    false and the first ``n - 3`` terms fail, hence

        P_n = P_(n-1) + p_n p_(n+1) (1 - p_(n-1)) (1 - P_(n-3)),

    seeded with ``P_(-1) = P_0 = 0`` and ``P_1 = p_1 p_2``.
    """
    n = len(p) - 1
    if n < 1:
        raise ValueError("need at least two probabilities")
    # P[i + 1] holds P_i, so P[0] = P_(-1)
    P = [0.0, 0.0, p[0] * p[1]]
    for i in range(2, n + 1):
        p_prev, p_i, p_next = p[i - 2], p[i - 1], p[i]
        P.append(P[i] + p_i * p_next * (1.0 - p_prev) * (1.0 - P[i - 2]))
    return P[n + 1]


CHAIN_QUERY = "Q() :- R(A), S(A, B), T(B)."


def chain_instance(n: int, p: Sequence[float] | None = None) -> tuple[Instance, Query]:
    """Instance whose lineage for ``Q() :- R(A), S(A,B), T(B)`` is the chain of
    length ``n``.

    ``R`` holds ``a_j`` annotated ``x(2j-1)``, ``T`` holds ``b_j`` annotated
    ``x(2j)``, and the deterministic ``S`` (probability 1, variables ``z_i``)
    links ``a_i`` to ``b_i`` and ``a_(i+1)`` to ``b_i`` alternately, so that
    its i-th row produces the term ``x_i x_(i+1)``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if p is None:
        p = [0.5] * (n + 1)
    if len(p) != n + 1:
        raise ValueError(f"expected {n + 1} probabilities, got {len(p)}")
    s_rows = []
    for i in range(1, n + 1):
        m = (i + 1) // 2
        a = m if i % 2 else m + 1
        s_rows.append(((f"a{a}", f"b{m}"), 1.0, f"z{i}"))
    r_rows = [((f"a{j}",), p[2 * j - 2], f"x{2 * j - 1}") for j in range(1, (n + 2) // 2 + 1)]
    t_rows = [((f"b{j}",), p[2 * j - 1], f"x{2 * j}") for j in range(1, (n + 1) // 2 + 1)]
    inst = build_instance([
        ("R", ("A",), r_rows),
        ("S", ("A", "B"), s_rows),
        ("T", ("B",), t_rows),
    ])
    return inst, parse_query(CHAIN_QUERY)
