"""Deterministic instance families and seeded random instances."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chainprob import chain_instance
from .errors import DomainError
from .pdb import Instance, build_instance, save_instance
from .query import Query, parse_query

PATH_QUERY = "Q() :- R(x), S(x, y), T(y)."


@dataclass(frozen=True)
class GenSpec:
    """Which family to build and with which parameters.

    ``family`` is one of ``running_example``, ``repeated_blocks``, ``cross_product``,
    ``star``, ``chain`` or ``random``; ``params`` holds the family's keyword
    arguments (see the functions below).
    """

    family: str
    params: dict = field(default_factory=dict)


def running_example() -> tuple[Instance, Query]:
    """The three-relation running example with its published probabilities."""
    inst = build_instance([
        ("R", ("A",), [
            (("a1",), 0.3, "w1"), (("b1",), 0.4, "w2"), (("a2",), 0.6, "w3")]),
        ("S", ("A", "B"), [
            (("a1", "c1"), 0.1, "v1"), (("b1", "c1"), 0.5, "v2"),
            (("a2", "c2"), 0.2, "v3"), (("a2", "d2"), 0.1, "v4")]),
        ("T", ("B",), [
            (("c1",), 0.7, "u1"), (("c2",), 0.8, "u2"), (("d2",), 0.4, "u3")]),
    ])
    return inst, parse_query(PATH_QUERY)


def repeated_blocks(n: int, p: float = 0.5) -> tuple[Instance, Query]:
    """``n`` repetitions of the running example's two blocks.

    R and T get ``3n`` tuples, S gets ``4n``; the lineage is read-once with
    ``2n`` top-level blocks.
    """
    if n < 1:
        raise DomainError("repeated_blocks needs n >= 1")
    r_rows, s_rows, t_rows = [], [], []
    for i in range(1, n + 1):
        o, e = 2 * i - 1, 2 * i
        r_rows += [((f"a{o}",), p, f"x{o}"), ((f"b{o}",), p, f"y{o}"), ((f"a{e}",), p, f"x{e}")]
        s_rows += [
            ((f"a{o}", f"c{o}"), p, f"z{4 * i - 3}"),
            ((f"b{o}", f"c{o}"), p, f"z{4 * i - 2}"),
            ((f"a{e}", f"c{e}"), p, f"z{4 * i - 1}"),
            ((f"a{e}", f"d{e}"), p, f"z{4 * i}"),
        ]
        t_rows += [((f"c{o}",), p, f"u{o}"), ((f"c{e}",), p, f"u{e}"), ((f"d{e}",), p, f"v{e}")]
    inst = build_instance([
        ("R", ("A",), r_rows), ("S", ("A", "B"), s_rows), ("T", ("B",), t_rows)])
    return inst, parse_query(PATH_QUERY)


def cross_product(n: int, p: float = 0.5) -> tuple[Instance, Query]:
    """Two relations of ``n`` tuples each and no shared query variable."""
    if n < 1:
        raise DomainError("cross_product needs n >= 1")
    inst = build_instance([
        ("R1", ("A",), [((f"a{j}",), p, f"r{j}") for j in range(1, n + 1)]),
        ("R2", ("B",), [((f"b{j}",), p, f"s{j}") for j in range(1, n + 1)]),
    ])
    return inst, parse_query("Q() :- R1(x1), R2(x2).")


def star(k: int, n: int, y_domain: int = 1, p: float = 0.5) -> tuple[Instance, Query]:
    """``Q() :- R1(x1, y), ..., Rk(xk, y)`` with ``n`` tuples per relation.

    The shared ``y`` value of row ``j`` is ``y{j mod y_domain}``.
    """
    if k < 1 or n < 1 or y_domain < 1:
        raise DomainError("star needs k, n, y_domain >= 1")
    width = len(str(k))
    names = [f"R{str(i).zfill(width)}" for i in range(1, k + 1)]
    tables = []
    for i, name in enumerate(names, start=1):
        rows = [((f"a{i}_{j}", f"y{j % y_domain}"), p, f"t{i}_{j}") for j in range(1, n + 1)]
        tables.append((name, ("A", "Y"), rows))
    q = parse_query("Q() :- " + ", ".join(f"{r}(x{i}, y)" for i, r in enumerate(names, 1)) + ".")
    return build_instance(tables), q


def random_instance(k: int = 3, arity: int = 2, rows: int = 4, domain: int = 2,
                    seed: int = 0, const_rate: float = 0.1) -> tuple[Instance, Query]:
    """Seeded random self-join-free query and instance.

    Subgoal arities are drawn from ``1..arity``; each term is a constant with
    probability ``const_rate`` and otherwise one of ``k + 1`` FO variables.
    Each relation gets up to ``rows`` distinct tuples over ``domain`` values;
    probabilities are uniform on (0.05, 0.95).
    """
    if k < 1 or arity < 1 or rows < 1 or domain < 1:
        raise DomainError("random_instance parameters must be positive")
    rng = np.random.default_rng(seed)
    pool = [f"v{i}" for i in range(k + 1)]
    width = len(str(k))
    goals, tables = [], []
    for i in range(1, k + 1):
        name = f"R{str(i).zfill(width)}"
        a = int(rng.integers(1, arity + 1))
        terms = []
        for _ in range(a):
            if rng.random() < const_rate:
                terms.append(f"'{int(rng.integers(domain))}'")
            else:
                terms.append(pool[int(rng.integers(len(pool)))])
        goals.append(f"{name}({', '.join(terms)})")
        seen, body = set(), []
        for _ in range(rows):
            values = tuple(str(int(rng.integers(domain))) for _ in range(a))
            prob = float(np.round(rng.uniform(0.05, 0.95), 6))
            if values not in seen:
                seen.add(values)
                body.append((values, prob))
        tables.append((name, tuple(f"c{j}" for j in range(a)), body))
    return build_instance(tables), parse_query("Q() :- " + ", ".join(goals) + ".")


_FAMILIES = {
    "running_example": running_example,
    "repeated_blocks": repeated_blocks,
    "cross_product": cross_product,
    "star": star,
    "chain": chain_instance,
    "random": random_instance,
}


def generate(spec: GenSpec) -> tuple[Instance, Query]:
    """Build the instance and query described by ``spec``."""
    try:
        fn = _FAMILIES[spec.family]
    except KeyError:
        raise DomainError(f"unknown family {spec.family!r}") from None
    try:
        return fn(**spec.params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {spec.family}: {exc}") from None


def write_generated(inst: Instance, q: Query, directory) -> Path:
    """Write the instance TSVs plus ``query.txt`` into ``directory``."""
    directory = Path(directory)
    save_instance(inst, directory)
    (directory / "query.txt").write_text(str(q) + "\n", encoding="utf-8")
    return directory
