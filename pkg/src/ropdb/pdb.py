"""Tuple-independent probabilistic instances and their TSV directory format.

A directory holds one ``<relation>.tsv`` file per relation. The header line
lists the attribute names, optionally followed by ``_var`` (explicit variable
name) and mandatorily ending in ``_p`` (tuple probability)::

    A	B	_var	_p
    a1	c1	v1	0.1

Relations are read in filename order and variable ids are assigned densely
in file order, so ids are reproducible for a given directory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, DuplicateTupleError, ParseError

VAR_COLUMN = "_var"
PROB_COLUMN = "_p"


@dataclass(frozen=True)
class TupleRow:
    values: tuple
    var: int
    prob: float


@dataclass(frozen=True)
class Relation:
    name: str
    attributes: tuple
    rows: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.attributes)

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True)
class Instance:
    """An immutable set of relations whose tuples carry variable ids and
    probabilities. ``names[v]`` is the display name of variable ``v``."""

    relations: tuple
    names: tuple
    _by_name: dict = field(init=False, repr=False, compare=False)
    _rel_of: np.ndarray = field(init=False, repr=False, compare=False)
    _probs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_name = {}
        for r in self.relations:
            if r.name in by_name:
                raise DomainError(f"duplicate relation name {r.name!r}")
            by_name[r.name] = r
        size = len(self.names)
        rel_of = np.full(size, -1, dtype=np.int64)
        probs = np.zeros(size)
        for idx, r in enumerate(self.relations):
            for row in r.rows:
                if not 0 <= row.var < size or rel_of[row.var] != -1:
                    raise DomainError(f"variable id {row.var} invalid or reused")
                rel_of[row.var] = idx
                probs[row.var] = row.prob
        if len(set(self.names)) != size:
            raise DomainError("variable display names must be unique")
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_rel_of", rel_of)
        object.__setattr__(self, "_probs", probs)

    @property
    def n(self) -> int:
        """Number of tuples currently present."""
        return sum(len(r.rows) for r in self.relations)

    @property
    def num_vars(self) -> int:
        """Size of the variable id space (``n`` unless tuples were dropped)."""
        return len(self.names)

    def relation(self, name: str) -> Relation:
        try:
            return self._by_name[name]
        except KeyError:
            raise DomainError(f"unknown relation {name!r}") from None

    def relation_index(self, name: str) -> int:
        return self.relations.index(self.relation(name))

    @property
    def relation_of(self) -> np.ndarray:
        """Relation index per variable id (-1 for ids without a tuple)."""
        return self._rel_of

    @property
    def probabilities(self) -> np.ndarray:
        return self._probs

    def variables(self) -> frozenset:
        return frozenset(row.var for r in self.relations for row in r.rows)

    def row_of(self, var: int) -> tuple:
        rel = self.relations[self._rel_of[var]]
        for row in rel.rows:
            if row.var == var:
                return rel, row
        raise KeyError(var)


def _check_prob(p: float, where: str) -> float:
    if not (0.0 < p <= 1.0) or math.isnan(p):
        raise DomainError(f"{where}: probability {p} outside (0, 1]")
    return p


def build_instance(tables: Sequence[tuple]) -> Instance:
    """Build an instance from ``(name, attributes, rows)`` triples.

    Each row is ``(values, prob)`` or ``(values, prob, var_name)``. Variable
    ids are assigned in the given order; unnamed rows get ``<name>:<i>``
    with ``i`` the 1-based row position.
    """
    relations = []
    names: list = []
    for name, attrs, rows in tables:
        attrs = tuple(attrs)
        if len(set(attrs)) != len(attrs):
            raise ParseError(f"{name}: repeated attribute name")
        seen = set()
        out = []
        for i, row in enumerate(rows, start=1):
            values, prob = tuple(str(v) for v in row[0]), float(row[1])
            label = row[2] if len(row) > 2 and row[2] is not None else f"{name}:{i}"
            if len(values) != len(attrs):
                raise ParseError(
                    f"{name} row {i}: expected {len(attrs)} values, got {len(values)}")
            _check_prob(prob, f"{name} row {i}")
            if values in seen:
                raise DuplicateTupleError(f"{name}: duplicate tuple {values}")
            seen.add(values)
            out.append(TupleRow(values, len(names), prob))
            names.append(str(label))
        relations.append(Relation(name, attrs, tuple(out)))
    return Instance(tuple(relations), tuple(names))


def _parse_tsv(path: Path) -> tuple:
    text = path.read_text(encoding="utf-8")
    lines = text.split("\n")
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(f"{path.name}: missing header line")
    header = lines[0].split("\t")
    if header[-1] != PROB_COLUMN:
        raise ParseError(f"{path.name}: header must end with {PROB_COLUMN}")
    has_var = len(header) >= 2 and header[-2] == VAR_COLUMN
    attrs = header[:-2] if has_var else header[:-1]
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split("\t")
        if len(cells) != len(header):
            raise ParseError(
                f"{path.name}:{lineno}: expected {len(header)} fields, got {len(cells)}")
        try:
            prob = float(cells[-1])
        except ValueError:
            raise ParseError(f"{path.name}:{lineno}: bad probability {cells[-1]!r}") from None
        values = cells[:len(attrs)]
        label = cells[-2] if has_var else None
        rows.append((values, prob, label))
    return path.stem, attrs, rows


def load_instance(directory) -> Instance:
    """Read every ``*.tsv`` file in ``directory`` into an :class:`Instance`."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ParseError(f"{directory}: not a directory")
    files = sorted(directory.glob("*.tsv"))
    return build_instance([_parse_tsv(f) for f in files])


def save_instance(inst: Instance, directory) -> None:
    """Write ``inst`` as a TSV directory readable by :func:`load_instance`."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for rel in inst.relations:
        lines = ["\t".join(list(rel.attributes) + [VAR_COLUMN, PROB_COLUMN])]
        for row in rel.rows:
            lines.append("\t".join(list(row.values) + [inst.names[row.var], repr(row.prob)]))
        (directory / f"{rel.name}.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def restrict(inst: Instance, keep: Iterable[int]) -> Instance:
    """Keep only tuples whose variable id is in ``keep``.

    Variable ids and names are unchanged; empty relations are preserved.
    """
    keep = set(keep)
    rels = tuple(
        Relation(r.name, r.attributes, tuple(row for row in r.rows if row.var in keep))
        for r in inst.relations
    )
    return Instance(rels, inst.names)
