"""Read-once evaluation of self-join-free boolean conjunctive queries on
tuple-independent probabilistic databases."""

from .chainprob import chain_instance, chain_probability
from .cotable import (CoGraph, Mode, comp_cotable, cooccurrence_from_idnf,
                      find_induced_p4, has_induced_p4)
from .errors import (CapExceededError, DomainError, DuplicateTupleError,
                     EmptyResultError, HeadVariableError, ParseError, PlanError,
                     RopdbError, SelfJoinError)
from .expr import (And, Idnf, Leaf, Or, Product, Sum, Var, canonicalize,
                   equivalent_on_all_assignments, exact_probability,
                   expand_to_idnf, readonce_probability, render, to_expr)
from .generators import GenSpec, generate, write_generated
from .pdb import Instance, Relation, TupleRow, load_instance, restrict, save_instance
from .pipeline import Report, evaluate
from .provenance import (DagStats, ProvenanceDag, dag_stats, default_plan,
                         eval_plan, parse_plan, read_expression, right_deep_plan)
from .query import Query, TableAdjacencyGraph, parse_query, table_adjacency
from .readonce import Outcome, RoResult, comp_ro, row_decomp, table_decomp

__version__ = "0.1.0"
