import pytest

from ropdb.errors import EmptyResultError, PlanError
from ropdb.expr import expand_to_idnf
from ropdb.generators import random_instance, running_example
from ropdb.pdb import build_instance
from ropdb.provenance import (AND, LEAF, OR, dag_stats, default_plan, eval_plan, parse_plan,
                              plan_to_text, read_expression, right_deep_plan)
from ropdb.query import parse_query


def test_running_example_dag():
    inst, q = running_example()
    _, dag = eval_plan(default_plan(q), inst)
    assert dag_stats(dag).__dict__ == {"n": 10, "n_H": 19, "m_H": 20, "beta_H": 4}
    idnf = expand_to_idnf(read_expression(dag))
    named = {tuple(sorted(inst.names[v] for v in imp)) for imp in idnf}
    assert named == {("u1", "v1", "w1"), ("u1", "v2", "w2"),
                     ("u2", "v3", "w3"), ("u3", "v4", "w3")}


def test_structural_invariants():
    inst, q = running_example()
    _, dag = eval_plan(default_plan(q), inst)
    roots = set(range(dag.num_nodes)) - {v for s in dag.succ for v in s}
    assert roots == {dag.root}
    for u in range(dag.num_nodes):
        if dag.kind[u] == LEAF:
            assert dag.succ[u] == ()
        elif dag.kind[u] == AND:
            assert len(dag.succ[u]) == 2
        else:
            assert dag.kind[u] == OR and dag.succ[u]
    order = dag.topological_order()
    place = {u: i for i, u in enumerate(order)}
    assert all(place[u] < place[v] for u in order for v in dag.succ[u])


@pytest.mark.parametrize("seed", range(40))
def test_join_operands_have_disjoint_variables(seed):
    inst, q = random_instance(k=3, arity=2, rows=6, domain=2, seed=seed)
    try:
        _, dag = eval_plan(default_plan(q), inst)
    except EmptyResultError:
        return
    var_sets = dag.var_sets()
    for u in range(dag.num_nodes):
        if dag.kind[u] == AND:
            a, b = dag.succ[u]
            assert not var_sets[a] & var_sets[b]


@pytest.mark.parametrize("seed", range(40))
def test_plan_shape_does_not_change_idnf(seed):
    inst, q = random_instance(k=4, arity=2, rows=5, domain=2, seed=seed)
    try:
        _, left = eval_plan(default_plan(q), inst)
    except EmptyResultError:
        return
    _, right = eval_plan(right_deep_plan(q), inst)
    assert expand_to_idnf(read_expression(left)) == expand_to_idnf(read_expression(right))


def test_selection_on_constants_and_repeated_variables():
    inst = build_instance([("R", ("A", "B"), [(("a", "a"), 0.5), (("a", "b"), 0.5),
                                              (("c", "c"), 0.5)])])
    _, dag = eval_plan(default_plan(parse_query("Q() :- R(x, x).")), inst)
    assert sorted(dag.leaves()) == [0, 2]
    _, dag = eval_plan(default_plan(parse_query("Q() :- R('a', y).")), inst)
    assert sorted(dag.leaves()) == [0, 1]


def test_empty_result():
    inst = build_instance([("R", ("A",), [(("a",), 0.5)]), ("S", ("A",), [(("b",), 0.5)])])
    with pytest.raises(EmptyResultError):
        eval_plan(default_plan(parse_query("Q() :- R(x), S(x).")), inst)


def test_dangling_rows_are_pruned():
    inst = build_instance([("R", ("A",), [(("a",), 0.5), (("z",), 0.5)]),
                           ("S", ("A",), [(("a",), 0.5)])])
    _, dag = eval_plan(default_plan(parse_query("Q() :- R(x), S(x).")), inst)
    assert sorted(dag.leaves()) == [0, 2]


def test_plan_text_round_trip_and_errors():
    q = parse_query("Q() :- R(x), S(x, y), T(y).")
    text = "(project () (join (scan R) (join (scan S) (scan T))))"
    plan = parse_plan(text, q)
    assert plan == right_deep_plan(q)
    assert plan_to_text(plan) == text
    parse_plan("(project () (join (project (y) (join (scan R) (scan S))) (scan T)))", q)
    for bad in ("(join (scan R) (scan S))",
                "(project () (join (scan R) (scan S)))",
                "(project () (join (project (x) (join (scan R) (scan S))) (scan T)))",
                "(project () (join (scan R) (join (scan S) (scan X))))",
                "(project () (scan R)"):
        with pytest.raises(PlanError):
            parse_plan(bad, q)


def test_running_example_root_and_join_layer():
    inst, q = running_example()
    _, dag = eval_plan(default_plan(q), inst)
    assert dag.kind[dag.root] == OR and len(dag.succ[dag.root]) == 4
    assert all(dag.kind[c] == AND for c in dag.succ[dag.root])
    first_join = [u for u in range(dag.num_nodes)
                  if dag.kind[u] == AND and all(dag.kind[c] == LEAF for c in dag.succ[u])]
    pairs = {tuple(sorted(inst.names[dag.var[c]] for c in dag.succ[u])) for u in first_join}
    assert pairs == {("v1", "w1"), ("v2", "w2"), ("v3", "w3"), ("v4", "w3")}


def test_single_relation_dag_is_a_tree():
    inst = build_instance([("R", ("A",), [(("a",), 0.5)])])
    _, dag = eval_plan(default_plan(parse_query("Q() :- R(x).")), inst)
    s = dag_stats(dag)
    assert s.n == 1 and s.m_H == s.n_H - 1
    inst = build_instance([("R", ("A",), [((c,), 0.5) for c in "abc"])])
    _, dag = eval_plan(default_plan(parse_query("Q() :- R(x).")), inst)
    s = dag_stats(dag)
    assert s.n == 3 and s.m_H == s.n_H - 1
