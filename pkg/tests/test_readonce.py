import pytest

from ropdb.cotable import Mode, comp_cotable
from ropdb.errors import EmptyResultError
from ropdb.expr import And, expand_to_idnf, render
from ropdb.generators import cross_product, random_instance, running_example, star
from ropdb.pdb import build_instance, restrict
from ropdb.provenance import default_plan, eval_plan, read_expression
from ropdb.query import parse_query, table_adjacency
from ropdb.readonce import (DecompositionContext, Outcome, comp_ro, initial_context,
                            row_decomp, table_decomp)


def setup(inst, q):
    _, dag = eval_plan(default_plan(q), inst)
    gt = table_adjacency(q)
    return comp_cotable(dag, gt), gt


def names(inst, ctx):
    return {r: sorted(inst.names[v] for v in vs) for r, vs in ctx.tuples.items()}


def test_running_example_first_steps():
    inst, q = running_example()
    gc, gt = setup(inst, q)
    ctx = initial_context(q, inst, gc, gt)
    assert ctx.flag == "row"
    assert table_decomp(DecompositionContext(q, ctx.tuples, "table"), gc, gt) is None

    first, second = row_decomp(ctx, gc, gt)
    assert names(inst, first) == {"R": ["w1", "w2"], "S": ["v1", "v2"], "T": ["u1"]}
    assert names(inst, second) == {"R": ["w3"], "S": ["v3", "v4"], "T": ["u2", "u3"]}
    assert first.flag == second.flag == "table"
    assert row_decomp(first, gc, gt) is None

    left, right = table_decomp(first, gc, gt)
    assert str(left.query) == "Q() :- R(x), S(x, y#1#1)."
    assert str(right.query) == "Q() :- T(y#2#1)."
    assert names(inst, right) == {"T": ["u1"]}

    left, right = table_decomp(second, gc, gt)
    assert str(left.query) == "Q() :- R(x#0#1)."
    assert str(right.query) == "Q() :- S(x#1#1, y), T(y)."


def test_rewritten_children_multiply_back_to_parent():
    inst, q = running_example()
    gc, gt = setup(inst, q)
    first, _ = row_decomp(initial_context(q, inst, gc, gt), gc, gt)
    keep = [v for vs in first.tuples.values() for v in vs]
    parent = expand_to_idnf(read_expression(eval_plan(default_plan(q), restrict(inst, keep))[1]))
    parts = []
    for child in table_decomp(first, gc, gt):
        sub = restrict(inst, [v for vs in child.tuples.values() for v in vs])
        parts.append(read_expression(eval_plan(default_plan(child.query), sub)[1]))
    assert expand_to_idnf(And(tuple(parts))) == parent


def test_running_example_result():
    inst, q = running_example()
    gc, gt = setup(inst, q)
    res = comp_ro(q, inst, gc, gt, debug=True)
    assert res.outcome is Outcome.SUCCESS and res.read_once
    assert render(res.tree, inst.names) == "(w1*v1 + w2*v2)*u1 + w3*(v3*u2 + v4*u3)"
    assert res.stats["depth"] == 5
    assert res.stats["exclusion_checks"] > 0


def test_path_query_with_crossing_tuples_is_not_read_once():
    # x1 y1 + x1 y2 + x2 y2 through S: the co-table graph is a path
    inst = build_instance([
        ("R", ("A",), [(("1",), 0.5), (("2",), 0.5)]),
        ("S", ("A", "B"), [(("1", "1"), 0.5), (("1", "2"), 0.5), (("2", "2"), 0.5)]),
        ("T", ("B",), [(("1",), 0.5), (("2",), 0.5)])])
    q = parse_query("Q() :- R(x), S(x, y), T(y).")
    gc, gt = setup(inst, q)
    assert comp_ro(q, inst, gc, gt).outcome is Outcome.NOT_READ_ONCE


def test_disconnected_query_gives_product():
    inst, q = cross_product(3)
    gc, gt = setup(inst, q)
    res = comp_ro(q, inst, gc, gt)
    assert render(res.tree, inst.names) == "(r1 + r2 + r3)*(s1 + s2 + s3)"


def test_star_with_single_shared_value():
    inst, q = star(3, 2, 1)
    gc, gt = setup(inst, q)
    res = comp_ro(q, inst, gc, gt, debug=True)
    assert render(res.tree, inst.names) == "(t1_1 + t1_2)*(t2_1 + t2_2)*(t3_1 + t3_2)"


def test_single_relation():
    inst = build_instance([("R", ("A",), [(("a",), 0.5), (("b",), 0.5)])])
    q = parse_query("Q() :- R(x).")
    gc, gt = setup(inst, q)
    assert render(comp_ro(q, inst, gc, gt).tree, inst.names) == "R:1 + R:2"


def test_empty_relation_outcome():
    inst, q = running_example()
    gc, gt = setup(inst, q)
    res = comp_ro(q, restrict(inst, [v for v in range(inst.num_vars)
                                     if inst.relation_of[v] != 2]), gc.restricted([]), gt)
    assert res.outcome is Outcome.EMPTY


@pytest.mark.parametrize("seed", range(80))
def test_debug_mode_never_sees_both_splits(seed):
    inst, q = random_instance(k=3, arity=2, rows=8, domain=3, seed=seed)
    try:
        gc, gt = setup(inst, q)
    except EmptyResultError:
        return
    comp_ro(q, inst, gc, gt, debug=True)


def test_single_joined_pair_splits_on_plus_edge():
    inst = build_instance([("R", ("A",), [(("a",), 0.5)]), ("S", ("A",), [(("a",), 0.5)])])
    q = parse_query("Q() :- R(x), S(x).")
    gc, gt = setup(inst, q)
    ctx = initial_context(q, inst, gc, gt)
    assert ctx.flag == "table"
    left, right = table_decomp(ctx, gc, gt)
    assert (str(left.query), str(right.query)) == ("Q() :- R(x#0#1).", "Q() :- S(x#1#1).")


def test_isolated_tuples_make_singleton_components():
    inst = build_instance([("R", ("A",), [((c,), 0.5) for c in "abc"]),
                           ("S", ("B",), [(("z",), 0.5)])])
    q = parse_query("Q() :- R(x), S(y).")
    gc, gt = setup(inst, q)
    ctx = DecompositionContext(q.restricted_to(["R"]), {"R": [0, 1, 2]}, "row")
    assert len(row_decomp(ctx, gc, gt)) == 3


def test_unsatisfiable_join_has_probability_zero():
    from ropdb.pipeline import evaluate
    inst = build_instance([("R", ("A",), [(("a",), 0.5)]), ("S", ("A",), [(("b",), 0.5)])])
    r = evaluate(parse_query("Q() :- R(x), S(x)."), inst)
    assert r.outcome == "empty" and r.probability == 0.0
