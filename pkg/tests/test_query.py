import pytest

from ropdb.errors import HeadVariableError, ParseError, SelfJoinError
from ropdb.query import Const, FoVar, parse_query, sorted_intersection, table_adjacency


def test_parse_terms_and_round_trip():
    q = parse_query("Q() :- R(x), S(x, y), T(y, 'c1', 42).")
    assert q.k == 3 and q.alpha == 3
    assert q.subgoal("T").terms == (FoVar("y"), Const("c1"), Const("42"))
    assert str(q) == "Q() :- R(x), S(x, y), T(y, 'c1', 42)."
    assert parse_query(str(q)) == q


def test_renamed_variables_parse():
    q = parse_query("Q() :- R(x), S(x, y#2#1), T(y#3#1).")
    assert q.subgoal("S").fo_vars() == ["x", "y#2#1"]


@pytest.mark.parametrize("text,err", [
    ("Q() :- R(x), R(y).", SelfJoinError),
    ("Q(x) :- R(x).", HeadVariableError),
    ("Q() :- R(x)", ParseError),
    ("Q() :- R(x), .", ParseError),
    ("Q() :- R(x) S(y).", ParseError),
    ("Q() :- R(x$).", ParseError),
])
def test_parse_errors(text, err):
    with pytest.raises(err):
        parse_query(text)


def test_table_adjacency_shared_sets():
    q = parse_query("Q() :- R(x, z), S(x, y), T(y, z), U(w).")
    gt = table_adjacency(q)
    assert gt.m_T == 3
    assert gt.common("R", "S") == {"x"}
    assert gt.common("S", "T") == {"y"}
    assert gt.common("R", "T") == {"z"}
    assert not gt.adjacent("R", "U")
    assert gt.components() == [["R", "S", "T"], ["U"]]


def test_constants_do_not_create_edges():
    gt = table_adjacency(parse_query("Q() :- R('a'), S('a', x)."))
    assert gt.m_T == 0


def test_sorted_intersection():
    assert sorted_intersection([1, 3, 5, 7], [2, 3, 7, 9]) == [3, 7]
    assert sorted_intersection([], [1]) == []


def test_star_query_gives_complete_graph():
    from ropdb.generators import star
    _, q = star(5, 1)
    assert table_adjacency(q).m_T == 10
