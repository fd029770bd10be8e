import pytest

from ropdb.errors import DomainError
from ropdb.generators import (GenSpec, cross_product, generate, random_instance,
                              repeated_blocks, running_example, star, write_generated)
from ropdb.pdb import load_instance
from ropdb.pipeline import evaluate


def test_running_example_tables():
    inst, q = running_example()
    assert [len(r) for r in inst.relations] == [3, 4, 3]
    assert inst.names == ("w1", "w2", "w3", "v1", "v2", "v3", "v4", "u1", "u2", "u3")
    assert inst.probabilities.tolist() == [0.3, 0.4, 0.6, 0.1, 0.5, 0.2, 0.1, 0.7, 0.8, 0.4]


def test_repeated_blocks_first_slice():
    inst, q = repeated_blocks(1)
    r = evaluate(q, inst)
    assert r.expression == "(x1*z1 + y1*z2)*u1 + x2*(z3*u2 + z4*v2)"


@pytest.mark.parametrize("n", [1, 3, 10])
def test_repeated_blocks_sizes(n):
    inst, _ = repeated_blocks(n)
    assert [len(r) for r in inst.relations] == [3 * n, 4 * n, 3 * n]


def test_cross_product_and_star():
    inst, q = cross_product(5)
    assert evaluate(q, inst).stats["m_T"] == 0
    inst, q = star(4, 3, 2)
    assert q.k == 4 and all(len(r) == 3 for r in inst.relations)


def test_random_is_reproducible(tmp_path):
    a = random_instance(k=3, arity=3, rows=6, domain=3, seed=11)
    b = generate(GenSpec("random", dict(k=3, arity=3, rows=6, domain=3, seed=11)))
    assert a[0] == b[0] and a[1] == b[1]
    write_generated(*a, tmp_path / "one")
    write_generated(*b, tmp_path / "two")
    for f in sorted((tmp_path / "one").iterdir()):
        assert f.read_bytes() == (tmp_path / "two" / f.name).read_bytes()
    assert load_instance(tmp_path / "one") == a[0]


def test_random_probabilities_in_range():
    inst, _ = random_instance(k=4, arity=2, rows=20, domain=5, seed=3)
    p = inst.probabilities
    assert ((p > 0.05) & (p < 0.95)).all()


@pytest.mark.parametrize("spec", [
    GenSpec("nope"), GenSpec("repeated_blocks", {"n": 0}),
    GenSpec("star", {"k": 0, "n": 1}), GenSpec("cross_product", {"m": 2}),
])
def test_bad_parameters(spec):
    with pytest.raises(DomainError):
        generate(spec)
