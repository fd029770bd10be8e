"""Random queries and instances checked against the exhaustive oracles:
read-once exactly when the co-occurrence graph has no induced P4, and the
read-once probability equal to possible-world enumeration."""

# %%
from collections import Counter

from ropdb import (Mode, comp_cotable, comp_ro, default_plan, eval_plan, exact_probability,
                   has_induced_p4, read_expression, readonce_probability, table_adjacency)
from ropdb.errors import EmptyResultError
from ropdb.generators import random_instance
from ropdb.pdb import restrict

seen = Counter()
worst = 0.0
for seed in range(200):
    inst, q = random_instance(k=3, arity=2, rows=8, domain=2, seed=seed)
    try:
        _, dag = eval_plan(default_plan(q), inst)
    except EmptyResultError:
        seen["empty"] += 1
        continue
    gt = table_adjacency(q)
    res = comp_ro(q, restrict(inst, dag.leaves()), comp_cotable(dag, gt), gt)
    p4 = has_induced_p4(comp_cotable(dag, mode=Mode.COOCCURRENCE))
    assert res.read_once != p4
    seen[res.outcome.value] += 1
    if res.read_once:
        exact = exact_probability(read_expression(dag), inst.probabilities)
        worst = max(worst, abs(exact - readonce_probability(res.tree, inst.probabilities)))

print(dict(seen))
print("largest probability error:", worst)
