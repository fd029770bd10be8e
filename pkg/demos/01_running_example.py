"""Walk through the three-relation running example end to end.

Run with ``python3 demos/01_running_example.py``.
"""

# %% build the instance and the path query Q() :- R(x), S(x, y), T(y)
from ropdb import evaluate, exact_probability, eval_plan, default_plan, read_expression, render
from ropdb.generators import running_example

inst, q = running_example()
print(q)
for rel in inst.relations:
    print(rel.name, [(row.values, inst.names[row.var], row.prob) for row in rel.rows])

# %% the provenance DAG and the expression it encodes
_, dag = eval_plan(default_plan(q), inst)
expr = read_expression(dag)
print("read-off expression:", render(expr, inst.names))

# %% one call runs the whole pipeline
report = evaluate(q, inst)
print("read-once form:", report.expression)
print("probability   :", report.probability)
print("stats         :", report.to_dict()["stats"])

# %% the exhaustive oracle agrees
print("oracle        :", exact_probability(expr, inst.probabilities))
