"""Step through the row/table recursion by hand on the running example."""

# %%
from ropdb import comp_cotable, default_plan, eval_plan, table_adjacency
from ropdb.generators import running_example
from ropdb.readonce import initial_context, row_decomp, table_decomp

inst, q = running_example()
_, dag = eval_plan(default_plan(q), inst)
gt = table_adjacency(q)
gc = comp_cotable(dag, gt)


def show(ctx, indent=""):
    tuples = {r: [inst.names[v] for v in vs] for r, vs in ctx.tuples.items()}
    print(f"{indent}{ctx.flag:5s} {ctx.query}  {tuples}")


def walk(ctx, indent=""):
    show(ctx, indent)
    if ctx.k == 1:
        return
    split = row_decomp if ctx.flag == "row" else table_decomp
    for child in split(ctx, gc, gt) or []:
        walk(child, indent + "    ")


# %% row splits follow components of the co-table graph, table splits
# rename the variables shared across a completely connected relation pair
walk(initial_context(q, inst, gc, gt))
