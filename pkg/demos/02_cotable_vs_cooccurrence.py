"""Co-table and co-occurrence graphs, and why the smaller one is enough.

The co-occurrence graph of the running example is P4-free, so the
expression is read-once; the co-table graph drops edges between
non-adjacent relations and is no longer P4-free, yet the decomposition
only ever needs it.
"""

# %%
from ropdb import Mode, comp_cotable, default_plan, eval_plan, find_induced_p4, table_adjacency
from ropdb.generators import cross_product, running_example

inst, q = running_example()
_, dag = eval_plan(default_plan(q), inst)
gt = table_adjacency(q)
gc = comp_cotable(dag, gt, Mode.COTABLE)
gco = comp_cotable(dag, None, Mode.COOCCURRENCE)

show = lambda g: sorted(f"{inst.names[u]}-{inst.names[v]}" for u, v in g.edges)
print("table adjacency:", {tuple(sorted(e)): sorted(c) for e, c in gt.edges.items()})
print("co-table      ", gc.m, show(gc))
print("co-occurrence ", gco.m, show(gco))

# %% induced paths on four vertices
w = find_induced_p4(gc)
print("P4 in co-table graph:", [inst.names[v] for v in w])
print("P4 in co-occurrence graph:", find_induced_p4(gco))

# %% with no shared variable the gap is quadratic
inst2, q2 = cross_product(50)
_, dag2 = eval_plan(default_plan(q2), inst2)
print("cross product: m_C =", comp_cotable(dag2, table_adjacency(q2)).m,
      " m_co =", comp_cotable(dag2, mode=Mode.COOCCURRENCE).m)
