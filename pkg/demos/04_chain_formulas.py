"""Chain formulas x1x2 + x2x3 + ... are not read-once from n = 3 on, yet
their probability follows from a linear dynamic program."""

# %%
import numpy as np

from ropdb import chain_instance, chain_probability, evaluate
from ropdb.expr import And, Or, Var, exact_probability

rng = np.random.default_rng(0)
for n in (1, 2, 3, 5, 10, 15):
    p = rng.uniform(0.05, 0.95, n + 1)
    chain = Or(tuple(And((Var(i), Var(i + 1))) for i in range(n)))
    report = evaluate(*chain_instance(n, list(p))[::-1])
    print(f"n={n:2d}  dp={chain_probability(p):.12f}  "
          f"oracle={exact_probability(chain, p):.12f}  outcome={report.outcome}")

# %% the dynamic program handles lengths far past enumeration
print("n=10000, p=0.5:", chain_probability([0.5] * 10001))
