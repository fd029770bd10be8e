"""Timing of the full pipeline on the repeated-block family, plus the
instrumentation counters reported with every result."""

# %%
import time

from ropdb import evaluate
from ropdb.generators import repeated_blocks

print(f"{'n':>5} {'tuples':>7} {'ms':>8} {'us/n':>7}  stats")
for n in (25, 50, 100, 200, 400):
    inst, q = repeated_blocks(n)
    t0 = time.perf_counter()
    report = evaluate(q, inst)
    ms = 1000 * (time.perf_counter() - t0)
    s = report.stats
    print(f"{n:5d} {s['n']:7d} {ms:8.1f} {1000 * ms / n:7.0f}  "
          f"m_H={s['m_H']} beta_H={s['beta_H']} m_C={s['m_C']} m_co={s['m_co']} "
          f"depth={s['depth']}")
