# %% [markdown]
# Serial, regular and safe registers
#
# A read that overlaps a write behaves differently under each register
# semantics. With safe registers a single overlapping read is enough to break
# the game's guarantee.

# %%
from kishon.executions import (
    RegisterSemantics, build_execution, check_theorem33, read_choices, trichotomy_violation,
)
from kishon.orders import BEGIN, END, order_from_action_sequence

# a_k are 0..3, b_k are 4..7; a_3 overlaps b_2
order = order_from_action_sequence(
    [(BEGIN, 0), (END, 0), (BEGIN, 4), (END, 4), (BEGIN, 1), (END, 1), (BEGIN, 5), (BEGIN, 2),
     (END, 5), (END, 2), (BEGIN, 6), (END, 6), (BEGIN, 3), (END, 3), (BEGIN, 7), (END, 7)], 8)

for sem in ("regular", "safe"):
    a3, b3 = read_choices(order, 1, 1, sem, 3)
    print(f"{sem:8} a_3 may read {sorted(a3)}, b_3 may read {sorted(b3)}")

# %%
e = build_execution(order, 1, 1, 2, 1, 3)
print("returns", e.returns, "->", trichotomy_violation(e))

# %%
for sem in RegisterSemantics:
    v = check_theorem33(2, sem)
    print(f"{sem.value:8} {v.result:5} executions={v.stats['executions']}")
