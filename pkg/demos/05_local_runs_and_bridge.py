# %% [markdown]
# Single-process runs and the history bridge
#
# A process can be studied alone: its runs are chains of four events whose
# values follow the program. Separately, every interleaved history maps to a
# linear execution whose reads satisfy the serial register specification.

# %%
from kishon.bridge import check_seriality_theorem, history_to_execution
from kishon.global_sem import enumerate_histories
from kishon.nonrestricted import check_alpha_invariant, enumerate_nonrestricted_executions
from kishon.protocol import kishon_protocol

runs = enumerate_nonrestricted_executions(0, 3)
print(len(runs), "runs of process 0")
print(runs[0].functional_state(), runs[0].structure.to_json()["val"])
print(check_alpha_invariant(3, 0).stats)

# %%
h = next(iter(enumerate_histories(kishon_protocol(), 2)))
e = history_to_execution(h, 2).execution
print("schedule", h.schedule())
print("values", e.values)
print(check_seriality_theorem(3).result)
