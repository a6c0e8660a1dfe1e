# %% [markdown]
# Interleaved runs of the two-player game
#
# Each process picks a number, publishes it in its own register, reads the
# other register and decides. We walk one schedule by hand, then sweep every
# terminating history.

# %%
from kishon.global_sem import (
    check_inductive_invariant,
    check_theorem1,
    enumerate_histories,
    initial_state,
    phi_invariant,
    successors,
)
from kishon.protocol import kishon_protocol

p = kishon_protocol()
s = initial_state(p)
print(s.as_dict())

# %%
# process 1 runs to its read before process 0 writes; picks are 1 and 2
schedule = [0, 1, 1, 1, 0, 0, 0, 1]
picks = {0: 1, 1: 2}
for proc in schedule:
    options = [st for st in successors(s, p, 3) if st.process == proc]
    step = next(st for st in options if len(options) == 1 or st.value == picks[proc])
    print(step.label, "value", step.value)
    s = step.post
print("final", {k: s[k] for k in ("n_0", "n_1", "val_0", "val_1")})

# %%
histories = list(enumerate_histories(p, 2))
print(len(histories), "histories with picks in 1..2")
print(check_theorem1(5).to_json())

# %%
# the invariant is checked on every well-typed state, reachable or not
v = check_inductive_invariant(phi_invariant(3), p, bound=3)
print(v.result, v.stats)
