# %% [markdown]
# First-order sentences over finite structures
#
# Executions are finite structures: events, a precedence relation, unary
# predicates and a value function. Sentences about them are evaluated
# directly, and the results line up with the native checks.

# %%
from kishon import folk
from kishon.executions import build_execution, register_sentence
from kishon.orders import chain_actions, order_from_action_sequence

order = order_from_action_sequence(chain_actions(range(8)), 8)
good = build_execution(order, 1, 2, 0, 1, 2)
stale = build_execution(order, 1, 2, 0, 0, 2)
print(good.to_json()["val"])

# %%
for name, e in (("good", good), ("stale", stale)):
    s = e.structure
    print(name, "system execution:", folk.is_system_execution(s),
          "R_0 regular:", folk.evaluate(s, register_sentence(0)))

# %%
print(folk.evaluate(good.structure, folk.russell_wiener_sentence()))
