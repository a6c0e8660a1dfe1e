# %% [markdown]
# Interval orders from begin/end actions
#
# Laying events out as intervals on a line gives a precedence relation where
# x < y iff x ends before y begins. Such relations never contain an induced
# 2+2, and every relation without one comes from intervals.

# %%
from kishon.orders import (
    BEGIN, END, Precedence, enumerate_two_chain_orders, is_russell_wiener,
    order_from_action_sequence, realize_intervals, russell_wiener_violation,
)

p = order_from_action_sequence([(BEGIN, 0), (BEGIN, 1), (END, 0), (BEGIN, 2), (END, 1), (END, 2)])
print(p.to_json(["x", "y", "z"]))

# %%
two_plus_two = Precedence(4, frozenset({(0, 1), (2, 3)}))
print("2+2 is an interval order:", is_russell_wiener(two_plus_two))
print("witness a<b, c<d:", russell_wiener_violation(two_plus_two))

# %%
found = enumerate_two_chain_orders(4)
print(len(found), "orders extend two 4-chains")
sparse = min(found, key=lambda o: len(o.pairs))
print("sparsest has", len(sparse.pairs), "pairs")
iv = realize_intervals(sparse)
print("left ", iv.left)
print("right", iv.right)
print("round trip:", iv.precedence() == sparse)
