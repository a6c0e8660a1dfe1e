"""Bounded, exhaustive verification of Kishon's Poker.

Two semantics are mechanized side by side: interleaved global states with
inductive invariants (:mod:`kishon.global_sem`), and event-based system
executions with interval-order precedence and register specifications
(:mod:`kishon.nonrestricted`, :mod:`kishon.executions`). :mod:`kishon.bridge`
maps the first into the second.
"""

from .executions import (
    RegisterSemantics,
    SystemExecution,
    allowed_read_values,
    check_lemmas,
    check_theorem33,
    enumerate_restricted_executions,
)
from .folk import FiniteStructure, check_structure, evaluate, is_system_execution
from .global_sem import (
    check_final_state_lemma,
    check_inductive_invariant,
    check_theorem1,
    check_theorem2,
    enumerate_histories,
    phi_invariant,
)
from .nonrestricted import check_alpha_invariant, enumerate_nonrestricted_executions
from .orders import (
    Precedence,
    enumerate_two_chain_orders,
    is_russell_wiener,
    order_from_action_sequence,
    realize_intervals,
)
from .protocol import kishon_protocol, validate_protocol
from .verdict import Verdict

__version__ = "0.1.0"
