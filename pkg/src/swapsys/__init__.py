"""Generalized cross-chain swap systems.

Library + CLI that models swap systems (digraph of asset transfers plus
per-party preference posets), decides whether a system admits an atomic swap
protocol via the spanning-subgraph characterization, simulates the
hashed-timelock protocol under honest and adversarial behavior, and generates
hardness-reduction instances from CNF and exists-forall DNF formulas.
"""

from .model import (
    Arc,
    GeneratorPair,
    ModelError,
    Outcome,
    Subgraph,
    SwapDigraph,
    SwapSystem,
    deal,
    deal_outcome,
    full_subgraph,
    nodeal,
    outcome_of,
    parse_swap_system,
    serialize_swap_system,
    subgraph_of,
)
from .prefs import (
    Ordering,
    classify_outcome,
    compare,
    generic_leq,
    h_closure,
    is_acceptable,
    validate_system,
)
from .graphs import (
    SccPartition,
    is_piecewise_strongly_connected,
    strongly_connected_components,
    weakly_connected_components,
)
from .atomicity import (
    AtomicityVerdict,
    SearchConfig,
    decide_atomic,
    decide_atomic_naive,
    dominates,
    find_strict_dominator,
    strictly_dominates,
    verify_witness,
)
from .protocol import (
    CoalitionReport,
    SimReport,
    check_outgoing_guard,
    check_triggered_prefix,
    coalition_deviation_demo,
    make_strategy,
    run_protocol,
)
from .reductions import (
    CnfFormula,
    EadnfFormula,
    GadgetMap,
    cnf_to_swap,
    dnf1x_normalize,
    eadnf1x_to_swap,
    eadnf_bruteforce,
    sat_bruteforce,
)

__version__ = "0.1.0"
