"""Probability engine for partially distinguishable particles on multiports."""

from .closed_form import coincidence_p4_closed_form
from .engine import (
    MAX_PERMANENT_SIZE,
    classical_probability,
    hadamard_permanent,
    j_function,
    j_table,
    output_probability,
    output_probability_direct,
    output_probability_permanent,
    permanent,
    permanent_naive,
)
from .marginals import (
    correlation_Q,
    correlation_Q_from_counts,
    marginal_probability,
    marginal_probability_binned,
)
from .povm import (
    PovmElement,
    check_povm,
    resolved_outcome_records,
    state_resolved_probability,
    unambiguous_discrimination_povm,
)
from .types import (
    InputSpec,
    Multiport,
    OutputEvent,
    all_output_events,
    balanced_beamsplitter,
    coincidence_event,
    random_unitary,
    symmetric_four_port,
)
