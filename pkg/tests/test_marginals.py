import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_pure
from collphase.distinguishability import circle_dance_states
from collphase.errors import DimensionError
from collphase.interference import (
    InputSpec,
    OutputEvent,
    all_output_events,
    balanced_beamsplitter,
    correlation_Q,
    correlation_Q_from_counts,
    marginal_probability,
    marginal_probability_binned,
    random_unitary,
    symmetric_four_port,
)
from collphase.states import PureState


def test_single_particle_marginal_is_average_intensity():
    u = random_unitary(4, seed=11)
    rng = np.random.default_rng(0)
    inp = InputSpec((0, 1, 3), tuple(random_pure(rng, 2) for _ in range(3)))
    for l in range(4):
        expected = np.mean([abs(u.matrix[k, l]) ** 2 for k in inp.ports])
        assert abs(marginal_probability(u, inp, OutputEvent((l,))) - expected) < 1e-14


def test_hom_single_marginal():
    s = PureState.basis(0, 1)
    inp = InputSpec((0, 1), (s, s))
    for l in (0, 1):
        assert abs(marginal_probability(balanced_beamsplitter(), inp, OutputEvent((l,))) - 0.5) < 1e-15


def test_marginal_rejects_full_event():
    s = PureState.basis(0, 1)
    inp = InputSpec((0, 1), (s, s))
    with pytest.raises(DimensionError):
        marginal_probability(balanced_beamsplitter(), inp, OutputEvent((0, 1)))
    with pytest.raises(DimensionError):
        marginal_probability(balanced_beamsplitter(), inp, OutputEvent(()))


@given(st.integers(0, 2**31), st.sampled_from(["boson", "fermion"]))
def test_subset_and_binned_routes_agree(seed, stat):
    rng = np.random.default_rng(seed)
    n, m = 3, 4
    inp = InputSpec((0, 2, 3), tuple(random_pure(rng, 2) for _ in range(n)), stat)
    u = random_unitary(m, rng=rng)
    for r in (1, 2):
        for partial in all_output_events(r, m):
            a = marginal_probability(u, inp, partial)
            b = marginal_probability_binned(u, inp, partial)
            assert abs(a - b) < 1e-12


@given(st.integers(0, 2**31))
def test_marginals_normalized(seed):
    rng = np.random.default_rng(seed)
    inp = InputSpec((0, 1, 2), tuple(random_pure(rng, 3) for _ in range(3)))
    u = random_unitary(4, rng=rng)
    total = math.fsum(marginal_probability(u, inp, ev) for ev in all_output_events(2, 4))
    assert abs(total - 1) < 1e-12


def test_q_matches_falling_factorial_counts():
    rng = np.random.default_rng(5)
    inp = InputSpec((0, 1, 2, 3), tuple(random_pure(rng, 2) for _ in range(4)))
    u = random_unitary(4, seed=5)
    for partial in [OutputEvent((1,)), OutputEvent((0, 0)), OutputEvent((1, 2, 2)), OutputEvent((0, 1, 2, 3))]:
        assert abs(correlation_Q(u, inp, partial) - correlation_Q_from_counts(u, inp, partial)) < 1e-12


def test_q_total_counts():
    rng = np.random.default_rng(6)
    inp = InputSpec((0, 1, 2), tuple(random_pure(rng, 2) for _ in range(3)))
    u = random_unitary(3, seed=6)
    # summing <n_l> over ports gives N
    assert abs(sum(correlation_Q(u, inp, OutputEvent((l,))) for l in range(3)) - 3) < 1e-12


def test_circle_dance_marginals_blind_to_total_phase():
    u = symmetric_four_port(0)
    r = [0.45, 0.3, 0.4, 0.35]
    a = InputSpec((0, 1, 2, 3), tuple(circle_dance_states(r, [0.1, 0.2, 0.3, 0.0])))
    b = InputSpec((0, 1, 2, 3), tuple(circle_dance_states(r, [0.1, 0.2, 0.3, 2.5])))
    for partial in all_output_events(3, 4):
        assert abs(marginal_probability(u, a, partial) - marginal_probability(u, b, partial)) < 1e-12
