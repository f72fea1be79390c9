import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_mixed, random_pure
from collphase.distinguishability import (
    DISCONNECTED,
    DistinguishabilityGraph,
    GramMatrix,
    check_cycle_bound,
    circle_dance_gram,
    circle_dance_states,
    collective_phase,
    cycle_weight,
    factor_gram,
    gershgorin_sufficient,
    gram_from_states,
    is_positive_semidefinite,
    n4_circle_eigenvalues,
    n4_circle_sufficient,
    states_from_gram,
    triad_basis,
    triad_basis_decompose,
)
from collphase.errors import DimensionError, DisconnectedError, RealizabilityError
from collphase.states import MixedState, PureState, wrap_phase

angles = st.floats(-math.pi, math.pi, allow_nan=False)


def e7_closed_form(r, th):
    """Explicit lower-triangular circle states; row k holds the amplitudes of state k."""
    r12, r23, r34, r14 = r
    t12, t23, t34, t14 = th
    s = math.sqrt(1 - r12**2)
    t = math.sqrt(1 - r12**2 - r23**2)
    phi34 = (r34 * s**2 * cmath.exp(1j * t34) + r12 * r23 * r14 * cmath.exp(1j * (t14 - t12 - t23))) / (s * t)
    phi44 = math.sqrt((1 - r12**2 - r14**2) / s**2 - abs(phi34) ** 2)
    return np.array(
        [
            [1, 0, 0, 0],
            [r12 * cmath.exp(1j * t12), s, 0, 0],
            [0, r23 / s * cmath.exp(1j * t23), t / s, 0],
            [r14 * cmath.exp(1j * t14), -r12 * r14 / s * cmath.exp(1j * (t14 - t12)), phi34, phi44],
        ]
    )


def test_gram_from_states_examples():
    same = [PureState.basis(0, 2)] * 3
    assert np.allclose(gram_from_states(same).entries, np.ones((3, 3)))
    ortho = [PureState.basis(k, 3) for k in range(3)]
    assert np.allclose(gram_from_states(ortho).entries, np.eye(3))
    with pytest.raises(DimensionError):
        gram_from_states([PureState.basis(0, 2), PureState.basis(0, 3)])


def test_gram_validation():
    with pytest.raises(ValueError):
        GramMatrix(np.array([[1, 0.5], [0.4, 1]]))
    with pytest.raises(ValueError):
        GramMatrix(np.array([[2, 0], [0, 1]]))


def test_psd_examples():
    ok, lam = is_positive_semidefinite(np.eye(3))
    assert ok and abs(lam - 1) < 1e-15
    h = np.array([[1, 0.5], [0.5, 1]])
    ok, lam = is_positive_semidefinite(h)
    assert ok and abs(lam - 0.5) < 1e-15
    with pytest.raises(ValueError):
        is_positive_semidefinite(np.array([[1, 0.5], [0.1, 1]]))


def test_circle_r06_not_realizable():
    h = circle_dance_gram(4, [0.6] * 4, [0.0] * 4)
    ok, lam = is_positive_semidefinite(h)
    # a2 = 1.44; roots 1 +- 1.2 at zero collective phase
    assert not ok and abs(lam + 0.2) < 1e-12
    assert np.allclose(np.sort(n4_circle_eigenvalues([0.6] * 4, [0.0] * 4)), np.linalg.eigvalsh(h.entries))
    assert not n4_circle_sufficient(0.6, 0.6, 0.6, 0.6)
    with pytest.raises(RealizabilityError) as err:
        states_from_gram(h)
    assert abs(err.value.min_eigenvalue + 0.2) < 1e-12


@given(st.lists(st.floats(0, 1), min_size=4, max_size=4), st.lists(angles, min_size=4, max_size=4))
def test_n4_closed_form_roots(r, th):
    h = circle_dance_gram(4, r, th).entries
    assert np.allclose(n4_circle_eigenvalues(r, th), np.linalg.eigvalsh(h), atol=1e-7)


def test_gershgorin_examples():
    assert gershgorin_sufficient(np.eye(4))
    assert gershgorin_sufficient(circle_dance_gram(4, [0.5] * 4, [0.3, 0.1, 2.0, -1.0]))
    h = np.array([[1, 0.6, 0], [0.6, 1, 0.6], [0, 0.6, 1]])
    assert not gershgorin_sufficient(h)
    ok, lam = is_positive_semidefinite(h)
    # eigenvalues 1 and 1 +- 0.6 sqrt(2)
    assert ok and abs(lam - (1 - 0.6 * math.sqrt(2))) < 1e-14


def test_n4_sufficient_examples():
    assert n4_circle_sufficient(0.5, 0.5, 0.5, 0.5)
    assert n4_circle_sufficient(0, 0, 0, 0)
    assert n4_circle_sufficient(0.9, 0.1, 0.1, 0.1)
    rng = np.random.default_rng(2)
    for _ in range(200):
        th = rng.uniform(-math.pi, math.pi, 4)
        assert is_positive_semidefinite(circle_dance_gram(4, [0.9, 0.1, 0.1, 0.1], th))[0]


def test_states_from_gram_identity():
    phi, rank = factor_gram(np.eye(4))
    assert rank == 4 and np.allclose(phi, np.eye(4))


def test_states_from_gram_matches_row_construction():
    r, th = [0.4, 0.35, 0.3, 0.45], [0.7, -1.2, 2.1, 0.4]
    # phase of H[3, 0] is th[3] in circle_dance_gram; the row construction uses H[0, 3]
    phi, rank = factor_gram(circle_dance_gram(4, r, [th[0], th[1], th[2], -th[3]]))
    assert rank == 4
    assert np.max(np.abs(phi - e7_closed_form(r, th))) < 1e-10


def test_rank_deficient_gram():
    # equal r = 1/2 at zero collective phase leaves the fourth row no room
    r = [0.5, 0.5, 0.5, 0.5]
    th = [0.3, -0.1, 0.5, -0.7]
    h = circle_dance_gram(4, r, th)
    ok, lam = is_positive_semidefinite(h)
    assert ok and abs(lam) < 1e-12
    phi, rank = factor_gram(h)
    assert rank == 3 and abs(phi[3, 3]) < 1e-7
    states = states_from_gram(h)
    assert np.max(np.abs(gram_from_states(states).entries - h.entries)) < 1e-10


def test_circle_dance_gram_examples():
    assert np.allclose(circle_dance_gram(5, [0] * 5, [1] * 5).entries, np.eye(5))
    assert gershgorin_sufficient(circle_dance_gram(4, [0.5, 0.4, 0.5, 0.3], [0.0, 1.0, 2.0, 3.0]))
    h = circle_dance_gram(5, [0.5] * 5, [0.2, -0.4, 1.0, 0.3, 2.0])
    assert is_positive_semidefinite(h)[0]
    with pytest.raises(ValueError):
        circle_dance_gram(3, [0.1] * 3, [0] * 3)
    with pytest.raises(ValueError):
        circle_dance_gram(4, [1.5, 0, 0, 0], [0] * 4)


def test_cycle_weight_examples(rng):
    s = random_pure(rng, 3)
    assert abs(cycle_weight((0, 1, 2), [s, s, s])) < 1e-15
    states = [random_pure(rng, 3) for _ in range(4)]
    g = gram_from_states(states)
    d = DistinguishabilityGraph.from_gram(g).distances
    w = cycle_weight((0, 2, 1, 3), states)
    assert abs(w.real - (d[0, 2] + d[2, 1] + d[1, 3] + d[3, 0])) < 1e-12


def test_cycle_weight_on_circle_states():
    th = [0.4, -0.9, 1.3, 0.8]
    states = circle_dance_states([0.45] * 4, th)
    w = cycle_weight((0, 1, 2, 3), states)
    prod = np.prod([gram_from_states(states).entries[k, (k + 1) % 4] for k in range(4)])
    assert abs(w.real + math.log(abs(prod))) < 1e-12
    assert abs(wrap_phase(w.imag - sum(th))) < 1e-12
    # three-vertex cycles through a missing edge are disconnected
    for cyc in itertools.permutations(range(4), 3):
        assert cycle_weight(cyc, states) == DISCONNECTED


def test_collective_phase_examples(rng):
    states = [random_pure(rng, 4) for _ in range(4)]
    graph = gram_from_states(states).graph()
    assert collective_phase((1, 3), graph) == 0
    t = lambda *c: collective_phase(c, graph)  # noqa: E731
    assert abs(wrap_phase(t(1, 2, 3) - (t(0, 1, 2) + t(0, 2, 3) - t(0, 1, 3)))) < 1e-12


def test_mutual_phase_recovery_in_triad_gauge(rng):
    states = [random_pure(rng, 4) for _ in range(4)]
    h = gram_from_states(states).entries
    th = np.angle(h)
    # vertex phases g with theta'_kl = theta_kl + g_k - g_l zeroing theta_02, theta_03, theta_13
    g = np.zeros(4)
    g[2], g[3] = th[0, 2], th[0, 3]
    g[1] = g[3] - th[1, 3]
    hg = h * np.exp(1j * (g[:, None] - g[None, :]))
    graph = GramMatrix(hg).graph()
    for k, l in [(0, 2), (0, 3), (1, 3)]:
        assert abs(wrap_phase(graph.phases[k, l])) < 1e-12
    t = lambda *c: collective_phase(c, graph)  # noqa: E731
    assert abs(wrap_phase(graph.phases[0, 1] - t(0, 1, 3))) < 1e-12
    assert abs(wrap_phase(graph.phases[1, 2] - (t(0, 1, 2) - t(0, 1, 3)))) < 1e-12
    assert abs(wrap_phase(graph.phases[2, 3] - t(0, 2, 3))) < 1e-12


def test_collective_phase_missing_edge():
    graph = circle_dance_gram(4, [0.3] * 4, [0.1] * 4).graph()
    with pytest.raises(DisconnectedError):
        collective_phase((0, 1, 2), graph)
    assert abs(collective_phase((0, 1, 2, 3), graph) - 0.4) < 1e-12


@given(st.integers(0, 2**31), st.integers(3, 6))
def test_collective_phase_gauge_and_orientation(seed, n):
    rng = np.random.default_rng(seed)
    states = [random_pure(rng, n) for _ in range(n)]
    h = gram_from_states(states).entries
    gauge = np.exp(1j * rng.uniform(-math.pi, math.pi, n))
    shifted = GramMatrix(np.conj(gauge)[:, None] * h * gauge[None, :]).graph()
    graph = GramMatrix(h).graph()
    r = int(rng.integers(2, n + 1))
    cyc = tuple(int(x) for x in rng.permutation(n)[:r])
    a = collective_phase(cyc, graph)
    assert abs(wrap_phase(collective_phase(cyc, shifted) - a)) < 1e-12
    assert abs(wrap_phase(collective_phase(cyc[::-1], graph) + a)) < 1e-12
    # pure-state cycle weight carries the same phase
    assert abs(wrap_phase(cycle_weight(cyc, states).imag - a)) < 1e-10


def test_triad_basis_examples():
    assert len(triad_basis(5)) == 6
    assert triad_basis_decompose((0, 1, 2)) == {(0, 1, 2): 1}
    assert triad_basis_decompose((1, 2, 3)) == {(0, 1, 2): 1, (0, 2, 3): 1, (0, 1, 3): -1}


@given(st.integers(0, 2**31), st.integers(4, 7))
def test_triad_reconstruction(seed, n):
    rng = np.random.default_rng(seed)
    th = rng.uniform(-math.pi, math.pi, (n, n))
    th = np.triu(th, 1) - np.triu(th, 1).T
    phase = lambda c: sum(th[a, b] for a, b in zip(c, c[1:] + c[:1]))  # noqa: E731
    r = int(rng.integers(3, n + 1))
    cyc = tuple(int(x) for x in rng.permutation(n)[:r])
    recon = sum(c * phase(t) for t, c in triad_basis_decompose(cyc).items())
    assert abs(wrap_phase(recon - phase(cyc))) < 1e-12


def test_cycle_bound_examples(rng):
    pure = [random_pure(rng, 3) for _ in range(4)]
    from collphase.distinguishability import cycle_bound_sides

    lhs, rhs = cycle_bound_sides((0, 1, 2, 3), pure)
    assert abs(lhs - rhs) < 1e-12
    mixed = [random_mixed(rng, 3) for _ in range(5)]
    assert check_cycle_bound((0, 1, 2, 3, 4), mixed)
    flat = [MixedState(np.eye(3) / 3)] * 3
    assert check_cycle_bound((0, 1, 2), flat)


def test_gershgorin_implies_psd_bulk():
    rng = np.random.default_rng(11)
    for _ in range(2000):
        n = int(rng.integers(2, 7))
        a = rng.uniform(0, 1, (n, n)) * np.exp(1j * rng.uniform(-math.pi, math.pi, (n, n)))
        a = np.triu(a, 1)
        h = a + a.conj().T
        h = h / max(1e-9, np.abs(h).sum(axis=1).max()) * rng.uniform(0.5, 1.3)
        np.fill_diagonal(h, 1)
        if gershgorin_sufficient(h):
            assert is_positive_semidefinite(h)[0]


@given(st.integers(0, 2**31), st.integers(1, 6), st.integers(0, 3))
def test_gram_roundtrip(seed, n, extra):
    rng = np.random.default_rng(seed)
    states = [random_pure(rng, max(1, n - 1) + extra) for _ in range(n)]
    h = gram_from_states(states)
    again = gram_from_states(states_from_gram(h))
    assert np.max(np.abs(again.entries - h.entries)) < 1e-10
