import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import random_channel, random_pauli_diagonal, weak_channel
from rbgatesets import theory as th
from rbgatesets.compilation import error_model
from rbgatesets.engine import PulseNoise
from rbgatesets.gatesets import clifford_ptms, group_table, nist_labels
from rbgatesets.ptm import depolarizing, pauli_diagonal

unit = st.floats(0.8, 1.0)


def test_twirl_c_example():
    np.testing.assert_allclose(th.twirl(np.diag([1, 0.98, 0.97, 0.96]), "C"), np.diag([1, 0.97, 0.97, 0.97]), atol=1e-15)


def test_twirl_n_example():
    np.testing.assert_allclose(
        th.twirl(np.diag([1, 0.98, 0.97, 0.96]), "N"), np.diag([1, 0.97, 0.965, 0.975]), atol=1e-15
    )


def test_twirl_p_is_diagonal_part(rng):
    for _ in range(20):
        lam = random_channel(rng)
        np.testing.assert_allclose(th.twirl(lam, "P"), np.diag([1, *np.diag(lam)[1:]]), atol=1e-12)


def test_twirls_of_random_channels(rng):
    for _ in range(100):
        lam = random_channel(rng)
        x, y, z = np.diag(lam)[1:]
        p = (x + y + z) / 3
        tc = th.twirl(lam, "C")
        np.testing.assert_allclose(tc, np.diag([1, p, p, p]), atol=1e-12)
        np.testing.assert_allclose(th.twirl(lam, "C12"), tc, atol=1e-12)
        np.testing.assert_allclose(th.twirl(lam, "N"), np.diag([1, (x + z) / 2, (y + z) / 2, (x + y) / 2]), atol=1e-12)
        np.testing.assert_allclose(th.twirl(tc, "C"), tc, atol=1e-12)


def test_bloch_trace_is_clifford_invariant(rng):
    lam = random_channel(rng)
    ref = np.trace(lam[1:, 1:])
    for g in clifford_ptms():
        assert np.trace((g.T @ lam @ g)[1:, 1:]) == pytest.approx(ref, abs=1e-12)


def test_recursion_matrix_examples():
    np.testing.assert_allclose(
        sorted(np.linalg.eigvals(th.recursion_matrix(1, 1, 1)).real), [-0.5, 0.5, 1.0], atol=1e-14
    )
    np.testing.assert_allclose(
        sorted(np.linalg.eigvals(th.recursion_matrix(0.99, 0.99, 0.99)).real), [-0.495, 0.495, 0.99], atol=1e-14
    )


@settings(max_examples=30)
@given(unit, unit, unit)
def test_matrix_power_matches_scalar_recursion(x, y, z):
    m_mat = th.recursion_matrix(x, y, z)
    states = th.recursion_states(x, y, z, 30)
    v = np.ones(3)
    for m in range(1, 31):
        v = m_mat @ v
        np.testing.assert_allclose(v, states[m], atol=1e-12)


def test_decay_parameter_examples():
    lead, (s1, s2) = th.nist_decay_parameter(1, 1, 1)
    assert (lead, s1, s2) == pytest.approx((1, 0.5, -0.5), abs=1e-14)
    lead, (s1, s2) = th.nist_decay_parameter(0.97, 0.97, 0.97)
    assert (lead, s1, s2) == pytest.approx((0.97, 0.485, -0.485), abs=1e-14)


@settings(max_examples=100)
@given(unit, unit, unit)
def test_closed_form_spectrum_matches_eigensolve(x, y, z):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        lead, subs = th.nist_decay_parameter(x, y, z)
    vals = np.linalg.eigvals(th.recursion_matrix(x, y, z))
    assert lead == pytest.approx(vals[np.argmax(np.abs(vals))].real, abs=1e-12)
    got = sorted([lead, *(complex(s) for s in subs)], key=lambda c: (c.real, c.imag))
    want = sorted(vals.astype(complex), key=lambda c: (c.real, c.imag))
    np.testing.assert_allclose(got, want, atol=1e-10)


def test_decay_parameter_warns_outside_perturbative_range():
    with pytest.warns(RuntimeWarning):
        th.nist_decay_parameter(0.5, 0.5, 0.5)


def test_perturbative_accuracy(rng):
    for _ in range(300):
        x, y, z = random_pauli_diagonal(rng)
        r = (3 - x - y - z) / 6
        lead, subs = th.nist_decay_parameter(x, y, z)
        pert = th.perturbative_spectrum(x, y, z)
        assert abs(lead - pert[0]) <= 10 * r**2
        assert abs(subs[0] - pert[1]) <= 10 * r**2
        assert abs(subs[1] - pert[2]) <= 10 * r**2


def test_decay_components_reassemble():
    x, y, z = 0.99, 0.98, 0.985
    vals, comps = th.decay_components(x, y, z)
    for m in (0, 3, 10):
        total = sum(v**m * c for v, c in zip(vals, comps))
        np.testing.assert_allclose(total.real, th.recursion_states(x, y, z, m)[-1], atol=1e-12)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_recursion_matches_exhaustive_average(m):
    """Average the noisy core sequence over all 8^m NIST words."""
    x, y, z = 0.99, 0.97, 0.95
    lam = pauli_diagonal(x, y, z)
    ptms = clifford_ptms()
    table = group_table()
    labels = nist_labels()
    total = np.zeros((4, 4))
    for word in itertools.product(labels, repeat=m):
        s = np.eye(4)
        for g in word:
            s = lam @ ptms[g] @ s
        s = lam @ ptms[table.inverse(table.product(word))] @ s
        total += s
    avg = total / 8**m
    expected = np.diag([1.0, *(np.array([x, y, z]) * th.recursion_states(x, y, z, m)[-1])])
    np.testing.assert_allclose(avg, expected, atol=1e-12)


def test_ideal_spectra():
    np.testing.assert_allclose(th.nonzero_eigenvalues(th.averaged_superop("N")).real, [1, 1, 0.5, -0.5], atol=1e-10)
    np.testing.assert_allclose(th.nonzero_eigenvalues(th.averaged_superop("C")).real, [1, 1], atol=1e-10)


def test_averaged_superop_matches_direct_sum():
    ptms = clifford_ptms()
    expected = sum(np.kron(ptms[g], ptms[g]) for g in range(24)) / 24
    np.testing.assert_allclose(th.averaged_superop("C"), expected, atol=1e-15)
    vals = np.linalg.eigvals(expected)
    np.testing.assert_allclose(
        sorted(np.abs(th.spectrum(th.averaged_superop("C")))), sorted(np.abs(vals)), atol=1e-10
    )


def test_gate_independent_cross_check(rng):
    for _ in range(50):
        x, y, z = random_pauli_diagonal(rng)
        lam = pauli_diagonal(x, y, z)
        ptms = clifford_ptms()
        sup = th.averaged_superop("N", lambda g: lam @ ptms[g])
        vals = th.spectrum(sup)
        lead, _ = th.nist_decay_parameter(x, y, z)
        assert vals[1].real == pytest.approx(lead, abs=1e-10)
        assert th.decay_eigenvalue("N", lambda g: lam @ ptms[g]) == pytest.approx(lead, abs=1e-10)


def test_traceless_block_is_invariant(rng):
    lam = weak_channel(rng)
    ptms = clifford_ptms()
    impl = {g: lam @ ptms[g] for g in range(24)}
    block = th.traceless_block("C", impl)
    full = th.averaged_superop("C", impl)
    idx = [4 * i + j for i in range(1, 4) for j in range(1, 4)]
    np.testing.assert_allclose(full[np.ix_(idx, idx)], block, atol=1e-15)


def test_L_ideal():
    ideal = clifford_ptms()
    res = th.compute_L("N", lambda g: ideal[g], 1.0)
    np.testing.assert_allclose(res.L, np.diag([0, 1, 1, 1]), atol=1e-12)
    assert res.singular_spread == pytest.approx(1.0, abs=1e-12)


def test_L_depolarizing():
    ptms = clifford_ptms()
    lam = depolarizing(0.99)
    for gs in ("C", "N"):
        impl = {g: lam @ ptms[g] for g in range(24)}
        p = th.decay_eigenvalue(gs, impl)
        assert p == pytest.approx(0.99, abs=1e-12)
        assert th.compute_L(gs, impl, p).singular_spread == pytest.approx(1.0, abs=1e-10)


def test_L_over_rotation_row7():
    noise = PulseNoise(7, error_model("over_rotation"))
    impl = noise.expected_map("N")
    p = th.decay_eigenvalue("N", impl)
    r = (1 - p) / 2
    res = th.compute_L("N", impl, p)
    assert abs(res.singular_spread - 1) <= 10 * r
    assert res.iterations >= math.ceil(-2 * math.log(r) / math.log(2))


def test_L_wrong_p_does_not_converge():
    ptms = clifford_ptms()
    lam = depolarizing(0.99)
    impl = {g: lam @ ptms[g] for g in range(24)}
    with pytest.raises(th.ConvergenceError):
        th.compute_L("C", impl, 0.98)


def test_L_rejects_bad_p():
    with pytest.raises(ValueError):
        th.compute_L("C", {}, 0.0)
