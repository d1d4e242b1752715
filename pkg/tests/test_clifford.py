import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac8 import clifford as cl

finite = st.floats(-50, 50, allow_nan=False)


def test_relations_hold_to_machine_precision(gs):
    assert cl.clifford_residual(gs) <= 1e-14
    assert len(cl.anticommutator_residuals(gs)) == 28
    assert max(cl.hermiticity_residuals(gs).values()) <= 1e-15
    assert max(cl.unitarity_residuals(gs).values()) <= 1e-14


def test_squares_follow_signature(gs):
    np.testing.assert_allclose(gs[0] @ gs[0], cl.I8, atol=1e-15)
    np.testing.assert_allclose(gs[4] @ gs[4], -cl.I8, atol=1e-15)


def test_grade_spectrum(gs):
    ev = np.linalg.eigvalsh(gs.grade)
    np.testing.assert_allclose(ev, [-1] * 4 + [1] * 4, atol=1e-14)
    np.testing.assert_allclose(gs.grade @ gs.grade, cl.I8, atol=1e-14)
    assert abs(np.trace(gs.s56)) <= 1e-14


def test_grade_is_block_split(gs):
    np.testing.assert_array_equal(gs.grade, np.kron(cl.SIGMA3, cl.I4))


def test_residual_detects_degenerate_pair(gs):
    bad = gs.replace(5, gs[4])
    assert cl.clifford_residual(bad) >= 2


def test_residual_detects_scaling(gs):
    bad = gs.replace(2, 2 * gs[2])
    assert cl.anticommutator_residuals(bad)[(2, 2)] >= 3 * abs(gs.metric[2])


def test_construction_failure_lists_relations(monkeypatch):
    monkeypatch.setattr(cl, "SIGMA1", cl.SIGMA3)
    with pytest.raises(cl.CliffordError, match=r"\(0, 5\)"):
        cl.build_gamma_set()


def test_spin_generator_forms(gs):
    np.testing.assert_allclose(cl.spin_generator(gs, 5, 6), 0.5j * gs[5] @ gs[6], atol=1e-15)
    np.testing.assert_allclose(cl.spin_generator(gs, 5, 6), gs.s56, atol=1e-15)
    s12 = cl.spin_generator(gs, 1, 2)
    np.testing.assert_allclose(s12, s12.conj().T, atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(s12), [-0.5] * 4 + [0.5] * 4, atol=1e-14)
    s01 = cl.spin_generator(gs, 0, 1)
    np.testing.assert_allclose(s01, -s01.conj().T, atol=1e-15)
    np.testing.assert_allclose(cl.spin_generator(gs, 2, 1), -s12)


def test_spin_generator_rejects_degenerate_pair(gs):
    with pytest.raises(ValueError, match="degenerate index pair"):
        cl.spin_generator(gs, 3, 3)


def test_monomial_basis(gs):
    basis = cl.monomial_basis(gs)
    assert len(basis) == 128
    np.testing.assert_array_equal(basis[0], cl.I8)
    flat = np.array([b.ravel() for b in basis])
    assert np.linalg.matrix_rank(flat) == 64
    # the full product G_0 ... G_6 is central (-i times the identity); all
    # other non-identity monomials are traceless
    np.testing.assert_allclose(basis[-1], -1j * cl.I8, atol=1e-15)
    assert all(abs(np.trace(b)) < 1e-13 for b in basis[1:-1])

    # every monomial is proportional, by one of +-1, +-i, to exactly one other
    partners = []
    for i, a in enumerate(basis):
        hits = []
        for j, b in enumerate(basis):
            if i == j:
                continue
            c = np.vdot(b, a) / 8
            if abs(abs(c) - 1) < 1e-12 and np.allclose(a, c * b, atol=1e-12):
                assert min(abs(c - z) for z in (1, -1, 1j, -1j)) < 1e-12
                hits.append(j)
        partners.append(hits)
    assert all(len(h) == 1 for h in partners)
    assert all(partners[partners[i][0]] == [i] for i in range(128))


@settings(max_examples=100, deadline=None)
@given(st.tuples(finite, finite, finite, finite))
def test_squaring_consistency(p):
    gs = cl.build_gamma_set()
    p = np.array(p)
    s = cl.slash(gs, p)
    target = (p[0] ** 2 - p[1:] @ p[1:]) * cl.I8
    assert np.abs(s @ s - target).max() <= 1e-12 * max(1.0, p @ p)


def test_wave_operator_squares_to_mass_shell(gs, rng):
    for _ in range(20):
        p4 = rng.normal(size=4)
        m = rng.uniform(0.1, 2)
        d = cl.wave_operator(gs, p4, m)
        shell = p4[0] ** 2 - p4[1:] @ p4[1:] - m * m
        np.testing.assert_allclose(d @ d, shell * cl.I8, atol=1e-13)
