import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac8.clifford import I8, spin_generator
from dirac8.fields import Grid, SpinorField
from dirac8.poincare import (
    GENERATORS,
    Coord,
    GeneratorId,
    Identity,
    Scaled,
    Sum,
    Zero,
    apply,
    bracket,
    bracket_residuals,
    check_localized,
    commutator_residual,
    generator,
    hamiltonian_from_spin,
    hamiltonian_matrix,
    hamiltonian_op,
    momentum_op,
)


def test_hamiltonian_rest_frame_spectrum(gs):
    ev = np.linalg.eigvalsh(hamiltonian_matrix(gs, [0, 0, 0], 1.0))
    np.testing.assert_allclose(ev, [-1] * 4 + [1] * 4, atol=1e-14)


def test_hamiltonian_massless_spectrum(gs):
    ev = np.linalg.eigvalsh(hamiltonian_matrix(gs, [3, 4, 0], 0.0))
    np.testing.assert_allclose(ev, [-5] * 4 + [5] * 4, atol=1e-13)


def test_hamiltonian_identities(gs, rng):
    for _ in range(100):
        p = rng.normal(size=3) * 2
        m = rng.uniform(0, 3)
        h = hamiltonian_matrix(gs, p, m)
        np.testing.assert_allclose(h, h.conj().T, atol=1e-13)
        np.testing.assert_allclose(h @ h, (p @ p + m * m) * I8, atol=1e-12 * max(1, p @ p))
        np.testing.assert_allclose(h, hamiltonian_from_spin(gs, p, m), atol=1e-13)


def test_hamiltonian_broadcasts(gs, rng):
    p = rng.normal(size=(4, 5, 3))
    h = hamiltonian_matrix(gs, p, 1.3)
    assert h.shape == (4, 5, 8, 8)
    np.testing.assert_allclose(h[2, 3], hamiltonian_matrix(gs, p[2, 3], 1.3))


def test_identity_and_constant(gs, grid2, packet2):
    out = apply(Identity(), packet2)
    np.testing.assert_array_equal(out.values, packet2.values)
    const = SpinorField(grid2, np.ones((*grid2.shape, 8), dtype=complex))
    for a in (1, 2, 3):
        assert np.abs(apply(momentum_op(a), const).values).max() <= 1e-14


def test_plane_wave_eigenfunction(gs, grid2):
    x, y = grid2.coords()
    k = 2 * np.pi * np.array([3, -2]) / grid2.length
    v = np.arange(8) + 1j
    f = SpinorField(grid2, np.exp(1j * (k[0] * x + k[1] * y))[..., None] * v)
    out = apply(generator("P1", gs, 1.0), f)
    np.testing.assert_allclose(out.values, k[0] * f.values, atol=1e-11)


def test_canonical_commutator(packet2):
    x1, p1 = Coord(1), momentum_op(1)
    op = x1 @ p1 - p1 @ x1
    out = apply(op, packet2)
    err = (out - 1j * packet2).norm() / packet2.norm()
    assert err <= 1e-10


def test_canonical_commutator_unresolved_axis(packet2):
    x3, p3 = Coord(3), momentum_op(3)
    out = apply(x3 @ p3 - p3 @ x3, packet2)
    assert (out - 1j * packet2).norm() <= 1e-14


def test_rotation_of_radial_profile(gs, grid2):
    x, y = grid2.coords()
    prof = np.exp(-(x**2 + y**2) / (2 * 2.0**2))
    v = np.linspace(1, 2, 8) + 0.5j
    f = SpinorField(grid2, prof[..., None] * v)
    out = apply(generator("J12", gs, 1.0), f)
    expect = prof[..., None] * (spin_generator(gs, 1, 2) @ v)
    assert np.abs(out.values - expect).max() <= 1e-10
    assert not out.moments


def test_boost_sanity_bound(gs, packet2):
    out = apply(generator("J01", gs, 1.0), packet2)
    grid = packet2.grid
    x = grid.coords()[0]
    amp = np.sum(np.abs(packet2.values) ** 2, axis=-1)
    spread = np.sqrt(np.sum(x**2 * amp) / np.sum(amp))
    hnorm = apply(hamiltonian_op(gs, 1.0), packet2).norm()
    assert 0 < out.norm() <= 10 * hnorm * max(spread, 1.0)


def test_translations_commute(gs, packet2):
    assert commutator_residual("P1", "P2", Zero(), packet2, gs) <= 1e-10


def test_rotation_translation_bracket(gs, packet2):
    expected = Scaled(1j, generator("P2", gs, 1.0))
    assert commutator_residual("J12", "P1", expected, packet2, gs) <= 1e-8


def test_boost_boost_bracket(gs, packet2):
    expected = Scaled(-1j, generator("J12", gs, 1.0))
    assert commutator_residual("J01", "J02", expected, packet2, gs) <= 1e-6


def test_printed_boost_fails_closure(gs, packet2):
    # -(x0 H + H x_a)/2 at x0 = 0 leaves -H x_a / 2, which does not close.
    h = hamiltonian_op(gs, 1.0)
    bad = {a: Scaled(-0.5, h @ Coord(a)) for a in (1, 2)}
    expected = Scaled(-1j, generator("J12", gs, 1.0))
    assert commutator_residual(bad[1], bad[2], expected, packet2, gs) > 1e-2


def test_bracket_table_shape():
    assert bracket("P1", "P2") == {}
    assert bracket("J12", "P1") == {GeneratorId.P2: 1j}
    assert bracket("J01", "J02") == {GeneratorId.J12: -1j}
    assert bracket("J12", "J23") == {GeneratorId.J31: 1j}
    assert bracket("J01", "H") == {GeneratorId.P1: -1j}
    assert bracket("J01", "P1") == {GeneratorId.H: -1j}
    for a in GENERATORS:
        for b in GENERATORS:
            ab, ba = bracket(a, b), bracket(b, a)
            assert set(ab) == set(ba)
            assert all(ab[k] == -ba[k] for k in ab)
            assert set(ab) <= set(GENERATORS)


def test_unknown_generator(gs):
    with pytest.raises(ValueError, match="unknown generator"):
        generator("K7", gs, 1.0)


def test_full_closure_one_packet(gs, packet2):
    res = bracket_residuals(packet2, gs)
    assert len(res) == 45
    assert max(res.values()) <= 1e-6


def test_full_closure_in_one_dimension(gs, packet1):
    res = bracket_residuals(packet1, gs)
    assert max(res.values()) <= 1e-6


@settings(max_examples=10, deadline=None)
@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.sampled_from([g.value for g in GENERATORS]))
def test_linearity(alpha, beta, gid):
    from dirac8.clifford import build_gamma_set
    from dirac8.verify import packet_suite

    gs = build_gamma_set()
    grid = Grid(1, 128, 48.0)
    f, g = packet_suite(grid, 2, 9, gs, 1.0)
    op = generator(gid, gs, 1.0)
    lhs = apply(op, alpha * f + beta * g)
    rhs = alpha * apply(op, f) + beta * apply(op, g)
    scale = max(1.0, abs(alpha) + abs(beta)) * max(apply(op, f).norm(), apply(op, g).norm(), 1.0)
    assert (lhs - rhs).norm() <= 1e-13 * scale


def test_localization_precondition(gs, grid2):
    x, y = grid2.coords()
    wide = SpinorField(grid2, np.exp(-(x**2 + y**2) / 200.0)[..., None] * np.ones(8))
    with pytest.raises(ValueError, match="localized"):
        check_localized(wide)


def test_operator_description(gs):
    j = generator("J12", gs, 1.0)
    assert "x1" in j.describe() and "S12" in j.describe()
    assert isinstance(j, Sum)
