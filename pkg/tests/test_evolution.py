import numpy as np
import pytest

from dirac8.evolution import (
    CSV_COLUMNS,
    Model,
    constraint_drift,
    evolve,
    gaussian_packet,
    observables,
    plane_wave,
    second_moment_energy,
)
from dirac8.fields import Grid
from dirac8.projectors import ProjectorSpec, constrain
from dirac8.spectral import DP_0S, DP_S0, LABELS, classify_modes

GRID = Grid(1, 256, 40.0)


def _packet(gs, **kw):
    kw.setdefault("seed", 1)
    return gaussian_packet(GRID, [0.0], 1.0, [0.5], gs, 1.0, **kw)


def test_packet_normalized(gs):
    assert _packet(gs).norm() == pytest.approx(1.0, abs=1e-14)


def test_resolution_preconditions(gs):
    with pytest.raises(ValueError, match="below 4 dx"):
        gaussian_packet(GRID, [0.0], 0.3, [0.0], gs)
    with pytest.raises(ValueError, match="exceeds L/8"):
        gaussian_packet(GRID, [0.0], 6.0, [0.0], gs)


def test_sector_packet_occupation(gs):
    obs = observables(_packet(gs, sector=DP_S0), gs)
    occ = [obs["occupations"][l] for l in LABELS]
    np.testing.assert_allclose(occ, [1, 0, 0, 0], atol=1e-12)
    assert obs["charge"] == pytest.approx(1, abs=1e-12)


def test_random_packet_occupies_every_sector(gs):
    occ = observables(_packet(gs), gs)["occupations"]
    assert all(0 < v < 1 for v in occ.values())
    assert sum(occ.values()) == pytest.approx(1, abs=1e-12)


def test_charge_neutral_superposition(gs):
    k = [4]
    p = np.array([2 * np.pi * 4 / GRID.length, 0, 0])
    modes = {(md.epsilon, md.sigma): md for md in classify_modes(gs, p, 1.0)}
    v = (modes[(1, 1)].basis[:, 0] + modes[(-1, 1)].basis[:, 0]) / np.sqrt(2)
    assert observables(plane_wave(GRID, k, v), gs)["charge"] == pytest.approx(0, abs=1e-12)


def test_energy_variance_bound(gs):
    for seed in range(5):
        f = gaussian_packet(GRID, [1.0], 1.5, [0.3], gs, seed=seed)
        h = observables(f, gs)["energy"]
        assert h**2 <= second_moment_energy(f) + 1e-12


def test_models_agree_on_positive_energy(gs):
    f = _packet(gs, sector=DP_0S)
    a, _ = evolve(f, Model.DIRAC8, 0.05, 40, gs)
    b, _ = evolve(f, Model.SQRT_E, 0.05, 40, gs)
    assert (a - b).norm() <= 1e-10


def test_models_diverge_on_negative_energy(gs):
    p = np.array([2 * np.pi * 2 / GRID.length, 0, 0])
    e = np.sqrt(p @ p + 1)
    modes = {(md.epsilon, md.sigma): md for md in classify_modes(gs, p, 1.0)}
    f = plane_wave(GRID, [2], modes[(-1, 1)].basis[:, 0]).normalized()
    t = np.pi / (2 * e)
    a, _ = evolve(f, Model.DIRAC8, t, 1, gs)
    b, _ = evolve(f, Model.SQRT_E, t, 1, gs)
    assert (a - b).norm() > 0.1


def test_time_reversal(gs):
    f = _packet(gs)
    for model in Model:
        fwd, _ = evolve(f, model, 0.01, 500, gs, record=False)
        back, _ = evolve(fwd, model, -0.01, 500, gs, record=False)
        assert (back - f).norm() <= 1e-11


def test_step_size_independence(gs):
    f = _packet(gs)
    a, _ = evolve(f, Model.DIRAC8, 0.02, 100, gs, record=False)
    b, _ = evolve(f, Model.DIRAC8, 0.01, 200, gs, record=False)
    assert (a - b).norm() <= 1e-12


def test_rk4_fourth_order(gs):
    f = _packet(gs)
    exact, _ = evolve(f, Model.DIRAC8, 0.5, 1, gs, record=False)
    errs = []
    for steps in (20, 40):
        approx, _ = evolve(f, Model.DIRAC8, 0.5 / steps, steps, gs, method="rk4", record=False)
        errs.append((approx - exact).norm())
    assert 12 < errs[0] / errs[1] < 20


def test_conservation_short(gs):
    f = _packet(gs)
    for model in Model:
        _, series = evolve(f, model, 0.05, 200, gs)
        assert len(series) == 201
        for name in ("norm", "energy", "charge", *LABELS):
            assert series.drift(name) <= 1e-12


def test_csv_layout(gs):
    _, series = evolve(_packet(gs), Model.SQRT_E, 0.1, 3, gs)
    lines = series.to_csv().splitlines()
    assert lines[0].split(",") == CSV_COLUMNS
    assert len(lines) == 5
    t = [float(x.split(",")[0]) for x in lines[1:]]
    np.testing.assert_allclose(t, [0, 0.1, 0.2, 0.30000000000000004], atol=0)


@pytest.mark.parametrize("spec", ["1+", "1-", "2+", "2-", "3+", "3-"])
def test_constraint_preserved(gs, spec):
    s = ProjectorSpec.parse(spec)
    f = constrain(_packet(gs), s, gs).normalized()
    for model in Model:
        assert constraint_drift(f, s, model, 0.05, 100, gs) <= 1e-8


def test_constraint_drift_rejects_violating_data(gs):
    with pytest.raises(ValueError, match="violates"):
        constraint_drift(_packet(gs), ProjectorSpec(1, 1), Model.DIRAC8, 0.1, 1, gs)


def test_precondition_and_argument_errors(gs):
    f = _packet(gs)
    _, series = evolve(f, Model.SQRT_E, 0.1, 10, gs, precondition=ProjectorSpec(3, -1))
    assert min(series.charge) >= 1 - 1e-10
    with pytest.raises(ValueError):
        evolve(f, Model.DIRAC8, 0.0, 1, gs)
    with pytest.raises(ValueError):
        evolve(f, Model.DIRAC8, 0.1, 1, gs, method="euler")
    with pytest.raises(ValueError):
        evolve(f, "KG", 0.1, 1, gs)
