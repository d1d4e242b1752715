"""The invariant suite behind ``dirac8 verify``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import clifford as cl
from .evolution import Model, evolve, gaussian_packet
from .fields import Grid, SpinorField
from .poincare import GENERATORS, bracket_residuals, check_localized, energy, hamiltonian_from_spin, hamiltonian_matrix
from .projectors import ALL_SPECS, generator_commutation_residual, projector_matrix
from .spectral import (
    consistent_label_maps,
    classify_modes,
    mode_residual,
    modified_equation_kernel,
    nonequivalence_report,
    on_shell,
    sector_dimensions,
)
from .projectors import ProjectorSpec

# Null-space dimension of the kappa-modified operator, keyed by
# (kind, sign of the kappa projector, energy sign of the on-shell momentum).
# Pinned from the SVD oracle; see tests/test_spectral.py.
KERNEL_DIMENSIONS = {
    (1, 1, 1): 2, (1, 1, -1): 2, (1, -1, 1): 2, (1, -1, -1): 2,
    (2, 1, 1): 2, (2, 1, -1): 2, (2, -1, 1): 2, (2, -1, -1): 2,
    (3, 1, 1): 0, (3, 1, -1): 4, (3, -1, 1): 4, (3, -1, -1): 0,
}
KAPPAS = (0.1, 1.0, 10.0)


@dataclass
class Check:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def as_dict(self) -> dict:
        return {"name": self.name, "residual": float(self.residual), "tolerance": self.tolerance, "passed": self.passed}


def packet_suite(grid: Grid, count: int, seed: int, gs: cl.GammaSet, m: float) -> list[SpinorField]:
    """Seeded, well-localized Gaussian packets for field-level checks."""
    rng = np.random.default_rng([seed, 7])
    out = []
    for _ in range(count):
        center = np.concatenate([rng.uniform(-2, 2, grid.dims), np.zeros(3 - grid.dims)])
        mom = np.concatenate([rng.uniform(-1, 1, grid.dims), np.zeros(3 - grid.dims)])
        width = rng.uniform(4 * grid.dx, 4 * grid.dx + 0.5)
        spinor = rng.normal(size=8) + 1j * rng.normal(size=8)
        f = gaussian_packet(grid, center, width, mom, gs, m, spinor=spinor)
        check_localized(f)
        out.append(f)
    return out


def _tol(overrides: dict, name: str, default: float) -> float:
    best, best_len = default, -1
    for key, val in overrides.items():
        if (name == key or name.startswith(key + ".")) and len(key) > best_len:
            best, best_len = float(val), len(key)
    return best


def run_suite(cfg) -> list[Check]:
    gs = cl.build_gamma_set()
    m = cfg.mass
    tol = cfg.tolerances
    checks: list[Check] = []

    def add(name, residual, default):
        checks.append(Check(name, float(residual), _tol(tol, name, default)))

    # Clifford structure
    for (a, b), r in cl.anticommutator_residuals(gs).items():
        add(f"clifford.anticommutator.{a}{b}", r, 1e-14)
    for a, r in cl.hermiticity_residuals(gs).items():
        add(f"clifford.hermiticity.{a}", r, 1e-15)
    for a, r in cl.unitarity_residuals(gs).items():
        add(f"clifford.unitarity.{a}", r, 1e-14)
    add("clifford.grade_square", np.abs(gs.grade @ gs.grade - cl.I8).max(), 1e-14)
    add("clifford.s56_trace", abs(np.trace(gs.s56)), 1e-14)

    rng = np.random.default_rng([cfg.seed, 1])
    sq = 0.0
    for p in rng.normal(size=(100, 4)) * 2:
        s = cl.slash(gs, p)
        target = (p[0] ** 2 - p[1:] @ p[1:]) * cl.I8
        sq = max(sq, np.abs(s @ s - target).max() / max(1.0, p @ p))
    add("clifford.squaring_consistency", sq, 1e-12)

    # Hamiltonian
    momenta = rng.normal(size=(100, 3)) * cfg.momentum_scale
    masses = rng.uniform(0.1, 3.0, 100)
    herm = sq_res = spin = 0.0
    for p, mm in zip(momenta, masses):
        h = hamiltonian_matrix(gs, p, mm)
        e2 = p @ p + mm * mm
        herm = max(herm, np.abs(h - h.conj().T).max())
        sq_res = max(sq_res, np.abs(h @ h - e2 * cl.I8).max() / max(1.0, e2))
        spin = max(spin, np.abs(h - hamiltonian_from_spin(gs, p, mm)).max())
    add("poincare.hamiltonian_hermitian", herm, 1e-13)
    add("poincare.hamiltonian_square", sq_res, 1e-12)
    add("poincare.hamiltonian_spin_form", spin, 1e-13)

    # Field-level bracket closure on a reduced 2D grid
    grid2 = Grid(2, cfg.verify_n, cfg.verify_length)
    packets = packet_suite(grid2, cfg.verify_packets, cfg.seed, gs, m)
    closure: dict = {}
    for f in packets:
        for pair, r in bracket_residuals(f, gs).items():
            closure[pair] = max(closure.get(pair, 0.0), r)
    for (a, b), r in closure.items():
        add(f"poincare.bracket.{a.value}.{b.value}", r, 1e-6)

    # Projector algebra per momentum
    for spec in ALL_SPECS:
        worst = 0.0
        comm_h = 0.0
        for p, mm in zip(momenta, masses):
            pp = projector_matrix(spec, gs, p, mm)
            pm = projector_matrix(spec.complement(), gs, p, mm)
            rank = np.linalg.matrix_rank(pp, tol=1e-8)
            worst = max(
                worst,
                np.abs(pp @ pp - pp).max(),
                np.abs(pp - pp.conj().T).max(),
                np.abs(pp + pm - cl.I8).max(),
                np.abs(pp @ pm).max(),
                abs(rank - 4),
                abs(np.trace(pp) - 4),
            )
            h = hamiltonian_matrix(gs, p, mm)
            comm_h = max(comm_h, np.abs(pp @ h - h @ pp).max())
        add(f"projectors.algebra.{spec}", worst, 1e-12)
        add(f"projectors.commutes_with_H.{spec}", comm_h, 1e-12)
    hs = max(np.abs(hamiltonian_matrix(gs, p, mm) @ gs.s56 - gs.s56 @ hamiltonian_matrix(gs, p, mm)).max()
             for p, mm in zip(momenta, masses))
    add("projectors.H_commutes_S56", hs, 1e-13)
    for spec in ALL_SPECS:
        worst = 0.0
        for f in packets:
            for gid in GENERATORS:
                worst = max(worst, generator_commutation_residual(spec, gid, f, gs))
        add(f"projectors.field_commutation.{spec}", worst, 1e-6)

    # Sector decomposition
    dims_bad = 0
    mode_res = 0.0
    for p in momenta:
        dims = sector_dimensions(gs, p, m)
        dims_bad += sum(d != 2 for d in dims.values())
        for mode in classify_modes(gs, p, m):
            mode_res = max(mode_res, mode_residual(mode))
    add("spectral.sector_dimensions", dims_bad, 0)
    add("spectral.mode_eigen_residual", mode_res, 1e-12)
    n_maps = len(consistent_label_maps(gs, momenta[0], m))
    add("spectral.label_map_unique", abs(n_maps - 1), 0)
    neq = nonequivalence_report(gs, ProjectorSpec(1, -1), ProjectorSpec(2, -1), momenta[:20], m)
    add("spectral.nonequivalence_spectra", neq.spectrum_residual, 1e-12)
    add("spectral.nonequivalence_labels", abs(neq.differing_labels - 2), 0)

    # kappa-modified equation
    kmom = momenta[:10]
    for (kind, sign, eps), dim in KERNEL_DIMENSIONS.items():
        stab = cres = ddim = 0.0
        for p in kmom:
            reps = [modified_equation_kernel(gs, kind, k, on_shell(p, m, eps), m, sign=sign) for k in KAPPAS]
            base = reps[0].null_projector
            stab = max(stab, *(np.abs(r.null_projector - base).max() for r in reps))
            cres = max(cres, *(r.constraint_residual for r in reps))
            ddim = max(ddim, *(abs(r.dimension - dim) for r in reps))
        tag = f"{kind}{'+' if sign > 0 else '-'}.e{'+' if eps > 0 else '-'}"
        add(f"kernel.kappa_stability.{tag}", stab, 1e-10)
        add(f"kernel.constraint.{tag}", cres, 1e-12)
        add(f"kernel.dimension.{tag}", ddim, 0)

    # Conservation under exact evolution
    grid1 = Grid(1, 256, 40.0)
    f0 = gaussian_packet(grid1, [0, 0, 0], 1.0, [0.5, 0, 0], gs, m, seed=cfg.seed)
    for model in Model:
        _, series = evolve(f0, model, 0.01, 1000, gs)
        drift = max(series.drift(k) for k in ["norm", "energy", "charge", *series.sector_occupations])
        add(f"evolution.conservation.{model.value}", drift, 1e-10)
    return checks
