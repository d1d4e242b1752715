"""Four-sector decomposition of the plane-wave solution space.

At each momentum the commuting involutions eps = H/E and 2 S_56 split the
eight-dimensional spinor space into four two-dimensional sectors labelled by
(eps, sigma).  Each sector is identified with one of the irreducible
representations D+-(s,0), D+-(0,s); the label map is fixed by requiring the
subsidiary conditions to select the representation pairs listed in
``REDUCTION_CONTENT``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from .clifford import GammaSet, I8, wave_operator
from .poincare import energy, hamiltonian_matrix
from .projectors import ProjectorSpec, epsilon_hat_matrix, projector_matrix

DP_S0, DM_S0, DP_0S, DM_0S = "D+(s,0)", "D-(s,0)", "D+(0,s)", "D-(0,s)"
LABELS = (DP_S0, DM_S0, DP_0S, DM_0S)
LABEL_KEYS = {DP_S0: "Dp_s0", DM_S0: "Dm_s0", DP_0S: "Dp_0s", DM_0S: "Dm_0s"}
SECTORS = ((1, 1), (1, -1), (-1, 1), (-1, -1))

# Representation content of the solution space under each subsidiary
# condition P psi = 0, keyed by the projector that annihilates psi.
REDUCTION_CONTENT = {
    ProjectorSpec(1, -1): {DP_S0, DM_0S},
    ProjectorSpec(1, 1): {DM_S0, DP_0S},
    ProjectorSpec(2, -1): {DP_S0, DM_S0},
    ProjectorSpec(2, 1): {DM_0S, DP_0S},
    ProjectorSpec(3, -1): {DP_S0, DP_0S},
    ProjectorSpec(3, 1): {DM_S0, DM_0S},
}

_LABEL_MAP = {(1, 1): DP_S0, (-1, 1): DM_0S, (1, -1): DP_0S, (-1, -1): DM_S0}


class DegeneracyError(RuntimeError):
    pass


def rep_label(epsilon: int, sigma: int) -> str:
    return _LABEL_MAP[(int(epsilon), int(sigma))]


def sector_of(label: str) -> tuple[int, int]:
    return next(k for k, v in _LABEL_MAP.items() if v == label)


def sector_projector(gs: GammaSet, p, m: float, epsilon: int, sigma: int) -> np.ndarray:
    eps = epsilon_hat_matrix(gs, p, m)
    return 0.25 * (I8 + epsilon * eps) @ (I8 + sigma * gs.grade)


@dataclass
class PlaneWaveMode:
    p: np.ndarray
    m: float
    epsilon: int
    sigma: int
    rep_label: str
    basis: np.ndarray  # (8, 2), orthonormal columns
    gs: GammaSet = field(repr=False, default=None)

    @property
    def energy(self) -> float:
        return self.epsilon * float(energy(self.p, self.m))


def _pivoted_basis(proj: np.ndarray, rank: int, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis from the columns of a projector, largest remaining norm first."""
    cols = proj.copy()
    out = []
    for _ in range(rank):
        norms = np.linalg.norm(cols, axis=0)
        j = int(np.argmax(np.round(norms, 12)))
        if norms[j] < tol:
            raise DegeneracyError("sector projector has lower rank than expected")
        v = cols[:, j] / norms[j]
        out.append(v)
        cols = cols - np.outer(v, v.conj() @ cols)
    return np.array(out).T


def classify_modes(gs: GammaSet, p, m: float, tol: float = 1e-12) -> list[PlaneWaveMode]:
    """Simultaneous eigenspaces of (H(p), 2 S_56), one mode record per sector."""
    if m <= 0:
        raise ValueError("classify_modes requires m > 0")
    p = np.asarray(p, dtype=float)
    h = hamiltonian_matrix(gs, p, m)
    comm = np.max(np.abs(h @ gs.grade - gs.grade @ h))
    if comm > tol * max(1.0, float(energy(p, m))):
        raise DegeneracyError(f"[H, 2 S_56] = {comm:.3e}: gamma set is broken")
    modes = []
    for eps, sig in SECTORS:
        proj = sector_projector(gs, p, m, eps, sig)
        modes.append(PlaneWaveMode(p, m, eps, sig, rep_label(eps, sig), _pivoted_basis(proj, 2), gs))
    return modes


def sector_dimensions(gs: GammaSet, p, m: float) -> dict[str, int]:
    out = {}
    for eps, sig in SECTORS:
        proj = sector_projector(gs, p, m, eps, sig)
        out[rep_label(eps, sig)] = int(np.linalg.matrix_rank(proj, tol=1e-10))
    return out


def mode_residual(mode: PlaneWaveMode) -> float:
    """max over basis vectors of ||H v - eps E v|| and ||2 S_56 v - sigma v||."""
    gs = mode.gs
    h = hamiltonian_matrix(gs, mode.p, mode.m)
    r1 = np.abs(h @ mode.basis - mode.energy * mode.basis).max()
    r2 = np.abs(gs.grade @ mode.basis - mode.sigma * mode.basis).max()
    return float(max(r1, r2))


def klein_gordon_residual(mode: PlaneWaveMode) -> float:
    """|p0^2 - p^2 - m^2| with p0 the energy expectation of each basis vector."""
    h = hamiltonian_matrix(mode.gs, mode.p, mode.m)
    worst = 0.0
    for v in mode.basis.T:
        p0 = float(np.real(v.conj() @ h @ v) / np.real(v.conj() @ v))
        worst = max(worst, abs(p0 * p0 - float(mode.p @ mode.p) - mode.m**2))
    return worst


def admissible_sectors(gs: GammaSet, condition: ProjectorSpec, p, m: float, tol: float = 1e-10) -> set[tuple[int, int]]:
    """(eps, sigma) sectors lying in the kernel of the condition's projector."""
    proj = projector_matrix(condition, gs, p, m)
    out = set()
    for mode in classify_modes(gs, p, m):
        leak = np.linalg.norm(proj @ mode.basis)
        if leak <= tol:
            out.add((mode.epsilon, mode.sigma))
        elif abs(leak - np.sqrt(2)) > 1e-8:
            raise DegeneracyError(f"sector {mode.rep_label} straddles the condition {condition}")
    return out


def consistent_label_maps(gs: GammaSet, p, m: float) -> list[dict[tuple[int, int], str]]:
    """Every bijection sectors -> labels compatible with ``REDUCTION_CONTENT``."""
    content = {c: admissible_sectors(gs, c, p, m) for c in REDUCTION_CONTENT}
    hits = []
    for perm in permutations(LABELS):
        cand = dict(zip(SECTORS, perm))
        if all({cand[s] for s in content[c]} == REDUCTION_CONTENT[c] for c in REDUCTION_CONTENT):
            hits.append(cand)
    return hits


# --------------------------------------------------------------------------
# four-component reductions


def _range_basis(proj: np.ndarray, rank: int = 4) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (proj + proj.conj().T))
    return v[:, np.argsort(w)[::-1][:rank]]


@dataclass
class ReductionRecord:
    p: np.ndarray
    spectrum: np.ndarray
    labels: set[str]


def reduction_report(gs: GammaSet, condition: ProjectorSpec, momenta, m: float) -> list[ReductionRecord]:
    """Induced 4x4 Hamiltonian on the solution space of ``condition`` psi = 0."""
    out = []
    for p in momenta:
        p = np.asarray(p, dtype=float)
        basis = _range_basis(projector_matrix(condition.complement(), gs, p, m))
        h4 = basis.conj().T @ hamiltonian_matrix(gs, p, m) @ basis
        labels = {rep_label(*s) for s in admissible_sectors(gs, condition, p, m)}
        out.append(ReductionRecord(p, np.sort(np.linalg.eigvalsh(h4)), labels))
    return out


@dataclass
class DiracBlockReport:
    sign: int
    indices: list[int]
    gammas: np.ndarray  # (4, 4, 4) induced gamma_0..gamma_3
    mass_matrix: np.ndarray  # induced G_4 block
    clifford_residual: float
    mass_square_residual: float
    spectra: list[np.ndarray]
    spectrum_residual: float


def dirac_reduction_report(gs: GammaSet, sign: int, momenta, m: float) -> DiracBlockReport:
    """Restrict the 8-component equation to the sigma = ``sign`` block of 2 S_56."""
    grade = gs.grade
    if np.abs(grade - np.diag(np.diag(grade))).max() > 1e-14:
        raise DegeneracyError("2 S_56 must be diagonal in the working basis to extract a block")
    idx = [i for i in range(8) if abs(grade[i, i].real - sign) < 1e-12]
    sl = np.ix_(idx, idx)
    gam = np.array([gs.gamma[a][sl] for a in range(4)])
    g4 = gs.gamma[4][sl]
    eta = np.diag([1.0, -1.0, -1.0, -1.0])
    eye4 = np.eye(4)
    res = 0.0
    for a in range(4):
        res = max(res, np.abs(gam[a] @ g4 + g4 @ gam[a]).max())
        for b in range(4):
            res = max(res, np.abs(gam[a] @ gam[b] + gam[b] @ gam[a] - 2 * eta[a, b] * eye4).max())
    mass_res = float(np.abs(g4 @ g4 + eye4).max())
    spectra = []
    worst = 0.0
    for p in momenta:
        p = np.asarray(p, dtype=float)
        h = sum(gam[0] @ gam[a + 1] * p[a] for a in range(3)) + gam[0] @ g4 * m
        ev = np.sort(np.linalg.eigvalsh(h))
        e = float(energy(p, m))
        worst = max(worst, np.abs(ev - np.array([-e, -e, e, e])).max())
        spectra.append(ev)
    return DiracBlockReport(sign, idx, gam, g4, float(res), mass_res, spectra, float(worst))


@dataclass
class NonequivalenceReport:
    spectrum_residual: float
    labels_a: set[str]
    labels_b: set[str]

    @property
    def differing_labels(self) -> int:
        return len(self.labels_a ^ self.labels_b)


def nonequivalence_report(gs: GammaSet, a: ProjectorSpec, b: ProjectorSpec, momenta, m: float) -> NonequivalenceReport:
    ra = reduction_report(gs, a, momenta, m)
    rb = reduction_report(gs, b, momenta, m)
    spec_res = max(float(np.abs(x.spectrum - y.spectrum).max()) for x, y in zip(ra, rb))
    la = set.union(*(r.labels for r in ra)) if ra else set()
    lb = set.union(*(r.labels for r in rb)) if rb else set()
    if any(r.labels != la for r in ra) or any(r.labels != lb for r in rb):
        raise DegeneracyError("sector content varies with momentum")
    return NonequivalenceReport(spec_res, la, lb)


# --------------------------------------------------------------------------
# kappa-modified equation


@dataclass
class KernelReport:
    kappa: float
    kind: int
    dimension: int
    constraint_residual: float
    mass_shell_residual: float
    wave_residual: float = 0.0
    sign: int = 1
    form: str = "hamiltonian"
    null_projector: np.ndarray = field(default=None, repr=False)


def modified_operator(gs: GammaSet, kind: int, kappa: float, p4, m: float, sign: int = 1,
                      form: str = "hamiltonian") -> np.ndarray:
    """Plane-wave symbol of the kappa-modified equation.

    ``form="hamiltonian"`` uses G_0 times the wave operator, i.e.
    p0 - H(p), plus kappa P; ``form="covariant"`` adds kappa P to the wave
    operator itself.
    """
    p4 = np.asarray(p4, dtype=float)
    proj = projector_matrix(ProjectorSpec(kind, sign), gs, p4[1:], m)
    d = wave_operator(gs, p4, m)
    if form == "hamiltonian":
        d = gs.gamma[0] @ d
    elif form != "covariant":
        raise ValueError(f"unknown form {form!r}")
    return d + kappa * proj


def null_space(a: np.ndarray, rtol: float = 1e-10) -> np.ndarray:
    u, s, vh = np.linalg.svd(a)
    cut = rtol * max(1.0, s[0])
    return vh[s <= cut].conj().T


def modified_equation_kernel(gs: GammaSet, kind: int, kappa: float, p4, m: float, sign: int = 1,
                             form: str = "hamiltonian", shell_tol: float = 1e-9) -> KernelReport:
    """Null space of the kappa-modified operator at an on-shell 4-momentum."""
    p4 = np.asarray(p4, dtype=float)
    shell = abs(p4[0] ** 2 - p4[1:] @ p4[1:] - m * m)
    if shell > shell_tol * max(1.0, p4[0] ** 2):
        raise ValueError(f"4-momentum is off the mass shell by {shell:.3e}")
    if kappa == 0:
        warnings.warn("kappa = 0: constraint not enforced", RuntimeWarning, stacklevel=2)
    ns = null_space(modified_operator(gs, kind, kappa, p4, m, sign, form))
    proj = projector_matrix(ProjectorSpec(kind, sign), gs, p4[1:], m)
    wave = wave_operator(gs, p4, m)
    dim = ns.shape[1]
    cres = float(np.linalg.norm(proj @ ns, axis=0).max()) if dim else 0.0
    wres = float(np.linalg.norm(wave @ ns, axis=0).max()) if dim else 0.0
    return KernelReport(float(kappa), kind, dim, cres, float(shell), wres, sign, form, ns @ ns.conj().T)


def on_shell(p, m: float, epsilon: int = 1) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    return np.concatenate([[epsilon * float(energy(p, m))], p])


def rotation_spinor(gs: GammaSet, a: int, b: int, angle: float) -> np.ndarray:
    """exp(-i angle S_ab) for a spatial plane, using (2 S_ab)^2 = 1."""
    from .clifford import spin_generator

    s = spin_generator(gs, a, b)
    return np.cos(angle / 2) * I8 - 2j * np.sin(angle / 2) * s


def rotate_momentum(p, a: int, b: int, angle: float) -> np.ndarray:
    p = np.asarray(p, dtype=float).copy()
    c, s = np.cos(angle), np.sin(angle)
    pa, pb = p[a - 1], p[b - 1]
    p[a - 1], p[b - 1] = c * pa - s * pb, s * pa + c * pb
    return p
