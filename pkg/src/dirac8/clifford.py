"""Seven-generator Clifford system on 8-component spinors.

The set is built from a 4x4 Dirac-basis gamma set and 2x2 spin blocks::

    G_mu = s3 (x) g_mu        (mu = 0..3)
    G_4  = i s3 (x) g5
    G_5  = i s1 (x) I4
    G_6  = i s2 (x) I4

with signature (+, -, -, -, -, -, -).  With this choice 2 S_56 = s3 (x) I4,
so the sigma = +1 grade is simply the upper four components.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

N_GAMMA = 7
DIM = 8
METRIC = np.array([1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0])

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
I8 = np.eye(DIM, dtype=complex)


class CliffordError(RuntimeError):
    """Raised when a gamma set violates its defining relations."""


def dirac_gammas() -> tuple[np.ndarray, ...]:
    """Return (g0, g1, g2, g3, g5) in the Dirac basis, g0 = diag(1, 1, -1, -1)."""
    zero = np.zeros((2, 2), dtype=complex)
    g0 = np.block([[I2, zero], [zero, -I2]])
    gk = [np.block([[zero, s], [-s, zero]]) for s in (SIGMA1, SIGMA2, SIGMA3)]
    g5 = 1j * g0 @ gk[0] @ gk[1] @ gk[2]
    return (g0, *gk, g5)


@dataclass(frozen=True, eq=False)
class GammaSet:
    """Seven 8x8 matrices plus the diagonal metric they realize."""

    gamma: np.ndarray  # shape (7, 8, 8)
    metric: np.ndarray = METRIC

    def __post_init__(self):
        if self.gamma.shape != (N_GAMMA, DIM, DIM):
            raise ValueError(f"expected gamma of shape (7, 8, 8), got {self.gamma.shape}")
        self.gamma.setflags(write=False)

    def __getitem__(self, a: int) -> np.ndarray:
        return self.gamma[a]

    def replace(self, a: int, matrix: np.ndarray) -> "GammaSet":
        """Copy of the set with generator ``a`` swapped out (for negative tests)."""
        g = self.gamma.copy()
        g[a] = matrix
        return GammaSet(g, self.metric)

    @property
    def s56(self) -> np.ndarray:
        """S_56 = (i/2) G_5 G_6."""
        return 0.5j * self.gamma[5] @ self.gamma[6]

    @property
    def grade(self) -> np.ndarray:
        """2 S_56, the involution whose eigenvalue is sigma."""
        return 2.0 * self.s56


def anticommutator_residuals(gs: GammaSet) -> dict[tuple[int, int], float]:
    """Max-norm residual of {G_A, G_B} - 2 g_AB I for every pair A <= B."""
    out = {}
    for a in range(N_GAMMA):
        for b in range(a, N_GAMMA):
            ga, gb = gs.gamma[a], gs.gamma[b]
            target = 2.0 * gs.metric[a] * I8 if a == b else 0.0
            out[(a, b)] = float(np.max(np.abs(ga @ gb + gb @ ga - target)))
    return out


def clifford_residual(gs: GammaSet) -> float:
    """Largest violation of the Clifford relations over all index pairs."""
    return max(anticommutator_residuals(gs).values())


def hermiticity_residuals(gs: GammaSet) -> dict[int, float]:
    """G_0 should be Hermitian, G_1..G_6 anti-Hermitian."""
    out = {}
    for a in range(N_GAMMA):
        g = gs.gamma[a]
        sign = 1.0 if gs.metric[a] > 0 else -1.0
        out[a] = float(np.max(np.abs(g.conj().T - sign * g)))
    return out


def unitarity_residuals(gs: GammaSet) -> dict[int, float]:
    return {a: float(np.max(np.abs(g.conj().T @ g - I8))) for a, g in enumerate(gs.gamma)}


def build_gamma_set(tol: float = 1e-14) -> GammaSet:
    g0, g1, g2, g3, g5 = dirac_gammas()
    mats = [np.kron(SIGMA3, g) for g in (g0, g1, g2, g3)]
    mats.append(1j * np.kron(SIGMA3, g5))
    mats.append(1j * np.kron(SIGMA1, I4))
    mats.append(1j * np.kron(SIGMA2, I4))
    gs = GammaSet(np.array(mats))

    bad = {k: r for k, r in anticommutator_residuals(gs).items() if r > tol}
    bad.update({(a, "herm"): r for a, r in hermiticity_residuals(gs).items() if r > tol})
    if bad:
        listing = ", ".join(f"{k}: {v:.3e}" for k, v in sorted(bad.items(), key=str))
        raise CliffordError(f"gamma construction violates relations: {listing}")
    return gs


def spin_generator(gs: GammaSet, a: int, b: int) -> np.ndarray:
    """S_AB = (i/4) [G_A, G_B]."""
    if a == b:
        raise ValueError("degenerate index pair")
    for idx in (a, b):
        if not 0 <= idx < N_GAMMA:
            raise ValueError(f"gamma index {idx} out of range 0..6")
    ga, gb = gs.gamma[a], gs.gamma[b]
    return 0.25j * (ga @ gb - gb @ ga)


def monomial_subsets() -> list[tuple[int, ...]]:
    """All subsets of {0..6}, ordered by length then lexicographically."""
    return [c for k in range(N_GAMMA + 1) for c in combinations(range(N_GAMMA), k)]


def monomial(gs: GammaSet, subset: tuple[int, ...]) -> np.ndarray:
    out = I8.copy()
    for a in subset:
        out = out @ gs.gamma[a]
    return out


def monomial_basis(gs: GammaSet) -> list[np.ndarray]:
    """The 128 ordered products G_A1 ... G_Ak; index 0 is the identity."""
    return [monomial(gs, s) for s in monomial_subsets()]


def slash(gs: GammaSet, p4) -> np.ndarray:
    """G_0 p0 - G_a p_a for a 4-momentum (p0, p1, p2, p3).

    The spatial sign makes G_0 (p0 - H(p)) equal to this minus G_4 m, i.e.
    the wave operator and the Hamiltonian share the same spatial momentum.
    """
    p4 = np.asarray(p4, dtype=float)
    return gs.gamma[0] * p4[0] - np.einsum("a,aij->ij", p4[1:], gs.gamma[1:4])


def wave_operator(gs: GammaSet, p4, m: float) -> np.ndarray:
    """Plane-wave symbol of the 8-component equation: slash(p) - G_4 m."""
    return slash(gs, p4) - gs.gamma[4] * m
