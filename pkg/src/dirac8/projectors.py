"""The three families of subsidiary-condition projectors.

    kind 1:  P = (1 +/- 2 S_56) / 2          local
    kind 2:  P = (1 +/- 2 eps S_56) / 2      nonlocal, eps = H / E
    kind 3:  P = (1 +/- eps) / 2             nonlocal

A ``ProjectorSpec`` names one projector.  Read as a subsidiary condition it
means ``P psi = 0``, so the admissible fields are the range of the
complementary projector (``spec.complement()``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .clifford import GammaSet, I8
from .fields import SpinorField
from .poincare import (
    FieldOperator,
    Matrix,
    Multiplier,
    apply,
    energy,
    generator,
    hamiltonian_matrix,
)


class LightlikeError(ValueError):
    """Sign-of-energy operator requested where E = 0."""


@dataclass(frozen=True)
class ProjectorSpec:
    kind: int
    sign: int

    def __post_init__(self):
        if self.kind not in (1, 2, 3):
            raise ValueError(f"projector kind must be 1, 2 or 3, got {self.kind}")
        if self.sign not in (1, -1):
            raise ValueError(f"projector sign must be +1 or -1, got {self.sign}")

    def complement(self) -> "ProjectorSpec":
        return ProjectorSpec(self.kind, -self.sign)

    @property
    def local(self) -> bool:
        return self.kind == 1

    def __str__(self) -> str:
        return f"{self.kind}{'+' if self.sign > 0 else '-'}"

    @classmethod
    def parse(cls, text: str) -> "ProjectorSpec":
        """Parse '3-', '1+', '2+1' style labels."""
        text = str(text).strip()
        if len(text) < 2 or text[1] not in "+-":
            raise ValueError(f"bad projector label {text!r}")
        return cls(int(text[0]), 1 if text[1] == "+" else -1)


ALL_SPECS = tuple(ProjectorSpec(k, s) for k in (1, 2, 3) for s in (1, -1))


def epsilon_hat_matrix(gs: GammaSet, p, m: float) -> np.ndarray:
    """H(p) / E(p), broadcast over leading axes of ``p``."""
    p = np.asarray(p)
    e = energy(p, m)
    if np.any(e == 0):
        raise LightlikeError("lightlike degenerate point: E = 0 at p = 0, m = 0")
    return hamiltonian_matrix(gs, p, m) / e[..., None, None]


def projector_matrix(spec: ProjectorSpec, gs: GammaSet, p=None, m: float = 1.0) -> np.ndarray:
    if spec.kind == 1:
        return 0.5 * (I8 + spec.sign * gs.grade)
    eps = epsilon_hat_matrix(gs, p, m)
    if spec.kind == 2:
        return 0.5 * (I8 + spec.sign * eps @ gs.grade)
    return 0.5 * (I8 + spec.sign * eps)


def projector_op(spec: ProjectorSpec, gs: GammaSet, m: float) -> FieldOperator:
    """Field-level operator; kinds 2 and 3 are momentum-space multipliers."""
    return _projector_op(spec, gs, float(m))


@lru_cache(maxsize=64)
def _projector_op(spec: ProjectorSpec, gs: GammaSet, m: float) -> FieldOperator:
    if spec.kind == 1:
        return Matrix(projector_matrix(spec, gs), f"P{spec}")
    return Multiplier(lambda p: projector_matrix(spec, gs, p, m), f"P{spec}", degree=None, mass=m)


def apply_projector(spec: ProjectorSpec, f: SpinorField, gs: GammaSet, m: float | None = None,
                    zero_mode_tol: float = 1e-12) -> SpinorField:
    m = f.m if m is None else m
    if spec.kind == 1:
        return apply(projector_op(spec, gs, m), f)
    if m == 0.0:
        _check_zero_mode(f, zero_mode_tol)
        return _apply_massless(spec, f, gs)
    return apply(projector_op(spec, gs, m), f)


def _check_zero_mode(f: SpinorField, tol: float) -> None:
    if f.moments:
        raise LightlikeError("massless nonlocal projectors are not defined on polynomial fields")
    fhat = f.grid.fft(f.values)
    zero = fhat[(0,) * f.grid.dims]
    total = np.sqrt(np.sum(np.abs(fhat) ** 2))
    if total > 0 and np.linalg.norm(zero) > tol * total:
        raise LightlikeError("zero-momentum mode is occupied while m = 0")


def _apply_massless(spec: ProjectorSpec, f: SpinorField, gs: GammaSet) -> SpinorField:
    grid = f.grid
    p = grid.momenta()
    e = energy(p, 0.0)
    safe = np.where(e == 0, 1.0, e)
    eps = hamiltonian_matrix(gs, p, 0.0) / safe[..., None, None]
    mat = 0.5 * (I8 + spec.sign * (eps @ gs.grade if spec.kind == 2 else eps))
    fhat = grid.fft(f.values)
    out = np.einsum("...ij,...j->...i", mat, fhat)
    out[(0,) * grid.dims] = 0.0
    return f.with_values(grid.ifft(out))


def constrain(f: SpinorField, spec: ProjectorSpec, gs: GammaSet) -> SpinorField:
    """Impose ``P_spec psi = 0`` by projecting onto the complementary range."""
    return apply_projector(spec.complement(), f, gs)


def generator_commutation_residual(spec: ProjectorSpec, gid, f: SpinorField, gs: GammaSet) -> float:
    """||[P_spec, G] f|| / ||f||."""
    P = projector_op(spec, gs, f.m)
    G = generator(gid, gs, f.m)
    pg = apply(P, apply(G, f))
    gp = apply(G, apply(P, f))
    return (pg - gp).norm() / f.norm()
