"""Poincare generators as operators on sampled spinor fields.

Operators are small expression trees (sums, products, scalings of primitive
factors) so that every composite records how it was built.  Primitive
factors are constant 8x8 matrices, coordinate multiplications x_a, and
momentum-space multipliers f(p) (which include the spectral derivative
p_a = -i d/dx_a and the Hamiltonian).

Coordinate multiplications along axes the grid does not resolve raise the
polynomial degree of a field in that coordinate (see ``SpinorField``); a
momentum multiplier acts on such a term through the exact Taylor rule

    f(p) x^a g = sum_b C(a, b) x^(a-b) (-i)^|b| (d^b f)(p_res, 0) g,

with the derivatives of f taken by a Cauchy integral on a small circle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from math import factorial
from typing import Callable

import numpy as np

from .clifford import GammaSet, I8, spin_generator
from .fields import Grid, Moments, SpinorField

METRIC4 = np.diag([1.0, -1.0, -1.0, -1.0])
CAUCHY_POINTS = 24
CAUCHY_FRACTION = 0.25


def alpha_matrices(gs: GammaSet) -> tuple[np.ndarray, np.ndarray]:
    """(G_0 G_a for a = 1..3, G_0 G_4)."""
    g0 = gs.gamma[0]
    return np.array([g0 @ gs.gamma[a] for a in (1, 2, 3)]), g0 @ gs.gamma[4]


def hamiltonian_matrix(gs: GammaSet, p, m: float) -> np.ndarray:
    """H(p) = G_0 G_a p_a + G_0 G_4 m, broadcast over leading axes of ``p``."""
    p = np.asarray(p)
    alpha, beta = alpha_matrices(gs)
    return np.einsum("...a,aij->...ij", p, alpha) + m * beta


def energy(p, m: float) -> np.ndarray:
    """E = sqrt(p.p + m^2); uses p.p (not |p|^2) so complex momenta stay analytic."""
    p = np.asarray(p)
    return np.sqrt(np.einsum("...a,...a->...", p, p) + m * m)


def hamiltonian_from_spin(gs: GammaSet, p, m: float) -> np.ndarray:
    """-2i S_0k p_k with k = 1..4 and p_4 = m; must agree with ``hamiltonian_matrix``."""
    p4 = [*np.asarray(p, dtype=float), m]
    return sum(-2j * spin_generator(gs, 0, k) * p4[k - 1] for k in (1, 2, 3, 4))


# --------------------------------------------------------------------------
# operator expression trees


class FieldOperator:
    """Linear operator on spinor fields."""

    def act(self, terms: Moments, f: SpinorField) -> Moments:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def __matmul__(self, other: "FieldOperator") -> "FieldOperator":
        return Product((self, other))

    def __add__(self, other: "FieldOperator") -> "FieldOperator":
        return Sum((self, other))

    def __sub__(self, other: "FieldOperator") -> "FieldOperator":
        return Sum((self, Scaled(-1.0, other)))

    def __neg__(self) -> "FieldOperator":
        return Scaled(-1.0, self)

    def __rmul__(self, c: complex) -> "FieldOperator":
        return Scaled(complex(c), self)

    def __repr__(self) -> str:
        return f"<FieldOperator {self.describe()}>"


@dataclass(frozen=True, repr=False)
class Identity(FieldOperator):
    def act(self, terms, f):
        return dict(terms)

    def describe(self):
        return "1"


@dataclass(frozen=True, repr=False)
class Zero(FieldOperator):
    def act(self, terms, f):
        return {k: np.zeros_like(v) for k, v in terms.items()}

    def describe(self):
        return "0"


@dataclass(frozen=True, repr=False, eq=False)
class Matrix(FieldOperator):
    matrix: np.ndarray
    label: str = "M"

    def __post_init__(self):
        if self.matrix.shape != (8, 8):
            raise ValueError("matrix factor must be 8x8")

    def act(self, terms, f):
        return {k: v @ self.matrix.T for k, v in terms.items()}

    def describe(self):
        return self.label


@dataclass(frozen=True, repr=False)
class Coord(FieldOperator):
    """Multiplication by the centered coordinate x_a (a = 1, 2, 3)."""

    a: int

    def act(self, terms, f):
        grid = f.grid
        if self.a <= grid.dims:
            x = grid.coords()[self.a - 1][..., None]
            return {k: x * v for k, v in terms.items()}
        slot = self.a - grid.dims - 1
        out = {}
        for k, v in terms.items():
            kk = list(k)
            kk[slot] += 1
            out[tuple(kk)] = v
        return out

    def describe(self):
        return f"x{self.a}"


@dataclass(frozen=True, repr=False, eq=False)
class Multiplier(FieldOperator):
    """Momentum-space multiplier p -> f(p), scalar or 8x8 valued.

    ``degree`` is the polynomial degree in p when f is a polynomial, and
    None for nonlocal multipliers; the latter need ``mass`` > 0 or nonzero
    resolved momentum so that f is analytic near the real axis.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    label: str
    degree: int | None = None
    mass: float = 0.0
    _cache: dict = field(default_factory=dict, compare=False)

    def taylor(self, grid: Grid, order: int) -> dict[tuple[int, ...], np.ndarray]:
        """Taylor coefficients (d^b f / b!) at zero unresolved momentum, |b| <= order."""
        have = self._cache.get(grid)
        if have is None or have[0] < order:
            if len(self._cache) > 4:
                self._cache.clear()
            # orders 0..2 cover every double application from a degree-0 field
            top = max(order, 2) if grid.dims < 3 else 0
            have = (top, _taylor_coefficients(self, grid, top))
            self._cache[grid] = have
        return have[1]

    def act(self, terms, f):
        grid = f.grid
        nu = 3 - grid.dims
        order = max((sum(k) for k in terms), default=0)
        coeffs = self.taylor(grid, order)
        out: Moments = {}
        for alpha, c in terms.items():
            chat = grid.fft(c)
            for beta in iproduct(*(range(a + 1) for a in alpha)):
                t = coeffs[beta]
                weight = (-1j) ** sum(beta)
                for a, b in zip(alpha, beta):
                    weight *= factorial(a) // factorial(a - b)
                res = _mult(t, chat)
                if not np.any(res):
                    continue
                tgt = tuple(a - b for a, b in zip(alpha, beta))
                val = weight * grid.ifft(res)
                out[tgt] = out[tgt] + val if tgt in out else val
        if not out:
            zero = (0,) * nu
            out[zero] = np.zeros((*grid.shape, 8), dtype=complex)
        return out

    def describe(self):
        return self.label


def _mult(t: np.ndarray, chat: np.ndarray) -> np.ndarray:
    if t.ndim == chat.ndim + 1:
        return (t @ chat[..., None])[..., 0]
    return t[..., None] * chat


def _taylor_coefficients(mult: Multiplier, grid: Grid, order: int):
    p = grid.momenta()
    nu = 3 - grid.dims
    betas = [b for b in iproduct(range(order + 1), repeat=nu) if sum(b) <= order]
    if nu == 0 or order == 0:
        val = np.asarray(mult.fn(p))
        return {b: val for b in betas}

    if mult.degree is not None:
        npts = mult.degree + 2
        radius = np.ones(grid.shape)
    else:
        npts = CAUCHY_POINTS
        rres = np.sqrt(np.sum(p[..., : grid.dims] ** 2, axis=-1) + mult.mass**2)
        if np.any(rres == 0.0):
            raise ValueError(f"multiplier {mult.label} is singular at a grid momentum")
        radius = CAUCHY_FRACTION * rres

    theta = 2.0 * np.pi * np.arange(npts) / npts
    acc = {b: 0.0 for b in betas}
    for idx in iproduct(range(npts), repeat=nu):
        phase = np.exp(1j * theta[list(idx)])
        pc = p.astype(complex)
        for s in range(nu):
            pc[..., grid.dims + s] = radius * phase[s]
        val = np.asarray(mult.fn(pc))
        for b in betas:
            w = np.prod(phase ** (-np.array(b)))
            acc[b] = acc[b] + w * val
    out = {}
    for b in betas:
        scale = radius ** (-sum(b)) / npts**nu
        arr = acc[b] * (scale[..., None, None] if np.ndim(acc[b]) == len(grid.shape) + 2 else scale)
        if mult.degree is not None and sum(b) > mult.degree:
            arr = np.zeros_like(arr)
        out[b] = arr
    return out


@dataclass(frozen=True, repr=False)
class Scaled(FieldOperator):
    c: complex
    op: FieldOperator

    def act(self, terms, f):
        return {k: self.c * v for k, v in self.op.act(terms, f).items()}

    def describe(self):
        return f"({self.c:g})*{self.op.describe()}"


@dataclass(frozen=True, repr=False)
class Sum(FieldOperator):
    ops: tuple[FieldOperator, ...]

    def act(self, terms, f):
        out: Moments = {}
        for op in self.ops:
            for k, v in op.act(terms, f).items():
                out[k] = out[k] + v if k in out else v
        return out

    def describe(self):
        return "(" + " + ".join(op.describe() for op in self.ops) + ")"


@dataclass(frozen=True, repr=False)
class Product(FieldOperator):
    """Composition; the rightmost factor acts first."""

    ops: tuple[FieldOperator, ...]

    def act(self, terms, f):
        for op in reversed(self.ops):
            terms = op.act(terms, f)
        return terms

    def describe(self):
        return " ".join(op.describe() for op in self.ops)


def commutator(a: FieldOperator, b: FieldOperator) -> FieldOperator:
    return a @ b - b @ a


def apply(op: FieldOperator, f: SpinorField) -> SpinorField:
    if not isinstance(f, SpinorField):
        raise TypeError("operators act on SpinorField instances")
    terms = op.act(f.terms(), f)
    return SpinorField.from_terms(f.grid, terms, f.m, f.t)


# --------------------------------------------------------------------------
# generators


class GeneratorId(str, enum.Enum):
    H = "H"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    J12 = "J12"
    J23 = "J23"
    J31 = "J31"
    J01 = "J01"
    J02 = "J02"
    J03 = "J03"


GENERATORS = tuple(GeneratorId)

# tag -> ("P", mu) or ("J", mu, nu) with four-vector indices
_INDEX = {
    GeneratorId.H: ("P", 0),
    GeneratorId.P1: ("P", 1),
    GeneratorId.P2: ("P", 2),
    GeneratorId.P3: ("P", 3),
    GeneratorId.J12: ("J", 1, 2),
    GeneratorId.J23: ("J", 2, 3),
    GeneratorId.J31: ("J", 3, 1),
    GeneratorId.J01: ("J", 0, 1),
    GeneratorId.J02: ("J", 0, 2),
    GeneratorId.J03: ("J", 0, 3),
}


def momentum_op(a: int) -> Multiplier:
    return Multiplier(lambda p, a=a: p[..., a - 1], f"p{a}", degree=1)


def hamiltonian_op(gs: GammaSet, m: float) -> Multiplier:
    return Multiplier(lambda p: hamiltonian_matrix(gs, p, m), "H", degree=1)


@lru_cache(maxsize=32)
def _generator_cached(gid: GeneratorId, m: float, gs: GammaSet) -> FieldOperator:
    kind, *idx = _INDEX[gid]
    if kind == "P":
        return hamiltonian_op(gs, m) if idx[0] == 0 else momentum_op(idx[0])
    mu, nu = idx
    if mu == 0:
        h = hamiltonian_op(gs, m)
        x = Coord(nu)
        return Scaled(-0.5, Sum((x @ h, h @ x)))
    orbital = Coord(mu) @ momentum_op(nu) - Coord(nu) @ momentum_op(mu)
    return orbital + Matrix(spin_generator(gs, mu, nu), f"S{mu}{nu}")


def generator(gid, gs: GammaSet, m: float) -> FieldOperator:
    """Realization of a Poincare generator on t = 0 data.

    The boost is the symmetrized -(x_a H + H x_a)/2.
    """
    try:
        gid = GeneratorId(gid)
    except ValueError:
        raise ValueError(f"unknown generator id {gid!r}") from None
    return _generator_cached(gid, float(m), gs)


def _j_index(mu: int, nu: int) -> tuple[GeneratorId, float] | None:
    if mu == nu:
        return None
    for gid, spec in _INDEX.items():
        if spec[0] != "J":
            continue
        if spec[1:] == (mu, nu):
            return gid, 1.0
        if spec[1:] == (nu, mu):
            return gid, -1.0
    raise KeyError((mu, nu))


def bracket(a, b) -> dict[GeneratorId, complex]:
    """Expected [A, B] as a combination of generators.

    [J_mn, J_rs] = i(g_ms J_nr + g_nr J_ms - g_mr J_ns - g_ns J_mr)
    [J_mn, P_r]  = i(g_nr P_m - g_mr P_n)
    [P_m, P_n]   = 0
    """
    a, b = GeneratorId(a), GeneratorId(b)
    g = METRIC4
    out: dict[GeneratorId, complex] = {}

    def add(item, coef):
        if item is None or coef == 0:
            return
        gid, s = item
        out[gid] = out.get(gid, 0) + s * coef

    ka, kb = _INDEX[a], _INDEX[b]
    if ka[0] == "P" and kb[0] == "P":
        return {}
    if ka[0] == "P":
        return {k: -v for k, v in bracket(b, a).items()}
    if kb[0] == "J":
        mu, nu = ka[1:]
        rho, sig = kb[1:]
        add(_j_index(nu, rho), 1j * g[mu, sig])
        add(_j_index(mu, sig), 1j * g[nu, rho])
        add(_j_index(nu, sig), -1j * g[mu, rho])
        add(_j_index(mu, rho), -1j * g[nu, sig])
    else:
        mu, nu = ka[1:]
        rho = kb[1]
        p_of = {s[1]: gid for gid, s in _INDEX.items() if s[0] == "P"}
        add((p_of[mu], 1.0), 1j * g[nu, rho])
        add((p_of[nu], 1.0), -1j * g[mu, rho])
    return {k: v for k, v in out.items() if v != 0}


def expected_bracket(a, b, gs: GammaSet, m: float) -> FieldOperator:
    combo = bracket(a, b)
    if not combo:
        return Zero()
    return Sum(tuple(Scaled(c, generator(gid, gs, m)) for gid, c in combo.items()))


def _as_op(x, gs, m) -> FieldOperator:
    return x if isinstance(x, FieldOperator) else generator(x, gs, m)


def commutator_residual(a, b, expected: FieldOperator | None, f: SpinorField, gs: GammaSet) -> float:
    """||([A, B] - expected) f|| / ||f||; ``expected=None`` uses the bracket table."""
    A, B = _as_op(a, gs, f.m), _as_op(b, gs, f.m)
    if expected is None:
        expected = expected_bracket(a, b, gs, f.m)
    ab = apply(A, apply(B, f))
    ba = apply(B, apply(A, f))
    ex = apply(expected, f)
    return (ab - ba - ex).norm() / f.norm()


def bracket_residuals(f: SpinorField, gs: GammaSet, ids=GENERATORS) -> dict[tuple[GeneratorId, GeneratorId], float]:
    """Residual of every bracket-table relation among ``ids`` on one field.

    Single applications G f are shared between pairs.
    """
    ids = [GeneratorId(i) for i in ids]
    ops = {gid: generator(gid, gs, f.m) for gid in ids}
    once = {gid: apply(op, f) for gid, op in ops.items()}
    norm = f.norm()
    out = {}
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            lhs = apply(ops[a], once[b]) - apply(ops[b], once[a])
            combo = bracket(a, b)
            for gid, c in combo.items():
                g_f = once[gid] if gid in once else apply(generator(gid, gs, f.m), f)
                lhs = lhs - c * g_f
            out[(a, b)] = lhs.norm() / norm
    return out


def check_localized(f: SpinorField, fraction: float = 0.1, tol: float = 1e-12) -> None:
    """Precondition for coordinate multiplications: negligible amplitude near the box edge."""
    grid = f.grid
    half = grid.length / 2
    near = np.zeros(grid.shape, dtype=bool)
    for x in grid.coords():
        near |= np.abs(x) >= half * (1 - 2 * fraction)
    amp = np.max(np.abs(f.values), axis=-1)
    peak = amp.max()
    if peak == 0 or amp[near].max(initial=0.0) > tol * peak:
        raise ValueError("field is not localized away from the box edge")


def identity_op() -> FieldOperator:
    return Identity()


def matrix_op(matrix: np.ndarray, label: str = "M") -> FieldOperator:
    return Matrix(np.asarray(matrix, dtype=complex), label)
