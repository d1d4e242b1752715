"""Periodic grids and 8-component spinor fields sampled on them."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .clifford import DIM


@dataclass(frozen=True)
class Grid:
    """Uniform periodic box with ``dims`` resolved axes out of three.

    Axes beyond ``dims`` are unresolved: fields carry no sampled dependence
    on them and their momentum components are zero.
    """

    dims: int
    n: int
    length: float

    def __post_init__(self):
        if self.dims not in (1, 2, 3):
            raise ValueError("dims must be 1, 2 or 3")
        if self.n < 2 or self.n & (self.n - 1):
            raise ValueError(f"points per axis must be a power of two, got {self.n}")
        if self.length <= 0:
            raise ValueError("box length must be positive")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dims

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def cell(self) -> float:
        return self.dx**self.dims

    def axis(self) -> np.ndarray:
        """Centered coordinates, -L/2 .. L/2 - dx."""
        return (np.arange(self.n) - self.n // 2) * self.dx

    def coords(self) -> list[np.ndarray]:
        """Per-axis coordinate arrays broadcastable against ``shape``."""
        x = self.axis()
        return [x.reshape([-1 if i == a else 1 for i in range(self.dims)]) for a in range(self.dims)]

    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)

    def momenta(self) -> np.ndarray:
        """Momentum 3-vectors of every transform-space mode, shape (*shape, 3)."""
        k = self.wavenumbers()
        axes = np.meshgrid(*([k] * self.dims), indexing="ij")
        zero = np.zeros(self.shape)
        return np.stack(list(axes) + [zero] * (3 - self.dims), axis=-1)

    def fft(self, values: np.ndarray) -> np.ndarray:
        return np.fft.fftn(values, axes=tuple(range(self.dims)))

    def ifft(self, values: np.ndarray) -> np.ndarray:
        return np.fft.ifftn(values, axes=tuple(range(self.dims)))


Moments = dict[tuple[int, ...], np.ndarray]


@dataclass(frozen=True)
class SpinorField:
    """Sampled 8-component field Psi(t, x).

    ``values`` has shape (*grid.shape, 8).  On reduced grids (dims < 3) a
    field may also depend polynomially on the unresolved coordinates, which
    happens as soon as a coordinate multiplication x_a acts along such an
    axis.  ``moments`` maps an exponent tuple over the unresolved axes to the
    coefficient array of that monomial; ``values`` is the all-zero term.
    """

    grid: Grid
    values: np.ndarray
    m: float = 1.0
    t: float = 0.0
    moments: Moments = field(default_factory=dict)

    def __post_init__(self):
        expected = (*self.grid.shape, DIM)
        if self.values.shape != expected:
            raise ValueError(f"field values have shape {self.values.shape}, expected {expected}")

    @property
    def n_unresolved(self) -> int:
        return 3 - self.grid.dims

    def terms(self) -> Moments:
        out = {(0,) * self.n_unresolved: self.values}
        out.update(self.moments)
        return out

    @classmethod
    def from_terms(cls, grid: Grid, terms: Moments, m: float = 1.0, t: float = 0.0) -> "SpinorField":
        zero = (0,) * (3 - grid.dims)
        base = terms.get(zero)
        if base is None:
            base = np.zeros((*grid.shape, DIM), dtype=complex)
        rest = {k: v for k, v in terms.items() if k != zero}
        return cls(grid, base, m=m, t=t, moments=rest)

    def with_values(self, values: np.ndarray, **kw) -> "SpinorField":
        return replace(self, values=values, moments={}, **kw)

    def norm(self) -> float:
        """L2 norm; for polynomial fields the root-sum over coefficient norms."""
        total = sum(float(np.vdot(v, v).real) for v in self.terms().values())
        return float(np.sqrt(total * self.grid.cell))

    def normalized(self) -> "SpinorField":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize a zero field")
        return replace(self, values=self.values / n, moments={k: v / n for k, v in self.moments.items()})

    def __add__(self, other: "SpinorField") -> "SpinorField":
        return _combine(self, other, 1.0, 1.0)

    def __sub__(self, other: "SpinorField") -> "SpinorField":
        return _combine(self, other, 1.0, -1.0)

    def __rmul__(self, c: complex) -> "SpinorField":
        return SpinorField.from_terms(self.grid, {k: c * v for k, v in self.terms().items()}, self.m, self.t)

    __mul__ = __rmul__


def _combine(f: SpinorField, g: SpinorField, a: complex, b: complex) -> SpinorField:
    if f.grid != g.grid:
        raise ValueError("grid mismatch")
    terms = {k: a * v for k, v in f.terms().items()}
    for k, v in g.terms().items():
        terms[k] = terms[k] + b * v if k in terms else b * v
    return SpinorField.from_terms(f.grid, terms, f.m, f.t)


def distance(f: SpinorField, g: SpinorField) -> float:
    return (f - g).norm()
