"""Eight-component Dirac-type equation: algebra, projectors, sectors, dynamics."""

from .clifford import GammaSet, build_gamma_set, clifford_residual, monomial_basis, spin_generator
from .fields import Grid, SpinorField
from .poincare import GeneratorId, apply, commutator_residual, generator, hamiltonian_matrix
from .projectors import ProjectorSpec, apply_projector, epsilon_hat_matrix, projector_matrix
from .spectral import classify_modes, modified_equation_kernel, rep_label
from .evolution import Model, evolve, gaussian_packet, observables

__version__ = "0.1.0"
