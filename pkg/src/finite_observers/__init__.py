"""Quantum mechanics relative to finite-mass observers.

Exact operator-algebra checks (``algebra``, ``covariance``), a periodic-grid
backend (``lattice``, ``frames``, ``dynamics``), the two-qubit observer
bookkeeping (``wigner``), measurement-order signatures (``protocols``) and a
scenario runner (``cli``).
"""

__version__ = "0.1.0"

from .algebra import (
    AlgebraElement,
    FrameSubstitution,
    Generator,
    QQi,
    angular_momentum,
    commutator,
    free_hamiltonian,
    harmonic_potential,
    normal_order,
    observer_substitution,
    substitute_frame,
)
from .covariance import (
    angular_momentum_check,
    canonical_limit_check,
    composition_check,
    covariance_sweep,
    galilean_symmetry_check,
    verify_covariance,
)
from .dynamics import (
    HamiltonianSpec,
    HarmonicPotential,
    TabulatedPotential,
    build_kinetic_form,
    ehrenfest_track,
    evolve,
    reduced_mass_spreading_check,
)
from .errors import (
    AliasingError,
    BoundaryContactError,
    FrameMismatchError,
    MissingRuleError,
    StabilityError,
    UnknownBodyError,
)
from .frame import FrameSpec
from .frames import FrameMap, amplitude_preservation_check, transform_state, transport_projection
from .lattice import (
    Lattice,
    LatticeState,
    MomentumMap,
    PhysConstants,
    apply_canonical_pi,
    apply_physical_p,
    expectation,
    gaussian_product_state,
    uncertainty_pair,
)
from .protocols import ProtocolResult, delta_c, uncertainty_matrix
from .wigner import ToyFrameState, check_r1_consistency, constraint_residual, transition_amplitude
