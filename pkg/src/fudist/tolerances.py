"""Central numerical tolerance record.

Every module reads its thresholds from the single ``TOLS`` instance below so
that a tolerance is defined exactly once.  Tests that need a different budget
construct their own ``Tolerances``.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # matrix predicates
    hermiticity: float = 1e-10        # ||a - a^dag||_F, relative to max(1, ||a||_F)
    trace: float = 1e-10              # |tr(rho) - 1|
    psd: float = 1e-9                 # allowed magnitude of a negative eigenvalue
    eig_reconstruction: float = 1e-10  # per dimension, ||V L V^dag - a||_F
    orthonormality: float = 1e-10     # ||V^dag V - I||_F
    unitarity: float = 1e-9           # ||U^dag U - I||_F
    # structure thresholds
    cyclicity: float = 1e-8           # ||[rho_B, U]||_F for a unitary to count as cyclic
    degeneracy: float = 1e-10         # absolute eigenvalue gap closing a cluster
    normalization: float = 1e-10      # |sum a_k^2 - 1| for Schmidt coefficients
    purity_pure: float = 1e-9         # 1 - tr(sigma^2) allowed for a "pure" input
    schmidt_drop: float = 1e-12       # coefficients below this are dropped
    fano_reality: float = 1e-10       # allowed imaginary part of Fano components
    diag_t_offdiag: float = 1e-10     # off-diagonal mass allowed in a "diagonal" T
    bloch_axis: float = 1e-10         # ||r_B|| below which the B marginal counts as I/2
    phase_closure: float = 1e-9       # |sum w_k e^{i theta_k}| for closing phases
    # compiled Jacobi eigensolver
    jacobi_offdiag: float = 1e-12
    jacobi_max_sweeps: int = 100


TOLS = Tolerances()
