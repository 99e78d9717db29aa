"""Dense complex linear algebra used everywhere else in the package.

All operations act on numpy ``complex128`` arrays.  Subsystem ordering is
A (x) B throughout: a bipartite operator on C^m (x) C^n is an (m*n, m*n)
matrix whose row index factors as i*n + a with i the A index and a the B
index, matching ``numpy.kron``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .tolerances import TOLS


class EigenSystem(NamedTuple):
    """Eigenvalues (ascending, real) and eigenvectors (columns) of a Hermitian matrix."""

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Coerce to a square complex128 matrix."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_residual(a: np.ndarray) -> float:
    """||a - a^dag||_F, scaled by max(1, ||a||_F)."""
    a = as_matrix(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    return float(np.linalg.norm(a - a.conj().T)) / scale


def is_hermitian(a: np.ndarray, tol: float = TOLS.hermiticity) -> bool:
    return hermiticity_residual(a) <= tol


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with A-major index ordering."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def partial_trace(rho, m: int, n: int, keep: str) -> np.ndarray:
    """Trace out one subsystem of an (m*n, m*n) operator.

    keep="A" returns the m x m reduction, keep="B" the n x n one.
    """
    rho = as_matrix(rho)
    if rho.shape != (m * n, m * n):
        raise ValueError(f"operator shape {rho.shape} does not match dims ({m}, {n})")
    r4 = rho.reshape(m, n, m, n)
    tag = keep.upper()
    if tag == "A":
        return np.einsum("ikjk->ij", r4)
    if tag == "B":
        return np.einsum("ikil->kl", r4)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def frobenius_norm(a) -> float:
    """sqrt(sum of squared moduli of the entries)."""
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128)))


def hermitian_eig(a, tol: float = TOLS.hermiticity) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Deterministic for identical input.  Raises on non-Hermitian input and
    propagates the solver's error if the iteration fails to converge.
    """
    a = as_matrix(a)
    res = hermiticity_residual(a)
    if res > tol:
        raise ValueError(f"matrix is not Hermitian: residual {res:.3e} exceeds {tol:.1e}")
    values, vectors = np.linalg.eigh(a)
    return EigenSystem(values, vectors)


def mat_exp_i_hermitian(h) -> np.ndarray:
    """exp(i*h) for Hermitian h, via spectral decomposition. Always unitary."""
    values, vectors = hermitian_eig(h)
    return (vectors * np.exp(1j * values)) @ vectors.conj().T


def commutator_norm(a, b) -> float:
    """||a b - b a||_F."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a @ b - b @ a))


def purity(rho) -> float:
    """tr(rho^2) as a real number (imaginary part, ~0 for Hermitian input, discarded)."""
    rho = as_matrix(rho)
    return float(np.einsum("ij,ji->", rho, rho).real)


def unitarity_residual(u: np.ndarray) -> float:
    """||u^dag u - I||_F."""
    u = as_matrix(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def is_unitary(u: np.ndarray, tol: float = TOLS.unitarity) -> bool:
    return unitarity_residual(u) <= tol
