"""Bipartite density matrices: validated container, named families, and the
generalized Bloch (Fano) decomposition.

Conventions
-----------
* Subsystem order is A (x) B; dims (m, n); total dimension m*n.
* Basis generators are the generalized Gell-Mann matrices, normalized to
  tr(s_i s_j) = 2 delta_ij, ordered symmetric / antisymmetric / diagonal
  (for one qubit this is exactly sigma_x, sigma_y, sigma_z).
* A state decomposes as
      rho = (1/(m n)) [ I + sum_i rA_i s_i (x) I + sum_j rB_j I (x) s_j
                          + sum_ij T_ij s_i (x) s_j ]
  with rA_i = (m/2) tr(s_i rho_A), rB_j = (n/2) tr(s_j rho_B) and
  T_ij = (m n / 4) tr(s_i (x) s_j rho).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, frobenius_norm, hermitian_eig, hermiticity_residual, partial_trace, purity
from .tolerances import TOLS


class StateValidationError(ValueError):
    """A matrix failed a density-matrix invariant; the message names it."""


@dataclass(frozen=True)
class BipartiteState:
    """Validated density matrix on C^dim_a (x) C^dim_b.

    Construction checks Hermiticity, unit trace, positive semidefiniteness
    (eigenvalues >= -1e-9) and the dimension product; the stored array is
    made read-only.
    """

    rho: np.ndarray
    dim_a: int
    dim_b: int

    def __post_init__(self):
        rho = as_matrix(self.rho).copy()
        d = self.dim_a * self.dim_b
        if self.dim_a < 1 or self.dim_b < 1:
            raise StateValidationError(f"invalid dims ({self.dim_a}, {self.dim_b})")
        if rho.shape != (d, d):
            raise StateValidationError(
                f"shape mismatch: matrix is {rho.shape}, dims ({self.dim_a}, {self.dim_b}) need ({d}, {d})"
            )
        res = hermiticity_residual(rho)
        if res > TOLS.hermiticity:
            raise StateValidationError(f"not Hermitian: residual {res:.3e}")
        tr = float(rho.trace().real)
        if abs(tr - 1.0) > TOLS.trace:
            raise StateValidationError(f"trace is {tr!r}, not 1")
        min_eig = float(np.linalg.eigvalsh(rho)[0])
        if min_eig < -TOLS.psd:
            raise StateValidationError(f"not positive semidefinite: min eigenvalue {min_eig:.3e}")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    def rho_a(self) -> np.ndarray:
        return partial_trace(self.rho, self.dim_a, self.dim_b, "A")

    def rho_b(self) -> np.ndarray:
        return partial_trace(self.rho, self.dim_a, self.dim_b, "B")

    def purity(self) -> float:
        return purity(self.rho)


def _ket(d: int, k: int) -> np.ndarray:
    v = np.zeros(d, dtype=np.complex128)
    v[k] = 1.0
    return v


def gell_mann_generators(d: int) -> list[np.ndarray]:
    """The d^2 - 1 generalized Gell-Mann matrices for dimension d.

    Ordered as all symmetric pairs (j<k lexicographic), all antisymmetric
    pairs, then the d-1 diagonal generators
    sqrt(2/(l(l+1))) diag(1,...,1,-l,0,...,0).  Traceless, Hermitian,
    tr(s_i s_j) = 2 delta_ij; for d = 2 they are the Pauli matrices in the
    order (x, y, z).
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    out: list[np.ndarray] = []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = 1.0
            s[k, j] = 1.0
            out.append(s)
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=np.complex128)
            s[j, k] = -1.0j
            s[k, j] = 1.0j
            out.append(s)
    for l in range(1, d):
        s = np.zeros((d, d), dtype=np.complex128)
        coeff = np.sqrt(2.0 / (l * (l + 1)))
        for i in range(l):
            s[i, i] = coeff
        s[l, l] = -l * coeff
        out.append(s)
    return out


def pure_from_schmidt(coeffs, m: int, n: int) -> BipartiteState:
    """Projector onto sum_k a_k |k>_A |k>_B in the computational bases.

    coeffs must be nonnegative with sum of squares 1, and at most min(m, n)
    of them.
    """
    a = np.asarray(coeffs, dtype=np.float64)
    if a.ndim != 1 or len(a) == 0 or len(a) > min(m, n):
        raise ValueError(f"need between 1 and min(m, n) = {min(m, n)} coefficients, got {a.shape}")
    if np.any(a < 0):
        raise ValueError("Schmidt coefficients must be nonnegative")
    if abs(float(np.sum(a * a)) - 1.0) > TOLS.normalization:
        raise ValueError(f"squared coefficients sum to {float(np.sum(a*a))!r}, not 1")
    psi = np.zeros(m * n, dtype=np.complex128)
    for k, ak in enumerate(a):
        psi[k * n + k] = ak
    return BipartiteState(np.outer(psi, psi.conj()), m, n)


def pseudopure(sigma: BipartiteState, epsilon: float) -> BipartiteState:
    """eps * sigma + (1 - eps) I / (m n) for a pure sigma, 0 <= eps <= 1."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    if 1.0 - sigma.purity() > TOLS.purity_pure:
        raise ValueError(f"sigma is not pure: tr(sigma^2) = {sigma.purity()!r}")
    d = sigma.dim_a * sigma.dim_b
    rho = epsilon * sigma.rho + (1.0 - epsilon) / d * np.eye(d, dtype=np.complex128)
    return BipartiteState(rho, sigma.dim_a, sigma.dim_b)


def swap_operator(d: int) -> np.ndarray:
    """P = sum_ij |i><j| (x) |j><i|, the exchange of the two d-level factors."""
    eye = np.eye(d)
    return np.einsum("il,kj->ikjl", eye, eye).reshape(d * d, d * d).astype(np.complex128)


def werner(d: int, p: float) -> BipartiteState:
    """Werner state: p on the symmetric subspace, 1-p on the antisymmetric one.

    rho = p * 2/(d^2+d) * P_sym + (1-p) * 2/(d^2-d) * P_asym, invariant under
    U (x) U.  Both marginals are I/d.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    perm = swap_operator(d)
    eye = np.eye(d * d, dtype=np.complex128)
    p_sym = 0.5 * (eye + perm)
    p_asym = 0.5 * (eye - perm)
    rho = p * (2.0 / (d * d + d)) * p_sym + (1.0 - p) * (2.0 / (d * d - d)) * p_asym
    return BipartiteState(rho, d, d)


def werner_purity(d: int, p: float) -> float:
    """Closed expression tr(rho_W^2) = p^2 2/(d^2+d) + (1-p)^2 2/(d^2-d)."""
    return p * p * 2.0 / (d * d + d) + (1.0 - p) ** 2 * 2.0 / (d * d - d)


def horodecki_rho_a(a: float) -> BipartiteState:
    """One-parameter 3x3 family that stays PPT yet entangled for 0 < a < 1.

    With P_k = |k><k|, Q = I(x)I - sum_k P_k (x) P_k - P_2 (x) P_0, the
    maximally entangled |Psi> = (|00>+|11>+|22>)/sqrt(3) and
    |Phi_a> = |2> (x) (sqrt((1+a)/2)|0> + sqrt((1-a)/2)|2>):

        rho_ent = 3/8 |Psi><Psi| + 1/8 Q
        rho_a   = 8a/(8a+1) rho_ent + 1/(8a+1) |Phi_a><Phi_a|
    """
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"a must lie in [0, 1], got {a}")
    q = np.eye(9, dtype=np.complex128)
    for k in range(3):
        pk = np.outer(_ket(3, k), _ket(3, k).conj())
        q -= np.kron(pk, pk)
    q -= np.kron(np.outer(_ket(3, 2), _ket(3, 2).conj()), np.outer(_ket(3, 0), _ket(3, 0).conj()))
    psi = (np.kron(_ket(3, 0), _ket(3, 0)) + np.kron(_ket(3, 1), _ket(3, 1)) + np.kron(_ket(3, 2), _ket(3, 2))) / np.sqrt(3.0)
    rho_ent = (3.0 / 8.0) * np.outer(psi, psi.conj()) + (1.0 / 8.0) * q
    phi_b = np.sqrt((1.0 + a) / 2.0) * _ket(3, 0) + np.sqrt((1.0 - a) / 2.0) * _ket(3, 2)
    phi = np.kron(_ket(3, 2), phi_b)
    rho = (8.0 * a / (8.0 * a + 1.0)) * rho_ent + (1.0 / (8.0 * a + 1.0)) * np.outer(phi, phi.conj())
    return BipartiteState(rho, 3, 3)


def horodecki_rho_alpha(alpha: float) -> BipartiteState:
    """Chessboard-style 3x3 family interpolating separable / bound / free.

    rho = 2/7 |phi+><phi+| + alpha/7 s+ + (5-alpha)/7 s-, alpha in [2, 5],
    with s+ = (|01><01|+|12><12|+|20><20|)/3 and s- its transpose-cycled
    partner.  Separable for alpha <= 3, bound entangled on (3, 4], free
    entangled on (4, 5].  The B marginal is I/3 for every alpha.
    """
    if not 2.0 <= alpha <= 5.0:
        raise ValueError(f"alpha must lie in [2, 5], got {alpha}")
    phi = (np.kron(_ket(3, 0), _ket(3, 0)) + np.kron(_ket(3, 1), _ket(3, 1)) + np.kron(_ket(3, 2), _ket(3, 2))) / np.sqrt(3.0)
    proj = np.outer(phi, phi.conj())
    s_plus = np.zeros((9, 9), dtype=np.complex128)
    s_minus = np.zeros((9, 9), dtype=np.complex128)
    for i, j in ((0, 1), (1, 2), (2, 0)):
        v = np.kron(_ket(3, i), _ket(3, j))
        s_plus += np.outer(v, v.conj()) / 3.0
        w = np.kron(_ket(3, j), _ket(3, i))
        s_minus += np.outer(w, w.conj()) / 3.0
    rho = (2.0 / 7.0) * proj + (alpha / 7.0) * s_plus + ((5.0 - alpha) / 7.0) * s_minus
    return BipartiteState(rho, 3, 3)


def upb_tiles_state() -> BipartiteState:
    """Bound entangled 3x3 state from the five-tile unextendible product basis.

    rho = (I - sum_k |psi_k><psi_k|) / 4 over the tiles
    |0>(|0>-|1>)/sqrt2, (|0>-|1>)|2>/sqrt2, |2>(|1>-|2>)/sqrt2,
    (|1>-|2>)|0>/sqrt2 and the uniform product vector.
    """
    k = [_ket(3, i) for i in range(3)]
    s2 = 1.0 / np.sqrt(2.0)
    uniform = (k[0] + k[1] + k[2])
    tiles = [
        np.kron(k[0], s2 * (k[0] - k[1])),
        np.kron(s2 * (k[0] - k[1]), k[2]),
        np.kron(k[2], s2 * (k[1] - k[2])),
        np.kron(s2 * (k[1] - k[2]), k[0]),
        np.kron(uniform, uniform) / 3.0,
    ]
    rho = np.eye(9, dtype=np.complex128)
    for t in tiles:
        rho -= np.outer(t, t.conj())
    return BipartiteState(rho / 4.0, 3, 3)


def upb_tiles_vectors() -> list[np.ndarray]:
    """The five tile product vectors (orthonormal in C^9)."""
    k = [_ket(3, i) for i in range(3)]
    s2 = 1.0 / np.sqrt(2.0)
    uniform = (k[0] + k[1] + k[2])
    return [
        np.kron(k[0], s2 * (k[0] - k[1])),
        np.kron(s2 * (k[0] - k[1]), k[2]),
        np.kron(k[2], s2 * (k[1] - k[2])),
        np.kron(s2 * (k[1] - k[2]), k[0]),
        np.kron(uniform, uniform) / 3.0,
    ]


@dataclass(frozen=True)
class FanoForm:
    """Generalized Bloch components (r_a, r_b, t) of a bipartite state."""

    r_a: np.ndarray        # length m^2 - 1
    r_b: np.ndarray        # length n^2 - 1
    t: np.ndarray          # (m^2 - 1, n^2 - 1) correlation matrix
    dim_a: int
    dim_b: int

    def __post_init__(self):
        r_a = np.asarray(self.r_a, dtype=np.float64)
        r_b = np.asarray(self.r_b, dtype=np.float64)
        t = np.asarray(self.t, dtype=np.float64)
        if r_a.shape != (self.dim_a**2 - 1,) or r_b.shape != (self.dim_b**2 - 1,):
            raise ValueError("Bloch vector lengths do not match dims")
        if t.shape != (self.dim_a**2 - 1, self.dim_b**2 - 1):
            raise ValueError(f"correlation matrix shape {t.shape} does not match dims")
        for arr in (r_a, r_b, t):
            arr.flags.writeable = False
        object.__setattr__(self, "r_a", r_a)
        object.__setattr__(self, "r_b", r_b)
        object.__setattr__(self, "t", t)


def fano_decompose(state: BipartiteState) -> FanoForm:
    """Extract (r_a, r_b, T) from a state; components are real up to 1e-10."""
    m, n = state.dims
    gen_a = np.stack(gell_mann_generators(m))
    gen_b = np.stack(gell_mann_generators(n))
    r4 = state.rho.reshape(m, n, m, n)
    rho_a = state.rho_a()
    rho_b = state.rho_b()
    r_a = 0.5 * m * np.einsum("aji,ij->a", gen_a, rho_a)
    r_b = 0.5 * n * np.einsum("bji,ij->b", gen_b, rho_b)
    t = 0.25 * m * n * np.einsum("aji,blk,ikjl->ab", gen_a, gen_b, r4)
    worst = max(float(np.max(np.abs(r_a.imag))), float(np.max(np.abs(r_b.imag))), float(np.max(np.abs(t.imag))))
    if worst > TOLS.fano_reality:
        raise ValueError(f"Fano components have imaginary part {worst:.3e}")
    return FanoForm(r_a.real, r_b.real, t.real, m, n)


def fano_reconstruct(fano: FanoForm) -> np.ndarray:
    """Rebuild the density matrix from its Fano components."""
    m, n = fano.dim_a, fano.dim_b
    gen_a = gell_mann_generators(m)
    gen_b = gell_mann_generators(n)
    eye_a = np.eye(m, dtype=np.complex128)
    eye_b = np.eye(n, dtype=np.complex128)
    rho = np.kron(eye_a, eye_b).astype(np.complex128)
    for i, s in enumerate(gen_a):
        rho += fano.r_a[i] * np.kron(s, eye_b)
    for j, s in enumerate(gen_b):
        rho += fano.r_b[j] * np.kron(eye_a, s)
    for i, sa in enumerate(gen_a):
        for j, sb in enumerate(gen_b):
            if fano.t[i, j] != 0.0:
                rho += fano.t[i, j] * np.kron(sa, sb)
    return rho / (m * n)


def two_qubit_from_fano(fano: FanoForm) -> BipartiteState:
    """Rebuild a two-qubit state from (r_a, r_b, T); rejects non-PSD triples."""
    if fano.dim_a != 2 or fano.dim_b != 2:
        raise ValueError(f"dims must be (2, 2), got ({fano.dim_a}, {fano.dim_b})")
    try:
        return BipartiteState(fano_reconstruct(fano), 2, 2)
    except StateValidationError as exc:
        raise StateValidationError(f"Fano triple does not describe a state: {exc}") from exc


@dataclass(frozen=True)
class SchmidtDecomposition:
    """coefficients (descending, > 1e-12), with orthonormal basis columns."""

    coefficients: np.ndarray   # (r,)
    basis_a: np.ndarray        # (m, r)
    basis_b: np.ndarray        # (n, r)


def schmidt_decompose(psi, m: int, n: int) -> SchmidtDecomposition:
    """Schmidt decomposition of a unit vector via the eigensystem of rho_A.

    Coefficients are sorted descending; coefficients below 1e-12 are dropped
    together with their basis vectors.
    """
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if v.shape != (m * n,):
        raise ValueError(f"vector length {v.shape[0]} does not match dims ({m}, {n})")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > TOLS.normalization:
        raise ValueError(f"vector norm is {nrm!r}, not 1")
    c = v.reshape(m, n)
    rho_a = c @ c.conj().T
    _, vectors = hermitian_eig(rho_a)
    coeffs, cols_a, cols_b = [], [], []
    for k in range(m - 1, -1, -1):  # descending eigenvalue order
        vec_a = vectors[:, k]
        u = vec_a.conj() @ c
        a_k = float(np.linalg.norm(u))
        if a_k < TOLS.schmidt_drop:
            continue
        coeffs.append(a_k)
        cols_a.append(vec_a)
        cols_b.append(u / a_k)
    order = np.argsort(-np.asarray(coeffs), kind="stable")
    coeffs = np.asarray([coeffs[i] for i in order])
    basis_a = np.stack([cols_a[i] for i in order], axis=1)
    basis_b = np.stack([cols_b[i] for i in order], axis=1)
    return SchmidtDecomposition(coeffs, basis_a, basis_b)


def schmidt_reconstruct(dec: SchmidtDecomposition) -> np.ndarray:
    """sum_k a_k |a_k> (x) |b_k| as a vector."""
    return np.einsum("k,ik,jk->ij", dec.coefficients, dec.basis_a, dec.basis_b).reshape(-1)


def partial_transpose(rho, m: int, n: int) -> np.ndarray:
    """Transpose the B index pair of an (m*n, m*n) operator."""
    rho = as_matrix(rho)
    if rho.shape != (m * n, m * n):
        raise ValueError(f"operator shape {rho.shape} does not match dims ({m}, {n})")
    return rho.reshape(m, n, m, n).transpose(0, 3, 2, 1).reshape(m * n, m * n)


# --- JSON state format (fudist-v1) ---------------------------------------
#
# {"format": "fudist-v1", "m": M, "n": N, "rho": [[re, im], ...]}
# with rho flattened row-major.  Written with this exact field order;
# floats round-trip bit-exactly through repr.

FORMAT_TAG = "fudist-v1"


def state_to_json_dict(state: BipartiteState) -> dict:
    flat = state.rho.reshape(-1)
    return {
        "format": FORMAT_TAG,
        "m": state.dim_a,
        "n": state.dim_b,
        "rho": [[float(z.real), float(z.imag)] for z in flat],
    }


def state_from_json_dict(data: dict) -> BipartiteState:
    if not isinstance(data, dict):
        raise ValueError("state file must contain a JSON object")
    for field in ("m", "n", "rho"):
        if field not in data:
            raise ValueError(f"state file is missing field {field!r}")
    m, n = data["m"], data["n"]
    if not (isinstance(m, int) and isinstance(n, int)) or m < 1 or n < 1:
        raise ValueError("fields 'm' and 'n' must be positive integers")
    entries = data["rho"]
    d = m * n
    if not isinstance(entries, list) or len(entries) != d * d:
        raise ValueError(f"field 'rho' must hold {d * d} [re, im] pairs")
    flat = np.empty(d * d, dtype=np.complex128)
    for idx, pair in enumerate(entries):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValueError(f"rho entry {idx} is not an [re, im] pair")
        flat[idx] = complex(pair[0], pair[1])
    return BipartiteState(flat.reshape(d, d), m, n)


def save_state(path, state: BipartiteState) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json_dict(state), fh)
        fh.write("\n")


def load_state(path) -> BipartiteState:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return state_from_json_dict(data)


def frobenius_distance(x: BipartiteState, y: BipartiteState) -> float:
    """Convenience: ||rho_x - rho_y||_F."""
    return frobenius_norm(x.rho - y.rho)
