"""Global shift of a bipartite state under locally noneffective unitaries.

A unitary U on subsystem B is cyclic for rho when it commutes with rho_B:
nothing changes locally on B, yet the joint state can still move.  The Fu
distance

    d(rho, U) = || rho - (I (x) U) rho (I (x) U)^dag ||_F / sqrt(2)

measures that global shift.  This module evaluates d directly and through
the correlation-matrix route, builds maximizing cyclic unitaries for the
families with closed forms (pseudopure, Werner, diagonal-correlation
two-qubit, and two 3x3 bound-entangled families), and provides the generic
ceilings every state obeys.
"""

from __future__ import annotations

import dataclasses
from typing import Optional

import numpy as np

from .linalg import commutator_norm, tensor_product, unitarity_residual
from .neldermead import maximize
from .states import BipartiteState, fano_decompose, gell_mann_generators
from .tolerances import TOLS

_PAULIS = gell_mann_generators(2)


@dataclasses.dataclass(frozen=True)
class CyclicUnitary:
    """A unitary intended to act on subsystem B alone.

    Construction checks unitarity; whether it actually commutes with a
    given rho_B is a property of the pair, exposed by cyclicity_residual.
    """

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("unitary must be a square matrix")
        res = unitarity_residual(mat)
        if res > TOLS.unitarity:
            raise ValueError(f"matrix is not unitary (residual {res:.3e})")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def cyclicity_residual(self, rho_b: np.ndarray) -> float:
        return commutator_norm(rho_b, self.matrix)

    def is_cyclic_for(self, rho_b: np.ndarray, tol: float = TOLS.cyclicity) -> bool:
        return self.cyclicity_residual(rho_b) <= tol


@dataclasses.dataclass(frozen=True)
class FuBounds:
    """Ceilings on the maximal shift of a given state."""

    classical: float
    purity: float

    def minimum(self) -> float:
        return min(self.classical, self.purity)


@dataclasses.dataclass(frozen=True)
class FuReport:
    """Maximal-shift estimate with the unitary that produced it."""

    d_value: float
    witness: Optional[CyclicUnitary]
    closed_form: str       # family whose formula produced d_value, or "none"
    bounds: FuBounds


def _unitary_matrix(u) -> np.ndarray:
    if isinstance(u, CyclicUnitary):
        return u.matrix
    return np.asarray(u, dtype=np.complex128)


def shifted_state(state: BipartiteState, u) -> BipartiteState:
    """(I (x) U) rho (I (x) U)^dag as a new validated state."""
    iu = tensor_product(np.eye(state.dim_a), _unitary_matrix(u))
    return BipartiteState(iu @ state.rho @ iu.conj().T, state.dim_a, state.dim_b)


def cyclicity_residual(state: BipartiteState, u) -> float:
    """Frobenius norm of [rho_B, U]; zero when U is locally noneffective."""
    return commutator_norm(state.rho_b(), _unitary_matrix(u))


def fu_distance(state: BipartiteState, u) -> float:
    """d(rho, U) evaluated as sqrt(tr rho^2 - Re tr(rho rho_f)).

    Exact for any unitary on B, cyclic or not; conjugation preserves
    tr rho_f^2, so the difference never needs to be formed.
    """
    iu = tensor_product(np.eye(state.dim_a), _unitary_matrix(u))
    rho_f = iu @ state.rho @ iu.conj().T
    overlap = float(np.einsum("ij,ji->", state.rho, rho_f).real)
    return float(np.sqrt(max(0.0, state.purity() - overlap)))


def fu_distance_via_correlation(state: BipartiteState, u) -> float:
    """d(rho, U) from correlation matrices: (2/MN) sqrt(sum T^2 - sum T T_f).

    The local Bloch terms cancel exactly when U is cyclic for rho_B, which
    makes this an independent route for cross-checking fu_distance; for a
    non-cyclic U it misses the moving r_b term.
    """
    t = fano_decompose(state).t
    t_f = fano_decompose(shifted_state(state, u)).t
    gap = float(np.sum(t * t) - np.sum(t * t_f))
    m, n = state.dims
    return 2.0 / (m * n) * float(np.sqrt(max(0.0, gap)))


# ---------------------------------------------------------------------------
# pseudopure states  eps |psi><psi| + (1 - eps) I / MN


def _schmidt_array(coeffs) -> np.ndarray:
    a = np.asarray(coeffs, dtype=np.float64).reshape(-1)
    if a.size == 0:
        raise ValueError("need at least one Schmidt coefficient")
    if np.any(a < 0):
        raise ValueError("Schmidt coefficients must be nonnegative")
    if abs(float(np.sum(a * a)) - 1.0) > TOLS.normalization:
        raise ValueError("squared Schmidt coefficients must sum to 1")
    return a


def dmax_pseudopure(coeffs, epsilon: float) -> float:
    """Maximal shift of eps |psi><psi| + (1 - eps) I / MN over cyclic unitaries.

    With a_m the largest Schmidt coefficient of psi: eps while a_m^2 <= 1/2
    (the overlap sum can be steered to zero), else 2 eps a_m sqrt(1 - a_m^2).
    """
    a = _schmidt_array(coeffs)
    am = float(np.max(a))
    eps = float(epsilon)
    if am * am <= 0.5:
        return eps
    return 2.0 * eps * am * float(np.sqrt(1.0 - am * am))


def closing_phases(weights) -> np.ndarray:
    """Phases theta with sum_k w_k exp(i theta_k) = 0, for nonnegative w.

    Feasible iff no weight exceeds the sum of the others.  The weights are
    grouped into three polygon sides: the largest alone, the rest greedily
    balanced across the other two.  The greedy imbalance is at most one
    item, and every item is at most the largest weight, so the three side
    lengths always satisfy the triangle inequality; the side directions
    then come from the law of cosines.
    """
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.size == 0:
        raise ValueError("weights must be nonempty")
    if np.any(w < -TOLS.normalization):
        raise ValueError("weights must be nonnegative")
    w = np.clip(w, 0.0, None)
    total = float(w.sum())
    if total <= 0.0:
        return np.zeros_like(w)
    order = np.argsort(w, kind="stable")[::-1]
    top = float(w[order[0]])
    if top > total - top + TOLS.phase_closure:
        raise ValueError("largest weight exceeds the sum of the rest; sum cannot close")
    sides = np.zeros(w.size, dtype=np.int64)
    lengths = np.zeros(3)
    lengths[0] = top
    for idx in order[1:]:
        side = 1 if lengths[1] <= lengths[2] else 2
        sides[idx] = side
        lengths[side] += w[idx]
    l1, l2, l3 = (float(x) for x in lengths)
    phases = np.zeros(w.size)
    if l3 <= TOLS.phase_closure:
        # a degenerate triangle: the two remaining sides are antiparallel
        phi2 = phi3 = np.pi
    else:
        cos_beta = np.clip((l1 * l1 + l2 * l2 - l3 * l3) / (2.0 * l1 * l2), -1.0, 1.0)
        cos_gamma = np.clip((l1 * l1 + l3 * l3 - l2 * l2) / (2.0 * l1 * l3), -1.0, 1.0)
        phi2 = np.pi - np.arccos(cos_beta)
        phi3 = np.pi + np.arccos(cos_gamma)
    phases[sides == 1] = phi2
    phases[sides == 2] = phi3
    return phases


def _phases_numeric(weights: np.ndarray, restarts: int = 100, seed: int = 0) -> np.ndarray:
    """Minimize |sum w exp(i theta)| numerically (first phase gauged to 0)."""
    rng = np.random.default_rng(seed)
    k = weights.size

    def objective(theta: np.ndarray) -> float:
        full = np.concatenate(([0.0], theta))
        return -abs(np.sum(weights * np.exp(1j * full))) ** 2

    best = None
    for r in range(restarts):
        x0 = np.zeros(k - 1) if r == 0 else rng.uniform(-np.pi, np.pi, size=k - 1)
        res = maximize(objective, x0, step_size=0.5, max_iter=400, tol=1e-16)
        if best is None or res.value > best.value:
            best = res
    return np.concatenate(([0.0], best.x))


def pseudopure_witness(coeffs, dim_b: Optional[int] = None) -> CyclicUnitary:
    """Diagonal cyclic unitary attaining dmax_pseudopure, in the Schmidt basis.

    When the dominant weight a_m^2 exceeds 1/2 the best move is to flip
    every other term against it; otherwise the squared coefficients close a
    polygon and the shifted overlap vanishes.  If the geometric phases fail
    their closure check the construction falls back to a numerical phase
    search.
    """
    a = _schmidt_array(coeffs)
    n = a.size if dim_b is None else int(dim_b)
    if n < a.size:
        raise ValueError("dim_b is smaller than the number of Schmidt coefficients")
    w = a * a
    phases = np.full(n, np.pi)
    m_idx = int(np.argmax(w))
    if w[m_idx] > 0.5:
        phases[m_idx] = 0.0
    else:
        theta = closing_phases(w)
        if abs(np.sum(w * np.exp(1j * theta))) > TOLS.phase_closure:
            theta = _phases_numeric(w)
        phases[: a.size] = theta
        phases[a.size:] = 0.0
    return CyclicUnitary(np.diag(np.exp(1j * phases)))


def pseudopure_detection_window(epsilon: float) -> Optional[tuple[float, float]]:
    """Dominant-weight window where the shift can reach the two-qubit ceiling.

    Roots of 2 eps sqrt(x (1 - x)) = 1/sqrt(2) in x = a_m^2, or None when
    eps < 1/sqrt(2) and the branch never reaches the ceiling.  Below
    x = 1/2 the maximal shift is eps regardless, so for eps >= 1/sqrt(2)
    the full detectable region is everything up to the upper root.
    """
    eps = float(epsilon)
    if not 0.0 < eps <= 1.0:
        raise ValueError("epsilon must lie in (0, 1]")
    disc = 1.0 - 1.0 / (2.0 * eps * eps)
    if disc < 0.0:
        return None
    root = float(np.sqrt(disc))
    return 0.5 * (1.0 - root), 0.5 * (1.0 + root)


def pseudopure_purity_bound(epsilon: float, dim_total: int) -> float:
    """Purity ceiling of an eps-pseudopure state: eps sqrt(2 (D - 1) / D)."""
    d = int(dim_total)
    return float(epsilon) * float(np.sqrt(2.0 * (d - 1) / d))


# ---------------------------------------------------------------------------
# Werner states on C^D (x) C^D


def dmax_werner(dim: int, p: float) -> float:
    """Maximal shift of the Werner state: |2 p D - D - 1| / (D^2 - 1)."""
    d = int(dim)
    return abs(2.0 * p * d - d - 1.0) / (d * d - 1.0)


def werner_witness(dim: int) -> CyclicUnitary:
    """diag(1, w, ..., w^(D-1)) with w = exp(2 pi i / D).

    Traceless, hence a maximizer; rho_B = I/D makes every unitary cyclic.
    """
    d = int(dim)
    omega = np.exp(2j * np.pi / d)
    return CyclicUnitary(np.diag(omega ** np.arange(d)))


def fu_werner(dim: int, p: float, u) -> float:
    """Closed-form shift of the Werner state under an arbitrary unitary on B.

    Depends on U only through |tr U|^2; the swap algebra collapses the
    overlap trace to a function of that single invariant.
    """
    d = int(dim)
    beta = abs(np.trace(_unitary_matrix(u))) ** 2
    num = (2.0 * p * d - d - 1.0) ** 2 * (d * d - beta)
    return float(np.sqrt(max(0.0, num))) / (d * (d * d - 1.0))


def werner_pseudopure_weight(p: float) -> float:
    """Signed weight w in rho_W(2, p) = w |psi-><psi-| + (1 - w) I / 4.

    Crosses zero at p = 3/4; only |w| enters shift formulas, but the state
    identity itself needs the sign.
    """
    return 1.0 - 4.0 * p / 3.0


def werner_detection_threshold() -> float:
    """Mixing p below which the D = 2 Werner shift exceeds 1/sqrt(2).

    Lower root of |1 - 4p/3| = 1/sqrt(2); the other branch crosses again
    near p = 0.98.
    """
    return 0.75 * (1.0 - 1.0 / np.sqrt(2.0))


# ---------------------------------------------------------------------------
# two-qubit states with diagonal correlation matrix


def diag_t_axis(lam, r_b) -> np.ndarray:
    """Rotation axis of the maximizing qubit unitary.

    A nonzero Bloch vector of B forces the axis onto itself (nothing else
    commutes with rho_B); with rho_B maximally mixed every axis is cyclic
    and the best choice sacrifices the weakest |lambda_k| (lowest index on
    ties).
    """
    lam = np.asarray(lam, dtype=np.float64).reshape(-1)
    r = np.asarray(r_b, dtype=np.float64).reshape(-1)
    if lam.shape != (3,) or r.shape != (3,):
        raise ValueError("expected three correlation values and a 3-vector")
    norm = float(np.linalg.norm(r))
    if norm > TOLS.bloch_axis:
        return r / norm
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(lam)))] = 1.0
    return axis


def dmax_two_qubit_diag_t(lam, r_b) -> float:
    """Maximal shift for a two-qubit state with T = diag(lam):
    sqrt(sum_i lam_i^2 (1 - n_i^2) / 2) along the forced axis n."""
    lam = np.asarray(lam, dtype=np.float64).reshape(-1)
    n_axis = diag_t_axis(lam, r_b)
    return float(np.sqrt(float(np.sum(lam**2 * (1.0 - n_axis**2))) / 2.0))


def axis_angle_unitary(axis, theta: float) -> CyclicUnitary:
    """U = exp(-i theta n.sigma / 2) on one qubit."""
    n_axis = np.asarray(axis, dtype=np.float64).reshape(-1)
    n_axis = n_axis / np.linalg.norm(n_axis)
    h = sum(n_axis[k] * _PAULIS[k] for k in range(3))
    mat = np.cos(theta / 2.0) * np.eye(2) - 1j * np.sin(theta / 2.0) * h
    return CyclicUnitary(mat)


def diag_t_witness(lam, r_b) -> CyclicUnitary:
    """Half turn about the forced axis: U = -i n.sigma, the theta = pi case."""
    return axis_angle_unitary(diag_t_axis(lam, r_b), np.pi)


def rotation_from_axis_angle(axis, theta: float) -> np.ndarray:
    """Rodrigues rotation matching axis_angle_unitary on correlation rows.

    Conjugating by U = exp(-i theta n.sigma / 2) sends T to T O^T with this O.
    """
    n_axis = np.asarray(axis, dtype=np.float64).reshape(-1)
    n_axis = n_axis / np.linalg.norm(n_axis)
    cross = np.array([
        [0.0, -n_axis[2], n_axis[1]],
        [n_axis[2], 0.0, -n_axis[0]],
        [-n_axis[1], n_axis[0], 0.0],
    ])
    return np.eye(3) + np.sin(theta) * cross + (1.0 - np.cos(theta)) * (cross @ cross)


def fu_two_qubit_diag_t_angle(lam, r_b, theta: float) -> float:
    """Shift from rotating B by theta about the forced axis:
    sqrt((1 - cos theta) sum_i lam_i^2 (1 - n_i^2)) / 2."""
    lam = np.asarray(lam, dtype=np.float64).reshape(-1)
    n_axis = diag_t_axis(lam, r_b)
    gap = (1.0 - np.cos(theta)) * float(np.sum(lam**2 * (1.0 - n_axis**2)))
    return float(np.sqrt(max(0.0, gap))) / 2.0


# ---------------------------------------------------------------------------
# 3x3 bound-entangled families


def dmax_horodecki_a(a: float) -> float:
    """Maximal shift of the 3x3 positive-partial-transpose entangled family:
    2 sqrt(2) a / (8a + 1)."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("a must lie in [0, 1]")
    return 2.0 * float(np.sqrt(2.0)) * a / (8.0 * a + 1.0)


def horodecki_a_witness() -> CyclicUnitary:
    """diag(1, -1, 1) on B.

    rho_B splits into a 2x2 block on span{|0>, |2>} plus the |1> line; this
    sign pattern is scalar on both, so its commutator with rho_B vanishes
    identically in a.
    """
    return CyclicUnitary(np.diag([1.0, -1.0, 1.0]).astype(np.complex128))


def fu_horodecki_alpha(alpha: float) -> tuple[float, CyclicUnitary]:
    """Shift of the alpha family under any zero-diagonal cyclic unitary.

    rho_B = I/3 leaves the whole unitary group cyclic, and every unitary
    with vanishing diagonal yields the same value sqrt(alpha^2 - 5 alpha
    + 9) / 7.  Returns the value and the cyclic-shift permutation of the
    basis as a concrete witness.
    """
    a = float(alpha)
    if not 2.0 <= a <= 5.0:
        raise ValueError("alpha must lie in [2, 5]")
    value = float(np.sqrt(a * a - 5.0 * a + 9.0)) / 7.0
    shift = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=np.complex128)
    return value, CyclicUnitary(shift)


def horodecki_alpha_bound(alpha: float) -> float:
    """Purity ceiling of the alpha family: 2 sqrt(3 alpha^2 - 15 alpha + 31) / 21."""
    a = float(alpha)
    return 2.0 * float(np.sqrt(3.0 * a * a - 15.0 * a + 31.0)) / 21.0


def horodecki_alpha_class(alpha: float) -> str:
    """Entanglement class along the family: separable on [2, 3], bound
    entangled on (3, 4], free entangled on (4, 5]."""
    a = float(alpha)
    if not 2.0 <= a <= 5.0:
        raise ValueError("alpha must lie in [2, 5]")
    if a <= 3.0:
        return "separable"
    if a <= 4.0:
        return "bound"
    return "free"


# ---------------------------------------------------------------------------
# generic ceilings


def bound_classical(m: int, n: int) -> float:
    """Ceiling for classically correlated M x N states:
    min(1, sqrt(2 (M-1) (N-1) / (M N))).  A shift above it certifies that
    the state is not classically correlated; only for 2 x 2 does exceeding
    it certify entanglement."""
    return min(1.0, float(np.sqrt(2.0 * (m - 1) * (n - 1) / (m * n))))


def bound_purity(state: BipartiteState) -> float:
    """Shift ceiling from purity alone: sqrt(2 (tr rho^2 - 1 / MN))."""
    excess = state.purity() - 1.0 / (state.dim_a * state.dim_b)
    return float(np.sqrt(max(0.0, 2.0 * excess)))


def bound_upb(dim_total: int, n_vectors: int) -> float:
    """Purity ceiling of the uniform state on an unextendible-product-basis
    complement: sqrt(2 n / (D (D - n))); below 1/sqrt(2) iff n <= D^2/(D+4)."""
    d, k = int(dim_total), int(n_vectors)
    if not 0 < k < d:
        raise ValueError("need 0 < n_vectors < dim_total")
    return float(np.sqrt(2.0 * k / (d * (d - k))))


def bounds_for(state: BipartiteState) -> FuBounds:
    m, n = state.dims
    return FuBounds(classical=bound_classical(m, n), purity=bound_purity(state))
