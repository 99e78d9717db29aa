"""Pure-numpy implementation of the search-objective kernel.

Semantics match fudist._kernels._core exactly; parity is enforced by tests.

Parameter layout, per diagonal block of size s (in cluster order): first the
s real diagonal entries of a Hermitian generator H, then the strict upper
triangle row-major as (real, imag) pairs; the block of the unitary is
exp(i H).
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "python"


def _hermitian_from_params(params: np.ndarray, s: int) -> np.ndarray:
    h = np.zeros((s, s), dtype=np.complex128)
    for i in range(s):
        h[i, i] = params[i]
    k = s
    for i in range(s):
        for j in range(i + 1, s):
            re, im = params[k], params[k + 1]
            k += 2
            h[i, j] = re + 1j * im
            h[j, i] = re - 1j * im
    return h


def _expi_2x2(d0: float, d1: float, re: float, im: float) -> np.ndarray:
    # exp(i(aI + v.sigma)) = e^{ia}(cos|v| I + i sin|v| v.sigma/|v|)
    a = 0.5 * (d0 + d1)
    vx, vy, vz = re, -im, 0.5 * (d0 - d1)
    b = math.sqrt(vx * vx + vy * vy + vz * vz)
    phase = complex(math.cos(a), math.sin(a))
    if b < 1e-300:
        return phase * np.eye(2, dtype=np.complex128)
    c, s = math.cos(b), math.sin(b) / b
    return phase * np.array(
        [
            [c + 1j * s * vz, 1j * s * (vx - 1j * vy)],
            [1j * s * (vx + 1j * vy), c - 1j * s * vz],
        ],
        dtype=np.complex128,
    )


def block_unitary(n: int, sizes, params: np.ndarray) -> np.ndarray:
    """Block-diagonal unitary blockdiag(exp(i H_c)) from the parameter vector."""
    params = np.asarray(params, dtype=np.float64)
    w = np.zeros((n, n), dtype=np.complex128)
    off = 0
    k = 0
    for s in sizes:
        if s == 1:
            w[off, off] = complex(math.cos(params[k]), math.sin(params[k]))
            k += 1
        elif s == 2:
            w[off : off + 2, off : off + 2] = _expi_2x2(
                params[k], params[k + 1], params[k + 2], params[k + 3]
            )
            k += 4
        else:
            h = _hermitian_from_params(params[k : k + s * s], s)
            k += s * s
            vals, vecs = np.linalg.eigh(h)
            w[off : off + s, off : off + s] = (vecs * np.exp(1j * vals)) @ vecs.conj().T
        off += s
    return w


def fu_objective(
    rho_t: np.ndarray,
    m: int,
    n: int,
    sizes,
    params: np.ndarray,
    tr_rho_sq: float,
) -> float:
    """d(rho, I (x) W(params)) for rho already rotated into the B eigenbasis.

    Computes sqrt(max(0, tr(rho^2) - Re tr(rho (I (x) W) rho (I (x) W^dag)))).
    """
    w = block_unitary(n, sizes, params)
    mn = m * n
    flat = rho_t.reshape(mn * m, n)
    f = (flat @ w).reshape(mn, mn)          # rho (I x W)
    g = (flat @ w.conj().T).reshape(mn, mn)  # rho (I x W^dag)
    t = float(np.einsum("xy,yx->", f, g).real)
    return math.sqrt(max(0.0, tr_rho_sq - t))
