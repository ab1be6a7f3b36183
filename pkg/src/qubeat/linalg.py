"""Minimal complex linear algebra for 2x2 and 4x4 Hermitian matrices.

Everything here is sized for two-qubit work: a cyclic Jacobi
eigensolver (exact enough at these dimensions and free of LAPACK
corner cases), a PSD matrix square root, partial traces over either
qubit, and the von Neumann entropy in bits.  All functions are pure
and safe to call concurrently.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ConvergenceError, PhysicalityError

# Eigenvalues in (-PSD_CLAMP, 0) are rounding noise and treated as 0;
# anything more negative signals a bug upstream and is a hard error.
PSD_CLAMP = 1e-10

_HERM_ATOL = 1e-10
_JACOBI_OFF_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 60


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] not in (2, 4):
        raise ValueError(f"only 2x2 and 4x4 matrices are supported, got {m.shape[0]}")
    return m


def require_hermitian(m, atol: float = _HERM_ATOL) -> np.ndarray:
    """Return m as a complex array, raising if it is not Hermitian within atol."""
    m = _as_square(m)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > atol:
        raise PhysicalityError(f"matrix is not Hermitian: max|m - m^H| = {dev:.3e} > {atol:.1e}")
    return m


def validate_density_matrix(rho, *, atol_herm: float = 1e-12, atol_trace: float = 1e-12,
                            atol_psd: float = PSD_CLAMP) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a density matrix.

    Returns the validated array; raises PhysicalityError on violation.
    """
    rho = _as_square(rho)
    dev = np.max(np.abs(rho - rho.conj().T))
    if dev > atol_herm:
        raise PhysicalityError(f"density matrix not Hermitian: {dev:.3e} > {atol_herm:.1e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol_trace:
        raise PhysicalityError(f"density matrix trace {tr:.15g} differs from 1 beyond {atol_trace:.1e}")
    w, _ = hermitian_eigensystem(rho)
    if w[-1] < -atol_psd:
        raise PhysicalityError(f"density matrix has eigenvalue {w[-1]:.3e} < -{atol_psd:.1e}")
    return rho


def hermitian_eigensystem(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors of a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    m : array_like
        Hermitian 2x2 or 4x4 matrix (checked to 1e-10).

    Returns
    -------
    (w, v) : eigenvalues sorted descending, unitary matrix whose columns
        are the matching eigenvectors, so that ``m @ v[:, k] == w[k] * v[:, k]``.
    """
    a = require_hermitian(m).copy()
    n = a.shape[0]
    # exact Hermitian part; rotations preserve it to rounding
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)

    for _ in range(_JACOBI_MAX_SWEEPS):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off < _JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) == 0.0:
                    continue
                # phase that makes the (p,q) block real symmetric
                phase = apq / abs(apq)
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                j = np.eye(n, dtype=complex)
                j[p, p] = c
                j[p, q] = s
                j[q, p] = -s * np.conj(phase)
                j[q, q] = c * np.conj(phase)
                a = j.conj().T @ a @ j
                v = v @ j
    else:
        raise ConvergenceError("Jacobi sweep limit reached without convergence")

    w = np.real(np.diag(a))
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def matrix_sqrt_psd(m) -> np.ndarray:
    """Hermitian PSD square root: returns s with s @ s == m.

    Eigenvalues in (-1e-10, 0) are clamped to zero; more negative values
    raise PhysicalityError.
    """
    w, v = hermitian_eigensystem(m)
    if w[-1] < -PSD_CLAMP:
        raise PhysicalityError(f"matrix_sqrt_psd: eigenvalue {w[-1]:.3e} below -{PSD_CLAMP:.1e}")
    w = np.sqrt(np.clip(w, 0.0, None))
    s = (v * w) @ v.conj().T
    return 0.5 * (s + s.conj().T)


def singular_values(m) -> np.ndarray:
    """Singular values of a small complex matrix, descending, by one-sided Jacobi.

    Columns are rotated pairwise until mutually orthogonal; the sorted
    column norms are then the singular values.  Unlike taking square
    roots of eigenvalues of m^H m, this keeps full absolute precision
    for singular values near zero.
    """
    a = _as_square(m).copy()
    n = a.shape[0]
    for _ in range(_JACOBI_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                x, y = a[:, p], a[:, q]
                apq = np.vdot(x, y)
                app = np.vdot(x, x).real
                aqq = np.vdot(y, y).real
                if abs(apq) <= _JACOBI_OFF_TOL * np.sqrt(max(app * aqq, 1e-300)):
                    continue
                rotated = True
                phase = apq / abs(apq)
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau >= 0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                new_p = c * x - s * np.conj(phase) * y
                new_q = s * phase * x + c * y
                a[:, p], a[:, q] = new_p, new_q
        if not rotated:
            break
    else:
        raise ConvergenceError("one-sided Jacobi SVD failed to converge")
    sv = np.sqrt(np.sum(np.abs(a) ** 2, axis=0))
    return np.sort(sv)[::-1]


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced 2x2 state of qubit ``keep`` ('A' or 'B') of a two-qubit density matrix.

    The 4x4 input lives in the product basis |00>, |01>, |10>, |11> with
    qubit A in the first slot.
    """
    rho = _as_square(rho)
    if rho.shape[0] != 4:
        raise ValueError("partial_trace expects a 4x4 two-qubit density matrix")
    validate_density_matrix(rho)
    r = rho.reshape(2, 2, 2, 2)  # [a, b, a', b']
    if keep == "A":
        return np.einsum("abcb->ac", r)
    if keep == "B":
        return np.einsum("abad->bd", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _entropy_from_eigenvalues(w: np.ndarray) -> float:
    w = np.asarray(w, dtype=float)
    if np.min(w) < -PSD_CLAMP:
        raise PhysicalityError(f"entropy: eigenvalue {np.min(w):.3e} below -{PSD_CLAMP:.1e}")
    w = np.clip(w, 0.0, None)
    pos = w[w > 0.0]
    return float(max(0.0, -np.sum(pos * np.log2(pos))))


def von_neumann_entropy(rho) -> float:
    """Entropy -Tr[rho log2 rho] in bits, with the 0 log 0 = 0 convention."""
    rho = _as_square(rho)
    tr = np.trace(rho)
    if abs(tr - 1.0) > 1e-9:
        raise PhysicalityError(f"entropy requires unit trace, got {tr:.12g}")
    w, _ = hermitian_eigensystem(rho)
    return _entropy_from_eigenvalues(w)


def xlog2x(x: np.ndarray) -> np.ndarray:
    """Elementwise x*log2(x) with 0 log 0 = 0; tiny negatives are clamped."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, None)
    out = np.zeros_like(x)
    mask = x > 0.0
    out[mask] = x[mask] * np.log2(x[mask])
    return out
