"""Correlation measures for two-qubit states.

Implements the Wootters concurrence (general spin-flip route plus the
closed forms for the two Bell-like families), quantum mutual
information, classical correlation extracted by projective measurements
on qubit B, and quantum discord both variationally (grid search plus
golden-section refinement over the Bloch sphere of measurement bases)
and through the analytic X-state expressions used as the fast path.

All entropies are in bits.  The discord convention is asymmetric:
measurements act on qubit B.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import EvolvedState
from .exceptions import PhysicalityError, StructureError
from .linalg import (
    matrix_sqrt_psd,
    partial_trace,
    singular_values,
    validate_density_matrix,
    von_neumann_entropy,
    xlog2x,
)

logger = logging.getLogger(__name__)

# discord values in (-DISCORD_CLAMP, 0) are floating-point cancellation
# and reported as 0; anything below is logged before clamping
DISCORD_CLAMP = 1e-6

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, EvolvedState):
        rho = rho.rho
    return np.asarray(rho, dtype=complex)


def spin_flipped(rho) -> np.ndarray:
    """The spin-flipped matrix sy(x)sy rho* sy(x)sy by explicit index mapping.

    In the product basis the double-sy conjugation maps (i, j) to
    (3-i, 3-j) with sign s_i s_j, s = (-1, 1, 1, -1).
    """
    rho = _as_matrix(rho)
    sign = np.array([-1.0, 1.0, 1.0, -1.0])
    out = np.empty((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            out[i, j] = sign[i] * sign[j] * np.conj(rho[3 - i, 3 - j])
    return out


def concurrence(rho) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix.

    The four characteristic numbers are the square roots of the
    eigenvalues of sqrt(rho) rho~ sqrt(rho), i.e. the singular values of
    sqrt(rho~) sqrt(rho); computing them directly as singular values
    keeps full precision when they are near zero, and only Hermitian
    machinery is needed.
    """
    rho = validate_density_matrix(_as_matrix(rho))
    rho_t = spin_flipped(rho)
    sq = matrix_sqrt_psd(rho)
    try:
        sq_t = matrix_sqrt_psd(rho_t)
    except PhysicalityError as exc:
        raise PhysicalityError(f"concurrence: spin-flipped state not PSD: {exc}") from exc
    lam = singular_values(sq_t @ sq)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(1.0, max(0.0, c)))


def concurrence_psi(state, g_a: complex, g_b: complex) -> float:
    """Closed-form concurrence for the |00>/|11> family.

    C = max{0, 2|g_a g_b| a b - 2 b^2 |g_a g_b| sqrt((1-|g_a|^2)(1-|g_b|^2))};
    vanishes on an interval (sudden death) once
    a < b sqrt((1-|g_a|^2)(1-|g_b|^2)).
    """
    if state.variant != "psi":
        raise ValueError("concurrence_psi requires a 'psi' variant state")
    a, b = state.amp1, state.amp2
    gg = abs(g_a * g_b)
    pa = max(0.0, 1.0 - abs(g_a) ** 2)
    pb = max(0.0, 1.0 - abs(g_b) ** 2)
    val = 2.0 * gg * a * b - 2.0 * b * b * gg * math.sqrt(pa * pb)
    return max(0.0, val)


def concurrence_phi(state, g_a: complex, g_b: complex) -> float:
    """Closed-form concurrence 2 |amp1 amp2 g_a g_b| for the |01>/|10> family."""
    if state.variant != "phi":
        raise ValueError("concurrence_phi requires a 'phi' variant state")
    return 2.0 * state.amp1 * state.amp2 * abs(g_a * g_b)


def mutual_information(rho) -> float:
    """Quantum mutual information S(A) + S(B) - S(AB) in bits."""
    rho = _as_matrix(rho)
    s_ab = von_neumann_entropy(rho)
    s_a = von_neumann_entropy(partial_trace(rho, "A"))
    s_b = von_neumann_entropy(partial_trace(rho, "B"))
    return max(0.0, s_a + s_b - s_ab)


@dataclass(frozen=True)
class MeasurementBasis:
    """Rank-1 projective measurement on one qubit, by Bloch angles.

    Projects onto |v> = cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> and
    its orthogonal complement.
    """

    theta: float
    phi: float

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        v = np.array([math.cos(self.theta / 2.0),
                      np.exp(1j * self.phi) * math.sin(self.theta / 2.0)])
        p0 = np.outer(v, v.conj())
        return p0, np.eye(2, dtype=complex) - p0


def _entropy2_batch(m: np.ndarray) -> np.ndarray:
    """Entropies of a batch of 2x2 Hermitian PSD matrices via closed-form spectra."""
    half_tr = 0.5 * (m[..., 0, 0].real + m[..., 1, 1].real)
    gap = np.sqrt(np.clip(0.25 * (m[..., 0, 0].real - m[..., 1, 1].real) ** 2
                          + np.abs(m[..., 0, 1]) ** 2, 0.0, None))
    lo = np.clip(half_tr - gap, 0.0, None)
    hi = np.clip(half_tr + gap, 0.0, None)
    return -(xlog2x(lo) + xlog2x(hi))


def _conditional_gain_batch(r4: np.ndarray, s_a: float, rho_a: np.ndarray,
                            vs: np.ndarray) -> np.ndarray:
    """Entropy gain S(A) - sum_k p_k S(A|k) for a batch of measurement vectors.

    ``vs`` has shape (n, 2); measurement acts on qubit B.  Outcome
    branches with probability below 1e-14 contribute zero conditional
    entropy.
    """
    t0 = np.einsum("acbd,nc,nd->nab", r4, vs.conj(), vs)
    p0 = np.clip(np.einsum("naa->n", t0).real, 0.0, 1.0)
    t1 = rho_a[None, :, :] - t0
    p1 = 1.0 - p0

    def branch_entropy(t, p):
        safe = np.where(p > 1e-14, p, 1.0)
        ent = _entropy2_batch(t / safe[:, None, None])
        return np.where(p > 1e-14, p * ent, 0.0)

    return s_a - branch_entropy(t0, p0) - branch_entropy(t1, p1)


def _bloch_vectors(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    return np.stack([np.cos(thetas / 2.0) * np.ones_like(phis, dtype=complex),
                     np.exp(1j * phis) * np.sin(thetas / 2.0)], axis=-1)


def _golden_max(fun, lo: float, hi: float, tol: float = 1e-6) -> tuple[float, float]:
    """Golden-section maximization on [lo, hi]; returns (x, f(x))."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = fun(x1), fun(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = fun(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = fun(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def classical_correlation(rho, grid: int = 64) -> tuple[float, MeasurementBasis]:
    """Classical correlation max_{basis} [S(A) - sum_k p_k S(A|k)], measuring B.

    A uniform grid over the Bloch angles (theta in [0, pi], phi in
    [0, 2 pi)) seeds three rounds of coordinate-wise golden-section
    refinement.  The returned value is a lower bound on the true
    supremum and is monotone in the grid resolution.  Grid ties resolve
    to the smallest (theta, phi), so results are deterministic.
    """
    rho = validate_density_matrix(_as_matrix(rho))
    if grid < 2:
        raise ValueError("grid resolution must be at least 2")
    r4 = rho.reshape(2, 2, 2, 2)
    rho_a = np.einsum("abcb->ac", r4)
    s_a = von_neumann_entropy(rho_a)

    thetas = np.linspace(0.0, math.pi, grid)
    phis = np.linspace(0.0, 2.0 * math.pi, grid, endpoint=False)
    tg, pg = np.meshgrid(thetas, phis, indexing="ij")
    vs = _bloch_vectors(tg.ravel(), pg.ravel())
    vals = _conditional_gain_batch(r4, s_a, rho_a, vs)
    best = int(np.argmax(vals))  # first occurrence = smallest (theta, phi)
    th, ph = tg.ravel()[best], pg.ravel()[best]

    def objective(theta, phi):
        v = _bloch_vectors(np.asarray([theta]), np.asarray([phi % (2.0 * math.pi)]))
        return float(_conditional_gain_batch(r4, s_a, rho_a, v)[0])

    dth = thetas[1] - thetas[0]
    dph = phis[1] - phis[0]
    for _ in range(3):
        th, _val = _golden_max(lambda x: objective(x, ph),
                               max(0.0, th - dth), min(math.pi, th + dth))
        ph, _val = _golden_max(lambda x: objective(th, x), ph - dph, ph + dph)
    ph = ph % (2.0 * math.pi)
    value = max(0.0, objective(th, ph))
    return value, MeasurementBasis(theta=th, phi=ph)


def quantum_discord(rho, grid: int = 64) -> float:
    """Variational discord: mutual information minus classical correlation.

    An upper bound on the true discord, since the grid search lower-
    bounds the classical correlation.  Values in (-1e-6, 0) from
    cancellation are reported as 0.
    """
    rho = _as_matrix(rho)
    q, _basis = classical_correlation(rho, grid=grid)
    return _clamp_discord(mutual_information(rho) - q)


def _clamp_discord(d: float) -> float:
    if d < 0.0:
        if d < -DISCORD_CLAMP:
            logger.warning("discord clamped from %.3e to 0", d)
        return 0.0
    return d


def _binary_entropy_of_split(x: float) -> float:
    """Entropy of the pair (1-x)/2, (1+x)/2; x is clipped into [0, 1]."""
    x = min(1.0, max(0.0, x))
    return float(-xlog2x(np.array([(1.0 - x) / 2.0, (1.0 + x) / 2.0])).sum())


def _check_x_structure(rho: np.ndarray, allowed: set[tuple[int, int]], tol: float = 1e-12):
    for i in range(4):
        for j in range(4):
            if i == j or (i, j) in allowed:
                continue
            if abs(rho[i, j]) > tol:
                raise StructureError(
                    f"element ({i + 1},{j + 1}) = {rho[i, j]:.3e} breaks the required pattern")


def discord_psi_analytic(rho) -> float:
    """Analytic discord for states of the |00>/|11> family (X pattern with
    nonzero corners).

    D = S(rho_B) + sum_j lambda_j log2 lambda_j + min(S1, S2), where the
    lambda_j are the state's eigenvalues, S1 is the conditional entropy
    after a z-basis measurement on B, and S2 after an equatorial one.
    Accepts an EvolvedState or a bare 4x4 matrix.
    """
    rho = _as_matrix(rho)
    _check_x_structure(rho, {(0, 3), (3, 0)})
    p11, p22, p33, p44 = (rho[i, i].real for i in range(4))
    c14 = abs(rho[0, 3])

    s_b = float(-xlog2x(np.array([p11 + p33, p22 + p44])).sum())
    gap = math.sqrt((p11 - p44) ** 2 + 4.0 * c14**2)
    lam = np.array([0.5 * ((p11 + p44) + gap), 0.5 * ((p11 + p44) - gap), p22, p33])
    sum_ll = float(xlog2x(lam).sum())

    eta = abs(p22 - p44) / (p22 + p44) if p22 + p44 > 0 else 0.0
    eta_p = abs(p11 - p33) / (p11 + p33) if p11 + p33 > 0 else 0.0
    s1 = (p22 + p44) * _binary_entropy_of_split(eta) \
        + (p11 + p33) * _binary_entropy_of_split(eta_p)
    eps = math.sqrt((p11 + p22 - p33 - p44) ** 2 + 4.0 * c14**2)
    s2 = _binary_entropy_of_split(eps)
    return _clamp_discord(s_b + sum_ll + min(s1, s2))


def discord_phi_analytic(rho) -> float:
    """Analytic discord for states of the |01>/|10> family.

    Valid on the family's manifold, where the central 2x2 block is rank
    one (|rho23|^2 = rho22 rho33) and the |11> population vanishes; both
    conditions are checked.
    """
    rho = _as_matrix(rho)
    _check_x_structure(rho, {(1, 2), (2, 1)})
    p11, p22, p33, p44 = (rho[i, i].real for i in range(4))
    c23 = abs(rho[1, 2])
    if p44 > 1e-12:
        raise StructureError(f"|11> population {p44:.3e} must vanish for this family")
    if abs(c23**2 - p22 * p33) > 1e-9:
        raise StructureError("central block is not rank one; analytic form does not apply")

    s_b = float(-xlog2x(np.array([p11 + p33, p22])).sum())
    base = float(xlog2x(np.array([p11, p22 + p33])).sum())
    lam_ = abs(p11 - p33) / (p11 + p33) if p11 + p33 > 0 else 0.0
    s1 = (p11 + p33) * _binary_entropy_of_split(lam_)
    lam_p = math.sqrt((p11 + p22 - p33) ** 2 + 4.0 * c23**2)
    s2 = _binary_entropy_of_split(lam_p)
    return _clamp_discord(s_b + base + min(s1, s2))


def infer_x_variant(rho) -> str:
    """Classify an X state as 'psi'-like (corner coherence) or 'phi'-like."""
    rho = _as_matrix(rho)
    if abs(rho[1, 2]) <= 1e-12 and rho[3, 3].real >= 1e-12:
        return "psi"
    if abs(rho[0, 3]) <= 1e-12 and rho[3, 3].real < 1e-12:
        return "phi"
    if abs(rho[0, 3]) > 1e-12:
        return "psi"
    return "phi"


@dataclass(frozen=True)
class CorrelationValues:
    """All correlation measures of one state, in bits (concurrence unitless)."""

    concurrence: float
    mutual_info: float
    classical_corr: float
    discord: float
    discord_method: str


def correlation_values(rho, *, discord_method: str = "variational",
                       grid: int = 64) -> CorrelationValues:
    """Bundle concurrence, mutual information, classical correlation and discord.

    ``discord_method='analytic'`` requires an X state of one of the two
    supported families; the classical correlation is then derived as
    mutual_info - discord, so the identity D = I - Q holds exactly for
    either method.
    """
    rho = _as_matrix(rho)
    c = concurrence(rho)
    info = mutual_information(rho)
    if discord_method == "variational":
        q, _ = classical_correlation(rho, grid=grid)
        d = _clamp_discord(info - q)
    elif discord_method == "analytic":
        variant = infer_x_variant(rho)
        d = discord_psi_analytic(rho) if variant == "psi" else discord_phi_analytic(rho)
        q = max(0.0, info - d)
    else:
        raise ValueError(f"unknown discord method {discord_method!r}")
    return CorrelationValues(concurrence=c, mutual_info=info, classical_corr=q,
                             discord=d, discord_method=discord_method)
