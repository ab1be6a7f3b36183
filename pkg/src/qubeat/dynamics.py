"""Two-qubit state evolution from the per-qubit survival amplitudes.

Each qubit undergoes the exact amplitude-damping-with-phase map

    rho_ee -> |g|^2 rho_ee,   rho_gg -> rho_gg + (1-|g|^2) rho_ee,
    rho_eg -> g rho_eg,       rho_ge -> g* rho_ge,

with its own amplitude g.  For the two Bell-like initial families
supported here the joint state keeps an X-shaped 4x4 matrix whose
elements are written down directly (fast path).  The same evolution is
also available as a tensor composition of the one-qubit maps applied to
an arbitrary 4x4 initial state; the two routes are compared in tests to
guard against transcription errors.

Basis ordering: |00>, |01>, |10>, |11> with qubit A first and |1> the
excited state.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .exceptions import PhysicalityError

_AMP_TOL = 1e-9
_NORM_TOL = 1e-12


@dataclass(frozen=True)
class InitialState:
    """Bell-like two-qubit initial state.

    variant 'psi':  amp1|00> + amp2 e^{i phase}|11>
    variant 'phi':  amp1|01> + amp2 e^{i phase}|10>

    Amplitudes are nonnegative reals with amp1^2 + amp2^2 = 1.
    """

    variant: str
    amp1: float
    amp2: float
    phase: float = 0.0

    def __post_init__(self):
        if self.variant not in ("psi", "phi"):
            raise ValueError(f"variant must be 'psi' or 'phi', got {self.variant!r}")
        if self.amp1 < 0 or self.amp2 < 0:
            raise ValueError("amplitudes must be nonnegative")
        norm = self.amp1**2 + self.amp2**2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state not normalized: amp1^2+amp2^2 = {norm:.15g}")

    @classmethod
    def psi(cls, amp1: float, amp2: float, phase: float = 0.0) -> "InitialState":
        return cls("psi", amp1, amp2, phase)

    @classmethod
    def phi(cls, amp1: float, amp2: float, phase: float = 0.0) -> "InitialState":
        return cls("phi", amp1, amp2, phase)

    @classmethod
    def bell_psi(cls, phase: float = 0.0) -> "InitialState":
        r = 1.0 / np.sqrt(2.0)
        return cls("psi", r, r, phase)

    @classmethod
    def bell_phi(cls, phase: float = 0.0) -> "InitialState":
        r = 1.0 / np.sqrt(2.0)
        return cls("phi", r, r, phase)

    def vector(self) -> np.ndarray:
        """State vector in the product basis."""
        v = np.zeros(4, dtype=complex)
        w = self.amp2 * cmath.exp(1j * self.phase)
        if self.variant == "psi":
            v[0] = self.amp1
            v[3] = w
        else:
            v[1] = self.amp1
            v[2] = w
        return v

    def projector(self) -> np.ndarray:
        v = self.vector()
        return np.outer(v, v.conj())


@dataclass
class EvolvedState:
    """Joint density matrix at one instant, with the amplitudes that built it."""

    rho: np.ndarray
    g_a: complex
    g_b: complex
    t: float = 0.0


def _check_amplitude(g: complex, name: str) -> complex:
    g = complex(g)
    if abs(g) > 1.0 + _AMP_TOL:
        raise PhysicalityError(f"|{name}| = {abs(g):.12g} exceeds 1")
    return g


def single_qubit_map(rho2, g: complex) -> np.ndarray:
    """Exact one-qubit decay map applied to a 2x2 density matrix."""
    g = _check_amplitude(g, "g")
    rho2 = np.asarray(rho2, dtype=complex)
    if rho2.shape != (2, 2):
        raise ValueError("single_qubit_map expects a 2x2 matrix")
    tr = np.trace(rho2)
    if abs(tr - 1.0) > 1e-9 or np.max(np.abs(rho2 - rho2.conj().T)) > 1e-9:
        raise PhysicalityError("input is not a valid qubit density matrix")
    return _decay_map_linear(rho2, g)


def _decay_map_linear(rho2: np.ndarray, g: complex) -> np.ndarray:
    """The same map as a plain linear action, without density-matrix validation."""
    g2 = abs(g) ** 2
    out = np.empty((2, 2), dtype=complex)
    out[1, 1] = g2 * rho2[1, 1]
    out[0, 0] = rho2[0, 0] + (1.0 - g2) * rho2[1, 1]
    out[1, 0] = g * rho2[1, 0]
    out[0, 1] = np.conj(g) * rho2[0, 1]
    return out


def _decay_superoperator(g: complex) -> np.ndarray:
    """Superoperator tensor S[i,j,k,l]: output_ij = sum_kl S[i,j,k,l] input_kl."""
    s = np.zeros((2, 2, 2, 2), dtype=complex)
    for k in range(2):
        for l in range(2):
            basis = np.zeros((2, 2), dtype=complex)
            basis[k, l] = 1.0
            s[:, :, k, l] = _decay_map_linear(basis, g)
    return s


def tensor_evolve(rho0, g_a: complex, g_b: complex) -> np.ndarray:
    """Apply the one-qubit decay maps to both slots of an arbitrary 4x4 state.

    Independent slow-path oracle for the direct element formulas below;
    accepts any initial density matrix, not only the Bell-like families.
    """
    g_a = _check_amplitude(g_a, "g_a")
    g_b = _check_amplitude(g_b, "g_b")
    r = np.asarray(rho0, dtype=complex).reshape(2, 2, 2, 2)  # [a, b, a', b']
    sa = _decay_superoperator(g_a)
    sb = _decay_superoperator(g_b)
    out = np.einsum("axcz,bydw,cdzw->abxy", sa, sb, r)
    return out.reshape(4, 4)


def evolve_psi(state: InitialState, g_a: complex, g_b: complex, t: float = 0.0) -> EvolvedState:
    """Evolved state for the amp1|00> + amp2 e^{i phase}|11> family.

    Nonzero elements (a = amp1, b = amp2, gX2 = |g_X|^2):
        rho11 = a^2 + (1-gA2)(1-gB2) b^2        rho22 = (1-gA2) gB2 b^2
        rho33 = gA2 (1-gB2) b^2                 rho44 = gA2 gB2 b^2
        rho14 = conj(g_a) conj(g_b) a b e^{-i phase},  rho41 = conj(rho14)
    """
    if state.variant != "psi":
        raise ValueError("evolve_psi requires a 'psi' variant state")
    g_a = _check_amplitude(g_a, "g_a")
    g_b = _check_amplitude(g_b, "g_b")
    a, b, theta = state.amp1, state.amp2, state.phase
    ga2, gb2 = abs(g_a) ** 2, abs(g_b) ** 2
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = a * a + (1.0 - ga2) * (1.0 - gb2) * b * b
    rho[1, 1] = (1.0 - ga2) * gb2 * b * b
    rho[2, 2] = ga2 * (1.0 - gb2) * b * b
    rho[3, 3] = ga2 * gb2 * b * b
    rho[0, 3] = np.conj(g_a) * np.conj(g_b) * a * b * cmath.exp(-1j * theta)
    rho[3, 0] = np.conj(rho[0, 3])
    return EvolvedState(rho=rho, g_a=g_a, g_b=g_b, t=t)


def evolve_phi(state: InitialState, g_a: complex, g_b: complex, t: float = 0.0) -> EvolvedState:
    """Evolved state for the amp1|01> + amp2 e^{i phase}|10> family.

    Nonzero elements (al = amp1, be = amp2):
        rho11 = (1-gB2) al^2 + (1-gA2) be^2     rho22 = al^2 gB2
        rho33 = be^2 gA2
        rho23 = al be e^{-i phase} conj(g_a) g_b,  rho32 = conj(rho23)
    """
    if state.variant != "phi":
        raise ValueError("evolve_phi requires a 'phi' variant state")
    g_a = _check_amplitude(g_a, "g_a")
    g_b = _check_amplitude(g_b, "g_b")
    al, be, delta = state.amp1, state.amp2, state.phase
    ga2, gb2 = abs(g_a) ** 2, abs(g_b) ** 2
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = (1.0 - gb2) * al * al + (1.0 - ga2) * be * be
    rho[1, 1] = al * al * gb2
    rho[2, 2] = be * be * ga2
    rho[1, 2] = al * be * cmath.exp(-1j * delta) * np.conj(g_a) * g_b
    rho[2, 1] = np.conj(rho[1, 2])
    return EvolvedState(rho=rho, g_a=g_a, g_b=g_b, t=t)


def evolve(state: InitialState, g_a: complex, g_b: complex, t: float = 0.0) -> EvolvedState:
    """Dispatch to the matching family."""
    if state.variant == "psi":
        return evolve_psi(state, g_a, g_b, t)
    return evolve_phi(state, g_a, g_b, t)
