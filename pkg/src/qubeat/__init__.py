"""qubeat: exact non-Markovian dynamics and correlations of two qubits in lossy cavities."""

from .correlations import (
    CorrelationValues,
    MeasurementBasis,
    classical_correlation,
    concurrence,
    concurrence_phi,
    concurrence_psi,
    correlation_values,
    discord_phi_analytic,
    discord_psi_analytic,
    mutual_information,
    quantum_discord,
    spin_flipped,
)
from .dynamics import EvolvedState, InitialState, evolve, evolve_phi, evolve_psi, \
    single_qubit_map, tensor_evolve
from .exceptions import (
    ConvergenceError,
    OscillationError,
    PhysicalityError,
    QubeatError,
    StructureError,
)
from .linalg import (
    hermitian_eigensystem,
    matrix_sqrt_psd,
    partial_trace,
    von_neumann_entropy,
)
from .reservoir import (
    GAMMA0,
    AmplitudeTrace,
    ReservoirParams,
    TabulatedKernel,
    load_kernel_table,
    memory_kernel,
    save_kernel_table,
    spectral_density,
    survival_amplitude,
    tabulate_kernel,
    volterra_solve,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrace",
    "ConvergenceError",
    "CorrelationValues",
    "EvolvedState",
    "GAMMA0",
    "InitialState",
    "MeasurementBasis",
    "OscillationError",
    "PhysicalityError",
    "QubeatError",
    "ReservoirParams",
    "StructureError",
    "TabulatedKernel",
    "classical_correlation",
    "concurrence",
    "concurrence_phi",
    "concurrence_psi",
    "correlation_values",
    "discord_phi_analytic",
    "discord_psi_analytic",
    "evolve",
    "evolve_phi",
    "evolve_psi",
    "hermitian_eigensystem",
    "load_kernel_table",
    "matrix_sqrt_psd",
    "memory_kernel",
    "mutual_information",
    "partial_trace",
    "quantum_discord",
    "save_kernel_table",
    "single_qubit_map",
    "spectral_density",
    "spin_flipped",
    "survival_amplitude",
    "tabulate_kernel",
    "tensor_evolve",
    "von_neumann_entropy",
    "__version__",
]
