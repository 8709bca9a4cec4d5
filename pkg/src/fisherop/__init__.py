"""Classical Fisher information of pure-state measurement processes.

Probe, unitary dynamics and complete projective measurement are treated
together: the Fisher information is computed by three equivalent routes,
measurement bases and probes are optimized against it, and the SU(2)
interferometer results (NOON and phase states) are reproduced.
"""

__version__ = "0.1.0"

from fisherop.config import DEFAULT_TOLERANCES, Tolerances
from fisherop.exceptions import (
    DegenerateConfigurationError,
    DimensionError,
    NoInformationError,
    ValidationError,
)
from fisherop.quantum import (
    AmplitudeDecomposition,
    HermitianOperator,
    MeasurementBasis,
    PureState,
    decompose,
    eigendecompose,
    evolve,
)
from fisherop.fisher import (
    FisherOperator,
    FisherReport,
    analytic_probability_derivatives,
    fisher_from_distribution,
    fisher_information,
    fisher_operator,
    fisher_report,
    information_complement,
    seminorm,
    tau_angles,
    transformed_fisher_operator,
    variance_bound,
)
from fisherop.qubit import QubitScenario, c_coefficients, j_closed_form, optimal_qubit
from fisherop.optimize import OptimizerConfig, optimize_measurement, optimize_probe_and_measurement
from fisherop.estimation import EstimationExperiment, Scenario, cramer_rao_check
