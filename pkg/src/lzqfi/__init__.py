"""Fisher information and optimal control for Landau-Zener type two-level dynamics."""

__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    AsymptoticValidityWarning,
    DriveParams,
    LZParams,
    asymptotic_final_state,
    cfi_closed_form,
    optimal_measurement_vectors,
    qfi_controlled,
    qfi_controlled_omega,
    qfi_delta_improved,
    qfi_leading,
    rwa_max_qfi,
)
from .control import ControlPlan, plan_for_delta, plan_for_omega, plan_for_v  # noqa: E402
from .dynamics import (  # noqa: E402
    Coefficient,
    EstimationProblem,
    HamiltonianSchedule,
    IntegrationError,
    PulseEvent,
    TwoLevelState,
    propagate,
    propagate_unitary,
    propagate_with_derivative,
)
from .fisher import (  # noqa: E402
    MeasurementBasis,
    cfi_projective,
    control_bound,
    max_qfi_over_initial_states,
    qfi_pure,
    sld_basis,
)
from .specfun import QuadratureError, eta1, log_gamma_complex, theta1  # noqa: E402
