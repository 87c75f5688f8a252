"""Three-qubit self-contained quantum refrigerator driven by current noise."""

from qfridge.analytic import closure_rates, current_j, steady_populations
from qfridge.errors import ConfigError, FridgeError, NumericalError, RegimeError
from qfridge.lindblad import (
    build_liouvillian,
    evolve,
    heat_current_numeric,
    numeric_observables,
    steady_state_nullspace,
)
from qfridge.model import (
    CouplingSpec,
    QubitSpec,
    RefrigeratorModel,
    bare_population,
    bose_occupation,
    build_h_eff,
    build_model,
    canonical_model,
)
from qfridge.thermo import (
    cooling_condition,
    effective_temperature,
    efficiency,
    entropy_production,
    heat_currents_analytic,
    thermo_report,
)

__version__ = "0.1.0"
