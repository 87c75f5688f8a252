"""Exception hierarchy shared by the solver layers and the CLI.

Each class carries the process exit code the CLI uses when it escapes.
"""


class FridgeError(Exception):
    exit_code = 1


class ConfigError(FridgeError, ValueError):
    """Invalid input parameters or configuration documents."""

    exit_code = 2


class RegimeError(FridgeError):
    """Inputs outside the validity of the model (weak coupling, resonance, ...)."""

    exit_code = 3


class DegenerateSteadyStateError(RegimeError):
    pass


class NumericalError(FridgeError, ArithmeticError):
    """A solver produced a result that fails its own consistency checks."""

    exit_code = 4
