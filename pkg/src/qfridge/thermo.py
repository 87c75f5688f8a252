"""Cooling condition, heat currents, efficiency and entropy production.

Bath roles are fixed: qubit 1 is the target (cold, T_C), qubit 2 the
refrigerator (T_R) and qubit 3 the engine (hot, T_H).
"""

import math
import warnings
from dataclasses import dataclass

from qfridge.analytic import current_j, steady_populations
from qfridge.errors import RegimeError
from qfridge.model import KB_OVER_H, exchange_margin


class NotCoolingError(RegimeError):
    """Efficiency requested outside the cooling regime."""


class PopulationInversionError(RegimeError):
    """Population >= 1/2: no positive effective temperature exists."""


@dataclass(frozen=True)
class ThermoReport:
    cooling: bool
    cooling_margin: float
    q: tuple
    efficiency: float | None
    efficiency_bound: float | None
    t_eff: tuple
    entropy_rate: float
    current_j: float


def cooling_condition(model):
    """Return ``(cooling, margin)`` with margin = (b2 - b3) E3 - (b1 - b2) E1."""
    t1, t2, t3 = model.temps
    if not t1 < t2 < t3:
        warnings.warn(
            f"bath temperatures {model.temps} are not ordered T1 < T2 < T3", stacklevel=2
        )
    margin = float(exchange_margin(model))
    return margin > 0, margin


def heat_currents_analytic(model, j=None):
    """Q_a = (-1)^a J E_a for a = 1, 2, 3 (positive: heat into the qubits)."""
    if j is None:
        j = current_j(model)
    return tuple((-1) ** a * j * e for a, e in enumerate(model.energies, start=1))


def carnot_bound(t_cold, t_room, t_hot):
    """(1 - T_R/T_H) / (T_R/T_C - 1); infinite when T_R = T_C."""
    denom = t_room / t_cold - 1.0
    if denom == 0:
        return math.inf
    return (1.0 - t_room / t_hot) / denom


def efficiency(model):
    """Coefficient of performance Q_C/Q_H = E1/E3 and its three-bath bound."""
    margin = exchange_margin(model)
    if not margin > 0:
        raise NotCoolingError(f"not in the cooling regime (margin {margin:.6g})")
    e1, _, e3 = model.energies
    return e1 / e3, carnot_bound(*model.temps)


def effective_temperature(energy, p):
    """Temperature (mK) of a two-level Gibbs state with excited population ``p``."""
    if p >= 0.5:
        raise PopulationInversionError(
            f"population {p} >= 1/2 has no positive effective temperature"
        )
    if p <= 0:
        raise RegimeError(f"population must be positive, got {p}")
    return energy / (KB_OVER_H * math.log((1.0 - p) / p))


def entropy_production(model, q=None):
    """sigma = -sum_a Q_a b_a, in 1/GHz * GHz^2 = GHz."""
    if q is None:
        q = heat_currents_analytic(model)
    return -sum(qa * b for qa, b in zip(q, model.beta))


def effective_temperatures(model, pops):
    out = []
    for e, p in zip(model.energies, pops):
        try:
            out.append(effective_temperature(e, p))
        except PopulationInversionError:
            out.append(math.inf)
    return tuple(out)


def thermo_report(model, pops=None):
    """Full thermodynamic summary from the analytic steady state.

    ``pops`` defaults to the closed-form populations; pass numeric ones to
    report effective temperatures of a solver steady state instead.
    """
    if pops is None:
        pops = steady_populations(model).populations
    j = current_j(model)
    cooling, margin = cooling_condition(model)
    q = heat_currents_analytic(model, j)
    eta = eta_max = None
    if cooling:
        eta, eta_max = efficiency(model)
    return ThermoReport(
        cooling=cooling,
        cooling_margin=margin,
        q=q,
        efficiency=eta,
        efficiency_bound=eta_max,
        t_eff=effective_temperatures(model, pops),
        entropy_rate=entropy_production(model, q),
        current_j=j,
    )
