"""Closed-form steady state of the refrigerator master equation.

With M_a = G_a (2 N_a + 1) the steady populations are

    <n_a> = N_a / (2 N_a + 1) + s_a J / (2 M_a),   s = (+1, -1, +1),

where J = i<dv> = -xi (N1 N3 - N2 - N1 N2 - N2 N3) and
xi = g~^2 G / (X1 + g~^2 (X2 + X3)).  J is kept real throughout; <dv>
itself (purely imaginary) is never formed.
"""

import math
from dataclasses import dataclass

from qfridge.errors import NumericalError, RegimeError
from qfridge.model import exchange_margin

POPULATION_SIGNS = (1.0, -1.0, 1.0)


@dataclass(frozen=True)
class ClosureRates:
    m1: float
    m2: float
    m3: float
    b_total: float
    a_detuning: float
    g_poly: float
    x1_poly: float
    x2_poly: float
    x3_poly: float
    xi: float

    @property
    def m(self):
        return (self.m1, self.m2, self.m3)


@dataclass(frozen=True)
class AnalyticSteadyState:
    populations: tuple
    current_j: float
    rates: ClosureRates


def closure_rates(model):
    g1, g2, g3 = model.gammas
    n1, n2, n3 = model.bose_n
    m1, m2, m3 = g1 * (2 * n1 + 1), g2 * (2 * n2 + 1), g3 * (2 * n3 + 1)
    b = m1 + m2 + m3
    a = model.coupling.detuning
    pair_product = (m1 + m2) * (m1 + m3) * (m2 + m3)

    g_poly = 4 * g1 * g2 * g3 * b * pair_product
    x1 = 2 * (1 + a**2 / b**2) * m1 * m2 * m3 * b**2 * pair_product
    x2 = (
        4 * m1 * m2 * m3
        + m1 * m2 * (m1 + m2)
        + m1 * m3 * (m1 + m3)
        + m2 * m3 * (m2 + m3)
    ) * pair_product
    x3 = (
        -g1 * g2 * m1 * m2 * (m1 + m2) * (m1 + m2 + 2 * m3)
        + g1 * g3 * m1 * m3 * (m1 + m3) * (m1 + 2 * m2 + m3)
        - g2 * g3 * m2 * m3 * (m2 + m3) * (2 * m1 + m2 + m3)
    )

    gt2 = model.coupling.g_tilde ** 2
    denom = x1 + gt2 * (x2 + x3)
    if not denom > 0:
        raise NumericalError(f"closure denominator X1 + g~^2 (X2 + X3) = {denom:.3e} is not positive")
    return ClosureRates(
        m1=m1, m2=m2, m3=m3,
        b_total=b,
        a_detuning=a,
        g_poly=g_poly,
        x1_poly=x1,
        x2_poly=x2,
        x3_poly=x3,
        xi=gt2 * g_poly / denom,
    )


def occupation_imbalance(model):
    """N1 N3 - N2 - N1 N2 - N2 N3, positive exactly in the cooling regime.

    On resonance this equals N2 (1 + N1)(1 + N3) expm1(margin) with
    margin = (b2 - b3) E3 - (b1 - b2) E1; that form is used because it
    vanishes exactly at equal temperatures and carries the sign of the
    margin without cancellation.
    """
    n1, n2, n3 = model.bose_n
    return n2 * (1 + n1) * (1 + n3) * math.expm1(exchange_margin(model))


def current_j(model, rates=None):
    if rates is None:
        rates = closure_rates(model)
    return -rates.xi * occupation_imbalance(model)


def steady_populations(model):
    rates = closure_rates(model)
    j = current_j(model, rates)
    pops = tuple(
        n / (2 * n + 1) + sign * j / (2 * m)
        for n, m, sign in zip(model.bose_n, rates.m, POPULATION_SIGNS)
    )
    for site, p in enumerate(pops, start=1):
        if not 0.0 <= p <= 1.0:
            raise RegimeError(f"population of qubit {site} is {p:.6g}, outside [0, 1]")
    return AnalyticSteadyState(populations=pops, current_j=j, rates=rates)
