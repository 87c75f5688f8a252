"""Dressed three-qubit refrigerator model and its effective Hamiltonian.

Units: energies and rates are ordinary frequencies in GHz, temperatures in
mK, times in 1/GHz.  The master equation is written with these numbers
directly (hbar = 1 in frequency units), so the only unit conversion in the
package is ``KB_OVER_H`` below.
"""

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import constants

from qfridge import qop
from qfridge.errors import ConfigError, RegimeError

# k_B/h in GHz per mK (20.8366 GHz/K)
KB_OVER_H = constants.k / constants.h / 1e9 / 1e3

RESONANCE_TOL = 1e-9

# site index pairs used for the pair couplings, in field order d12, d13, d23
PAIRS = ((1, 2), (1, 3), (2, 3))


def reduced_beta(temp_mk):
    """Inverse temperature in 1/GHz."""
    return 1.0 / (KB_OVER_H * temp_mk)


def bose_occupation(energy, temp):
    """Bose factor N = 1/(exp(E/kT) - 1) for ``energy`` in GHz and ``temp`` in mK."""
    if not energy > 0 or not temp > 0:
        raise ConfigError(f"energy and temperature must be positive, got {energy}, {temp}")
    theta = energy * reduced_beta(temp)
    if theta > 700.0:
        # expm1 overflows near 709; N = exp(-theta) to double precision here
        return math.exp(-theta)
    return 1.0 / math.expm1(theta)


def bare_population(n):
    """Excited population N/(2N+1) of a qubit thermalized by its own bath."""
    if n < 0:
        raise ConfigError(f"occupation must be non-negative, got {n}")
    if math.isinf(n):
        return 0.5
    return n / (2.0 * n + 1.0)


@dataclass(frozen=True)
class QubitSpec:
    energy: float
    gamma: float
    bath_temp: float

    def __post_init__(self):
        for name in ("energy", "gamma", "bath_temp"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"qubit {name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class CouplingSpec:
    g_tilde: float = 0.0
    d1: float = 0.0
    d2: float = 0.0
    d3: float = 0.0
    d12: float = 0.0
    d13: float = 0.0
    d23: float = 0.0
    d123: float = 0.0

    def __post_init__(self):
        for name, value in self.as_dict().items():
            if not math.isfinite(value):
                raise ConfigError(f"coupling {name} must be finite, got {value}")
        if self.g_tilde < 0:
            raise ConfigError(f"g_tilde must be non-negative, got {self.g_tilde}")

    def as_dict(self):
        return {
            "g_tilde": self.g_tilde,
            "d1": self.d1,
            "d2": self.d2,
            "d3": self.d3,
            "d12": self.d12,
            "d13": self.d13,
            "d23": self.d23,
            "d123": self.d123,
        }

    @property
    def detuning(self):
        """E(|101>) - E(|010>) in the rotating frame: D1 - D2 + D3 + D13."""
        return self.d1 - self.d2 + self.d3 + self.d13


@dataclass(frozen=True)
class RefrigeratorModel:
    qubits: tuple
    coupling: CouplingSpec
    bose_n: tuple = field(init=False)
    beta: tuple = field(init=False)

    def __post_init__(self):
        if len(self.qubits) != 3:
            raise ConfigError(f"expected three qubits, got {len(self.qubits)}")
        object.__setattr__(self, "qubits", tuple(self.qubits))
        object.__setattr__(
            self, "bose_n", tuple(bose_occupation(q.energy, q.bath_temp) for q in self.qubits)
        )
        object.__setattr__(self, "beta", tuple(reduced_beta(q.bath_temp) for q in self.qubits))

    @property
    def energies(self):
        return tuple(q.energy for q in self.qubits)

    @property
    def gammas(self):
        return tuple(q.gamma for q in self.qubits)

    @property
    def temps(self):
        return tuple(q.bath_temp for q in self.qubits)

    def bare_populations(self):
        return tuple(bare_population(n) for n in self.bose_n)


def exchange_margin(model):
    """(b2 - b3) E3 - (b1 - b2) E1 in reduced units; positive when qubit 1 is cooled."""
    b1, b2, b3 = model.beta
    e1, _, e3 = model.energies
    return (b2 - b3) * e3 - (b1 - b2) * e1


def _small_ratio(x, max_den=10, tol=1e-9):
    frac = Fraction(x).limit_denominator(max_den)
    if frac.numerator == 0 or frac.numerator > max_den:
        return None
    if abs(float(frac) - x) <= tol * x:
        return frac
    return None


def build_model(qubits, coupling=None, resonance_tol=RESONANCE_TOL):
    """Validate the resonance E1 + E3 = E2 and precompute bath factors.

    Non-positive bath parameters surface as ConfigError from the specs;
    a resonance mismatch beyond ``resonance_tol`` (relative to E2) raises
    RegimeError.
    """
    qubits = tuple(q if isinstance(q, QubitSpec) else QubitSpec(**q) for q in qubits)
    if coupling is None:
        coupling = CouplingSpec()
    elif not isinstance(coupling, CouplingSpec):
        coupling = CouplingSpec(**coupling)
    if len(qubits) != 3:
        raise ConfigError(f"expected three qubits, got {len(qubits)}")
    e1, e2, e3 = (q.energy for q in qubits)
    mismatch = abs(e2 - (e1 + e3))
    if mismatch > resonance_tol * e2:
        raise RegimeError(
            f"resonance E1 + E3 = E2 violated: |{e2} - ({e1} + {e3})| = {mismatch:.3e}"
        )
    ratio = _small_ratio(e1 / e3)
    if ratio is not None:
        warnings.warn(
            f"E1/E3 = {ratio} is a ratio of small integers; the energies are not incommensurable",
            stacklevel=2,
        )
    return RefrigeratorModel(qubits=qubits, coupling=coupling)


def diagonal_shift(coupling, label):
    """Rotating-frame energy of basis state ``label`` from the D coefficients."""
    n1, n2, n3 = label
    c = coupling
    return (
        c.d1 * n1
        + c.d2 * n2
        + c.d3 * n3
        + c.d12 * n1 * n2
        + c.d13 * n1 * n3
        + c.d23 * n2 * n3
        + c.d123 * n1 * n2 * n3
    )


def build_h_eff(model):
    """Effective Hamiltonian in the frame rotating with the bare energies.

    The bare terms E_a n_a commute with the resonant exchange and are
    dropped; only the D shifts and the |010> <-> |101> coupling remain.
    """
    c = model.coupling
    h = np.diag([diagonal_shift(c, lab) for lab in qop.basis_labels()]).astype(complex)
    i, j = qop.basis_index(0, 1, 0), qop.basis_index(1, 0, 1)
    h[i, j] = c.g_tilde
    h[j, i] = c.g_tilde
    return h


def bare_hamiltonian(model):
    """Sum of E_a n_a, used as the energy observable for heat currents."""
    return sum(e * qop.number(s) for s, e in enumerate(model.energies, start=1))


def canonical_model():
    """Default scenario: E = (2, 12, 10) GHz, T = (50, 150, 300) mK."""
    qubits = (
        QubitSpec(energy=2.0, gamma=1e-3, bath_temp=50.0),
        QubitSpec(energy=12.0, gamma=1e-3, bath_temp=150.0),
        QubitSpec(energy=10.0, gamma=1e-3, bath_temp=300.0),
    )
    return build_model(qubits, CouplingSpec(g_tilde=0.01))
