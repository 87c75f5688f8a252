"""From Josephson-circuit parameters to the dressed refrigerator model.

Pipeline: circuit parameters -> stationary point of each rf-SQUID potential
-> cubic-well parameters -> truncated-basis spectra -> second-order
three-body coupling g~ and diagonal shifts D -> RefrigeratorModel.

Units: capacitance fF, inductance nH, Josephson energy and all other
energies in GHz (E/h), phases in radians (external flux in units of
Phi0/2pi).  The conjugate momentum of the phase is the Cooper-pair number,
so with hbar = 1 the "mass" is 1/(8 E_C) and frequencies come out in GHz.
"""

import math
import warnings
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np
from scipy import constants
from scipy.optimize import brentq

from qfridge.errors import ConfigError, NumericalError, RegimeError
from qfridge.model import CouplingSpec, QubitSpec, RefrigeratorModel

# (Phi0/2pi)^2 / (h * 1 nH) in GHz
FLUX_ENERGY_GHZ_NH = (constants.hbar / (2 * constants.e)) ** 2 / (constants.h * 1e-9) / 1e9
# e^2 / (2 h * 1 fF) in GHz
CHARGING_ENERGY_GHZ_FF = constants.e**2 / (2 * constants.h * 1e-15) / 1e9

MIN_BOUND_LEVELS = 3.0
N_LEVELS = 4
MAX_BASIS = 200
CONVERGENCE_TOL = 1e-8
RESONANCE_TOL = 1e-3
DEGENERACY_FLOOR = 1e-6


@dataclass(frozen=True)
class JunctionLoop:
    """One rf-SQUID: junction capacitance, Josephson energy, loop inductance, bias.

    ``phi_guess`` selects which local minimum of the multi-well potential is
    the working well; the minimum nearest to it (default: ``phi_ext``) wins.
    """

    capacitance: float
    ej: float
    inductance: float
    phi_ext: float
    phi_guess: float | None = None

    def __post_init__(self):
        for name in ("capacitance", "inductance"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be positive, got {value}")
        if not (math.isfinite(self.ej) and self.ej >= 0):
            raise ConfigError(f"ej must be non-negative, got {self.ej}")
        if not math.isfinite(self.phi_ext):
            raise ConfigError(f"phi_ext must be finite, got {self.phi_ext}")

    @property
    def charging_energy(self):
        return CHARGING_ENERGY_GHZ_FF / self.capacitance

    @property
    def inductive_energy(self):
        return FLUX_ENERGY_GHZ_NH / self.inductance


@dataclass(frozen=True)
class CircuitParams:
    loops: tuple
    coil_self: float
    coil_mutual: float

    def __post_init__(self):
        object.__setattr__(self, "loops", tuple(self.loops))
        if len(self.loops) != 3:
            raise ConfigError(f"expected three loops, got {len(self.loops)}")
        if not (self.coil_self > self.coil_mutual >= 0):
            raise ConfigError(
                f"coil inductances need L_M > M >= 0, got L_M={self.coil_self}, M={self.coil_mutual}"
            )


@dataclass(frozen=True)
class CubicWellParams:
    """Harmonic-plus-cubic expansion of one qubit around its stable point."""

    phi_sta: float
    curvature: float
    charging_energy: float
    lam: float
    mass: float = field(init=False)
    omega: float = field(init=False)
    x_zpf: float = field(init=False)

    def __post_init__(self):
        if not self.curvature > 0:
            raise RegimeError(f"not a minimum: curvature {self.curvature:.6g} <= 0")
        object.__setattr__(self, "mass", 1.0 / (8.0 * self.charging_energy))
        object.__setattr__(self, "omega", math.sqrt(8.0 * self.charging_energy * self.curvature))
        object.__setattr__(self, "x_zpf", (2.0 * self.charging_energy / self.curvature) ** 0.25)

    @classmethod
    def from_oscillator(cls, omega, lam, x_zpf=1.0, phi_sta=0.0):
        """Build from frequency, cubic coefficient and zero-point spread directly."""
        charging = omega * x_zpf**2 / 4.0
        return cls(phi_sta=phi_sta, curvature=omega / (2.0 * x_zpf**2),
                   charging_energy=charging, lam=lam)

    @property
    def kappa(self):
        """Dimensionless cubic strength lam * x_zpf^3 / omega."""
        return self.lam * self.x_zpf**3 / self.omega

    @property
    def barrier(self):
        """Height of the cubic barrier k^3 / (54 lam^2), GHz."""
        if self.lam == 0:
            return math.inf
        return self.curvature**3 / (54.0 * self.lam**2)

    @property
    def bound_levels(self):
        return self.barrier / self.omega


def coupling_coefficient(coil_self, coil_mutual):
    """Prefactor K of [sum phi^2/2 - sum phi_a phi_b] in GHz.

    K = (Phi0/2pi)^2 (L_M + M) / ((L_M + 2M)(L_M - M)).
    """
    if not coil_self > coil_mutual >= 0:
        raise ConfigError(f"need L_M > M >= 0, got L_M={coil_self}, M={coil_mutual}")
    if coil_self - coil_mutual < 1e-6 * coil_self:
        raise ConfigError(f"M={coil_mutual} too close to L_M={coil_self}: coupling diverges")
    return FLUX_ENERGY_GHZ_NH * (coil_self + coil_mutual) / (
        (coil_self + 2 * coil_mutual) * (coil_self - coil_mutual)
    )


def _potential_derivs(loop, k_coil, bias):
    el = loop.inductive_energy

    def d1(phi):
        return loop.ej * math.sin(phi) + el * (phi - loop.phi_ext) + k_coil * phi + bias

    def d2(phi):
        return loop.ej * math.cos(phi) + el + k_coil

    def d3(phi):
        return -loop.ej * math.sin(phi)

    return d1, d2, d3


def _find_minimum(loop, k_coil, bias, n_grid=8001):
    d1, d2, _ = _potential_derivs(loop, k_coil, bias)
    center = loop.phi_ext if loop.phi_guess is None else loop.phi_guess
    grid = np.linspace(center - 2 * math.pi, center + 2 * math.pi, n_grid)
    vals = np.array([d1(p) for p in grid])
    crossings = np.nonzero((vals[:-1] < 0) & (vals[1:] >= 0))[0]
    if crossings.size == 0:
        raise RegimeError(f"no potential minimum within 2 pi of phi={center:.6g}")
    roots = []
    for i in crossings:
        if vals[i + 1] == 0:
            roots.append(grid[i + 1])
        else:
            roots.append(brentq(d1, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    phi = min(roots, key=lambda r: abs(r - center))
    # Newton polish; brentq already brackets to machine precision
    for _ in range(3):
        curv = d2(phi)
        if curv <= 0:
            break
        phi -= d1(phi) / curv
    return phi


def find_working_point(circuit, site, bias=0.0):
    """Stable point and cubic expansion of qubit ``site`` (1-based).

    The single-qubit potential is
    U(phi) = -E_J cos(phi) + (E_L/2)(phi - phi_ext)^2 + K phi^2/2 + bias*phi,
    where ``bias`` carries the linear pull of the other qubits through the
    coupling block (see :func:`find_working_points`).
    """
    loop = circuit.loops[site - 1]
    k_coil = coupling_coefficient(circuit.coil_self, circuit.coil_mutual)
    phi = _find_minimum(loop, k_coil, bias)
    d1, d2, d3 = _potential_derivs(loop, k_coil, bias)
    scale = loop.ej + loop.inductive_energy + k_coil
    if abs(d1(phi)) > 1e-12 * scale * max(1.0, abs(phi)):
        raise NumericalError(f"stationary point not converged: U'={d1(phi):.3e}")
    well = CubicWellParams(
        phi_sta=phi,
        curvature=d2(phi),
        charging_energy=loop.charging_energy,
        lam=-d3(phi) / 6.0,
    )
    if well.bound_levels < MIN_BOUND_LEVELS:
        raise RegimeError(
            f"qubit {site}: cubic barrier holds only {well.bound_levels:.2f} levels "
            f"(need >= {MIN_BOUND_LEVELS:g})"
        )
    return well


def find_working_points(circuit, max_iter=200, tol=1e-14):
    """Joint stationary point of the three coupled potentials.

    The cross terms -K phi_a phi_b shift each qubit's minimum linearly in
    the others' phases; the three single-qubit problems are iterated to
    self-consistency so the expansion point is a true minimum of the full
    potential and no linear terms survive in the coupled Hamiltonian.
    """
    k_coil = coupling_coefficient(circuit.coil_self, circuit.coil_mutual)
    if circuit.coil_mutual < 0.01 * circuit.coil_self:
        warnings.warn(
            "M < 0.01 L_M: the coil coupling prefactor does not vanish as M -> 0",
            stacklevel=2,
        )
    wells = [find_working_point(circuit, s) for s in (1, 2, 3)]
    for _ in range(max_iter):
        phis = [w.phi_sta for w in wells]
        new = [
            find_working_point(circuit, s, bias=-k_coil * (sum(phis) - phis[s - 1]))
            for s in (1, 2, 3)
        ]
        delta = max(abs(a.phi_sta - b.phi_sta) for a, b in zip(new, wells))
        wells = new
        if delta <= tol * max(1.0, max(abs(p) for p in phis)):
            break
    else:
        raise NumericalError("coupled working point did not converge")
    hessian = np.diag([w.curvature for w in wells]) - k_coil * (np.ones((3, 3)) - np.eye(3))
    if np.linalg.eigvalsh(hessian)[0] <= 0:
        raise RegimeError("coupled stationary point is not a minimum of the full potential")
    return tuple(wells), -k_coil


@dataclass(frozen=True)
class AnharmonicQubit:
    """Lowest levels of one cubic well and the phase operator between them.

    ``levels`` are absolute energies (GHz) including the zero-point term;
    ``x`` holds <m|x|n> in radians.
    """

    omega: float
    levels: np.ndarray
    x: np.ndarray
    n_basis: int
    e10_change: float

    @property
    def e10(self):
        return float(self.levels[1] - self.levels[0])

    @property
    def anharmonic_ratio(self):
        return self.e10 / self.omega

    @property
    def gaps(self):
        return self.levels - self.levels[0]


def _ladder(n_basis):
    return np.diag(np.sqrt(np.arange(1, n_basis, dtype=float)), 1)


def _diagonalize(well, n_basis, n_levels):
    a = _ladder(n_basis)
    q = a + a.T
    h = well.omega * np.diag(np.arange(n_basis) + 0.5) - well.lam * well.x_zpf**3 * (q @ q @ q)
    w, v = np.linalg.eigh(h)
    # metastable-well states: the eigenvector with most weight on harmonic |n>
    chosen = []
    for n in range(n_levels):
        weights = np.abs(v[n, :]) ** 2
        weights[chosen] = -1.0
        chosen.append(int(np.argmax(weights)))
    vecs = v[:, chosen]
    vecs = vecs * np.sign(vecs[np.arange(n_levels), np.arange(n_levels)])
    x = well.x_zpf * (vecs.T @ q @ vecs)
    return w[chosen], x


def anharmonic_spectrum(well, n_basis=60, n_levels=N_LEVELS):
    """Diagonalize omega (a^+ a + 1/2) - lam x^3 in a truncated number basis.

    The basis is doubled until E_10 changes by less than ``CONVERGENCE_TOL``
    relative; the reported levels come from the larger basis.  The cubic is
    unbounded, so the levels returned are the ones localized in the
    metastable well (largest overlap with the harmonic states).
    """
    if n_basis < 20:
        raise ConfigError(f"n_basis must be at least 20, got {n_basis}")
    levels, x = _diagonalize(well, n_basis, n_levels)
    n = n_basis
    while True:
        if n > MAX_BASIS:
            raise RegimeError(
                f"spectrum not converged up to n_basis={MAX_BASIS}; well too anharmonic"
            )
        levels2, x2 = _diagonalize(well, 2 * n, n_levels)
        e10, e10_2 = levels[1] - levels[0], levels2[1] - levels2[0]
        change = abs(e10_2 - e10) / abs(e10)
        if change < CONVERGENCE_TOL:
            return AnharmonicQubit(
                omega=well.omega, levels=levels2, x=x2, n_basis=2 * n, e10_change=change
            )
        levels, x, n = levels2, x2, 2 * n


@dataclass(frozen=True)
class EffectiveCoupling:
    g: float
    g_tilde: float
    g_tilde_signed: float
    g_tilde_reverse: float
    coupling: CouplingSpec
    shifts: dict


def _product_index(labels, n_levels):
    n1, n2, n3 = labels
    return (n1 * n_levels + n2) * n_levels + n3


def effective_coupling(qubits, g, resonance_tol=RESONANCE_TOL, degeneracy_floor=DEGENERACY_FLOOR):
    """Second-order effective Hamiltonian on the eight computational states.

    V = g (x1 x2 + x1 x3 + x2 x3) in the product eigenbasis of the lowest
    levels of each qubit.  Diagonal shifts are first order plus
    sum_k |V_ck|^2 / (E_c - E_k); the exchange element uses the symmetric
    denominator of the quasi-degenerate pair |010>, |101>.  D coefficients
    follow from the eight shifts by inclusion-exclusion.
    """
    n_lev = min(q.x.shape[0] for q in qubits)
    gaps = [q.gaps[:n_lev] for q in qubits]
    e1, e2, e3 = (gp[1] for gp in gaps)
    if abs(e1 + e3 - e2) > resonance_tol * e2:
        raise RegimeError(
            f"dressed gaps off resonance: E1 + E3 - E2 = {e1 + e3 - e2:.6g} GHz"
        )
    eye = np.eye(n_lev)
    xs = [q.x[:n_lev, :n_lev] for q in qubits]
    v = g * (
        np.kron(np.kron(xs[0], xs[1]), eye)
        + np.kron(np.kron(xs[0], eye), xs[2])
        + np.kron(np.kron(eye, xs[1]), xs[2])
    )
    labels = list(product(range(n_lev), repeat=3))
    energy = np.array([gaps[0][a] + gaps[1][b] + gaps[2][c] for a, b, c in labels])
    floor = degeneracy_floor * float(np.mean([q.omega for q in qubits]))

    ia = _product_index((0, 1, 0), n_lev)
    ib = _product_index((1, 0, 1), n_lev)
    pair = {ia, ib}

    v_tiny = 1e-12 * float(np.max(np.abs(v))) if v.size else 0.0

    def denominators(ref, skip):
        # degenerate states that V does not reach carry no term and are dropped
        d = energy[ref] - energy
        mask = np.ones(len(labels), dtype=bool)
        mask[list(skip)] = False
        near = mask & (np.abs(d) < floor)
        coupled = (np.abs(v[ref]) > v_tiny) | (np.abs(v[:, ref]) > v_tiny)
        bad = near & coupled
        mask &= ~near
        if bad.any():
            k = int(np.nonzero(bad)[0][0])
            raise RegimeError(
                f"accidental degeneracy between {labels[ref]} and {labels[k]} "
                f"(gap {d[k]:.3e} GHz)"
            )
        return d, mask

    shifts = {}
    for lab in product((0, 1), repeat=3):
        c = _product_index(lab, n_lev)
        d, mask = denominators(c, pair if c in pair else {c})
        second = np.sum(np.abs(v[c, mask]) ** 2 / d[mask])
        shifts[lab] = float(v[c, c].real + second)

    def exchange(n, m):
        dn, mask_n = denominators(n, pair)
        dm, mask_m = denominators(m, pair)
        mask = mask_n & mask_m
        return v[n, m] + np.sum(v[n, mask] * v[mask, m] * 0.5 * (1 / dn[mask] + 1 / dm[mask]))

    gt = float(exchange(ia, ib).real)
    gt_rev = float(exchange(ib, ia).real)

    s = shifts
    d = dict(
        d1=s[1, 0, 0] - s[0, 0, 0],
        d2=s[0, 1, 0] - s[0, 0, 0],
        d3=s[0, 0, 1] - s[0, 0, 0],
        d12=s[1, 1, 0] - s[1, 0, 0] - s[0, 1, 0] + s[0, 0, 0],
        d13=s[1, 0, 1] - s[1, 0, 0] - s[0, 0, 1] + s[0, 0, 0],
        d23=s[0, 1, 1] - s[0, 1, 0] - s[0, 0, 1] + s[0, 0, 0],
        d123=(
            s[1, 1, 1] - s[1, 1, 0] - s[1, 0, 1] - s[0, 1, 1]
            + s[1, 0, 0] + s[0, 1, 0] + s[0, 0, 1] - s[0, 0, 0]
        ),
    )
    return EffectiveCoupling(
        g=g,
        g_tilde=abs(gt),
        g_tilde_signed=gt,
        g_tilde_reverse=gt_rev,
        coupling=CouplingSpec(g_tilde=abs(gt), **d),
        shifts=shifts,
    )


@dataclass(frozen=True)
class AssembledModel:
    model: RefrigeratorModel
    wells: tuple
    spectra: tuple
    effective: EffectiveCoupling
    e2_nudge: float


def assemble_model(circuit, baths, n_basis=60, resonance_tol=RESONANCE_TOL):
    """Full derivation from circuit parameters and ``(gamma, temp)`` per bath.

    The dressed gap E2 is set to E1 + E3 exactly and the removed mismatch is
    moved into D2, so the spectrum of the computational states is unchanged
    while the bare energies satisfy exact resonance.
    """
    if len(baths) != 3:
        raise ConfigError(f"expected three baths, got {len(baths)}")
    wells, g = find_working_points(circuit)
    spectra = tuple(anharmonic_spectrum(w, n_basis=n_basis) for w in wells)
    eff = effective_coupling(spectra, g, resonance_tol=resonance_tol)
    e1, e2, e3 = (s.e10 for s in spectra)
    nudge = (e1 + e3) - e2
    coupling = eff.coupling
    if nudge != 0:
        if abs(nudge) > 1e-9 * e2:
            warnings.warn(
                f"E2 nudged by {nudge:.3e} GHz to enforce E1 + E3 = E2; absorbed into d2",
                stacklevel=2,
            )
        coupling = replace(coupling, d2=coupling.d2 - nudge)
    qubits = tuple(
        QubitSpec(energy=e, gamma=gamma, bath_temp=temp)
        for e, (gamma, temp) in zip((e1, e1 + e3, e3), baths)
    )
    model = RefrigeratorModel(qubits=qubits, coupling=coupling)
    return AssembledModel(model=model, wells=wells, spectra=spectra, effective=eff, e2_nudge=nudge)


def design_loop(target_e10, kappa, ej, inductance, k_coil, bias=0.0, n_basis=60, max_iter=50):
    """Solve for the capacitance and bias giving a dressed gap and cubic strength.

    The stable point is placed on the branch 0 < phi < phi_c where the
    cubic coefficient is positive; returns ``(JunctionLoop, CubicWellParams)``.
    ``bias`` is the linear pull of the other qubits at the design point.
    """
    el = FLUX_ENERGY_GHZ_NH / inductance
    if ej <= el + k_coil:
        raise ConfigError("ej must exceed E_L + K for a metastable well to exist")
    phi_lo = 1e-6
    phi_hi = math.acos(-(el + k_coil) / ej)

    def well_at(phi, omega):
        curv = ej * math.cos(phi) + el + k_coil
        charging = omega**2 / (8 * curv)
        return CubicWellParams(phi_sta=phi, curvature=curv, charging_energy=charging,
                               lam=ej * math.sin(phi) / 6)

    omega = target_e10
    for _ in range(max_iter):
        phi = brentq(lambda p: well_at(p, omega).kappa - kappa, phi_lo, phi_hi - 1e-12, xtol=1e-15)
        well = well_at(phi, omega)
        e10 = anharmonic_spectrum(well, n_basis=n_basis).e10
        if abs(e10 - target_e10) <= 1e-13 * target_e10:
            break
        omega *= target_e10 / e10
    phi_ext = phi + (ej * math.sin(phi) + k_coil * phi + bias) / el
    loop = JunctionLoop(
        capacitance=CHARGING_ENERGY_GHZ_FF / well.charging_energy,
        ej=ej,
        inductance=inductance,
        phi_ext=phi_ext,
        phi_guess=round(phi, 3),
    )
    return loop, well
