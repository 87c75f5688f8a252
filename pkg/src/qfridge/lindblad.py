"""Liouvillian of the three-qubit master equation, time evolution and steady state.

Each qubit couples to its own bath through the dissipator

    D_a rho = G_a (N_a + 1) [2 a rho a^+ - {a^+ a, rho}]
            + G_a N_a       [2 a^+ rho a - {a a^+, rho}]

with a the two-level lowering operator on site a.  Density matrices are
vectorized column-major, so ``vec(A rho B) = (B^T kron A) vec(rho)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from qfridge import qop
from qfridge.errors import ConfigError, DegenerateSteadyStateError, NumericalError
from qfridge.model import build_h_eff

SUPER_DIM = qop.DIM * qop.DIM

NULLSPACE_GAP = 1e-10
TRACE_ABORT = 1e-6
MAX_STEP_FACTOR = 0.1


def vec(rho):
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v):
    return np.asarray(v).reshape(qop.DIM, qop.DIM, order="F")


def _left(a):
    return np.kron(np.eye(qop.DIM), a)


def _right(b):
    return np.kron(b.T, np.eye(qop.DIM))


def _lindblad_term(c):
    """Superoperator of 2 c rho c^+ - {c^+ c, rho}."""
    cdc = qop.dagger(c) @ c
    return 2.0 * np.kron(c.conj(), c) - _left(cdc) - _right(cdc)


def dissipator_superoperator(model, site):
    gamma = model.gammas[site - 1]
    n = model.bose_n[site - 1]
    a = qop.lowering(site)
    return gamma * (n + 1.0) * _lindblad_term(a) + gamma * n * _lindblad_term(qop.dagger(a))


@dataclass(frozen=True)
class Liouvillian:
    matrix: np.ndarray

    def __call__(self, rho):
        return unvec(self.matrix @ vec(rho))

    @property
    def norm(self):
        """Max row-sum norm, used as the spectral scale for step control."""
        return float(np.max(np.sum(np.abs(self.matrix), axis=1)))


def build_liouvillian(model):
    h = build_h_eff(model)
    mat = -1j * (_left(h) - _right(h))
    for site in (1, 2, 3):
        mat = mat + dissipator_superoperator(model, site)
    return Liouvillian(matrix=mat)


def apply_dissipator(model, site, rho):
    """Matrix-form action of the dissipator of ``site`` on ``rho``."""
    gamma = model.gammas[site - 1]
    n = model.bose_n[site - 1]
    a = qop.lowering(site)
    ad = qop.dagger(a)
    emit = 2 * a @ rho @ ad - qop.anticommutator(ad @ a, rho)
    absorb = 2 * ad @ rho @ a - qop.anticommutator(a @ ad, rho)
    return gamma * (n + 1.0) * emit + gamma * n * absorb


def lindblad_rhs(model, rho):
    """Matrix-form right-hand side of the master equation."""
    h = build_h_eff(model)
    out = -1j * qop.commutator(h, rho)
    for site in (1, 2, 3):
        out = out + apply_dissipator(model, site, rho)
    return out


def populations(rho):
    """<n_a> for a = 1, 2, 3 from the diagonal of ``rho``."""
    diag = np.real(np.diagonal(rho))
    return tuple(
        float(sum(diag[i] for i, lab in enumerate(qop.basis_labels()) if lab[s]))
        for s in range(3)
    )


def steady_state_nullspace(liouvillian):
    """Unit-trace null vector of the Liouvillian.

    The smallest right singular vector is taken; the second-smallest singular
    value must exceed ``NULLSPACE_GAP`` relative to the largest, otherwise the
    steady state is not unique.
    """
    mat = liouvillian.matrix if isinstance(liouvillian, Liouvillian) else np.asarray(liouvillian)
    _, s, vh = np.linalg.svd(mat)
    if s[-2] <= NULLSPACE_GAP * s[0]:
        raise DegenerateSteadyStateError(
            f"steady state is not unique: second-smallest singular value {s[-2]:.3e}"
        )
    rho = qop.hermitize(unvec(vh[-1].conj()))
    rho = rho / np.trace(rho).real
    diag = qop.validate_density_matrix(rho)
    if diag.min_eigenvalue < -qop.POSITIVITY_TOL:
        raise NumericalError(
            f"steady state has a negative eigenvalue {diag.min_eigenvalue:.3e}"
        )
    return rho


@dataclass(frozen=True)
class EvolutionResult:
    final_state: np.ndarray
    times: np.ndarray
    populations: np.ndarray
    trace_deviation: np.ndarray
    min_eigenvalue: np.ndarray
    converged: bool
    steady_distance: float


def rk4_propagator(liouvillian, dt):
    """One classical RK4 step for the linear system d/dt v = L v, as a matrix."""
    hl = dt * liouvillian.matrix
    step = np.eye(SUPER_DIM, dtype=complex)
    term = np.eye(SUPER_DIM, dtype=complex)
    for k in range(1, 5):
        term = term @ hl / k
        step = step + term
    return step


def max_step(liouvillian):
    scale = liouvillian.norm
    return math.inf if scale == 0 else MAX_STEP_FACTOR / scale


def evolve(liouvillian, rho0, t_final, dt=None, stride=1, steady=None, tol=1e-6):
    """Fixed-step RK4 integration of vec(rho) with Hermitization after each step.

    ``dt`` defaults to the largest admissible step; it is then shrunk so an
    integer number of steps lands on ``t_final``.  Every ``stride``-th state
    (and the last) is sampled and validated.  ``steady`` is the reference for
    the convergence flag; if omitted it is computed from the nullspace
    (a degenerate nullspace leaves the distance NaN and the flag False).
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if not qop.validate_density_matrix(rho0).valid:
        raise ConfigError("initial state is not a valid density matrix")
    if t_final < 0:
        raise ConfigError(f"t_final must be non-negative, got {t_final}")
    limit = max_step(liouvillian)
    if dt is None:
        dt = min(limit, t_final) if t_final > 0 else 1.0
    if dt <= 0 or dt > limit * (1 + 1e-12):
        raise ConfigError(f"dt={dt} outside (0, {limit:.6g}] set by the Liouvillian scale")
    n_steps = max(1, math.ceil(t_final / dt - 1e-9)) if t_final > 0 else 0
    if n_steps:
        dt = t_final / n_steps
    prop = rk4_propagator(liouvillian, dt) if n_steps else None
    diag_idx = np.arange(qop.DIM) * (qop.DIM + 1)

    times, pops, tdev, meig = [], [], [], []

    def sample(step, rho):
        d = qop.validate_density_matrix(rho)
        if not d.valid:
            raise NumericalError(
                f"invalid state at t={step * dt:.6g}: trace dev {d.trace_deviation:.2e}, "
                f"hermiticity {d.hermiticity_deviation:.2e}, min eig {d.min_eigenvalue:.2e}"
            )
        times.append(step * dt)
        pops.append(populations(rho))
        tdev.append(d.trace_deviation)
        meig.append(d.min_eigenvalue)

    v = vec(rho0)
    sample(0, rho0)
    for step in range(1, n_steps + 1):
        v = prop @ v
        r = unvec(v)
        v = vec(0.5 * (r + r.conj().T))
        if abs(v[diag_idx].sum() - 1.0) > TRACE_ABORT:
            raise NumericalError(f"trace drifted beyond {TRACE_ABORT} at step {step}; reduce dt")
        if step % stride == 0 or step == n_steps:
            sample(step, unvec(v))

    final = unvec(v).copy()
    if steady is None:
        try:
            steady = steady_state_nullspace(liouvillian)
        except DegenerateSteadyStateError:
            steady = None
    dist = math.nan if steady is None else qop.trace_distance(final, steady)
    return EvolutionResult(
        final_state=final,
        times=np.array(times),
        populations=np.array(pops),
        trace_deviation=np.array(tdev),
        min_eigenvalue=np.array(meig),
        converged=dist <= tol,
        steady_distance=dist,
    )


@dataclass(frozen=True)
class NumericObservables:
    populations: tuple
    pair_moments: dict
    triple_moment: float
    current_j: float


def exchange_operator():
    """a1 a2^+ a3 = |010><101|."""
    return qop.lowering(1) @ qop.raising(2) @ qop.lowering(3)


def numeric_observables(model, rho):
    """Moments of the number operators and J = i<dv> from a density matrix."""
    n = [qop.number(s) for s in (1, 2, 3)]
    pops = tuple(qop.expectation(rho, n[s]).real for s in range(3))
    pairs = {
        (i, j): qop.expectation(rho, n[i - 1] @ n[j - 1]).real for i, j in ((1, 2), (1, 3), (2, 3))
    }
    triple = qop.expectation(rho, n[0] @ n[1] @ n[2]).real
    dv = model.coupling.g_tilde * qop.expectation(rho, exchange_operator())
    j = 1j * (dv - dv.conjugate())
    if abs(j.imag) > 1e-10:
        raise NumericalError(f"current has an imaginary part {j.imag:.3e}")
    return NumericObservables(
        populations=pops, pair_moments=pairs, triple_moment=triple, current_j=float(j.real)
    )


def heat_current_numeric(model, rho, site):
    """Tr[E_a n_a D_a rho]: heat flowing from bath ``site`` into the qubits."""
    e = model.energies[site - 1]
    return e * qop.expectation(apply_dissipator(model, site, rho), qop.number(site)).real
