"""Dense operator algebra on the three-qubit (8-dim) space.

Basis states |n1 n2 n3> are ordered with qubit 1 most significant,
``index = 4*n1 + 2*n2 + n3``, so |010> is index 2 and |101> is index 5.
Sites are numbered 1, 2, 3 throughout the package.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

DIM = 8
N_SITES = 3

TRACE_TOL = 1e-9
HERMITIAN_TOL = 1e-10
POSITIVITY_TOL = 1e-9

IDENTITY2 = np.eye(2, dtype=complex)
LOWERING2 = np.array([[0, 1], [0, 0]], dtype=complex)
RAISING2 = LOWERING2.T.copy()
NUMBER2 = np.array([[0, 0], [0, 1]], dtype=complex)


def basis_index(n1, n2, n3):
    for n in (n1, n2, n3):
        if n not in (0, 1):
            raise ValueError(f"occupations must be 0 or 1, got {(n1, n2, n3)}")
    return 4 * n1 + 2 * n2 + n3


def basis_label(index):
    """Inverse of :func:`basis_index`."""
    if not 0 <= index < DIM:
        raise ValueError(f"basis index out of range: {index}")
    return (index >> 2) & 1, (index >> 1) & 1, index & 1


def basis_labels():
    """All eight labels in index order."""
    return list(product((0, 1), repeat=N_SITES))


def embed_single(op2, site):
    """Kronecker-embed a 2x2 operator on ``site`` (1, 2 or 3)."""
    op2 = np.asarray(op2, dtype=complex)
    if op2.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {op2.shape}")
    if site not in (1, 2, 3):
        raise ValueError(f"site must be 1, 2 or 3, got {site!r}")
    factors = [IDENTITY2] * N_SITES
    factors[site - 1] = op2
    return np.kron(np.kron(factors[0], factors[1]), factors[2])


def lowering(site):
    return embed_single(LOWERING2, site)


def raising(site):
    return embed_single(RAISING2, site)


def number(site):
    return embed_single(NUMBER2, site)


def ket(n1, n2, n3):
    v = np.zeros(DIM, dtype=complex)
    v[basis_index(n1, n2, n3)] = 1.0
    return v


def projector(n1, n2, n3):
    v = ket(n1, n2, n3)
    return np.outer(v, v.conj())


def dagger(a):
    return np.asarray(a).conj().T


def commutator(a, b):
    return a @ b - b @ a


def anticommutator(a, b):
    return a @ b + b @ a


def allclose(a, b, atol=1e-12):
    """Entrywise tolerance comparison; the only equality used on matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def hermitian_eigvals(a, tol=HERMITIAN_TOL):
    """Eigenvalues of a Hermitian matrix, ascending.

    Raises if ``a`` is not Hermitian to ``tol``; the symmetric solver is then
    used on the Hermitian part.
    """
    a = np.asarray(a, dtype=complex)
    dev = float(np.max(np.abs(a - dagger(a)))) if a.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return np.linalg.eigvalsh(0.5 * (a + dagger(a)))


def hermitize(a):
    return 0.5 * (a + dagger(a))


@dataclass(frozen=True)
class DensityDiagnostics:
    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float

    @property
    def valid(self):
        return (
            self.trace_deviation <= TRACE_TOL
            and self.hermiticity_deviation <= HERMITIAN_TOL
            and self.min_eigenvalue >= -POSITIVITY_TOL
        )


def validate_density_matrix(rho):
    """Trace, Hermiticity and positivity diagnostics for an 8x8 matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"expected an {DIM}x{DIM} matrix, got {rho.shape}")
    herm_dev = float(np.max(np.abs(rho - dagger(rho))))
    min_eig = float(np.linalg.eigvalsh(hermitize(rho))[0])
    return DensityDiagnostics(
        trace_deviation=float(abs(np.trace(rho) - 1.0)),
        hermiticity_deviation=herm_dev,
        min_eigenvalue=min_eig,
    )


def expectation(rho, op):
    return complex(np.trace(rho @ op))


def trace_distance(rho, sigma):
    """Half the trace norm of ``rho - sigma``."""
    diff = hermitize(np.asarray(rho) - np.asarray(sigma))
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))
