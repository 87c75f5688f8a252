"""Independent reference computations shared by the unit and acceptance tests."""

import math
import warnings
from itertools import product

import numpy as np

from qfridge.model import CouplingSpec, QubitSpec, build_model

# PASS/FAIL lines from the acceptance suite, echoed in the pytest summary
ACCEPTANCE_LINES = []

D_NAMES = ("d1", "d2", "d3", "d12", "d13", "d23", "d123")


def draw_model(rng):
    """Random physical model over the acceptance ranges."""
    e1 = rng.uniform(1.0, 5.0)
    e3 = rng.uniform(5.0, 15.0)
    temps = np.sort(rng.uniform(20.0, 500.0, 3))
    gammas = rng.uniform(1e-4, 1e-2, 3)
    g_tilde = rng.uniform(1e-3, 5e-2)
    d = dict(zip(D_NAMES, rng.uniform(-0.05, 0.05, 7)))
    qubits = [QubitSpec(e, g, t) for e, g, t in zip((e1, e1 + e3, e3), gammas, temps)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_model(qubits, CouplingSpec(g_tilde=g_tilde, **d))


def x3_element(m, n, x0):
    """<m|x^3|n> for x = x0 (a + a^+), written out by hand."""
    if m == n + 3:
        return x0**3 * math.sqrt((n + 1) * (n + 2) * (n + 3))
    if m == n + 1:
        return 3 * x0**3 * (n + 1) ** 1.5
    if m == n - 1:
        return 3 * x0**3 * n**1.5
    if m == n - 3:
        return x0**3 * math.sqrt(n * (n - 1) * (n - 2))
    return 0.0


def second_order_shift(n, omega, lam, x0):
    """Rayleigh-Schroedinger E_n^(2) for the perturbation -lam x^3."""
    total = 0.0
    for m in range(max(0, n - 3), n + 4):
        if m != n:
            total += (lam * x3_element(m, n, x0)) ** 2 / (omega * (n - m))
    return total


def lowdin_exchange(spectra, g, n_lev=4):
    """|010>-|101> element of the exact (all orders) Loewdin-partitioned Hamiltonian."""
    gaps = [s.gaps[:n_lev] for s in spectra]
    xs = [s.x[:n_lev, :n_lev] for s in spectra]
    labels = list(product(range(n_lev), repeat=3))
    energy = np.array([gaps[0][a] + gaps[1][b] + gaps[2][c] for a, b, c in labels])
    eye = np.eye(n_lev)
    v = g * (np.kron(np.kron(xs[0], xs[1]), eye) + np.kron(np.kron(xs[0], eye), xs[2])
             + np.kron(np.kron(eye, xs[1]), xs[2]))
    h = np.diag(energy) + v
    p = [labels.index((0, 1, 0)), labels.index((1, 0, 1))]
    q = [i for i in range(len(labels)) if i not in p]
    e = energy[p].mean()
    for _ in range(50):
        block = h[np.ix_(p, p)] + h[np.ix_(p, q)] @ np.linalg.solve(
            e * np.eye(len(q)) - h[np.ix_(q, q)], h[np.ix_(q, p)])
        e_new = np.linalg.eigvalsh(block).mean()
        if abs(e_new - e) < 1e-15 * abs(e):
            break
        e = e_new
    return block[0, 1]
