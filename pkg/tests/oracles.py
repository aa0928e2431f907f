"""Independent reference computations used only by the tests.

None of these touch the tridiagonal machinery under test: the Hamiltonian
is assembled from Kronecker products of Pauli matrices, fidelities are
averaged by explicit quadrature over input states, and eigenvalues come
from dense LAPACK or polynomial roots.
"""

from fractions import Fraction
from functools import reduce

import numpy as np

X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def site_op(op, site, n):
    """``op`` on ``site`` (0-based, leftmost = most significant qubit)."""
    return reduce(np.kron, [op if k == site else I2 for k in range(n)])


def full_hamiltonian(n, delta, couplings, fields):
    dim = 2 ** n
    h = np.zeros((dim, dim), dtype=complex)
    for i, j in enumerate(couplings):
        j = float(j)
        for op, w in ((X, 1.0), (Y, 1.0), (Z, float(delta))):
            h += j * w * site_op(op, i, n) @ site_op(op, i + 1, n)
    for i, b in enumerate(fields):
        h += float(b) * site_op(Z, i, n)
    return h


def basis_index(flipped, n):
    """Index of the computational state with spin ``flipped`` (0-based) in |1>, others |0>."""
    return 1 << (n - 1 - flipped) if flipped is not None else 0


def project_one_excitation(h, n):
    idx = [basis_index(k, n) for k in range(n)]
    block = h[np.ix_(idx, idx)]
    e0 = h[0, 0]
    return block, e0


def received_state_fidelity(f, theta, phi):
    """<psi|rho_out|psi> for input cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    a = np.cos(theta / 2)
    b = np.exp(1j * phi) * np.sin(theta / 2)
    rho = np.array([
        [abs(a) ** 2 + abs(b) ** 2 * (1 - abs(f) ** 2), a * np.conj(b * f)],
        [np.conj(a) * b * f, abs(b * f) ** 2],
    ])
    psi = np.array([a, b])
    return float(np.real(np.conj(psi) @ rho @ psi))


def bloch_average_fidelity(f, n_theta=8, n_phi=8):
    """Gauss-Legendre in cos(theta) times a uniform phi grid (exact for this integrand)."""
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phis = 2 * np.pi * np.arange(n_phi) / n_phi
    total = 0.0
    for xi, wi in zip(x, w):
        theta = np.arccos(xi)
        total += wi * np.mean([received_state_fidelity(f, theta, p) for p in phis])
    return total / 2


def char_poly_roots(diag, offsq):
    """Eigenvalues from the float characteristic polynomial built by dense expansion."""
    n = len(diag)
    m = np.diag(np.array([float(d) for d in diag]))
    for k, s in enumerate(offsq):
        e = np.sqrt(float(s))
        m[k, k + 1] = m[k + 1, k] = e
    coeffs = np.poly(m)
    return np.sort(np.roots(coeffs).real)


def exact_det(matrix):
    """Fraction-valued determinant by Gaussian elimination."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            fac = a[r][c] / a[c][c]
            for k in range(c, n):
                a[r][k] -= fac * a[c][k]
    return det
