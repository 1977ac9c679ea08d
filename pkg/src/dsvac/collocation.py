"""Global spectral oracle for regular solution subspaces.

Independent of the Frobenius-plus-marching construction: solutions regular
at the pole are analytic up to it, so they are uniformly approximated by
Chebyshev polynomials in s on [0, pi/2].  Collocating the pole-cleared
system a(s)^2 * (-X'' + M1 X' + M0 X) on nodes clustering at the singular
endpoint leaves an n-dimensional discrete null space spanning exactly the
regular subspace; singular branches are not polynomial-approximable and
acquire O(1) residuals.
"""

from math import pi

import numpy as np


def _cleared_matrices(system, s):
    """a^2 M0 and a^2 M1 and a^2 at one point (no poles left)."""
    a = np.cos(s) ** 2
    adot = -np.sin(2 * s)
    n = system.n
    m1 = np.zeros((n, n))
    m0 = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            for (ia, jd), v in system.m1[i][j].items():
                m1[i, j] += float(v) * a ** (ia + 2) * (adot if jd else 1.0)
            for (ia, jd), v in system.m0[i][j].items():
                m0[i, j] += float(v) * a ** (ia + 2) * (adot if jd else 1.0)
    return m0, m1, a ** 2


def _cheb_basis(nmodes, s_nodes, smax):
    """Chebyshev values/derivatives on [0, smax] at the given nodes."""
    y = 2.0 * s_nodes / smax - 1.0
    t = np.zeros((len(s_nodes), nmodes))
    dt = np.zeros((len(s_nodes), nmodes))
    ddt = np.zeros((len(s_nodes), nmodes))
    t[:, 0] = 1.0
    if nmodes > 1:
        t[:, 1] = y
        dt[:, 1] = 1.0
    for m in range(2, nmodes):
        t[:, m] = 2 * y * t[:, m - 1] - t[:, m - 2]
        dt[:, m] = 2 * t[:, m - 1] + 2 * y * dt[:, m - 1] - dt[:, m - 2]
        ddt[:, m] = 4 * dt[:, m - 1] + 2 * y * ddt[:, m - 1] - ddt[:, m - 2]
    scale = 2.0 / smax
    return t, dt * scale, ddt * scale ** 2


def collocation_regular_basis(system, nmodes=56, oversample=2.0):
    """Cauchy data at s=0 of the regular subspace by global collocation.

    Returns (data_matrix 2n x n orthonormal, spectral_gap).
    """
    n = system.n
    smax = pi / 2
    nn = int(oversample * nmodes)
    # Chebyshev-Lobatto nodes on (0, pi/2], clustering at the pole
    j = np.arange(1, nn + 1)
    y = np.cos(pi * (nn - j) / nn)  # -1..1 exclusive of left end
    s_nodes = (y + 1.0) * smax / 2.0
    s_nodes = s_nodes[s_nodes > 1e-9]
    t, dt, ddt = _cheb_basis(nmodes, s_nodes, smax)
    rows = []
    for idx, s in enumerate(s_nodes):
        m0, m1, a2 = _cleared_matrices(system, s)
        for i in range(n):
            row = np.zeros(n * nmodes)
            for jslot in range(n):
                block = (m1[i, jslot] * dt[idx] + m0[i, jslot] * t[idx])
                if i == jslot:
                    block = block - a2 * ddt[idx]
                row[jslot * nmodes:(jslot + 1) * nmodes] = block
            rows.append(row)
    mat = np.array(rows)
    mat /= np.linalg.norm(mat, axis=1, keepdims=True).clip(1e-300)
    u, sv, vt = np.linalg.svd(mat, full_matrices=False)
    gap = sv[-n - 1] / max(sv[-n], 1e-300) if len(sv) > n else np.inf
    null = vt[-n:].T  # coefficients of the discrete regular solutions
    # evaluate data at s=0
    t0, dt0, _ = _cheb_basis(nmodes, np.array([0.0]), smax)
    val = np.zeros((n, n))
    der = np.zeros((n, n))
    for col in range(n):
        coeff = null[:, col].reshape(n, nmodes)
        val[:, col] = coeff @ t0[0]
        der[:, col] = coeff @ dt0[0]
    data = np.vstack([val, -der])
    q, _ = np.linalg.qr(data)
    return q, gap
