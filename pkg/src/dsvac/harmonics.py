"""Polynomial harmonic oracle on the 3-sphere (desk scale, k <= 3).

Scalar harmonics are restrictions of harmonic homogeneous polynomials on R^4;
transverse vector and TT tensor harmonics are restrictions of polynomial
(co)tensors subject to harmonicity, divergence-free, tangentiality and trace
constraints, solved exactly on a monomial basis.  Eigenvalues are measured by
exact quadrature of the relevant quadratic forms (tangential derivatives via
the ambient projector Pi = 1 - x x^T), never assumed.

All arithmetic is exact rational; sphere integrals of monomials use the
classical Gamma-function formula (the common 2*pi^2 factor cancels in every
ratio used here).
"""

import itertools
from fractions import Fraction
from math import factorial

from . import rational as rl
from .sectors import Family

Q = Fraction

NVAR = 4


def monomials(deg):
    if deg < 0:
        return []
    out = []
    for c in itertools.combinations_with_replacement(range(NVAR), deg):
        alpha = [0] * NVAR
        for i in c:
            alpha[i] += 1
        out.append(tuple(alpha))
    return out


def p_add(p, q):
    out = dict(p)
    for a, c in q.items():
        out[a] = out.get(a, Q(0)) + c
        if out[a] == 0:
            del out[a]
    return out


def p_scale(p, c):
    c = Q(c)
    if c == 0:
        return {}
    return {a: c * v for a, v in p.items()}


def p_mul(p, q):
    out = {}
    for a, ca in p.items():
        for b, cb in q.items():
            key = tuple(x + y for x, y in zip(a, b))
            out[key] = out.get(key, Q(0)) + ca * cb
    return {a: c for a, c in out.items() if c != 0}


def p_diff(p, i):
    out = {}
    for a, c in p.items():
        if a[i] > 0:
            b = list(a)
            b[i] -= 1
            out[tuple(b)] = c * a[i]
    return out


def p_laplace(p):
    out = {}
    for i in range(NVAR):
        out = p_add(out, p_diff(p_diff(p, i), i))
    return out


def x_mono(i):
    a = [0] * NVAR
    a[i] = 1
    return {tuple(a): Q(1)}


def sphere_integral(p):
    """Exact integral over the unit 3-sphere, in units of 2*pi^2."""
    total = Q(0)
    for a, c in p.items():
        if any(e % 2 for e in a):
            continue
        m = [e // 2 for e in a]
        num = Q(1)
        for mi in m:
            num *= Q(factorial(2 * mi), 4 ** mi * factorial(mi))
        total += c * num / factorial(sum(m) + 1)
    return total


def _coeffs_to_polys(vec, mons, ncomp):
    out = []
    for c in range(ncomp):
        p = {}
        for j, a in enumerate(mons):
            v = vec[c * len(mons) + j]
            if v != 0:
                p[a] = v
        out.append(p)
    return out


class HarmonicRealization:
    """Explicit polynomial realization of one harmonic level."""

    def __init__(self, family, k, elements, eigen_measured, transversality):
        self.family = family
        self.k = k
        self.elements = elements
        self.eigenvalue = eigen_measured
        self.multiplicity = len(elements)
        self.transversality = transversality


def _proj_matrix():
    """Pi_ij = delta_ij - x_i x_j as polynomial entries."""
    pi = [[{} for _ in range(NVAR)] for _ in range(NVAR)]
    for i in range(NVAR):
        for j in range(NVAR):
            if i == j:
                pi[i][j] = {tuple([0] * NVAR): Q(1)}
            pi[i][j] = p_add(pi[i][j], p_scale(p_mul(x_mono(i), x_mono(j)), -1))
    return pi


_PI = _proj_matrix()


def _sandwich_1form(pcomps):
    """B = Pi (dP) Pi for a polynomial 1-form; B_ij = Pi_ia dP_ab Pi_bj."""
    a_mat = [[p_diff(pcomps[j], i) for j in range(NVAR)] for i in range(NVAR)]
    return _pi_sandwich(a_mat)


def _pi_sandwich(mat):
    tmp = [[{} for _ in range(NVAR)] for _ in range(NVAR)]
    for i in range(NVAR):
        for j in range(NVAR):
            acc = {}
            for a in range(NVAR):
                if mat[a][j]:
                    acc = p_add(acc, p_mul(_PI[i][a], mat[a][j]))
            tmp[i][j] = acc
    out = [[{} for _ in range(NVAR)] for _ in range(NVAR)]
    for i in range(NVAR):
        for j in range(NVAR):
            acc = {}
            for b in range(NVAR):
                if tmp[i][b]:
                    acc = p_add(acc, p_mul(tmp[i][b], _PI[b][j]))
            out[i][j] = acc
    return out


def scalar_realization(k):
    """Harmonic degree-k polynomials; measured eigenvalue of the Laplacian."""
    mons = monomials(k)
    out_mons = monomials(k - 2)
    rows = []
    for oa in out_mons:
        row = [Q(0)] * len(mons)
        for j, a in enumerate(mons):
            lap = p_laplace({a: Q(1)})
            row[j] = lap.get(oa, Q(0))
        rows.append(row)
    if not rows:
        rows = [[Q(0)] * len(mons)]
    null = rl.nullspace(rows)
    if not null:
        raise RuntimeError("scalar harmonic ansatz is rank deficient")
    elements = []
    for v in null:
        elements.append({a: c for a, c in zip(mons, v) if c != 0})
    # measured eigenvalue via exact quadrature of the tangential gradient
    eigs = set()
    for p in elements:
        grad2 = {}
        for i in range(NVAR):
            di = p_diff(p, i)
            grad2 = p_add(grad2, p_mul(di, di))
        p2 = p_mul(p, p)
        # |tangential grad|^2 = |grad P|^2 - k^2 P^2 on the sphere
        num = sphere_integral(p_add(grad2, p_scale(p2, -Q(k * k))))
        den = sphere_integral(p2)
        eigs.add(num / den)
    if len(eigs) != 1:
        raise RuntimeError(f"scalar level {k} not an eigenspace: {sorted(eigs)}")
    return HarmonicRealization(Family.SCALAR, k, elements, eigs.pop(), Q(0))


def _v1_norm2(w):
    """Integral of the V1 fiber norm of a tangential polynomial 1-form."""
    acc = {}
    for i in range(NVAR):
        acc = p_add(acc, p_mul(w[i], w[i]))
    return sphere_integral(acc)


def _v2_norm2(u):
    acc = {}
    for i in range(NVAR):
        for j in range(NVAR):
            if u[i][j]:
                acc = p_add(acc, p_mul(u[i][j], u[i][j]))
    return 2 * sphere_integral(acc)


def _v3_norm2(z):
    acc = {}
    for i in range(NVAR):
        for j in range(NVAR):
            for l in range(NVAR):
                if z[i][j][l]:
                    acc = p_add(acc, p_mul(z[i][j][l], z[i][j][l]))
    return 6 * sphere_integral(acc)


def vector_realization(k):
    """Transverse vector harmonics: harmonic, divergence-free, tangential
    polynomial 1-forms of degree k."""
    mons = monomials(k)
    nm = len(mons)
    rows = []
    # componentwise harmonic
    for oa in monomials(k - 2):
        for c in range(NVAR):
            row = [Q(0)] * (NVAR * nm)
            for j, a in enumerate(mons):
                row[c * nm + j] = p_laplace({a: Q(1)}).get(oa, Q(0))
            rows.append(row)
    # divergence free
    for oa in monomials(k - 1):
        row = [Q(0)] * (NVAR * nm)
        for c in range(NVAR):
            for j, a in enumerate(mons):
                row[c * nm + j] += p_diff({a: Q(1)}, c).get(oa, Q(0))
        rows.append(row)
    # tangential: sum_i x_i P_i = 0 identically
    for oa in monomials(k + 1):
        row = [Q(0)] * (NVAR * nm)
        for c in range(NVAR):
            for j, a in enumerate(mons):
                row[c * nm + j] += p_mul(x_mono(c), {a: Q(1)}).get(oa, Q(0))
        rows.append(row)
    null = rl.nullspace(rows)
    if not null:
        raise RuntimeError("vector harmonic ansatz is rank deficient")
    elements = [_coeffs_to_polys(v, mons, NVAR) for v in null]
    eigs = set()
    max_div = Q(0)
    for w in elements:
        b = _sandwich_1form(w)
        sym = [[p_scale(p_add(b[i][j], b[j][i]), Q(1, 2)) for j in range(NVAR)]
               for i in range(NVAR)]
        div = {}
        for i in range(NVAR):
            div = p_add(div, p_scale(b[i][i], -1))
        norm_w = _v1_norm2(w)
        norm_d = _v2_norm2(sym)
        norm_div = sphere_integral(p_mul(div, div))
        max_div = max(max_div, norm_div / norm_w)
        # D1L = delta d - d delta + 4 on the round 3-sphere
        eigs.add((norm_d - norm_div) / norm_w + 4)
    if len(eigs) != 1:
        raise RuntimeError(f"vector level {k} not an eigenspace: {sorted(eigs)}")
    return HarmonicRealization(Family.VECTOR, k, elements, eigs.pop(), max_div)


def tensor_realization(k):
    """TT tensor harmonics: harmonic, divergence-free, tangential, trace-free
    symmetric polynomial 2-tensors of degree k."""
    mons = monomials(k)
    nm = len(mons)
    pairs = [(i, j) for i in range(NVAR) for j in range(i, NVAR)]
    npair = len(pairs)
    pidx = {p: n for n, p in enumerate(pairs)}

    def comp(i, j):
        return pidx[(min(i, j), max(i, j))]

    rows = []
    for oa in monomials(k - 2):
        for (i, j) in pairs:
            row = [Q(0)] * (npair * nm)
            for m, a in enumerate(mons):
                row[comp(i, j) * nm + m] = p_laplace({a: Q(1)}).get(oa, Q(0))
            rows.append(row)
    for oa in monomials(k - 1):
        for i in range(NVAR):
            row = [Q(0)] * (npair * nm)
            for j in range(NVAR):
                for m, a in enumerate(mons):
                    row[comp(i, j) * nm + m] += p_diff({a: Q(1)}, j).get(oa, Q(0))
            rows.append(row)
    for oa in monomials(k + 1):
        for i in range(NVAR):
            row = [Q(0)] * (npair * nm)
            for j in range(NVAR):
                for m, a in enumerate(mons):
                    row[comp(i, j) * nm + m] += p_mul(x_mono(j), {a: Q(1)}).get(oa, Q(0))
            rows.append(row)
    for oa in mons:
        row = [Q(0)] * (npair * nm)
        for i in range(NVAR):
            for m, a in enumerate(mons):
                if a == oa:
                    row[comp(i, i) * nm + m] += Q(1)
        rows.append(row)
    null = rl.nullspace(rows)
    if not null:
        raise RuntimeError("tensor harmonic ansatz is rank deficient")
    elements = []
    for v in null:
        u = [[{} for _ in range(NVAR)] for _ in range(NVAR)]
        for (i, j) in pairs:
            p = {}
            for m, a in enumerate(mons):
                c = v[comp(i, j) * nm + m]
                if c != 0:
                    p[a] = c
            u[i][j] = p
            u[j][i] = p
        elements.append(u)
    eigs = set()
    max_div = Q(0)
    for u in elements:
        # grad: C_{i,jk} = d_i u_jk, projected on all slots, symmetrized
        c3 = [[[p_diff(u[j][l], i) for l in range(NVAR)] for j in range(NVAR)]
              for i in range(NVAR)]
        d3 = _pi3_sandwich(c3)
        sym3 = [[[_sym3(d3, i, j, l) for l in range(NVAR)] for j in range(NVAR)]
                for i in range(NVAR)]
        div = [dict() for _ in range(NVAR)]
        for l in range(NVAR):
            acc = {}
            for i in range(NVAR):
                acc = p_add(acc, d3[i][i][l])
            div[l] = p_scale(acc, -2)
        norm_u = _v2_norm2(u)
        norm_d = _v3_norm2(sym3)
        norm_div = _v1_norm2(div)
        max_div = max(max_div, norm_div / norm_u)
        # D2L = delta d - d delta + 12 - 2|h)(h| ; trace-free here
        eigs.add((norm_d - norm_div) / norm_u + 12)
    if len(eigs) != 1:
        raise RuntimeError(f"tensor level {k} not an eigenspace: {sorted(eigs)}")
    return HarmonicRealization(Family.TENSOR, k, elements, eigs.pop(), max_div)


def _sym3(z, i, j, l):
    acc = {}
    for (a, b, c) in ((i, j, l), (j, i, l), (l, j, i), (i, l, j), (j, l, i), (l, i, j)):
        acc = p_add(acc, z[a][b][c])
    return p_scale(acc, Q(1, 6))


def _pi3_sandwich(z):
    """Project all three slots of a rank-3 polynomial tensor."""
    # slot 0
    t0 = [[[None] * NVAR for _ in range(NVAR)] for _ in range(NVAR)]
    for j in range(NVAR):
        for l in range(NVAR):
            for i in range(NVAR):
                acc = {}
                for a in range(NVAR):
                    if z[a][j][l]:
                        acc = p_add(acc, p_mul(_PI[i][a], z[a][j][l]))
                t0[i][j][l] = acc
    t1 = [[[None] * NVAR for _ in range(NVAR)] for _ in range(NVAR)]
    for i in range(NVAR):
        for l in range(NVAR):
            for j in range(NVAR):
                acc = {}
                for a in range(NVAR):
                    if t0[i][a][l]:
                        acc = p_add(acc, p_mul(_PI[j][a], t0[i][a][l]))
                t1[i][j][l] = acc
    t2 = [[[None] * NVAR for _ in range(NVAR)] for _ in range(NVAR)]
    for i in range(NVAR):
        for j in range(NVAR):
            for l in range(NVAR):
                acc = {}
                for a in range(NVAR):
                    if t1[i][j][a]:
                        acc = p_add(acc, p_mul(_PI[l][a], t1[i][j][a]))
                t2[i][j][l] = acc
    return t2


_REALIZERS = {
    Family.SCALAR: scalar_realization,
    Family.VECTOR: vector_realization,
    Family.TENSOR: tensor_realization,
}


def harmonic_oracle(k, family):
    """Construct the harmonic level and measure eigenvalue + multiplicity.

    Desk scale only (k <= 3).
    """
    if k > 3:
        raise ValueError("harmonic oracle is desk-scale: k <= 3")
    return _REALIZERS[family](k)


def gram_quadrature_scalar(k):
    """Quadrature Gram data for the scalar sector: returns
    ((dY|dY), (ddY|ddY), (ddY|Yh), (Yh|Yh)) relative to (Y|Y) = 1."""
    real = scalar_realization(k)
    p = real.elements[0]
    norm = sphere_integral(p_mul(p, p))
    # tangential gradient w_i = (Pi grad P)_i
    grad = [p_diff(p, i) for i in range(NVAR)]
    w = []
    for i in range(NVAR):
        acc = {}
        for a in range(NVAR):
            acc = p_add(acc, p_mul(_PI[i][a], grad[a]))
        w.append(acc)
    g_dd = _v1_norm2(w) / norm
    b = _sandwich_1form(w)
    hess = [[p_scale(p_add(b[i][j], b[j][i]), Q(1, 2)) for j in range(NVAR)]
            for i in range(NVAR)]
    g_hh = _v2_norm2(hess) / norm
    tr = {}
    for i in range(NVAR):
        tr = p_add(tr, hess[i][i])
    # (ddY | Yh) = integral 2 * tr_h(ddY) * Y
    g_cross = 2 * sphere_integral(p_mul(tr, p)) / norm
    return g_dd, g_hh, g_cross, Q(6)
