"""Radial ODE systems at the equator: regular solution bases and evolution.

Each (operator, sector, signature) triple reduces to a second-order system
-X'' + M1(s) X' + M0(s) X = 0 over the sector slot basis.  Euclidean systems
have regular singular points at s = +-pi/2; the basis of solutions regular
at a pole is built by exact indicial analysis + Frobenius series seeding and
high-order adaptive integration to the equator.  Lorentzian systems are
globally smooth and are integrated directly for the dynamical checks.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import pi

import numpy as np
from scipy.integrate import solve_ivp

from . import rational as rl
from .qseries import LSeries
from .sectors import SectorLabel, space
from .warped import (
    EUCLIDEAN,
    LORENTZIAN,
    WarpedSector,
    cf_series_pole,
    fiber_weights,
    kappa_signs,
)

Q = Fraction

SERIES_ORDER = 40
MATCH_RADIUS = 0.15
INTEGRATOR_TOL = 1e-12
TAIL_TOL = 1e-14


@dataclass
class RadialSystem:
    sector: SectorLabel
    operator_id: str  # 'D0' | 'D1' | 'D2'
    signature: str
    maxwell: bool
    rank: int
    slot_ranks: list
    m1: list  # exact coefficient-dict matrices
    m0: list

    @property
    def n(self):
        return len(self.slot_ranks)

    def _ab(self, s):
        if self.signature == EUCLIDEAN:
            a = np.cos(s) ** 2
            adot = -np.sin(2 * s)
        else:
            a = np.cosh(s) ** 2
            adot = np.sinh(2 * s)
        return a, adot

    def m_num(self, s):
        a, adot = self._ab(s)
        n = self.n
        m1 = np.zeros((n, n))
        m0 = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                for (ia, jd), v in self.m1[i][j].items():
                    m1[i, j] += float(v) * a ** ia * (adot if jd else 1.0)
                for (ia, jd), v in self.m0[i][j].items():
                    m0[i, j] += float(v) * a ** ia * (adot if jd else 1.0)
        return m1, m0

    def rhs(self, s, y):
        """First-order form for a stacked matrix of solutions."""
        n = self.n
        ncol = y.size // (2 * n)
        y = y.reshape(2 * n, ncol)
        m1, m0 = self.m_num(s)
        out = np.empty_like(y)
        out[:n] = y[n:]
        out[n:] = m1 @ y[n:] + m0 @ y[:n]
        return out.ravel()


_RANK = {"D0": 0, "D1": 1, "D2": 2}


def _assert_reflection_parity(rank, slot_ranks, m1, m0):
    """kappa M1(-s) kappa = -M1(s) and kappa M0(-s) kappa = M0(s): entries
    with matching slot parities must be odd in adot (M1) / even (M0)."""
    kap = [(-1) ** (rank - r) for r in slot_ranks]
    for i in range(len(slot_ranks)):
        for j in range(len(slot_ranks)):
            s = kap[i] * kap[j]
            for (_, jd) in m1[i][j]:
                if (-1) ** jd != -s:
                    raise AssertionError("reflection parity broken in M1")
            for (_, jd) in m0[i][j]:
                if (-1) ** jd != s:
                    raise AssertionError("reflection parity broken in M0")


@lru_cache(maxsize=None)
def build_system(operator_id, sector, signature, maxwell=False):
    rank = _RANK[operator_id]
    ws = WarpedSector(sector, signature)
    slot_ranks, m1, m0 = ws.radial_matrices(rank, maxwell=maxwell)
    _assert_reflection_parity(rank, slot_ranks, m1, m0)
    return RadialSystem(sector, operator_id, signature, maxwell, rank,
                        slot_ranks, m1, m0)


# -- indicial analysis --------------------------------------------------------

def _poly_mul(p, q):
    out = [Q(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_add(p, q):
    n = max(len(p), len(q))
    out = [Q(0)] * n
    for i, a in enumerate(p):
        out[i] += a
    for i, b in enumerate(q):
        out[i] += b
    return out


def _poly_det(mat):
    n = len(mat)
    if n == 0:
        return [Q(1)]
    if n == 1:
        return mat[0][0]
    out = [Q(0)]
    for j in range(n):
        minor = [[row[c] for c in range(n) if c != j] for row in mat[1:]]
        term = _poly_mul(mat[0][j], _poly_det(minor))
        if j % 2:
            term = [-x for x in term]
        out = _poly_add(out, term)
    return out


def _poly_eval(p, x):
    tot = Q(0)
    for c in reversed(p):
        tot = tot * x + c
    return tot


def _rational_roots(p):
    """All roots with multiplicity of an exactly-factorable polynomial."""
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    lead_deg = len(p) - 1
    roots = []
    # strip zero roots
    while p and p[0] == 0:
        roots.append(Q(0))
        p = p[1:]
    while len(p) > 1:
        den = np.lcm.reduce([c.denominator for c in p])
        ip = [int(c * den) for c in p]
        a0, an = abs(ip[0]), abs(ip[-1])
        found = None
        for q in sorted(_divisors(an)):
            for pnum in sorted(_divisors(a0)):
                for cand in (Q(pnum, q), Q(-pnum, q)):
                    if _poly_eval(p, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise RuntimeError(f"indicial polynomial has irrational roots: {p}")
        roots.append(found)
        p = _poly_divide_root(p, found)
    if len(roots) != lead_deg:
        raise RuntimeError("root extraction lost degree")
    return roots


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _poly_divide_root(p, r):
    """Synthetic division of p by (x - r)."""
    coeffs = list(reversed(p))
    q = []
    acc = Q(0)
    for c in coeffs[:-1]:
        acc = c + r * acc
        q.append(acc)
    return list(reversed(q))


def pole_series_matrices(system, order=SERIES_ORDER):
    """Exact Laurent series at x = pi/2 - s of P = x*N1, Q = x^2*N0 for the
    slot-graded system.  Euclidean only (the Lorentzian systems are globally
    smooth and have no pole to expand at).

    Components of solutions scale like x^(slot rank) relative to each other
    at the pole, so the substitution X = diag(x^r) V turns the mixed system
    into an honest regular-singular one:

        V'' = N1 V' + N0 V,
        N1 = D^-1 (M1_hat D - 2 D'),
        N0 = D^-1 (M1_hat D' + M0_hat D - D''),

    with M1_hat(x) = -M1(s), M0_hat(x) = M0(s) the x-coordinate forms.
    """
    if system.signature != EUCLIDEAN:
        raise ValueError("indicial analysis applies to the Euclidean systems")
    n = system.n
    ranks = system.slot_ranks
    p_mats = [[None] * n for _ in range(n)]
    q_mats = [[None] * n for _ in range(n)]
    for i in range(n):
        ri = ranks[i]
        for j in range(n):
            rj = ranks[j]
            s1 = cf_series_pole(system.m1[i][j], order + 6)
            s0 = cf_series_pole(system.m0[i][j], order + 6)
            m1h = LSeries(s1.off, [-c for c in s1.c])  # -M1(s)
            m0h = s0
            # N1[i][j] = x^(rj - ri) * M1_hat - (2 rj / x) delta_ij
            n1 = LSeries(m1h.off + rj - ri, m1h.c)
            n0 = LSeries(m0h.off + rj - ri, m0h.c)
            # M1_hat * D'/D contribution to N0: (rj/x) * M1_hat * x^(rj-ri)
            n0 = n0 + LSeries(m1h.off + rj - ri - 1, [rj * c for c in m1h.c])
            if i == j:
                n1 = n1 + LSeries(-1, [Q(-2 * rj)] + [Q(0)] * (order + 5))
                n0 = n0 + LSeries(-2, [Q(-rj * (rj - 1))] + [Q(0)] * (order + 5))
            p_mats[i][j] = LSeries(n1.off + 1, n1.c)
            q_mats[i][j] = LSeries(n0.off + 2, n0.c)
            if p_mats[i][j].c and p_mats[i][j].min_order() < 0:
                raise RuntimeError("coefficient pole worse than first order")
            if q_mats[i][j].c and q_mats[i][j].min_order() < 0:
                raise RuntimeError("coefficient pole worse than second order")
    return p_mats, q_mats


def indicial_data(system, order=SERIES_ORDER):
    """Exponents (exact) with their exact seed spaces at the north pole."""
    n = system.n
    p_mats, q_mats = pole_series_matrices(system, order)
    p0 = [[p_mats[i][j].coeff(0) for j in range(n)] for i in range(n)]
    q0 = [[q_mats[i][j].coeff(0) for j in range(n)] for i in range(n)]
    # L(rho) = rho(rho-1) I - P0 rho - Q0, entries as polynomials in rho
    lmat = []
    for i in range(n):
        row = []
        for j in range(n):
            poly = [-q0[i][j], -p0[i][j], Q(0)]
            if i == j:
                poly = _poly_add(poly, [Q(0), Q(-1), Q(1)])
            row.append(poly)
        lmat.append(row)
    det = _poly_det(lmat)
    roots = _rational_roots(det)
    uniq = {}
    for r in roots:
        uniq[r] = uniq.get(r, 0) + 1

    def l_of(rho):
        return [[_poly_eval(lmat[i][j], rho) for j in range(n)] for i in range(n)]

    out = []
    for rho, mult in sorted(uniq.items()):
        seeds = rl.nullspace(l_of(rho))
        out.append((rho, mult, seeds))
    return out, (p_mats, q_mats), lmat


def indicial_exponents(system, graded=True):
    """All indicial exponents at the pole, exact rationals with multiplicity.

    ``graded=False`` reports the leading order of the physical components
    (graded exponent plus the smallest slot rank in the seed support).
    """
    data, _, _ = indicial_data(system)
    out = []
    for rho, mult, seeds in data:
        if graded or not seeds:
            out.extend([rho] * mult)
        else:
            for v in seeds:
                shift = min(system.slot_ranks[i] for i, x in enumerate(v) if x != 0)
                out.append(rho + shift)
            out.extend([rho] * (mult - len(seeds)))
    return sorted(out)


def regular_exponents(system):
    """Exponents/seeds of the solutions square-integrable (hence smooth) at
    the pole.  In the graded variables the L2 cutoff is uniform: a branch is
    regular iff its graded exponent exceeds -2."""
    data, series, lmat = indicial_data(system)
    reg = []
    total_nullity = 0
    for rho, mult, seeds in data:
        if rho > -2 and seeds:
            reg.append((rho, seeds))
            total_nullity += len(seeds)
    if total_nullity != system.n:
        raise RuntimeError(
            f"regular solution count {total_nullity} != {system.n} "
            f"for {system.operator_id} {system.sector}")
    return reg, series, lmat


def frobenius_solutions(system, order=SERIES_ORDER, x0=MATCH_RADIUS):
    """Values and s-derivatives at s = pi/2 - x0 of the regular basis."""
    reg, (p_mats, q_mats), lmat = regular_exponents(system)
    n = system.n
    p_f = _series_float(p_mats, n, order)
    q_f = _series_float(q_mats, n, order)
    cols_val = []
    cols_der = []
    exponents = []
    series_out = []
    for rho, seeds in reg:
        rho_f = float(rho)
        others = {}
        for rho2, seeds2 in reg:
            off = rho2 - rho
            if off.denominator == 1 and int(off) > 0:
                others[int(off)] = seeds2
        for seed in seeds:
            coeffs = _frobenius_series(rho, seed, lmat, p_f, q_f, n, order, others)
            # physical components carry the grading x^(slot rank)
            shifts = np.array([float(r) for r in system.slot_ranks])
            val = np.zeros(n)
            der = np.zeros(n)
            tail = 0.0
            peak = 0.0
            for m, c in enumerate(coeffs):
                w = x0 ** (rho_f + m + shifts)
                val += c * w
                der += (rho_f + m + shifts) * c * x0 ** (rho_f + m + shifts - 1)
                mag = np.max(np.abs(c) * w)
                peak = max(peak, mag)
                if m >= order - 2:
                    tail = max(tail, mag)
            if peak > 0 and tail / peak > TAIL_TOL:
                raise RuntimeError(
                    f"Frobenius tail not converged at x0={x0}: {tail/peak:.2e}")
            cols_val.append(val)
            cols_der.append(-der)  # d/ds = -d/dx
            exponents.append(rho)
            series_out.append((rho_f, shifts, coeffs))
    return np.array(cols_val).T, np.array(cols_der).T, exponents, series_out


def _series_float(mats, n, order):
    out = np.zeros((order + 1, n, n))
    for i in range(n):
        for j in range(n):
            s = mats[i][j]
            for m in range(order + 1):
                out[m, i, j] = float(s.coeff(m))
    return out


def _frobenius_series(rho, seed, lmat, p_f, q_f, n, order, resonances):
    """Float Frobenius recursion with exactly-handled resonances."""
    c = [np.array([float(x) for x in seed])]
    rho_f = float(rho)
    for m in range(1, order + 1):
        rhs = np.zeros(n)
        for j in range(m):
            rhs += (p_f[m - j] * (rho_f + j)) @ c[j] + q_f[m - j] @ c[j]
        lm = np.zeros((n, n))
        for i in range(n):
            for jj in range(n):
                lm[i, jj] = float(_poly_eval(lmat[i][jj], rho + m))
        if m in resonances:
            sol, res, rank, sv = np.linalg.lstsq(lm, rhs, rcond=None)
            check = np.linalg.norm(lm @ sol - rhs)
            scale = max(np.linalg.norm(rhs), 1.0)
            if check > 1e-9 * scale:
                raise RuntimeError(
                    f"log terms required at resonance offset {m}")
            c.append(sol)
        else:
            c.append(np.linalg.solve(lm, rhs))
    return c


@dataclass
class SolutionBasisAtEquator:
    sector: SectorLabel
    operator_id: str
    hemisphere: str
    data_matrix: np.ndarray  # (2n, n) columns = (value, -d/ds value) at s=0
    conditioning: float
    exponents: list
    dense: object = field(default=None, repr=False)
    series: object = field(default=None, repr=False)
    match_radius: float = MATCH_RADIUS
    raw_data: object = field(default=None, repr=False)


def regular_basis(system, hemisphere="north", series_order=SERIES_ORDER,
                  match_radius=MATCH_RADIUS, tol=INTEGRATOR_TOL,
                  keep_dense=False):
    """Cauchy data at s=0 of the basis of solutions regular at one pole."""
    if system.signature != EUCLIDEAN:
        raise ValueError("regular bases are defined for the Euclidean systems")
    val, der, exponents, series = frobenius_solutions(
        system, series_order, match_radius)
    n = system.n
    s0 = pi / 2 - match_radius
    y0 = np.vstack([val, der]).ravel()
    sol = solve_ivp(system.rhs, (s0, 0.0), y0, method="DOP853",
                    rtol=tol, atol=tol, dense_output=keep_dense)
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    y = sol.y[:, -1].reshape(2 * n, n)
    data = np.vstack([y[:n], -y[n:]])
    if hemisphere == "south":
        kap = _kappa_data(system)
        data = kap[:, None] * data
    qmat, _ = np.linalg.qr(data)
    sv = np.linalg.svd(data, compute_uv=False)
    cond = sv[-1] / sv[0]
    return SolutionBasisAtEquator(system.sector, system.operator_id, hemisphere,
                                  qmat, cond, exponents,
                                  dense=sol if keep_dense else None,
                                  series=series if keep_dense else None,
                                  match_radius=match_radius,
                                  raw_data=data if keep_dense else None)


def solution_profile(basis, column=0):
    """Callable (u(s), u'(s)) for one regular solution on [0, pi/2),
    stitched from the dense integrator output and the pole series."""
    if basis.dense is None or basis.series is None:
        raise ValueError("regular_basis must be called with keep_dense=True")
    n = basis.raw_data.shape[0] // 2
    s_switch = pi / 2 - basis.match_radius
    rho, shifts, coeffs = basis.series[column]

    def phi(s):
        if s <= s_switch:
            y = basis.dense.sol(s)
            return y[:n], y[n:]
        x = pi / 2 - s
        val = np.zeros(n)
        der = np.zeros(n)
        for m, c in enumerate(coeffs):
            val += c * x ** (rho + m + shifts)
            der += (rho + m + shifts) * c * x ** (rho + m + shifts - 1)
        return val, -der

    return phi


def _kappa_data(system):
    kap = kappa_signs(system.rank)
    diag = [float(kap[r]) for r in system.slot_ranks]
    return np.array(diag + [-d for d in diag])


# -- Lorentzian evolution -----------------------------------------------------

def evolve_raw(system, u0, du0, t_grid):
    """Evolve raw components (u, u-dot) of the Lorentzian system; complex
    data handled by linearity.  Returns arrays (nt, n) for u and u-dot."""
    if system.signature != LORENTZIAN:
        raise ValueError("evolution is for Lorentzian systems")
    n = system.n
    u0 = np.asarray(u0, dtype=complex)
    du0 = np.asarray(du0, dtype=complex)
    t_grid = np.asarray(t_grid, dtype=float)
    out_u = np.zeros((len(t_grid), n), dtype=complex)
    out_du = np.zeros((len(t_grid), n), dtype=complex)
    for p in np.nonzero(t_grid == 0.0)[0]:
        out_u[p] = u0
        out_du[p] = du0
    # two real solves (real and imaginary parts), each split by time sign
    for part_is_real, pu, pdu in ((True, u0.real, du0.real),
                                  (False, u0.imag, du0.imag)):
        for sign in (+1, -1):
            mask = (t_grid > 0) if sign > 0 else (t_grid < 0)
            ts = t_grid[mask]
            if ts.size == 0:
                continue
            ts_sorted = np.sort(ts) if sign > 0 else np.sort(ts)[::-1]
            y0 = np.concatenate([pu, pdu])
            sol = solve_ivp(system.rhs, (0.0, ts_sorted[-1]), y0,
                            method="DOP853", rtol=INTEGRATOR_TOL,
                            atol=INTEGRATOR_TOL, t_eval=ts_sorted)
            if not sol.success:
                raise RuntimeError(sol.message)
            fac = 1.0 if part_is_real else 1j
            for idx_t, tv in enumerate(ts_sorted):
                for p in np.nonzero(t_grid == tv)[0]:
                    out_u[p] += fac * sol.y[:n, idx_t]
                    out_du[p] += fac * sol.y[n:, idx_t]
    return out_u, out_du


def evolve_lorentzian(system, data, t_grid):
    """Evolve Cauchy data f = (f0, f1) with f1 = (1/i) du/dt; returns the
    data trajectory at the grid times (raw conversion u-dot = i f1)."""
    n = system.n
    f = np.asarray(data, dtype=complex)
    u0, f1 = f[:n], f[n:]
    out_u, out_du = evolve_raw(system, u0, 1j * f1, t_grid)
    return np.hstack([out_u, -1j * out_du])


def charge_weight(system, t):
    """Time-dependent charge weight blocks W(t) (flat diagonal-block matrix)."""
    sp = space(system.sector)
    wts = fiber_weights(system.rank)
    kap = kappa_signs(system.rank)
    blocks = []
    for r in range(system.rank + 1):
        g = rl.to_numpy(sp.gram(r)) if sp.dim(r) else np.zeros((0, 0))
        w = float(wts[r] * kap[r]) * np.cosh(t) ** (3 - 2 * r)
        blocks.append(w * g)
    n = system.n
    out = np.zeros((n, n))
    o = 0
    for b in blocks:
        m = b.shape[0]
        out[o:o + m, o:o + m] = b
        o += m
    return out


def charge_raw(system, u, du, v, dv, t):
    """Conserved charge pairing of two raw solutions at time t."""
    w = charge_weight(system, t)
    return 1j * (du.conj() @ w @ v - u.conj() @ w @ dv)
