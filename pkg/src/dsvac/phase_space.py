"""TT-gauge phase space per sector: bases and decompositions.

The physical space E_TT (kernel of both adjoint gauge blocks) decomposes per
sector into a transverse-traceless part, a gauge part and the problematic
level-four part.  Two independent routes are used throughout: exact null
space computations of the Cauchy blocks, and the explicit parametrization by
(u, f, beta) coordinates; they must agree exactly.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rational as rl
from .cauchy import (
    DataLayout,
    charge_form,
    lorentz_gauge_blocks,
    neg_trace_block,
    physical_charge_form,
    sym_div_block,
    wick_phases,
)
from .sectors import Family, SectorLabel, space

Q = Fraction

VECTOR1 = SectorLabel(Family.VECTOR, 1)
SCALAR1 = SectorLabel(Family.SCALAR, 1)


def _dim_fixture(sector):
    """Hand-audited dimensions (E_TT, E_gauge, F_TT, F_gauge, E_4)."""
    fam, k = sector.family, sector.k
    if fam is Family.TENSOR:
        return (2, 2, 0, 0, 0)
    if fam is Family.SCALAR:
        if k == 0:
            return (0, 0, 0, 0, 0)
        if k == 1:
            return (1, 0, 1, 1, 0)
        return (2, 0, 2, 2, 0)
    if k == 1:
        return (1, 0, 1, 0, 1)
    return (2, 0, 2, 2, 0)


def ett_nullspace_euclid(sector):
    """Exact Euclidean E_TT basis as the joint null space of the adjoint
    gauge blocks.  Sectors with no adjoint range (pure TT) are
    unconstrained."""
    size = DataLayout(sector, 2).size
    stacked = rl.vstack([sym_div_block(sector), neg_trace_block(sector)])
    if not stacked:
        return [[Q(1) if i == j else Q(0) for i in range(size)] for j in range(size)]
    return rl.nullspace(stacked)


def _param_columns(sector):
    """Columns of the explicit (u, f, beta) parametrization, exact, with
    labels 'u0','u1','f0','f1','bs','bS'."""
    sp = space(sector)
    lay = DataLayout(sector, 2)
    lam = sector.eigenvalue
    cols = []

    def blank():
        return [Q(0)] * lay.size

    def put(v, half, slot, coeffs):
        o = half * lay.half + lay.offsets[slot]
        for i, c in enumerate(coeffs):
            v[o + i] += c

    if sector.family is Family.TENSOR:
        for half, name in ((0, "u0"), (1, "u1")):
            v = blank()
            put(v, half, 2, [Q(1)])
            cols.append((name, v))
        return cols
    if sector == SCALAR1:
        v = blank()
        put(v, 0, 0, [Q(-3)])      # g_0ss = -3 beta_s
        put(v, 0, 2, [Q(1)])       # g_0SS = beta_s h
        put(v, 1, 1, [Q(1)])       # g_1sS = d beta_s
        return [("bs", v)]
    if sector == VECTOR1:
        v = blank()
        put(v, 0, 1, [Q(1)])       # g_0sS = beta_S
        return [("bS", v)]
    if sector.family is Family.SCALAR:
        # f0 along dY: rows 1, 3, 5
        v = blank()
        put(v, 0, 0, [lam])                           # delta f0S
        names2 = sp.basis[2]
        idx_dd = names2.index("ddY")
        e_dd = [Q(1) if i == idx_dd else Q(0) for i in range(len(names2))]
        put(v, 0, 2, e_dd)                            # d f0S
        put(v, 1, 1, [-(2 * (lam - 2)) / 2])          # -1/2 delta d f0S
        c0 = ("f0", v)
        # f1 along dY: rows 2, 4, 6
        v = blank()
        put(v, 0, 1, [Q(-1, 2) * (1 + lam / (lam - 6))])
        put(v, 1, 0, [(1 + 3 / (lam - 6)) * lam])
        e6 = list(e_dd)
        idx_h = names2.index("hY")
        e6[idx_h] = -lam / (lam - 6)
        put(v, 1, 2, e6)
        return [c0, ("f1", v)]
    # transverse vector sectors, k >= 2
    v = blank()
    put(v, 0, 2, [Q(1)])                 # d f0S
    put(v, 1, 1, [-(lam - 4) / 2])       # -1/2 delta d f0S
    c0 = ("f0", v)
    v = blank()
    put(v, 0, 1, [Q(-1, 2)])
    put(v, 1, 2, [Q(1)])
    return [c0, ("f1", v)]


@dataclass
class PhaseSpaceSector:
    """All phase-space subspaces of one sector, Lorentzian data columns.

    ``ftt_gauge`` is the level-characterized gauge part (everything in F_TT
    outside the level-four line); ``ett3`` is its level-three piece, the
    trace of the boost-type Killing gauge modes living in Scalar(1).  The
    strictly gauge-invariant part of F_TT — the image of the
    Killing-orthogonal subspace — excludes ett3 as well; see
    ``ftt_gauge_strict``.  The two notions coincide except in Scalar(1).
    """

    sector: SectorLabel
    ett: np.ndarray
    ett_gauge: np.ndarray
    ftt: np.ndarray
    ftt_gauge: np.ndarray
    ett4: np.ndarray
    ett3: np.ndarray
    param_labels: list
    param_matrix_euclid: list  # exact rational columns, labelled

    @property
    def ftt_gauge_strict(self):
        if self.sector == SCALAR1:
            return self.ftt_gauge[:, :0]
        return self.ftt_gauge

    @property
    def dims(self):
        return (self.ett.shape[1], self.ett_gauge.shape[1], self.ftt.shape[1],
                self.ftt_gauge.shape[1], self.ett4.shape[1])


def _to_lorentz(cols, sector):
    lay = DataLayout(sector, 2)
    if not cols:
        return np.zeros((lay.size, 0), dtype=complex)
    f = wick_phases(sector, 2)
    arr = np.array([[complex(x) for x in col] for col in cols]).T
    return arr / f[:, None]


def phase_space_sector(sector):
    """Construct all subspaces, exactly, and cross-check the two routes."""
    null_eu = ett_nullspace_euclid(sector)
    params = _param_columns(sector) if _dim_fixture(sector)[0] else []
    d_ett, d_eg, d_f, d_fg, d_e4 = _dim_fixture(sector)
    if len(null_eu) != d_ett or len(params) != d_ett:
        raise RuntimeError(
            f"E_TT dimension drift in {sector}: null space {len(null_eu)}, "
            f"parametrization {len(params)}, fixture {d_ett}")
    # the parametrization columns must span exactly the null space
    if params:
        stacked = rl.vstack([sym_div_block(sector), neg_trace_block(sector)])
        for _, col in params:
            resid = rl.matvec(stacked, col)
            if any(x != 0 for x in resid):
                raise RuntimeError(f"parametrization column leaves E_TT in {sector}")
    by_label = {}
    for name, col in params:
        by_label.setdefault(name, []).append(col)
    gauge_cols, f_cols, fg_cols, e4_cols = [], [], [], []
    for name, col in params:
        if name in ("u0", "u1"):
            gauge_cols.append(col)
        else:
            f_cols.append(col)
            if name == "bS":
                e4_cols.append(col)
            else:
                fg_cols.append(col)
    e3_cols = [col for name, col in params if name == "bs"]
    return PhaseSpaceSector(
        sector=sector,
        ett=_to_lorentz([c for _, c in params], sector),
        ett_gauge=_to_lorentz(gauge_cols, sector),
        ftt=_to_lorentz(f_cols, sector),
        ftt_gauge=_to_lorentz(fg_cols, sector),
        ett4=_to_lorentz(e4_cols, sector),
        ett3=_to_lorentz(e3_cols, sector),
        param_labels=[n for n, _ in params],
        param_matrix_euclid=params,
    )


def decompose(ps, data, tol=1e-10):
    """Unique (u, f, beta) coordinates of a Lorentzian E_TT datum, with
    membership flags."""
    if ps.ett.shape[1] == 0:
        raise ValueError("sector has trivial physical space")
    coords, *_ = np.linalg.lstsq(ps.ett, np.asarray(data, complex), rcond=None)
    resid = np.linalg.norm(ps.ett @ coords - data)
    if resid > tol * max(1.0, np.linalg.norm(data)):
        raise ValueError(f"datum not in E_TT (residual {resid:.2e})")
    named = dict(zip(ps.param_labels, coords))
    flags = {
        "ett_gauge": all(abs(named.get(k, 0)) < tol for k in ("f0", "f1", "bs", "bS")),
        "ftt": all(abs(named.get(k, 0)) < tol for k in ("u0", "u1")),
        "ftt_gauge": all(abs(named.get(k, 0)) < tol for k in ("u0", "u1", "bS")),
        "ett4": all(abs(named.get(k, 0)) < tol for k in ("u0", "u1", "f0", "f1", "bs")),
    }
    return named, flags


def pi_projection(sector, levels=(3, 4)):
    """Spectral projection removing the problematic low levels.

    ``levels=(4,)`` removes only the Vector(1) sector (the level-four
    subspace); the default ``(3, 4)`` also removes Scalar(1), which is what
    full gauge invariance of the modified vacuum actually requires: the
    level-three trace modes pair nontrivially with the covariances (see
    ``ftt_gauge_strict``), so leaving them in breaks invariance along the
    boost-type gauge directions.
    """
    lay = DataLayout(sector, 2)
    if sector == VECTOR1 and 4 in levels:
        return np.zeros((lay.size, lay.size))
    if sector == SCALAR1 and 3 in levels:
        return np.zeros((lay.size, lay.size))
    return np.eye(lay.size)


def pi_projection_rank1(sector, levels=(3, 4)):
    """The matching spectral projection on rank-1 data (gauge parameters)."""
    lay = DataLayout(sector, 1)
    if sector == VECTOR1 and 4 in levels:
        return np.zeros((lay.size, lay.size))
    if sector == SCALAR1 and 3 in levels:
        return np.zeros((lay.size, lay.size))
    return np.eye(lay.size)


def ftt_image_route(sector, tol=1e-10):
    """F_TT via the independent route: gauge image intersected with the
    trace kernel (Lorentzian, numerical)."""
    blocks = lorentz_gauge_blocks(sector)
    k21 = blocks["sym_grad"]
    k20d = blocks["neg_trace"]
    if k21.size == 0:
        return np.zeros((DataLayout(sector, 2).size, 0), dtype=complex)
    u, s, vt = np.linalg.svd(k21, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0], 1)))
    image = u[:, :rank]
    if k20d.shape[0] == 0:
        return image
    m = k20d @ image
    u2, s2, vt2 = np.linalg.svd(m, full_matrices=True)
    r2 = int(np.sum(s2 > tol * max(s2[0] if s2.size else 0, 1)))
    return image @ vt2[r2:].conj().T


def ftt_gauge_image_route(sector, tol=1e-10):
    """F_TT_gauge via the image of the Killing-orthogonal subspace."""
    blocks = lorentz_gauge_blocks(sector)
    k21 = blocks["sym_grad"]
    if k21.size == 0:
        return np.zeros((DataLayout(sector, 2).size, 0), dtype=complex)
    kd = _killing_lorentz(sector)
    q1 = rl.to_numpy(charge_form(sector, 1))
    if kd.shape[1]:
        dom = _nullcols(kd.conj().T @ q1, tol)
    else:
        dom = np.eye(k21.shape[1], dtype=complex)
    img = k21 @ dom
    k20d = blocks["neg_trace"]
    u, s, vt = np.linalg.svd(img, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0] if s.size else 0, 1)))
    image = u[:, :rank]
    if k20d.shape[0] == 0 or rank == 0:
        return image
    m = k20d @ image
    u2, s2, vt2 = np.linalg.svd(m, full_matrices=True)
    r2 = int(np.sum(s2 > tol * max(s2[0] if s2.size else 0, 1)))
    return image @ vt2[r2:].conj().T


def _killing_lorentz(sector):
    from .cauchy import killing_data
    return killing_data(sector)


def _nullcols(m, tol=1e-10):
    if m.size == 0:
        return np.eye(m.shape[1], dtype=complex)
    u, s, vt = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > tol * max(s[0], 1)))
    return vt[rank:].conj().T


def charge_kernel_check(ps, tol=1e-10):
    """Kernel of q_{I,2} restricted to E_TT versus F_TT (principal angle),
    and the smallest singular value of the charge on E_TT / F_TT."""
    sector = ps.sector
    if ps.ett.shape[1] == 0:
        return {"kernel_angle": 0.0, "quotient_sv": None}
    qi2 = rl.to_numpy(physical_charge_form(sector))
    compressed = ps.ett.conj().T @ qi2 @ ps.ett
    u, s, vt = np.linalg.svd(compressed)
    rank = int(np.sum(s > tol * max(s[0] if s.size else 0, 1)))
    ker = ps.ett @ vt[rank:].conj().T
    from .calderon import principal_angle
    angle = principal_angle(ker, ps.ftt) if (ker.size or ps.ftt.size) else 0.0
    quo_sv = float(s[rank - 1]) if rank else None
    return {"kernel_angle": float(angle), "quotient_sv": quo_sv,
            "kernel_dim": ker.shape[1], "ftt_dim": ps.ftt.shape[1]}
