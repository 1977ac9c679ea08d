"""Calderon projectors per sector, from regular solution subspaces.

The projector onto Cauchy data of solutions regular in one hemisphere is the
oblique projection onto the north regular subspace along the south one; the
south basis is the exact reflection of the north one, so the pair identities
hold to machine precision and only one one-sided construction is ever
integrated.  When the operator has a kernel (rank-1 gravity in the two
Killing sectors, Maxwell scalars at level zero) the projectors only exist on
the charge-orthogonal complement of the kernel data and descend to the
quotient.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import rational as rl
from .cauchy import euclid_symplectic_form, kappa_block, wick_phases
from .radial import build_system, regular_basis
from .sectors import Family, SectorLabel
from .warped import EUCLIDEAN


@dataclass
class QuotientInfo:
    kernel: np.ndarray        # data of two-sided regular solutions
    subspace: np.ndarray      # orthonormal basis of the q-orthogonal domain
    quotient_dim: int
    complement: np.ndarray    # basis of subspace modulo kernel


@dataclass
class ProjectorPair:
    sector: SectorLabel
    operator_id: str
    flavor: str
    c_plus: np.ndarray
    c_minus: np.ndarray
    maxwell: bool = False
    quotient_info: Optional[QuotientInfo] = None
    conditioning: float = 0.0


def _orth(m, tol=1e-10):
    if m.size == 0:
        return np.zeros((m.shape[0], 0))
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0], 1.0))) if s.size else 0
    return u[:, :rank]


def _reflected(system, data):
    from .radial import _kappa_data
    return _kappa_data(system)[:, None] * data


def calderon_invertible(sector, operator_id="D2", maxwell=False, **params):
    """Euclidean projector pair for an invertible operator (transversal
    regular subspaces)."""
    system = build_system(operator_id, sector, EUCLIDEAN, maxwell=maxwell)
    north = regular_basis(system, "north", **params)
    vp = north.data_matrix
    vm = _reflected(system, vp)
    n = system.n
    both = np.hstack([vp, vm])
    sv = np.linalg.svd(both, compute_uv=False)
    cond = sv[-1] / sv[0]
    if cond < 1e-8:
        raise RuntimeError(
            f"regular subspaces not transversal for {operator_id} {sector}: "
            f"conditioning {cond:.2e} (operator not invertible here)")
    inv = np.linalg.inv(both)
    c_plus = vp @ inv[:n]
    c_minus = np.eye(2 * n) - c_plus
    return ProjectorPair(sector, operator_id, EUCLIDEAN, c_plus, c_minus,
                         maxwell=maxwell, conditioning=cond)


def calderon_quotient(sector, operator_id="D1", maxwell=False, **params):
    """Euclidean projector pair in the non-invertible case.

    The projectors act on the charge-orthogonal complement of the kernel
    data and are well defined modulo those data; the returned matrices are
    the action on the subspace basis (columns of ``quotient_info.subspace``)
    with the kernel ambiguity projected out on the quotient.
    """
    system = build_system(operator_id, sector, EUCLIDEAN, maxwell=maxwell)
    north = regular_basis(system, "north", **params)
    vp = north.data_matrix
    vm = _reflected(system, vp)
    n = system.n
    # kernel data: intersection of the two regular subspaces
    u, s, vt = np.linalg.svd(vp.T @ vm)
    ker_dirs = [vp @ u[:, i] for i in range(len(s)) if s[i] > 1 - 1e-9]
    kernel = np.column_stack(ker_dirs) if ker_dirs else np.zeros((2 * n, 0))
    if kernel.shape[1] == 0:
        raise RuntimeError(f"no kernel data in {sector}; use calderon_invertible")
    # q-orthogonal domain
    q = rl.to_numpy(rl.matmul(euclid_symplectic_form(sector, system.rank),
                              kappa_block(sector, system.rank)))
    w = _null(kernel.T @ q)  # f with kernel^T q f = 0
    # sanity: kernel inside its own q-orthogonal
    assert np.max(np.abs(kernel.T @ q @ kernel)) < 1e-9
    span = _orth(np.hstack([vp, vm]))
    # the domain must coincide with span(vp, vm)
    if w.shape[1] != span.shape[1] or _angle(w, span) > 1e-8:
        raise RuntimeError("q-orthogonal domain does not match V+ + V-")
    # decompose f = f_plus + f_minus (ambiguous along the kernel); the
    # kernel makes [vp vm] genuinely rank-deficient, so cut the pseudo
    # inverse well above integrator noise
    both = np.hstack([vp, vm])
    pinv = np.linalg.pinv(both, rcond=1e-8)
    c_plus_w = vp @ (pinv @ w)[:n]
    c_minus_w = w - c_plus_w
    comp = _complement(w, kernel)
    qinfo = QuotientInfo(kernel=kernel, subspace=w,
                         quotient_dim=comp.shape[1], complement=comp)
    return ProjectorPair(sector, operator_id, EUCLIDEAN,
                         c_plus_w, c_minus_w, maxwell=maxwell,
                         quotient_info=qinfo,
                         conditioning=float(s[-1]) if len(s) else 0.0)


def _null(m, tol=1e-10):
    if m.size == 0:
        return np.eye(m.shape[1])
    u, s, vt = np.linalg.svd(m, full_matrices=True)
    rank = int(np.sum(s > tol * max(s[0], 1)))
    return vt[rank:].conj().T


def _complement(w, kernel):
    """Basis of w modulo kernel (columns orthogonal to the kernel)."""
    if kernel.shape[1] == 0:
        return w
    k = _orth(kernel)
    proj = w - k @ (k.conj().T @ w)
    return _orth(proj)


def _angle(a, b):
    """sin of the largest principal angle between equal-dim column spaces.

    Computed from the residual projection, which stays accurate for tiny
    angles (the arccos form loses half the digits).
    """
    qa, qb = _orth(a), _orth(b)
    if qa.shape[1] != qb.shape[1]:
        return 1.0
    if qa.shape[1] == 0:
        return 0.0
    ra = qa - qb @ (qb.conj().T @ qa)
    rb = qb - qa @ (qa.conj().T @ qb)
    sa = np.linalg.svd(ra, compute_uv=False)
    sb = np.linalg.svd(rb, compute_uv=False)
    return float(max(sa[0] if sa.size else 0.0, sb[0] if sb.size else 0.0))


def principal_angle(a, b):
    return _angle(a, b)


def quotient_matrices(pair):
    """[c+], [c-] on the quotient subspace/kernel, in the complement basis."""
    qi = pair.quotient_info
    comp = qi.complement
    if comp.shape[1] == 0:
        d = 0
        return np.zeros((0, 0)), np.zeros((0, 0))
    k = _orth(qi.kernel)

    def reduce(c_w):
        # c_w maps subspace-basis columns; express action on complement
        # vectors modulo kernel
        coords = np.linalg.lstsq(qi.subspace, comp, rcond=None)[0]
        img = c_w @ coords
        img = img - k @ (k.conj().T @ img)
        return comp.conj().T @ img

    return reduce(pair.c_plus), reduce(pair.c_minus)


def lorentzify(pair):
    """Conjugate a Euclidean pair by the Wick component phases.

    For quotient pairs the stored matrices act on the subspace basis
    columns, so only their rows are rephased and the subspace itself is
    transported alongside.
    """
    if pair.flavor != EUCLIDEAN:
        raise ValueError("pair is already Lorentzian")
    rank = {"D0": 0, "D1": 1, "D2": 2}[pair.operator_id]
    f = wick_phases(pair.sector, rank)
    finv = 1.0 / f

    def rows(c):
        return finv[:, None] * c if c.size else c.astype(complex)

    if pair.quotient_info is None:
        c_plus = rows(pair.c_plus) * f[None, :]
        c_minus = rows(pair.c_minus) * f[None, :]
        qinfo = None
    else:
        c_plus = rows(pair.c_plus)
        c_minus = rows(pair.c_minus)
        qi = pair.quotient_info
        qinfo = QuotientInfo(kernel=rows(qi.kernel), subspace=rows(qi.subspace),
                             quotient_dim=qi.quotient_dim,
                             complement=rows(qi.complement))
    return ProjectorPair(pair.sector, pair.operator_id, "lorentzian",
                         c_plus, c_minus, maxwell=pair.maxwell,
                         quotient_info=qinfo, conditioning=pair.conditioning)


def apply_pair(pair, f, sign=+1, tol=1e-8):
    """Apply c+ (sign=+1) or c- to a data vector.

    Quotient pairs require f in the stored subspace (up to ``tol``); the
    result carries the usual kernel ambiguity.
    """
    c = pair.c_plus if sign > 0 else pair.c_minus
    f = np.asarray(f, dtype=complex)
    if pair.quotient_info is None:
        return c @ f
    w = pair.quotient_info.subspace
    coords, *_ = np.linalg.lstsq(w, f, rcond=None)
    if np.linalg.norm(w @ coords - f) > tol * max(1.0, np.linalg.norm(f)):
        raise ValueError("data not in the projector domain")
    return c @ coords


KILLING_SECTORS = (SectorLabel(Family.SCALAR, 1), SectorLabel(Family.VECTOR, 1))


def gravity_rank2_pair(sector, **params):
    return calderon_invertible(sector, "D2", **params)


def gravity_rank1_pair(sector, **params):
    if sector in KILLING_SECTORS:
        return calderon_quotient(sector, "D1", **params)
    return calderon_invertible(sector, "D1", **params)


def maxwell_rank1_pair(sector, **params):
    return calderon_invertible(sector, "D1", maxwell=True, **params)


def maxwell_rank0_pair(sector, **params):
    if sector == SectorLabel(Family.SCALAR, 0):
        return calderon_quotient(sector, "D0", maxwell=True, **params)
    return calderon_invertible(sector, "D0", maxwell=True, **params)
