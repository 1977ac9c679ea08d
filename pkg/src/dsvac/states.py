"""Cauchy-surface covariances of the Euclidean vacuum and its variants.

The covariances are lambda_pm = +-q_{I,2} c_pm with c_pm the Lorentzian
conjugates of the Calderon projectors.  Variants: the modified vacuum
composes with a spectral projection removing the problematic low levels
(both of them by default; removing only the level-four part reproduces the
weaker variant whose residual gauge pairing along the boost-type directions
is reported rather than hidden), and the Bogoliubov family conjugates with
exp(alpha * S) for the linear time reversal S.
"""

from dataclasses import dataclass
from math import cosh, pi, sinh

import numpy as np
from scipy.integrate import quad

from . import rational as rl
from .cauchy import (
    charge_form,
    data_gram,
    lorentz_gauge_blocks,
    physical_charge_form,
    racah_block,
    wigner_matrix,
)
from .calderon import calderon_invertible, lorentzify
from .phase_space import pi_projection
from .radial import build_system, regular_basis, solution_profile
from .sectors import Family, SectorLabel
from .warped import EUCLIDEAN


@dataclass
class CovariancePair:
    sector: SectorLabel
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    variant: str  # 'euclidean_vacuum' | 'modified' | 'modified4' | 'alpha'
    alpha: float = 0.0


def euclidean_vacuum_pair(sector, projector_pair=None):
    """lambda_pm for the (pseudo) vacuum from the Euclidean Green's function."""
    if projector_pair is None:
        projector_pair = lorentzify(calderon_invertible(sector, "D2"))
    qi2 = rl.to_numpy(physical_charge_form(sector)).astype(complex)
    lam_p = qi2 @ projector_pair.c_plus
    lam_m = -qi2 @ projector_pair.c_minus
    return CovariancePair(sector, lam_p, lam_m, "euclidean_vacuum")


def build_covariances(sector, variant="euclidean_vacuum", alpha=0.0,
                      projector_pair=None):
    base = euclidean_vacuum_pair(sector, projector_pair)
    if variant == "euclidean_vacuum":
        return base
    if variant in ("modified", "modified4"):
        levels = (3, 4) if variant == "modified" else (4,)
        pim = pi_projection(sector, levels=levels).astype(complex)
        return CovariancePair(sector, pim.conj().T @ base.lambda_plus @ pim,
                              pim.conj().T @ base.lambda_minus @ pim, variant)
    if variant == "alpha":
        s_mat = rl.to_numpy(racah_block(sector)).astype(complex)
        u = cosh(alpha) * np.eye(len(s_mat)) + sinh(alpha) * s_mat
        return CovariancePair(sector, u.conj().T @ base.lambda_plus @ u,
                              u.conj().T @ base.lambda_minus @ u, variant, alpha)
    raise ValueError(f"unknown variant {variant!r}")


def hermiticity_residual(cov):
    """Relative Hermiticity defect (entries grow like the squared level)."""
    worst = 0.0
    for lam in (cov.lambda_plus, cov.lambda_minus):
        if lam.size == 0:
            continue
        scale = max(float(np.max(np.abs(lam))), 1.0)
        worst = max(worst, float(np.max(np.abs(lam - lam.conj().T))) / scale)
    return worst


def sum_rule_residual(cov, on=None):
    """lambda+ - lambda- = q_{I,2}, relative to the charge-form scale;
    restricted to a subspace basis if given."""
    qi2 = rl.to_numpy(physical_charge_form(cov.sector)).astype(complex)
    diff = cov.lambda_plus - cov.lambda_minus - qi2
    scale = max(float(np.max(np.abs(qi2))) if qi2.size else 0.0, 1.0)
    if on is None:
        return float(np.max(np.abs(diff))) / scale if diff.size else 0.0
    if on.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(on.conj().T @ diff @ on))) / scale


def compressed_extrema(cov, basis, sign=+1):
    """Extremal eigenvalues of a covariance compressed to a subspace,
    normalized by the Riemannian data Gram."""
    if basis.shape[1] == 0:
        return None
    lam = cov.lambda_plus if sign > 0 else cov.lambda_minus
    a = basis.conj().T @ lam @ basis
    g = basis.conj().T @ rl.to_numpy(data_gram(cov.sector, 2)) @ basis
    gi = np.linalg.inv(np.linalg.cholesky(g))
    sym = gi @ ((a + a.conj().T) / 2) @ gi.conj().T
    ev = np.linalg.eigvalsh(sym)
    return float(ev[0]), float(ev[-1])


def normalized_columns(sector, basis, rank=2):
    """Columns scaled to unit Riemannian data norm (zero columns dropped)."""
    if basis.shape[1] == 0:
        return basis
    g = rl.to_numpy(data_gram(sector, rank))
    out = []
    for j in range(basis.shape[1]):
        col = basis[:, j]
        nrm = np.sqrt(np.real(col.conj() @ g @ col))
        if nrm > 1e-14:
            out.append(col / nrm)
    return np.column_stack(out) if out else basis[:, :0]


def gauge_pairing_residual(cov, left_basis, right_basis, right_rank=2):
    """max |lambda_pm(f, g)| over unit-norm vectors of the two subspaces."""
    left = normalized_columns(cov.sector, left_basis, 2)
    right = normalized_columns(cov.sector, right_basis, right_rank)
    if left.shape[1] == 0 or right.shape[1] == 0:
        return 0.0
    vals = []
    for lam in (cov.lambda_plus, cov.lambda_minus):
        vals.append(np.max(np.abs(left.conj().T @ lam @ right)))
    return float(max(vals))


def full_gauge_residual(cov, ps, pi_levels=None):
    """max |lambda(f, K21 g)| over unit-norm f in E_TT and unit-norm gauge
    images K21 g, g ranging over all rank-1 data.

    For modified variants the projection is already inside the covariance.
    """
    sector = cov.sector
    k21 = lorentz_gauge_blocks(sector)["sym_grad"]
    if k21.size == 0 or ps.ett.shape[1] == 0:
        return 0.0
    return gauge_pairing_residual(cov, ps.ett, k21)


def norm_squared(sector, f):
    g = rl.to_numpy(data_gram(sector, 2))
    return float(np.real(np.conj(f) @ g @ f))


# -- symmetry checks ----------------------------------------------------------

def racah_antiunitarity_residual(sector):
    """S* q_{I,2} S = -q_{I,2}."""
    s = rl.to_numpy(racah_block(sector))
    qi2 = rl.to_numpy(physical_charge_form(sector))
    return float(np.max(np.abs(s.T @ qi2 @ s + qi2))) if s.size else 0.0


def alpha_unitarity_residual(sector, alpha):
    s = rl.to_numpy(racah_block(sector)).astype(complex)
    if not s.size:
        return 0.0
    qi2 = rl.to_numpy(physical_charge_form(sector)).astype(complex)
    u = cosh(alpha) * np.eye(len(s)) + sinh(alpha) * s
    scale = max(float(np.max(np.abs(qi2))), 1.0)
    return float(np.max(np.abs(u.conj().T @ qi2 @ u - qi2))) / scale


def time_reversal_residual(cov, rng=None):
    """conj(Zf) . lambda Zg = conj(g) . lambda f on random data."""
    rng = rng or np.random.default_rng(11)
    mz = rl.to_numpy(wigner_matrix(cov.sector)).astype(complex)
    n = len(mz)
    if n == 0:
        return 0.0
    worst = 0.0
    for lam in (cov.lambda_plus, cov.lambda_minus):
        for _ in range(4):
            f = rng.normal(size=n) + 1j * rng.normal(size=n)
            g = rng.normal(size=n) + 1j * rng.normal(size=n)
            zf, zg = mz @ f.conj(), mz @ g.conj()
            lhs = zf.conj() @ lam @ zg
            rhs = g.conj() @ lam @ f
            worst = max(worst, abs(lhs - rhs))
    return float(worst)


def wigner_involution_residual(sector):
    mz = rl.to_numpy(wigner_matrix(sector))
    return float(np.max(np.abs(mz @ mz - np.eye(len(mz))))) if mz.size else 0.0


# -- independent energy oracle -------------------------------------------------

def tt_energy_quadrature(k=2, tol=1e-10):
    """Hemisphere energy of the regular TT mode versus its boundary charge.

    For a transverse-traceless mode u = phi(s) T the quadratic form of the
    rank-2 operator is the manifestly positive integral

        Q(u,u) = int a^(3/2) [ a^-2 psi1^2 + 1/2 adot^2 a^-4 phi^2
                               + (lam-6) a^-3 phi^2 + 2 a^-2 phi^2 ] ds,

    psi1 = phi' - (adot/a) phi, and the boundary identity gives
    2 Q(u,u) = -2 phi(0) phi'(0), which is the covariance value of the
    regular datum.  Returns (quadrature, boundary, covariance) values.
    """
    sector = SectorLabel(Family.TENSOR, k)
    system = build_system("D2", sector, EUCLIDEAN)
    basis = regular_basis(system, keep_dense=True)
    prof = solution_profile(basis)
    lam = float(sector.eigenvalue)

    def integrand(s):
        (phi,), (dphi,) = prof(s)
        a = np.cos(s) ** 2
        adot = -np.sin(2 * s)
        psi1 = dphi - adot / a * phi
        return (a ** 1.5) * (psi1 ** 2 / a ** 2 + 0.5 * adot ** 2 / a ** 4 * phi ** 2
                             + (lam - 6) / a ** 3 * phi ** 2 + 2 / a ** 2 * phi ** 2)

    energy, _ = quad(integrand, 0.0, pi / 2, points=[pi / 2 - basis.match_radius],
                     epsabs=tol, epsrel=tol, limit=200)
    f = basis.raw_data[:, 0]  # (phi(0), -phi'(0)) of the integrated profile
    boundary = 2.0 * f[0] * f[1]
    cov = euclidean_vacuum_pair(sector)
    lam_val = float(np.real(f.astype(complex).conj() @ cov.lambda_plus @ f))
    return 2.0 * energy, float(boundary), lam_val
