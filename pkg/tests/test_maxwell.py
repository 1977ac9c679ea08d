import numpy as np
import pytest

from dsvac import rational as rl
from dsvac import cauchy as cy
from dsvac.calderon import lorentzify, quotient_matrices
from dsvac.maxwell import (
    SCALAR0,
    div_block_lorentz,
    grad_block_lorentz,
    maxwell_charge_kernel,
    maxwell_covariances,
    maxwell_compressed_extrema,
    maxwell_full_gauge_residual,
    maxwell_phase_space,
    maxwell_projector_pair,
    maxwell_rank0_pair,
    maxwell_sectors,
    maxwell_sum_rule_residual,
    spectra_disjoint,
)
from dsvac.sectors import Family, SectorLabel
from dsvac.states import norm_squared

K_CHECK = 5
SECTORS = maxwell_sectors(K_CHECK)


@pytest.fixture(scope="module")
def setup():
    pairs = {sec: lorentzify(maxwell_projector_pair(sec)) for sec in SECTORS}
    spaces = {sec: maxwell_phase_space(sec) for sec in SECTORS}
    covs = {sec: maxwell_covariances(sec, projector_pair=pairs[sec])
            for sec in SECTORS}
    return pairs, spaces, covs


def test_spectra_disjoint():
    assert spectra_disjoint(40)


def test_gauge_composition():
    for sec in SECTORS:
        k10 = grad_block_lorentz(sec)
        k10d = div_block_lorentz(sec)
        if k10.size == 0:
            continue
        z = k10d @ k10
        assert np.max(np.abs(z)) < 1e-12, sec


def test_phase_space_dims(setup):
    _, spaces, _ = setup
    # E = F = E_0 at level zero (the zero mode is itself a gauge image)
    assert spaces[SCALAR0].dims == (1, 0, 1, 1)
    assert spaces[SectorLabel(Family.SCALAR, 2)].dims == (2, 0, 2, 0)
    assert spaces[SectorLabel(Family.VECTOR, 1)].dims == (2, 2, 0, 0)
    total_zero = sum(ps.e_zero.shape[1] * sec.multiplicity
                     for sec, ps in spaces.items())
    assert total_zero == 1


def test_rank0_quotient():
    pair = maxwell_rank0_pair(SCALAR0)
    qi = pair.quotient_info
    assert qi.kernel.shape[1] == 1
    # constants give the two-sided regular solution with data (1, 0)
    v = np.zeros(2)
    v[0] = 1.0
    from dsvac.calderon import principal_angle
    assert principal_angle(qi.kernel, v[:, None]) < 1e-10
    assert qi.quotient_dim == 0
    cp, cm = quotient_matrices(pair)
    assert cp.shape == (0, 0)
    # level >= 1 scalars are invertible
    maxwell_rank0_pair(SectorLabel(Family.SCALAR, 2))


def test_projector_identities(setup):
    pairs, _, _ = setup
    for sec, pair in pairs.items():
        n = pair.c_plus.shape[0]
        assert np.max(np.abs(pair.c_plus + pair.c_minus - np.eye(n))) < 1e-12
        assert np.max(np.abs(pair.c_plus @ pair.c_plus - pair.c_plus)) < 1e-9
        q1 = rl.to_numpy(cy.charge_form(sec, 1))
        assert np.max(np.abs(pair.c_plus.conj().T @ q1 - q1 @ pair.c_plus)) < 1e-9


def test_sum_rule_and_hermiticity(setup):
    _, _, covs = setup
    for sec, cov in covs.items():
        assert maxwell_sum_rule_residual(cov) < 1e-10
        assert np.max(np.abs(cov.lambda_plus - cov.lambda_plus.conj().T)) < 1e-12


def test_positivity_dichotomy(setup):
    _, spaces, covs = setup
    for sec in SECTORS:
        ps, cov = spaces[sec], covs[sec]
        if sec.family is Family.VECTOR:
            for sign in (+1, -1):
                ext = maxwell_compressed_extrema(cov, ps.e_gauge, sign)
                assert ext[0] > -1e-9, (sec, sign)
    # negativity on the level-zero line, strictly
    ps0, cov0 = spaces[SCALAR0], covs[SCALAR0]
    f = ps0.e_zero[:, 0]
    for lam in (cov0.lambda_plus, cov0.lambda_minus):
        val = float(np.real(f.conj() @ lam @ f))
        assert val < 1e-9
    total = float(np.real(f.conj() @ (cov0.lambda_plus + cov0.lambda_minus) @ f))
    g = rl.to_numpy(cy.data_gram(SCALAR0, 1))
    assert total / float(np.real(f.conj() @ g @ f)) < -1e-6


def test_charge_kernel(setup):
    _, spaces, _ = setup
    for sec, ps in spaces.items():
        assert maxwell_charge_kernel(ps) < 1e-10, sec


def test_weak_invariance(setup):
    # vanishing on E x F_gauge; the level-zero line in F pairs nontrivially
    # (that is the strong-invariance failure, tested separately)
    _, spaces, covs = setup
    for sec in SECTORS:
        ps = spaces[sec]
        if ps.f_gauge.shape[1] == 0 or ps.e_space.shape[1] == 0:
            continue
        resid = max(
            float(np.max(np.abs(ps.e_space.conj().T @ covs[sec].lambda_plus
                                @ ps.f_gauge))),
            float(np.max(np.abs(ps.e_space.conj().T @ covs[sec].lambda_minus
                                @ ps.f_gauge))))
        assert resid < 1e-9, sec


def test_modified_state(setup):
    pairs, spaces, _ = setup
    for sec in SECTORS:
        ps = spaces[sec]
        cov = maxwell_covariances(sec, "modified", projector_pair=pairs[sec])
        assert maxwell_sum_rule_residual(cov, on=ps.e_space) < 1e-10, sec
        if ps.e_space.shape[1]:
            for sign in (+1, -1):
                ext = maxwell_compressed_extrema(cov, ps.e_space, sign)
                assert ext[0] > -1e-9, (sec, sign)
        assert maxwell_full_gauge_residual(cov, ps) < 1e-9, sec


def test_strong_invariance_fails_unmodified(setup):
    _, spaces, covs = setup
    ps0, cov0 = spaces[SCALAR0], covs[SCALAR0]
    f = ps0.e_zero[:, 0]
    val = abs(np.real(f.conj() @ cov0.lambda_plus @ f))
    g = rl.to_numpy(cy.data_gram(SCALAR0, 1))
    assert val > 1e-3 * float(np.real(f.conj() @ g @ f))
