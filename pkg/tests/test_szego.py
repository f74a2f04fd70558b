import numpy as np
import pytest

from opuc.szego import (BranchConfigurationError, CutError, build_modified,
                        modified_szego, scattering, scattering_modified,
                        szego_data_for, szego_function, theta_constants)
from opuc.weights import zero_modified

CIRCLE = np.exp(1j * 2.0 * np.pi * np.arange(128) / 128)


def test_lebesgue_scattering_is_one(leb_szego):
    assert abs(leb_szego.S.coeff(0) - 1.0) <= 1e-15
    assert np.max(np.abs(leb_szego.S.coeffs[np.arange(-72, 73) != 0])) == 0.0
    assert leb_szego.tau == 1.0 and leb_szego.geometric_mean == 1.0


def test_szego_function_closed_forms(bs2_szego):
    assert abs(szego_function(bs2_szego, 0.4, "interior") - 0.8) <= 1e-13
    assert abs(szego_function(bs2_szego, 2.0, "exterior") - 4.0 / 3.0) <= 1e-13
    assert abs(szego_function(bs2_szego, 1e9, "exterior") - bs2_szego.tau) <= 1e-9


def test_szego_symmetry_identity(bs2_szego):
    for z in (3.0, 1.7 - 0.9j, -2.4 + 0.3j):
        lhs = np.conj(szego_function(bs2_szego, 1.0 / np.conj(z), "interior"))
        rhs = 1.0 / szego_function(bs2_szego, z, "exterior")
        assert abs(lhs - rhs) <= 1e-10


def test_boundary_and_wiener_hopf_identities(bs2, bs2_szego):
    w_vals = bs2(np.angle(CIRCLE) % (2 * np.pi))
    d_i = szego_function(bs2_szego, CIRCLE, "interior")
    d_e = szego_function(bs2_szego, CIRCLE, "exterior")
    assert np.max(np.abs(d_i / d_e - w_vals)) <= 1e-9
    assert np.max(np.abs(w_vals * np.abs(d_e) ** 2 - 1.0)) <= 1e-9


def test_scattering_closed_coefficients(bs2_szego):
    # 1/S = -1/(2z) + (3/4)/(1 - z/2) by partial fractions
    for k in range(12):
        assert abs(bs2_szego.S_inv.coeff(k) - 0.75 * 2.0 ** (-k)) <= 1e-12
    assert abs(bs2_szego.S_inv.coeff(-1) + 0.5) <= 1e-12
    assert abs(bs2_szego.S.coeff(1) + 0.5) <= 1e-12
    assert abs(bs2_szego.S.coeff(0) - 0.75) <= 1e-12


def test_scattering_unimodular_on_circle(bs2_szego):
    th = 2.0 * np.pi * np.arange(64) / 64
    vals = bs2_szego.S.evaluate(np.exp(1j * th))
    assert np.max(np.abs(np.abs(vals) - 1.0)) <= 1e-10


def test_scattering_reciprocal_relation(bs2_szego):
    for k in range(-20, 21):
        assert abs(bs2_szego.S_inv.coeff(k)
                   - np.conj(bs2_szego.S.coeff(-k))) <= 1e-12


def test_parseval_identity(bs2):
    sz = szego_data_for(bs2, 64)
    ks = np.arange(-64, 65)
    for m in (-2, -1, 0, 1, 2):
        total = sum(sz.S.coeff(k + m) * np.conj(sz.S.coeff(k)) for k in ks)
        assert abs(total - (1.0 if m == 0 else 0.0)) <= 1e-8


def test_tau_geometric_mean_relation(bs2_szego, ess05):
    assert abs(bs2_szego.tau ** 2 * bs2_szego.geometric_mean - 1.0) <= 1e-12
    sz = szego_data_for(ess05, 48)
    assert abs(sz.tau ** 2 * sz.geometric_mean - 1.0) <= 1e-12


def test_scattering_rejects_nonfinite():
    from opuc.laurent import LaurentSeries
    bad = LaurentSeries.from_pairs({1: np.nan}, 4)
    with pytest.raises(ValueError):
        scattering(bad, 4)


def test_interior_exterior_domain_checks(bs2_szego):
    with pytest.raises(ValueError):
        szego_function(bs2_szego, 2.5, "interior")   # beyond 1/rho = 2
    with pytest.raises(ValueError):
        szego_function(bs2_szego, 0.4, "exterior")   # inside rho = 1/2


# -- zero-modified weights ---------------------------------------------------

def test_modified_reduces_when_beta_zero(leb, leb_szego):
    W = zero_modified(leb, [(0.0, 0.0)])
    for z in (0.3 + 0.2j, -0.5j):
        assert abs(modified_szego(W, leb_szego, z, "interior")
                   - szego_function(leb_szego, z, "interior")) <= 1e-14


def test_modified_normalization(zmod1, leb_szego):
    # 1/D_i(W; 0) = D_e(W; inf) = tau of the base weight
    assert abs(modified_szego(zmod1, leb_szego, 0.0, "interior") - 1.0) <= 1e-12
    far = modified_szego(zmod1, leb_szego, 1e7, "exterior")
    assert abs(far - 1.0) <= 1e-6


def test_modified_cut_jump(zmod1, leb_szego):
    # crossing the radial cut multiplies the interior function by e^{-2 pi i beta}
    eps = 1e-6
    up = modified_szego(zmod1, leb_szego, 1.2 * np.exp(1j * eps), "interior")
    dn = modified_szego(zmod1, leb_szego, 1.2 * np.exp(-1j * eps), "interior")
    assert abs(up / dn - np.exp(-2j * np.pi * 0.5)) <= 1e-5


def test_modified_cut_error(zmod1, leb_szego):
    with pytest.raises(CutError):
        modified_szego(zmod1, leb_szego, 1.3, "interior", cut_tol=1e-9)
    # interior evaluation below the circle on the same ray is fine
    modified_szego(zmod1, leb_szego, 0.7, "interior", cut_tol=1e-9)


def test_theta_single_zero(zmod1, leb_szego):
    msz = build_modified(zmod1, leb_szego)
    assert abs(msz.q0 - np.exp(-1j * np.pi / 4)) <= 1e-12
    assert abs(abs(msz.theta[0]) - 1.0) <= 1e-10
    # the branch convention pins the value itself
    assert abs(msz.theta[0] - 1.0) <= 1e-9
    assert msz.theta_disagreement[0] <= 1e-10


def test_theta_symmetric_pair(zmod2, leb_szego):
    msz = build_modified(zmod2, leb_szego)
    assert np.max(np.abs(np.abs(msz.theta) - 1.0)) <= 1e-10
    # z -> -z symmetry of the weight forces equal constants
    assert abs(msz.theta[0] / msz.theta[1] - 1.0) <= 1e-9


def test_theta_disagreement_guard(zmod1, leb_szego):
    # an impossible agreement tolerance trips the branch-configuration error
    with pytest.raises(BranchConfigurationError):
        theta_constants(zmod1, leb_szego, tol=-1.0)


def test_theta_beta_zero_equals_base_scattering(leb, leb_szego):
    W = zero_modified(leb, [(1.0, 0.0)])
    thetas, _ = theta_constants(W, leb_szego)
    assert abs(thetas[0] - 1.0) <= 1e-12   # S(w; a) = 1 for the Lebesgue weight


def test_modified_scattering_unimodular_off_zeros(zmod2, leb_szego):
    th = np.linspace(0.2, np.pi - 0.2, 40)
    vals = scattering_modified(zmod2, leb_szego, np.exp(1j * th))
    assert np.max(np.abs(np.abs(vals) - 1.0)) <= 1e-10


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_rational_weight_identities(seed):
    # random reflection points outside the disk: the whole identity chain
    # (boundary factorization, unimodularity, Parseval, level-1 consistency)
    # must hold for any member of the family
    from opuc.canonical import verblunsky_estimate
    from opuc.oracle import moments, szego_recurrence
    from opuc.weights import rational_modulus

    rng = np.random.default_rng(seed)
    cs = [(1.3 + 1.7 * rng.random()) * np.exp(2j * np.pi * rng.random())
          for _ in range(rng.integers(1, 4))]
    w = rational_modulus(cs)
    sz = szego_data_for(w, 96)
    th = 2 * np.pi * np.arange(96) / 96
    zc = np.exp(1j * th)
    assert np.max(np.abs(np.abs(sz.S.evaluate(zc)) - 1.0)) <= 1e-10
    assert np.max(np.abs(w(th) * np.abs(szego_function(sz, zc, "exterior")) ** 2
                         - 1.0)) <= 1e-9
    total = sum(sz.S.coeff(k) * np.conj(sz.S.coeff(k)) for k in range(-96, 97))
    assert abs(total - 1.0) <= 1e-8
    r = szego_recurrence(moments(w, 20), 16)
    for n in (6, 10, 14):
        gap = abs(verblunsky_estimate(n, sz, 1) - r.alpha[n])
        assert gap <= 10.0 * sz.rho ** (3 * n) + 1e-12


def test_modified_with_analytic_base(bs2, bs2_szego):
    # zeros on the circle combined with a nontrivial analytic part
    W = zero_modified(bs2, [(np.pi / 2, 0.5)])
    msz = build_modified(W, bs2_szego)
    assert abs(abs(msz.theta[0]) - 1.0) <= 1e-9
    z = 0.4 * np.exp(1j * 2.5)
    val = modified_szego(W, bs2_szego, z, "interior")
    assert np.isfinite(val.real) and np.isfinite(val.imag)
