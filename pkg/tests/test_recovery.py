"""Uncertainty counts, ℓ1 recovery/denoising, support detection, noise models."""

import math

import numpy as np
import pytest

from rframes import (
    GaussianNoiseModel,
    PreconditionError,
    SparseNoiseModel,
    add_noise,
    all_pairs,
    analyze,
    denoise,
    detect_support_set,
    divisors,
    membership_null_basis,
    ramanujan_sum,
    recover_missing,
    recover_missing_periodic,
    snr_db,
    totient,
    truncated_sum,
    uncertainty_report,
    uniform_bank,
)
from rframes.recovery import coefficient_rows
from rframes.experiments import (
    periodic_signal,
    sparse_top_channel,
    recovery_instances,
    denoise_instances,
)


# ---------------------------------------------------------------------------
# uncertainty counts


def test_impulse_support_counts():
    # an impulse has every coefficient alive (s_x = Kd) and one sample (b_x = 1)
    bank = uniform_bank(38, 2)
    x = np.zeros(38)
    x[5] = 1.0
    rep = uncertainty_report(x, bank)
    assert rep.s_x == 4 * 19  # 4 divisors of 38, d = 19 shifts each
    assert rep.b_x == 1
    assert rep.sum_ok and rep.prod_ok


def test_bound_formulas():
    bank = uniform_bank(38, 2)
    rep = uncertainty_report(np.eye(38)[0], bank)
    assert rep.beta_o == totient(38) == 18
    assert np.isclose(rep.sum_bound, 2 * 19 * math.sqrt(2) / 18, rtol=1e-12)
    # product bound from the formula p(d/φ(N))²; for N=38, p=2 this is
    # 2·(19/18)² ≈ 2.2284 (the acceptance run pins the printed-constant check)
    assert np.isclose(rep.prod_bound, 2 * (19 / 18) ** 2, rtol=1e-12)
    assert np.isclose(rep.prod_bound, 2.228395061728395, rtol=1e-12)

    b1 = uniform_bank(12, 1)
    r1 = uncertainty_report(np.eye(12)[3], b1)
    assert np.isclose(r1.sum_bound, 2 * 12 / 4, rtol=1e-12)
    assert np.isclose(r1.prod_bound, (12 / 4) ** 2, rtol=1e-12)


def test_sparse_signal_counts():
    # the top-channel vector keeps coefficients only on q = N, and since
    # x ∈ S_N the convolution x ∗ c_N equals N·x — so the coefficient
    # sequence inherits the same 4-point ± support
    N = 12
    bank = uniform_bank(N, 1)
    x = sparse_top_channel(N)
    rep = uncertainty_report(x, bank)
    assert rep.b_x == 2 ** 2  # one ± spike per squarefree prime combination
    assert rep.s_x == 2 ** 2
    assert rep.sum_ok and rep.prod_ok


def test_uncertainty_preconditions():
    bank = uniform_bank(12, 2)  # not tight
    with pytest.raises(PreconditionError):
        uncertainty_report(np.ones(12), bank)
    with pytest.raises(PreconditionError):
        uncertainty_report(np.zeros(6), uniform_bank(6, 1))


def test_uncertainty_random_sample_never_violates(rng):
    for _ in range(25):
        N = int(rng.choice([6, 10, 12, 21]))
        x = rng.standard_normal(N)
        rep = uncertainty_report(x, uniform_bank(N, 1))
        assert rep.s_x + rep.b_x >= rep.sum_bound - 1e-12
        assert rep.s_x * rep.b_x >= rep.prod_bound - 1e-12


# ---------------------------------------------------------------------------
# coefficient plumbing


def test_coefficient_rows_match_analysis(rng):
    for N, p in ((30, 1), (18, 2)):
        bank = uniform_bank(N, p)
        x = rng.standard_normal(N)
        coeffs = analyze(x, bank)
        pairs = all_pairs(bank)
        R = coefficient_rows(bank, pairs)
        flat = R @ x
        for j, (k, i) in enumerate(pairs):
            assert np.isclose(flat[j], coeffs[i][k], atol=1e-9)


def test_truncated_sum_with_all_pairs_is_identity(rng):
    for N, p in ((12, 1), (6, 2)):
        bank = uniform_bank(N, p)
        x = rng.standard_normal(N)
        assert np.allclose(truncated_sum(x, all_pairs(bank), bank), x, atol=1e-9)


def test_truncated_sum_matches_direct_formula(rng):
    bank = uniform_bank(12, 1)
    x = rng.standard_normal(12)
    pairs = [(0, 0), (3, 2), (7, 5), (11, 5)]
    got = truncated_sum(x, pairs, bank)
    want = np.zeros(12)
    for k, i in pairs:
        f = np.roll(ramanujan_sum(bank.qs[i], 12).astype(float), k)
        want += (x @ f) * f
    assert np.allclose(got, want / 144.0, atol=1e-9)
    assert np.array_equal(truncated_sum(x, [], bank), np.zeros(12))


def test_pair_validation():
    bank = uniform_bank(12, 1)
    x = np.ones(12)
    with pytest.raises(PreconditionError):
        truncated_sum(x, [(0, 9)], bank)
    with pytest.raises(PreconditionError):
        truncated_sum(x, [(12, 0)], bank)
    with pytest.raises(PreconditionError):
        truncated_sum(x, [(0, 0), (0, 0)], bank)
    with pytest.raises(PreconditionError):
        truncated_sum(x, [(0, 0)], uniform_bank(12, 2))  # not tight


# ---------------------------------------------------------------------------
# ℓ1 recovery


def test_recover_missing_small_instances():
    for inst in recovery_instances(4, seed=11):
        obs = truncated_sum(inst.x, inst.retained, inst.bank)
        xh = recover_missing(obs, inst.retained, inst.bank)
        assert np.abs(xh - inst.x).max() < 1e-6
        assert set(inst.missing) | set(inst.retained) == set(all_pairs(inst.bank))
        assert not set(inst.missing) & set(inst.retained)
        assert inst.condition < inst.bound


def test_recover_missing_periodic_uses_side_information():
    # drop far more coefficients than the blind bound allows; the divisor
    # side-information still pins the answer
    N = 30
    bank = uniform_bank(N, 1)
    x = periodic_signal(N, (3, 5), seed=4)
    i3 = bank.qs.index(3)
    i5 = bank.qs.index(5)
    retained = [(k, i) for (k, i) in all_pairs(bank) if i in (i3, i5) and k < 10]
    obs = truncated_sum(x, retained, bank)
    xh = recover_missing_periodic(obs, retained, bank, periods=(3, 5))
    assert np.abs(xh - x).max() < 1e-6


def test_recover_missing_periodic_validates_periods():
    bank = uniform_bank(30, 1)
    with pytest.raises(PreconditionError):
        recover_missing_periodic(np.zeros(30), [], bank, periods=(4,))


def test_empty_retained_set_recovers_zero():
    bank = uniform_bank(6, 1)
    assert np.array_equal(recover_missing(np.zeros(6), [], bank), np.zeros(6))


# ---------------------------------------------------------------------------
# membership subspaces and denoising


def test_membership_null_basis_dimensions():
    bank = uniform_bank(6, 1)
    # full channels: S_1 ⊕ S_2 has dimension φ(1) + φ(2) = 2
    pairs = [(k, 0) for k in range(6)] + [(k, 1) for k in range(6)]
    B = membership_null_basis(bank, pairs)
    assert B.shape == (6, 2)
    # columns are orthonormal and invisible to the complement rows
    assert np.allclose(B.T @ B, np.eye(2), atol=1e-10)
    comp = [pr for pr in all_pairs(bank) if pr not in set(pairs)]
    R = coefficient_rows(bank, comp)
    assert np.abs(R @ B).max() < 1e-9


def test_membership_null_basis_trivial_set_raises():
    bank = uniform_bank(6, 1)
    with pytest.raises(PreconditionError):
        membership_null_basis(bank, [])  # complement spans everything


def test_denoise_passes_clean_members_through(rng):
    # a signal already inside S_M is its own best ℓ1 approximation
    bank = uniform_bank(12, 1)
    i4 = bank.qs.index(4)
    pairs = [(k, i4) for k in range(12)]
    B = membership_null_basis(bank, pairs)
    y = B @ rng.standard_normal(B.shape[1])
    assert np.abs(denoise(y, pairs, bank) - y).max() < 1e-8


def test_denoise_removes_single_spikes():
    for inst in denoise_instances(3, seed=5):
        xh = denoise(inst.y, inst.membership, inst.bank)
        assert np.abs(xh - inst.x).max() < 1e-6
        assert inst.condition < inst.bound


def test_denoise_accepts_detected_membership():
    # end to end: detect on the clean signal, then denoise the corrupted one
    N = 12
    bank = uniform_bank(N, 1)
    x = 3.0 * np.roll(sparse_top_channel(N), 2)
    y = x.copy()
    y[7] += 1.5
    mem = detect_support_set(x, bank, 0.45)
    assert mem.channels == (12,)
    xh = denoise(y, mem, bank)
    assert np.abs(xh - x).max() < 1e-6


# ---------------------------------------------------------------------------
# the strict-inequality margin behind exact recovery


def test_l1_margin_over_invisible_perturbations(rng):
    # instances satisfying 2·#missing·#support < p(d/φ(N))²: every nonzero
    # perturbation h invisible to the retained coefficients strictly grows
    # the ℓ1 norm, which is exactly why the minimizer is unique.
    cases = []
    b1 = uniform_bank(6, 1)
    cases.append((b1, [(k, 3) for k in (1, 2, 4, 5)], 1))  # 2·4·1 = 8 < 9
    b2 = uniform_bank(6, 2)
    cases.append((b2, [(1, 3), (2, 3)], 2))  # 2·2·1 = 4 < 4.5
    total = 0
    for bank, missing, p in cases:
        d = 6 // p
        bound = p * (d / totient(6)) ** 2
        assert 2 * len(missing) * 1 < bound
        H = membership_null_basis(bank, missing)
        assert H.shape[1] == 1
        for _ in range(50):
            a = int(rng.integers(6))
            x = np.zeros(6)
            x[a] = float(rng.choice([-1.0, 1.0]) * (0.5 + rng.random()))
            coef = float(rng.standard_normal())
            while abs(coef) < 1e-3:
                coef = float(rng.standard_normal())
            h = H[:, 0] * coef * float(np.abs(x).max())
            assert np.abs(x - h).sum() > np.abs(x).sum() + 1e-12
            total += 1
    assert total == 100


# ---------------------------------------------------------------------------
# support detection


def test_detect_noiseless_single_channel():
    bank = uniform_bank(70, 1)
    mem = detect_support_set(ramanujan_sum(7, 70).astype(float), bank, 0.45)
    assert mem.channels == (7,)
    assert len(mem.pairs) == 70
    assert set(mem.pairs) == {(k, bank.qs.index(7)) for k in range(70)}


def test_detect_normalization_is_flat_for_white_noise():
    # all-channel expected energies agree after the ‖c_q‖² normalization,
    # so a pure two-component signal keeps exactly its two channels
    bank = uniform_bank(30, 1)
    for s in (1, 2, 7, 12):
        x = periodic_signal(30, (3, 5), seed=s)
        y = add_noise(x, GaussianNoiseModel(0.0), seed=10_000 + s)
        mem = detect_support_set(y, bank, 0.45)
        assert mem.channels == (3, 5), s


def test_detect_validation():
    bank = uniform_bank(12, 1)
    with pytest.raises(PreconditionError):
        detect_support_set(np.ones(12), bank, 0.0)
    with pytest.raises(PreconditionError):
        detect_support_set(np.ones(12), bank, 1.0)
    with pytest.raises(PreconditionError):
        detect_support_set(np.zeros(12), bank, 0.45)


# ---------------------------------------------------------------------------
# noise models


def test_snr_db_values():
    x = np.array([3.0, 4.0])
    assert snr_db(x, x) == 0.0
    assert snr_db(x, np.zeros(2)) == math.inf
    assert np.isclose(snr_db(x, 0.1 * x), 20.0, atol=1e-12)
    with pytest.raises(PreconditionError):
        snr_db(x, np.zeros(3))


def test_gaussian_noise_hits_target_exactly(rng):
    x = rng.standard_normal(40) * 3.0
    for target in (-5.0, 0.0, 12.5):
        y = add_noise(x, GaussianNoiseModel(target), seed=3)
        assert np.isclose(snr_db(x, y - x), target, atol=1e-9)
    assert np.array_equal(
        add_noise(x, GaussianNoiseModel(0.0), seed=3),
        add_noise(x, GaussianNoiseModel(0.0), seed=3),
    )
    assert not np.array_equal(
        add_noise(x, GaussianNoiseModel(0.0), seed=3),
        add_noise(x, GaussianNoiseModel(0.0), seed=4),
    )
    with pytest.raises(PreconditionError):
        add_noise(np.zeros(4), GaussianNoiseModel(0.0))


def test_sparse_noise_model():
    x = np.zeros(8)
    y = add_noise(x, SparseNoiseModel(support=(1, 5), values=(2.0, -1.0)))
    assert np.array_equal(y, np.array([0, 2.0, 0, 0, 0, -1.0, 0, 0]))
    seeded = add_noise(x, SparseNoiseModel(support=(2,), amplitude=3.0), seed=9)
    assert np.count_nonzero(seeded) == 1 and seeded[2] != 0
    with pytest.raises(PreconditionError):
        add_noise(x, SparseNoiseModel(support=(1, 1)))
    with pytest.raises(PreconditionError):
        add_noise(x, SparseNoiseModel(support=(9,)))
    with pytest.raises(PreconditionError):
        add_noise(x, SparseNoiseModel(support=(1,), values=(1.0, 2.0)))
    with pytest.raises(PreconditionError):
        add_noise(x, "white")


def test_instance_menus_respect_their_bounds():
    for inst in recovery_instances(9, seed=0):
        assert inst.condition < inst.bound
        assert len(inst.missing) >= 1
    for inst in denoise_instances(6, seed=0):
        assert inst.condition < inst.bound
        assert len(inst.noise_support) == 1
